"""Power-law heat bath with algebraic cutoff.

Units are hbar = k_B = omega_c = 1.  The spectral density is

    J(omega) = M * gamma * omega**s / (1 + omega**2)**p

with integer ``p >= 1`` and ``0 < s < 2p + 2``.  The particle mass drops
out of the damping kernel, so ``mass`` only matters for bath masses and the
box-size validity bound.

The Laplace-transformed damping kernel is evaluated in closed form (a
terminating hypergeometric series for integer ``p``), with a convergent
power series around ``z = 1`` where the closed form cancels, and an exact
logarithmic form at even integer ``s``.  :func:`kernel_quadrature`
computes the same quantity directly from ``J`` and serves as an
independent check.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CancellationError, DomainError, SingularInputError
from .numerics import PowerLawDecay, integrate_semi_infinite
from .specfun import beta, digamma_int

__all__ = [
    "BathSpec",
    "KernelValue",
    "LogForm",
    "LowFreqExpansion",
    "spectral_density",
    "bath_mass",
    "kernel",
    "kernel_arrays",
    "kernel_quadrature",
    "low_freq_expansion",
    "mass_renormalization_continuation",
    "critical_gamma",
    "large_z_coefficient",
    "SERIES_RADIUS",
    "CANCELLATION_RADIUS",
]

#: |1 - z^2| below which the kernel is summed as a power series in 1 - z^2.
SERIES_RADIUS = 0.5
#: The closed form is refused outright this close to z = 1.
CANCELLATION_RADIUS = 1e-3
# even-s handling: exact log form inside, warning flag up to the outer radius
_EVEN_S_EXACT = 1e-8
_EVEN_S_WARN = 1e-4
_SERIES_TERMS = 80


@dataclass(frozen=True)
class BathSpec:
    """Bath parameters ``(gamma, s, p)`` and the particle mass."""

    gamma: float
    s: float
    p: int
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "mass", float(self.mass))
        p = self.p
        if isinstance(p, float) and p.is_integer():
            p = int(p)
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or p < 1:
            raise DomainError(f"cutoff exponent p must be an integer >= 1, got {self.p!r}")
        object.__setattr__(self, "p", int(p))
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise DomainError(f"damping strength gamma must be >= 0, got {self.gamma!r}")
        if not (0.0 < self.s < 2 * self.p + 2):
            raise DomainError(
                f"exponent s={self.s!r} outside 0 < s < 2p + 2 = {2 * self.p + 2}; "
                "the damping kernel integral diverges"
            )
        if not (math.isfinite(self.mass) and self.mass > 0.0):
            raise DomainError(f"mass must be positive, got {self.mass!r}")

    @property
    def restricted(self):
        """True when ``0 < s < 2p``, the range where the kernel decays as 1/z."""
        return self.s < 2 * self.p

    def require_restricted(self, what):
        if not self.restricted:
            raise DomainError(
                f"{what} requires 0 < s < 2p (here s={self.s:g}, 2p={2 * self.p})"
            )

    def replace(self, **changes):
        values = {"gamma": self.gamma, "s": self.s, "p": self.p, "mass": self.mass}
        values.update(changes)
        return BathSpec(**values)

    @classmethod
    def from_mapping(cls, config):
        """Build from a flat mapping with keys ``gamma``, ``s``, ``p`` and optional ``mass``."""
        unknown = set(config) - {"gamma", "s", "p", "mass"}
        if unknown:
            raise DomainError(f"unknown bath parameters: {sorted(unknown)}")
        try:
            p_raw = config["p"]
            p = int(p_raw) if float(p_raw).is_integer() else float(p_raw)
            return cls(
                gamma=float(config["gamma"]),
                s=float(config["s"]),
                p=p,
                mass=float(config.get("mass", 1.0)),
            )
        except KeyError as exc:
            raise DomainError(f"missing bath parameter {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed bath parameter: {exc}") from None


@dataclass(frozen=True)
class KernelValue:
    """Damping kernel and its first two derivatives at ``z``."""

    value: complex
    d1: complex
    d2: complex
    z: complex
    near_even_s: bool = False


@dataclass(frozen=True)
class LogForm:
    """Leading small-z kernel at even ``s = 2``: ``prefactor * z * (ln z + offset / 2)``."""

    prefactor: float
    offset: float

    def __call__(self, z):
        return self.prefactor * z * (np.log(z) + 0.5 * self.offset)


@dataclass(frozen=True)
class LowFreqExpansion:
    """Small-z expansion ``frac z^(s-1) (1 + p z^2) + dm z + cubic z^3``.

    ``frac_coeff`` is ``None`` at even integer ``s`` where it merges with a
    polynomial term into a logarithm; ``dm_over_m`` is infinite at ``s = 2``
    and ``cubic_coeff`` at ``s = 4``.  ``frac_next_coeff`` multiplies
    ``z^(s+1)``; for ``s < 2`` that term outranks the cubic one.
    """

    s: float
    frac_coeff: Optional[float]
    dm_over_m: float
    cubic_coeff: float
    frac_next_coeff: Optional[float] = None
    log_form: Optional[LogForm] = None

    def __call__(self, z):
        """Evaluate the truncated expansion (the log form replaces the linear term at s = 2)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        if self.frac_coeff is not None:
            zs = np.exp((self.s - 1.0) * np.log(z))
            out = out + self.frac_coeff * zs + self.frac_next_coeff * zs * z * z
        if self.log_form is not None:
            out = out + self.log_form(z)
        elif math.isfinite(self.dm_over_m):
            out = out + self.dm_over_m * z
        if math.isfinite(self.cubic_coeff):
            out = out + self.cubic_coeff * z ** 3
        return out


def spectral_density(spec, omega):
    """``J(omega) = M gamma omega^s / (1 + omega^2)^p``; accepts arrays."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise DomainError("spectral density is defined for omega >= 0")
    out = spec.mass * spec.gamma * omega ** spec.s / (1.0 + omega * omega) ** spec.p
    return float(out) if out.ndim == 0 else out


def _beta_main(spec):
    return beta(spec.s / 2.0, spec.p + 1.0 - spec.s / 2.0)


def _even_index(s):
    """Return m if s is (numerically) the even integer 2m, else None."""
    m = round(s / 2.0)
    if m >= 1 and abs(s - 2.0 * m) < _EVEN_S_EXACT:
        return int(m)
    return None


def bath_mass(spec):
    """Total mass of the bath oscillators; ``inf`` when ``s <= 2``."""
    if spec.s <= 2.0:
        return math.inf
    if spec.gamma == 0.0:
        return 0.0
    s, p = spec.s, spec.p
    pref = 2.0 / math.pi * spec.mass * spec.gamma
    res = integrate_semi_infinite(
        lambda w: w ** (s - 3.0) / (1.0 + w * w) ** p,
        PowerLawDecay(2.0 * p + 3.0 - s),
        abs_tol=1e-300, rel_tol=1e-12,
    )
    return pref * res.value


def _powers(z, n):
    """``[1, z, z^2, ..., z^n]`` by repeated multiplication.

    Keeps the real part of odd powers exactly zero on the imaginary axis,
    which the oscillator density depends on at small frequency.
    """
    out = [np.ones_like(z), z]
    for _ in range(n - 1):
        out.append(out[-1] * z)
    return out


def _closed_form(spec, z):
    """Generic branch: rational prefactor times a fractional power plus an odd polynomial."""
    g, s, p = spec.gamma, spec.s, spec.p
    one_minus = 1.0 - z * z
    P = one_minus ** (-p)
    P1 = 2.0 * p * z * one_minus ** (-p - 1)
    P2 = 2.0 * p * one_minus ** (-p - 1) + 4.0 * p * (p + 1) * z * z * one_minus ** (-p - 2)

    logz = np.log(z)
    m = _even_index(s)
    bmain = _beta_main(spec)
    zp = _powers(z, 2 * p + 1)

    bk = np.zeros_like(z)
    bk1 = np.zeros_like(z)
    bk2 = np.zeros_like(z)
    zinv = 1.0 / z
    for n in range(p):
        if m is not None and n == m - 1:
            continue
        a_n = ((-1) ** (n - 1) / (n + 1 - s / 2.0)) * bmain / beta(n + 1, p - n) / math.pi
        q = 2 * n + 1
        bk = bk + a_n * zp[q]
        bk1 = bk1 + a_n * q * zp[q - 1]
        if q > 1:
            bk2 = bk2 + a_n * q * (q - 1) * zp[q - 2]
    if m is None:
        S = math.sin(math.pi * s / 2.0)
        zs = np.exp((s - 1.0) * logz)
        bk = bk + zs / S
        bk1 = bk1 + (s - 1.0) * zs * zinv / S
        bk2 = bk2 + (s - 1.0) * (s - 2.0) * zs * zinv * zinv / S
    else:
        # fractional term and the n = m-1 polynomial term merge into a logarithm
        q = 2 * m - 1
        K = (-1) ** m / math.pi
        D = digamma_int(p + 1 - m) - digamma_int(m)
        L = 2.0 * logz + D
        bk = bk + K * zp[q] * L
        bk1 = bk1 + K * zp[q - 1] * (q * L + 2.0)
        bk2 = bk2 + K * zp[q - 1] * zinv * (q * (q - 1) * L + 2.0 * (2 * q - 1))

    v = g * P * bk
    d1 = g * (P1 * bk + P * bk1)
    d2 = g * (P2 * bk + 2.0 * P1 * bk1 + P * bk2)
    return v, d1, d2


def _series_form(spec, z):
    """Near z = 1: (gamma/pi) B z^(s-1) 2F1(p, s/2; p+1; 1 - z^2)."""
    g, s, p = spec.gamma, spec.s, spec.p
    w = 1.0 - z * z
    F = np.zeros_like(z)
    F1 = np.zeros_like(z)
    F2 = np.zeros_like(z)
    r = 1.0  # (s/2)_k / k!
    wk = np.ones_like(z)  # w^k
    wk1 = np.zeros_like(z)  # w^(k-1)
    wk2 = np.zeros_like(z)  # w^(k-2)
    for k in range(_SERIES_TERMS):
        c = p / (p + k) * r
        F = F + c * wk
        if k >= 1:
            F1 = F1 + c * k * wk1
        if k >= 2:
            F2 = F2 + c * k * (k - 1) * wk2
        wk2, wk1, wk = wk1, wk, wk * w
        if k == 0:
            wk1 = np.ones_like(z)
        r *= (s / 2.0 + k) / (k + 1)
    Phi = F
    Phi1 = -2.0 * z * F1
    Phi2 = -2.0 * F1 + 4.0 * z * z * F2
    zs = np.exp((s - 1.0) * np.log(z))
    Z1 = (s - 1.0) * zs / z
    Z2 = (s - 1.0) * (s - 2.0) * zs / (z * z)
    K = g / math.pi * _beta_main(spec)
    v = K * zs * Phi
    d1 = K * (Z1 * Phi + zs * Phi1)
    d2 = K * (Z2 * Phi + 2.0 * Z1 * Phi1 + zs * Phi2)
    return v, d1, d2


def kernel_arrays(spec, z, branch="auto"):
    """Vectorised kernel: returns ``(value, d1, d2)`` as complex arrays.

    ``branch`` is ``"auto"``, ``"closed"`` or ``"series"``; the latter two
    force one representation and exist for testing the seam between them.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z == 0.0):
        raise SingularInputError("damping kernel is singular at z = 0")
    if np.any((z.real <= 0.0) & (z.imag == 0.0)):
        raise SingularInputError("z lies on the branch cut along the negative real axis")
    if spec.gamma == 0.0:
        zero = np.zeros_like(z)
        return zero, zero.copy(), zero.copy()
    dist = np.abs(1.0 - z * z)
    if branch == "auto":
        use_series = dist < SERIES_RADIUS
    elif branch == "closed":
        if np.any(dist < CANCELLATION_RADIUS):
            raise CancellationError(
                f"closed form used with |1 - z^2| < {CANCELLATION_RADIUS:g}; "
                "the prefactor and the bracket cancel"
            )
        use_series = np.zeros(z.shape, dtype=bool)
    elif branch == "series":
        if np.any(dist >= 1.0):
            raise DomainError("the series about z = 1 only converges for |1 - z^2| < 1")
        use_series = np.ones(z.shape, dtype=bool)
    else:
        raise DomainError(f"unknown kernel branch {branch!r}")

    v = np.empty_like(z)
    d1 = np.empty_like(z)
    d2 = np.empty_like(z)
    if np.any(use_series):
        v[use_series], d1[use_series], d2[use_series] = _series_form(spec, z[use_series])
    rest = ~use_series
    if np.any(rest):
        v[rest], d1[rest], d2[rest] = _closed_form(spec, z[rest])
    return v, d1, d2


def _near_even_flag(s):
    m = round(s / 2.0)
    return m >= 1 and _EVEN_S_EXACT <= abs(s - 2.0 * m) < _EVEN_S_WARN


def kernel(spec, z, branch="auto"):
    """Damping kernel ``gamma_hat(z)`` with first and second derivatives.

    Warranted on the positive real axis and on the imaginary axis
    ``z = -i omega``.  For real ``z > 0`` the fields are Python floats.
    ``near_even_s`` is set when ``s`` is within 1e-4 (but not 1e-8) of an
    even integer, where the closed form loses digits to cancellation.
    """
    zc = complex(z)
    v, d1, d2 = kernel_arrays(spec, zc, branch=branch)
    v, d1, d2 = complex(v[0]), complex(d1[0]), complex(d2[0])
    if zc.imag == 0.0 and zc.real > 0.0:
        v, d1, d2 = v.real, d1.real, d2.real
    return KernelValue(v, d1, d2, zc, _near_even_flag(spec.s))


def kernel_quadrature(spec, z, rel_tol=1e-12, abs_tol=1e-300):
    """Kernel from the frequency integral over the spectral density.

    For ``Re z > 0`` the integral is done directly.  On the imaginary axis
    ``z = -i omega`` (approached from ``Re z > 0``) the pole at
    ``omega' = omega`` contributes ``J(omega)/(M omega)`` to the real part
    and the principal value is regularised by subtracting the integrand's
    value at the pole.
    """
    zc = complex(z)
    g, s, p = spec.gamma, spec.s, spec.p
    if g == 0.0:
        return 0.0 if zc.imag == 0.0 else 0j
    decay = PowerLawDecay(2.0 * p + 3.0 - s)

    def weight(w):
        return w ** (s - 1.0) / (1.0 + w * w) ** p

    if zc.real > 0.0:
        res = integrate_semi_infinite(
            lambda w: weight(w) * zc / (w * w + zc * zc),
            decay, abs_tol=abs_tol, rel_tol=rel_tol, breakpoints=[abs(zc)],
        )
        val = 2.0 * g / math.pi * res.value
        return float(val.real) if zc.imag == 0.0 else complex(val)
    if zc.real == 0.0 and zc.imag < 0.0:
        w0 = -zc.imag
        g0 = weight(w0)

        def pv(w):
            out = (weight(w) - g0) / (w * w - w0 * w0)
            return out

        res = integrate_semi_infinite(
            pv, PowerLawDecay(2.0), abs_tol=abs_tol, rel_tol=rel_tol, breakpoints=[w0],
        )
        return complex(g * g0, 2.0 * g / math.pi * (-w0) * res.value)
    raise DomainError("kernel_quadrature needs Re z > 0 or z = -i omega with omega > 0")


def low_freq_expansion(spec):
    """Coefficients of the small-z expansion of the damping kernel."""
    g, s, p = spec.gamma, spec.s, spec.p
    even = _even_index(s)
    if even is not None:
        frac = None
        frac_next = None
    else:
        frac = g / math.sin(math.pi * s / 2.0)
        frac_next = p * frac
    log_form = None
    if even == 1:
        dm = math.inf
        cubic = math.inf
        log_form = LogForm(prefactor=-2.0 * g / math.pi, offset=digamma_int(p))
    else:
        dm = 2.0 * g / math.pi * p * _beta_main(spec) / (s - 2.0)
        cubic = math.inf if even == 2 else (2.0 * p + 2.0 - s) / (4.0 - s) * dm
    return LowFreqExpansion(s, frac, dm, cubic, frac_next, log_form)


def mass_renormalization_continuation(spec, z=1e-6):
    """Relative mass shift from the kernel minus its cutoff-free (p = 0) counterpart.

    Differentiates ``gamma_hat(z) - gamma z^(s-1)/sin(pi s/2)`` at small
    ``z`` and removes the leading ``z^s`` correction with one Richardson
    step between ``z`` and ``z/2``.  Only defined for ``0 < s < 2``.
    """
    s = spec.s
    if not 0.0 < s < 2.0:
        raise DomainError("the cutoff-free reference bath exists only for 0 < s < 2")
    S = math.sin(math.pi * s / 2.0)

    def slope(x):
        d1 = kernel(spec, x).d1
        return d1 - spec.gamma * (s - 1.0) * x ** (s - 2.0) / S

    r = 2.0 ** s
    return (r * slope(z / 2.0) - slope(z)) / (r - 1.0)


def critical_gamma(s, p):
    """Damping strength at which the renormalised mass ``M + Delta M`` vanishes."""
    s = float(s)
    if not 0.0 < s < 2.0:
        raise DomainError(f"critical damping exists only for 0 < s < 2, got s={s!r}")
    if int(p) != p or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    return math.pi * (2.0 - s) / (2.0 * p * beta(s / 2.0, p + 1.0 - s / 2.0))


def large_z_coefficient(spec):
    """``c`` such that ``gamma_hat(z) -> c / z`` for large ``z``."""
    spec.require_restricted("the 1/z large-argument law")
    if spec.gamma == 0.0:
        return 0.0
    return spec.gamma / math.pi * beta(spec.s / 2.0, spec.p - spec.s / 2.0)
