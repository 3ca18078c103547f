"""Specific heat of the damped free particle.

Three exact routes and a set of asymptotic laws:

* :func:`specific_heat_matsubara` sums over bosonic Matsubara frequencies;
* :func:`specific_heat_spectral` integrates the change of the bath
  oscillator density against the harmonic-oscillator specific heat;
* :func:`specific_heat_lnz_oracle` differentiates the reduced partition
  function numerically and is meant as a cross-check only;
* :func:`specific_heat_high_T` and :func:`specific_heat_low_T` give the
  leading high- and low-temperature laws in every regime of ``s``.

:func:`specific_heat` picks between the first two by temperature.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bath import (
    BathSpec,
    kernel_arrays,
    large_z_coefficient,
    low_freq_expansion,
)
from .errors import DomainError, SingularInputError, ValidityError
from .numerics import (
    CompositeTail,
    ExponentialDecay,
    InversePowerTail,
    InverseSquareTail,
    PowerLawDecay,
    integrate_semi_infinite,
    second_derivative,
    sum_with_tail,
)
from .specfun import beta, log_gamma, zeta

__all__ = [
    "Method",
    "Regime",
    "HeatCapacityResult",
    "ValidityConfig",
    "XiSample",
    "T_SWITCH",
    "EPS_CRIT",
    "classify_regime",
    "c_ho",
    "xi",
    "xi_arrays",
    "specific_heat_matsubara",
    "specific_heat_spectral",
    "log_partition",
    "specific_heat_lnz_oracle",
    "specific_heat_high_T",
    "specific_heat_low_T",
    "high_T_coefficient",
    "specific_heat",
    "sum_rule_check",
    "sum_rule_value",
]

#: Temperature below which :func:`specific_heat` switches to the spectral route.
T_SWITCH = 0.05
#: |1 + dM/M| at or below which the low-T law uses the critical-point form.
EPS_CRIT = 1e-6
# Matsubara sums start their tail model only once nu_N reaches this
_NU_TAIL_START = 50.0
# the fractional large-z correction is modelled only when its exponent is
# below this; beyond it the next odd powers are of the same order anyway
_TAIL_CORRECTION_MAX_Q = 3.5
# within this distance of s = 2 the sum-rule form of the spectral integral
# converges too slowly at small omega
_SUM_RULE_GAP = 0.25


class Method(str, enum.Enum):
    MATSUBARA = "matsubara"
    SPECTRAL = "spectral"
    LNZ_ORACLE = "lnz_oracle"
    ASYMPTOTIC_HIGH_T = "asymptotic_high_T"
    ASYMPTOTIC_LOW_T = "asymptotic_low_T"


class Regime(str, enum.Enum):
    SUB_OHMIC = "sub_ohmic"
    OHMIC = "ohmic"
    SUPER_OHMIC_LT2 = "super_ohmic_lt2"
    S_EQUALS_2 = "s_equals_2"
    SUPER_OHMIC_GT2 = "super_ohmic_gt2"
    CRITICAL_MASS = "critical_mass"


@dataclass(frozen=True)
class HeatCapacityResult:
    """Specific heat in units of k_B together with how it was obtained."""

    value: float
    method: Method
    error_estimate: float
    regime: Regime
    flags: tuple = ()

    def __post_init__(self):
        if not self.error_estimate >= 0.0:
            raise ValueError("error_estimate must be non-negative")


@dataclass(frozen=True)
class ValidityConfig:
    """Box of width ``L`` confining the particle.

    The continuum description holds for ``T > E_0 = c * E_g`` with level
    spacing scale ``E_g = pi^2 / (2 M L^2)``.  The check is only enforced
    when ``strict`` is set.
    """

    box_width_L: float = 1e6
    level_constant_c: float = 10.0
    mass: float = 1.0
    strict: bool = False

    def __post_init__(self):
        if not self.box_width_L > 0.0:
            raise DomainError("box width must be positive")
        if not self.level_constant_c > 0.0:
            raise DomainError("level constant c must be positive")
        if not self.mass > 0.0:
            raise DomainError("mass must be positive")

    @property
    def E_g(self):
        return math.pi ** 2 / (2.0 * self.mass * self.box_width_L ** 2)

    @property
    def E_0(self):
        return self.level_constant_c * self.E_g

    def level(self, n):
        """Energy of the n-th box level."""
        return self.E_g * n * n

    def check(self, T):
        if self.strict and not T > self.E_0:
            raise ValidityError(
                f"T={T:g} is not above E_0={self.E_0:g}; the discrete box spectrum matters"
            )


@dataclass(frozen=True)
class XiSample:
    omega: float
    xi: float


def classify_regime(spec):
    """Regime label used on every result."""
    s = spec.s
    if s < 2.0:
        dm = low_freq_expansion(spec).dm_over_m
        if spec.gamma > 0.0 and abs(1.0 + dm) <= EPS_CRIT:
            return Regime.CRITICAL_MASS
        if s < 1.0:
            return Regime.SUB_OHMIC
        if s == 1.0:
            return Regime.OHMIC
        return Regime.SUPER_OHMIC_LT2
    if s == 2.0:
        return Regime.S_EQUALS_2
    return Regime.SUPER_OHMIC_GT2


def c_ho(omega, T):
    """Specific heat ``(x / sinh x)^2`` of an oscillator, ``x = omega / 2T``.

    Accepts arrays.  Small ``x`` uses the Taylor series, large ``x`` the
    exponential asymptote so nothing overflows.
    """
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    x = np.asarray(omega, dtype=float) / (2.0 * T)
    out = np.empty_like(x)
    small = x < 1e-4
    large = x > 30.0
    mid = ~(small | large)
    xs = x[small]
    out[small] = 1.0 - xs * xs / 3.0 + 2.0 * xs ** 4 / 15.0
    xl = x[large]
    e = np.exp(-xl)
    out[large] = (2.0 * xl * e) ** 2 / (1.0 - e * e) ** 2
    xm = x[mid]
    out[mid] = (xm / np.sinh(xm)) ** 2
    return float(out) if out.ndim == 0 else out


def xi_arrays(spec, omega):
    """Vectorised oscillator-density change ``Re[(1 + g') / (z + g)] / pi`` at ``z = -i omega``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0.0):
        raise DomainError("xi is defined for omega > 0")
    if spec.gamma == 0.0:
        return np.zeros_like(omega)
    z = -1j * omega.ravel()
    v, d1, _ = kernel_arrays(spec, z)
    # Re g > 0 on the axis, so z + g only gets small together with omega and
    # the ratio stays well conditioned; integrals may probe omega ~ 1e-30
    out = ((1.0 + d1) / (z + v)).real / math.pi
    return out.reshape(omega.shape)


def xi(spec, omega):
    """Change of the bath oscillator density at frequency ``omega``."""
    spec.require_restricted("the oscillator density change")
    omega = float(omega)
    if not omega > 0.0:
        raise DomainError("xi is defined for omega > 0")
    if spec.gamma == 0.0:
        return XiSample(omega, 0.0)
    z = complex(0.0, -omega)
    if abs(z + kernel_arrays(spec, np.array([z]))[0][0]) < 1e-14:
        raise SingularInputError("velocity response denominator vanishes")
    return XiSample(omega, float(xi_arrays(spec, np.array([omega]))[0]))


def _xi_decay(spec):
    # xi falls off as omega^(s - 2p - 3)
    return PowerLawDecay(2.0 * spec.p + 3.0 - spec.s)


def sum_rule_value(spec):
    """Exact value of the integral of ``xi``: ``(2 - s)/2`` for ``s < 2``, else 0."""
    return (2.0 - spec.s) / 2.0 if spec.s < 2.0 else 0.0


def sum_rule_check(spec, abs_tol=1e-10, rel_tol=1e-9):
    """Numerical integral of ``xi`` minus its exact value."""
    spec.require_restricted("the sum rule")
    if spec.gamma == 0.0:
        return 0.0
    res = integrate_semi_infinite(
        lambda w: xi_arrays(spec, w), _xi_decay(spec),
        abs_tol=abs_tol, rel_tol=rel_tol,
    )
    return res.value - sum_rule_value(spec)


def _tail_model(spec, T, second_order_weight):
    """Tail of a Matsubara sum whose summand is ``-c_inf w / nu^2 - F k nu^(s-2-2p)``.

    ``w`` is 2 for the specific heat and 1 for ln Z.  At large ``z`` the
    kernel is ``c_inf / z + F z^(s-1-2p) + O(z^-3)`` with
    ``F = (-1)^p gamma / sin(pi s / 2)``; for the specific heat the second
    term enters via ``-nu g''``, i.e. with ``k = (2p+1-s)(2p+2-s)``.
    """
    two_pi_T = 2.0 * math.pi * T
    w = second_order_weight
    lead = InverseSquareTail(-w * large_z_coefficient(spec) / two_pi_T ** 2)
    q2 = 2.0 * spec.p + 2.0 - spec.s
    if q2 >= _TAIL_CORRECTION_MAX_Q:
        return lead
    F = (-1) ** spec.p * spec.gamma / math.sin(math.pi * spec.s / 2.0)
    k = (q2 - 1.0) * q2 if w == 2.0 else 1.0
    return CompositeTail((lead, InversePowerTail(-F * k / two_pi_T ** q2, q2)))


def _matsubara_terms(spec, T):
    two_pi_T = 2.0 * math.pi * T

    def term(n):
        nu = two_pi_T * n
        v, d1, d2 = kernel_arrays(spec, nu)
        v, d1, d2 = v.real, d1.real, d2.real
        den = nu + v
        return (v - nu * d1) ** 2 / den ** 2 - nu * nu * d2 / den

    return term


def specific_heat_matsubara(spec, T, rel_tol=1e-10, validity=None):
    """Specific heat from the Matsubara sum, tail-corrected with the 1/z kernel law."""
    spec.require_restricted("the Matsubara representation")
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    if validity is not None:
        validity.check(T)
    regime = classify_regime(spec)
    if spec.gamma == 0.0:
        return HeatCapacityResult(0.5, Method.MATSUBARA, 0.0, regime)
    two_pi_T = 2.0 * math.pi * T
    model = _tail_model(spec, T, 2.0)
    n_min = math.ceil(_NU_TAIL_START / two_pi_T)
    res = sum_with_tail(
        _matsubara_terms(spec, T), model, rel_tol=rel_tol, abs_tol=1e-14, n_min=n_min,
    )
    return HeatCapacityResult(0.5 + res.value, Method.MATSUBARA, res.abs_error_estimate, regime)


def specific_heat_spectral(spec, T, rel_tol=1e-9, abs_tol=1e-12, form="auto",
                           validity=None):
    """Specific heat as a frequency integral over the oscillator density change.

    ``form="direct"`` integrates ``xi (C_ho - 1)``.  ``form="sum_rule"``
    uses the exact value of the integral of ``xi`` and integrates
    ``xi C_ho`` instead, which decays exponentially above ``T`` and so
    resolves the small thermal part at low temperature to full relative
    accuracy.  ``"auto"`` uses the sum-rule form unless ``s`` is within
    0.25 of 2, where ``xi`` is barely integrable at the origin.
    """
    spec.require_restricted("the spectral representation")
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    if validity is not None:
        validity.check(T)
    regime = classify_regime(spec)
    if spec.gamma == 0.0:
        return HeatCapacityResult(0.5, Method.SPECTRAL, 0.0, regime)
    if form == "auto":
        form = "direct" if abs(spec.s - 2.0) < _SUM_RULE_GAP else "sum_rule"
    if form == "direct":
        res = integrate_semi_infinite(
            lambda w: xi_arrays(spec, w) * (c_ho(w, T) - 1.0), _xi_decay(spec),
            abs_tol=abs_tol, rel_tol=rel_tol, breakpoints=[T],
        )
        value = 0.5 + res.value
    elif form == "sum_rule":
        res = integrate_semi_infinite(
            lambda w: xi_arrays(spec, w) * c_ho(w, T), ExponentialDecay(T),
            abs_tol=abs_tol, rel_tol=rel_tol, breakpoints=[T],
        )
        value = 0.5 - sum_rule_value(spec) + res.value
    else:
        raise DomainError(f"unknown spectral form {form!r}")
    return HeatCapacityResult(value, Method.SPECTRAL, res.abs_error_estimate, regime)


def _log_terms(spec, T):
    two_pi_T = 2.0 * math.pi * T

    def term(n):
        nu = two_pi_T * n
        v = kernel_arrays(spec, nu)[0].real
        return -np.log1p(v / nu)

    return term


def log_partition(spec, T, validity=None, n_terms=None, rel_tol=1e-11):
    """Logarithm of the reduced partition function.

    ``n_terms`` freezes the number of explicitly summed Matsubara factors
    (the rest is covered by the 1/n^2 tail), which keeps the truncation
    identical across the stencil of a finite-difference derivative.
    """
    spec.require_restricted("the Matsubara product")
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    validity = validity or ValidityConfig(mass=spec.mass)
    validity.check(T)
    classical = math.log(math.sqrt(math.pi) / 2.0) + 0.5 * math.log(T / validity.E_g)
    if spec.gamma == 0.0:
        return classical
    two_pi_T = 2.0 * math.pi * T
    model = _tail_model(spec, T, 1.0)
    res = sum_with_tail(
        _log_terms(spec, T), model, rel_tol=rel_tol, abs_tol=1e-16,
        n_min=math.ceil(_NU_TAIL_START / two_pi_T), n_terms=n_terms,
    )
    return classical + res.value


def specific_heat_lnz_oracle(spec, T, rel_step=0.02, validity=None):
    """Specific heat as ``T d^2(T ln Z)/dT^2`` by five-point differences.

    Independent of the analytic derivatives of the kernel.  The error
    estimate is the change when the step is halved.
    """
    spec.require_restricted("the Matsubara product")
    validity = validity or ValidityConfig(mass=spec.mass)
    regime = classify_regime(spec)
    if spec.gamma == 0.0:
        n_terms = None
    else:
        # freeze the truncation at the smallest stencil temperature's needs
        two_pi_T = 2.0 * math.pi * T * (1.0 - 2.0 * rel_step)
        n_terms = max(2 ** 14, 8 * math.ceil(_NU_TAIL_START / two_pi_T))

    def f(t):
        return t * log_partition(spec, t, validity=validity, n_terms=n_terms)

    h = rel_step * T
    coarse = T * second_derivative(f, T, h)
    fine = T * second_derivative(f, T, h / 2.0)
    return HeatCapacityResult(fine, Method.LNZ_ORACLE, abs(fine - coarse), regime)


def high_T_coefficient(spec):
    """Coefficient ``B(s/2, p - s/2) gamma / (12 pi)`` of the 1/T^2 correction."""
    spec.require_restricted("the high-temperature law")
    return beta(spec.s / 2.0, spec.p - spec.s / 2.0) * spec.gamma / (12.0 * math.pi)


def specific_heat_high_T(spec, T):
    """Leading quantum correction ``C = 1/2 - coeff / T^2``."""
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    coeff = high_T_coefficient(spec)
    flags = ()
    if not T > 5.0 * max(spec.gamma, 1.0):
        flags = ("temperature_not_high",)
    # next order is down by a further power of 1/T
    err = coeff / T ** 3 * max(spec.gamma, 1.0)
    return HeatCapacityResult(
        0.5 - coeff / T ** 2, Method.ASYMPTOTIC_HIGH_T, err, classify_regime(spec), flags,
    )


def _gamma_fn(x):
    return math.exp(log_gamma(x))


def specific_heat_low_T(spec, T):
    """Leading low-temperature law for the regime of ``(s, gamma)``.

    The error estimate is the leading correction multiplied by the
    expansion parameter of the density change, i.e. the size of the first
    neglected order.
    """
    spec.require_restricted("the low-temperature laws")
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    g, s, p = spec.gamma, spec.s, spec.p
    regime = classify_regime(spec)
    flags = () if T < min(1.0, g) else ("temperature_not_low",)
    if g == 0.0:
        return HeatCapacityResult(0.5, Method.ASYMPTOTIC_LOW_T, 0.0, regime, flags)
    lf = low_freq_expansion(spec)
    sin2 = math.sin(math.pi * s / 2.0) ** 2
    if regime is Regime.S_EQUALS_2:
        lnT = math.log(T)
        value = 0.5 + 1.0 / (2.0 * lnT)
        err = 1.0 / (2.0 * lnT * lnT)
    elif regime is Regime.CRITICAL_MASS:
        coeff = (2.0 + 2.0 * p - s) * sin2 / (math.pi * g)
        term = coeff * _gamma_fn(6.0 - s) * zeta(5.0 - s) * T ** (4.0 - s)
        value = 0.5 * (s - 1.0) + term
        err = abs(term) * T ** 2
    elif s < 2.0:
        renorm = 1.0 + lf.dm_over_m
        a = (2.0 - s) * sin2 / (math.pi * g) * renorm
        term = a * _gamma_fn(4.0 - s) * zeta(3.0 - s) * T ** (2.0 - s)
        value = 0.5 * (s - 1.0) + term
        err = abs(term) * abs(renorm / lf.frac_coeff) * T ** (2.0 - s)
    else:
        renorm = 1.0 + lf.dm_over_m
        b = g / math.pi * (s - 2.0) / renorm
        term = b * _gamma_fn(s) * zeta(s - 1.0) * T ** (s - 2.0)
        value = 0.5 - term
        if lf.frac_coeff is None:
            err = abs(term)
        else:
            err = abs(term) * abs(lf.frac_coeff / renorm) * T ** (s - 2.0)
    return HeatCapacityResult(value, Method.ASYMPTOTIC_LOW_T, err, regime, flags)


def specific_heat(spec, T, T_switch=T_SWITCH, self_test=False, validity=None):
    """Specific heat by the Matsubara sum above ``T_switch``, the spectral integral below.

    With ``self_test`` set and ``T`` inside ``[T_switch/2, 2 T_switch]``
    both routes are evaluated and an ``ArithmeticError`` is raised if they
    differ by more than 1e-5.
    """
    if not T > 0.0:
        raise DomainError("temperature must be positive")
    spec.require_restricted("the specific heat engines")
    if T >= T_switch:
        res = specific_heat_matsubara(spec, T, validity=validity)
    else:
        res = specific_heat_spectral(spec, T, validity=validity)
    if self_test and 0.5 * T_switch <= T <= 2.0 * T_switch:
        other = (specific_heat_spectral if res.method is Method.MATSUBARA
                 else specific_heat_matsubara)(spec, T, validity=validity)
        if abs(other.value - res.value) > 1e-5:
            raise ArithmeticError(
                f"Matsubara and spectral routes disagree at T={T:g}: "
                f"{res.value!r} vs {other.value!r}"
            )
    return res
