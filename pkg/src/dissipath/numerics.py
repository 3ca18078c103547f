"""Quadrature, series summation and finite differences.

The integrands met in this library mix integrable power laws at small
frequency with power-law or exponential decay at large frequency.  All of
them become smooth in the logarithmic variable ``t = ln(omega)``, so
:func:`integrate_semi_infinite` works on decade panels in ``t``, refines
them adaptively with a 7/15-point Gauss-Kronrod pair and closes the domain
with one mapped tail panel chosen by the decay hint.

Callables handed to :func:`integrate_semi_infinite` and
:func:`sum_with_tail` are evaluated on 1-D numpy arrays unless
``vectorized=False`` is passed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError, SeriesError
from .specfun import hurwitz_zeta

__all__ = [
    "QuadResult",
    "SumResult",
    "PowerLawDecay",
    "ExponentialDecay",
    "InverseSquareTail",
    "InversePowerTail",
    "CompositeTail",
    "gauss_kronrod_15",
    "integrate_semi_infinite",
    "sum_with_tail",
    "second_derivative",
    "DEFAULT_ABS_TOL",
    "DEFAULT_REL_TOL",
]

DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-9

# Kronrod abscissae on [0, 1); the odd-indexed ones are the Gauss-7 nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full symmetric rule on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_K_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_WEIGHTS = np.zeros(15)
_G_WEIGHTS[[1, 3, 5]] = _WG[:3]
_G_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
_G_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps
_LOG_FLOOR = math.log(1e-300)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations <= 0:
            raise ValueError("evaluations must be positive")


@dataclass(frozen=True)
class SumResult:
    value: float
    tail_correction: float
    terms_used: int
    abs_error_estimate: float = 0.0

    def __post_init__(self):
        if self.terms_used < 1:
            raise ValueError("terms_used must be at least 1")


@dataclass(frozen=True)
class PowerLawDecay:
    """Integrand falls off no slower than ``omega**(-exponent)``."""

    exponent: float

    def __post_init__(self):
        if not self.exponent > 1.0:
            raise DomainError(
                f"power-law tail needs exponent > 1 to be integrable, got {self.exponent}"
            )


@dataclass(frozen=True)
class ExponentialDecay:
    """Integrand falls off like ``exp(-omega / scale)``."""

    scale: float

    def __post_init__(self):
        if not self.scale > 0.0:
            raise DomainError(f"exponential decay scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class InversePowerTail:
    """Terms behave like ``c * n**(-q)`` for large ``n``."""

    c: float
    q: float

    def __post_init__(self):
        if not self.q > 1.0:
            raise DomainError(f"tail exponent must exceed 1, got {self.q}")

    def tail(self, n):
        """Model estimate of ``sum_{k > n} c k**(-q)``."""
        if self.c == 0.0:
            return 0.0
        return self.c * hurwitz_zeta(self.q, n + 1)


def InverseSquareTail(c):
    """Tail model ``c / n**2``."""
    return InversePowerTail(c, 2.0)


@dataclass(frozen=True)
class CompositeTail:
    """Sum of power-law tail models, e.g. a leading ``1/n**2`` plus a correction.

    The decay check in :func:`sum_with_tail` compares against the
    exponent of the first part, which should be the leading one.
    """

    parts: tuple

    def __post_init__(self):
        if not self.parts or not all(isinstance(m, InversePowerTail) for m in self.parts):
            raise DomainError("CompositeTail needs at least one InversePowerTail")

    @property
    def q(self):
        return self.parts[0].q

    def tail(self, n):
        return math.fsum(m.tail(n) for m in self.parts)


def gauss_kronrod_15(f, a, b):
    """Apply the 7/15-point Gauss-Kronrod pair to ``f`` on ``[a, b]``.

    Returns ``(kronrod, |kronrod - gauss|)``.  ``f`` is called once with
    the 15 nodes as an array.
    """
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    fx = np.asarray(f(x))
    k = half * np.dot(_K_WEIGHTS, fx)
    g = half * np.dot(_G_WEIGHTS, fx)
    return k, abs(k - g)


def _as_vectorized(f, vectorized):
    if vectorized:
        return f
    return lambda x: np.array([f(float(xi)) for xi in np.ravel(x)])


class _PanelSet:
    """Panels of the form ``[a, b]`` in a transformed variable.

    ``kind`` 0 is a log-variable panel (``omega = exp(t)``), kind 1 the
    mapped tail (``omega = omega_hi * u**(-1/(q-1))``), kind 2 the
    exponential tail (``omega = omega_hi - scale * ln u``).
    """

    def __init__(self, f, decay_hint, omega_hi):
        self.f = f
        self.hint = decay_hint
        self.omega_hi = omega_hi
        self.a = np.empty(0)
        self.b = np.empty(0)
        self.kind = np.empty(0, dtype=int)
        self.val = np.empty(0, dtype=complex)
        self.err = np.empty(0)
        self.resabs = np.empty(0)
        self.evaluations = 0

    def _transform(self, kind, y):
        # returns omega(y) and d omega / dy for nodes y of a given panel kind
        if kind == 0:
            w = np.exp(y)
            return w, w
        if kind == 1:
            m = 1.0 / (self.hint.exponent - 1.0)
            w = self.omega_hi * y ** (-m)
            return w, m * w / y
        w = self.omega_hi - self.hint.scale * np.log(y)
        return w, self.hint.scale / y

    def evaluate(self, a, b, kind):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        kind = np.asarray(kind, dtype=int)
        half = 0.5 * (b - a)
        y = 0.5 * (a + b)[:, None] + half[:, None] * _NODES[None, :]
        fy = np.empty(y.shape, dtype=complex)
        for k in np.unique(kind):
            rows = kind == k
            w, jac = self._transform(k, y[rows])
            vals = np.asarray(self.f(w.ravel()), dtype=complex).reshape(w.shape)
            fy[rows] = vals * jac
        self.evaluations += y.size
        if not np.all(np.isfinite(fy)):
            raise QuadratureError(
                "integrand returned non-finite values",
                value=None, abs_error_estimate=math.inf,
                evaluations=self.evaluations,
            )
        kron = half * (fy @ _K_WEIGHTS)
        gauss = half * (fy @ _G_WEIGHTS)
        resabs = np.abs(half) * (np.abs(fy) @ _K_WEIGHTS)
        return kron, np.abs(kron - gauss), resabs

    def add(self, a, b, kind):
        val, err, resabs = self.evaluate(a, b, kind)
        self.a = np.concatenate([self.a, np.asarray(a, dtype=float)])
        self.b = np.concatenate([self.b, np.asarray(b, dtype=float)])
        self.kind = np.concatenate([self.kind, np.asarray(kind, dtype=int)])
        self.val = np.concatenate([self.val, val])
        self.err = np.concatenate([self.err, err])
        self.resabs = np.concatenate([self.resabs, resabs])
        return val, err

    def bisect(self, idx):
        a, b, kind = self.a[idx], self.b[idx], self.kind[idx]
        mid = 0.5 * (a + b)
        keep = np.ones(self.a.size, dtype=bool)
        keep[idx] = False
        for name in ("a", "b", "kind", "val", "err", "resabs"):
            setattr(self, name, getattr(self, name)[keep])
        self.add(np.concatenate([a, mid]), np.concatenate([mid, b]),
                 np.concatenate([kind, kind]))


def integrate_semi_infinite(f, decay_hint, abs_tol=DEFAULT_ABS_TOL,
                            rel_tol=DEFAULT_REL_TOL, breakpoints=(),
                            max_panels=20000, vectorized=True):
    """Integrate ``f`` over ``(0, inf)``.

    Parameters
    ----------
    f : callable
        Integrand; may return real or complex values.
    decay_hint : PowerLawDecay or ExponentialDecay
        Large-argument behaviour, used to map the last panel onto a finite
        interval.  For power laws the exponent should not exceed the true
        decay rate.
    abs_tol, rel_tol : float
        Target ``|error| <= max(abs_tol, rel_tol * |value|)``.
    breakpoints : sequence of float
        Frequencies where the integrand changes character (a resonance,
        a thermal scale).  Panels are split there and the lower end of the
        decade grid is pushed at least three decades below the smallest.

    Returns
    -------
    QuadResult
        ``value`` is a float when every integrand value was real.

    Notes
    -----
    Below the decade grid, decades are appended downwards until the
    geometric estimate of what remains falls under a tenth of the
    tolerance; that estimate is then added to the result.
    """
    if not (abs_tol > 0.0 or rel_tol > 0.0) or abs_tol < 0.0 or rel_tol < 0.0:
        raise DomainError("tolerances must be non-negative and not both zero")
    if not isinstance(decay_hint, (PowerLawDecay, ExponentialDecay)):
        raise DomainError(f"unknown decay hint {decay_hint!r}")
    f = _as_vectorized(f, vectorized)
    bps = sorted(float(b) for b in breakpoints if b > 0.0)
    omega_hi = max(1e3, 10.0 * bps[-1]) if bps else 1e3
    omega_lo = min(1e-3, 1e-3 * bps[0]) if bps else 1e-3

    k_lo = math.floor(math.log10(omega_lo))
    k_hi = math.ceil(math.log10(omega_hi))
    omega_hi = 10.0 ** k_hi
    edges = {k * math.log(10.0) for k in range(k_lo, k_hi + 1)}
    edges.update(math.log(b) for b in bps)
    edges = np.array(sorted(edges))
    edges = edges[np.concatenate([[True], np.diff(edges) > 1e-9])]

    panels = _PanelSet(f, decay_hint, omega_hi)
    tail_kind = 1 if isinstance(decay_hint, PowerLawDecay) else 2
    panels.add(edges[:-1], edges[1:], np.zeros(edges.size - 1, dtype=int))
    panels.add([0.0], [1.0], [tail_kind])

    # extend below the grid one decade at a time
    decade = math.log(10.0)
    t_low = edges[0]
    prev = None
    remainder = 0.0
    remainder_err = 0.0
    while True:
        total = abs(panels.val.sum())
        tol = max(abs_tol, rel_tol * total)
        val, _ = panels.add([t_low - decade], [t_low], [0])
        t_low -= decade
        cur = val[0]
        if prev is not None and abs(prev) > 0.0:
            r = abs(cur) / abs(prev)
            if r < 0.95:
                remainder = cur * r / (1.0 - r)
                if abs(remainder) <= 0.1 * tol:
                    remainder_err = abs(remainder)
                    break
        elif prev is not None and cur == 0.0:
            # integrand vanishes identically below the grid
            break
        if t_low < _LOG_FLOOR:
            raise QuadratureError(
                "integrand does not decay towards omega = 0",
                value=complex(panels.val.sum()), abs_error_estimate=abs(cur),
                evaluations=panels.evaluations,
            )
        prev = cur

    while True:
        value = panels.val.sum() + remainder
        err_total = panels.err.sum() + remainder_err
        tol = max(abs_tol, rel_tol * abs(value))
        if err_total <= tol:
            break
        floor = 50.0 * _EPS * panels.resabs
        share = 0.5 * tol / panels.err.size
        idx = np.nonzero((panels.err > share) & (panels.err > floor))[0]
        if idx.size == 0:
            # remaining error is roundoff in every panel
            break
        if panels.err.size + idx.size > max_panels:
            raise QuadratureError(
                f"no convergence within {max_panels} panels",
                value=_maybe_real(value, panels), abs_error_estimate=float(err_total),
                evaluations=panels.evaluations,
            )
        panels.bisect(idx)

    return QuadResult(_maybe_real(value, panels), float(err_total), panels.evaluations)


def _maybe_real(value, panels):
    if np.all(panels.val.imag == 0.0) and complex(value).imag == 0.0:
        return float(complex(value).real)
    return complex(value)


def sum_with_tail(term, tail_model, rel_tol=1e-10, abs_tol=0.0, n_min=1,
                  max_terms=2 ** 22, n_terms=None, vectorized=True):
    """Sum ``term(n)`` for ``n = 1, 2, ...`` with an analytic tail.

    The partial sum is extended by doubling ``N`` until two successive
    tail-corrected estimates agree to ``max(abs_tol, rel_tol * |value|)``,
    ``N >= n_min`` and the empirical decay exponent between ``N/2`` and
    ``N`` lies within 20% of the model exponent.  The tail
    ``sum_{n > N} c n**(-q)`` (summed over the parts of a
    :class:`CompositeTail`) is added via the Hurwitz zeta function.

    Passing ``n_terms`` fixes ``N`` and skips the convergence loop, which
    keeps the truncation identical between neighbouring evaluations (used
    by finite-difference oracles).
    """
    if not isinstance(tail_model, (InversePowerTail, CompositeTail)):
        raise DomainError(f"unknown tail model {tail_model!r}")
    term = _as_vectorized(term, vectorized)

    def block(lo, hi):
        n = np.arange(lo, hi + 1, dtype=float)
        return np.asarray(term(n), dtype=float)

    if n_terms is not None:
        n_terms = int(n_terms)
        if n_terms < 1:
            raise DomainError("n_terms must be at least 1")
        vals = block(1, n_terms)
        tail = tail_model.tail(n_terms)
        return SumResult(float(math.fsum(vals) + tail), tail, n_terms)

    n = max(64, int(n_min))
    vals = block(1, n)
    partial = math.fsum(vals)
    prev = None
    while True:
        tail = tail_model.tail(n)
        est = partial + tail
        decay_ok = _decay_matches(term, n, tail_model, vals)
        if prev is not None and decay_ok:
            diff = abs(est - prev)
            if diff <= max(abs_tol, rel_tol * abs(est)):
                return SumResult(float(est), float(tail), n, float(diff))
        if 2 * n > max_terms:
            reason = "tail model mismatch" if not decay_ok else "term budget exhausted"
            raise SeriesError(f"{reason} after {n} terms", value=est, terms_used=n)
        prev = est
        more = block(n + 1, 2 * n)
        partial += math.fsum(more)
        vals = more
        n *= 2


def _decay_matches(term, n, model, last_block):
    t_hi = last_block[-1]
    t_lo = np.asarray(term(np.array([n / 2.0])), dtype=float)[0]
    if t_hi == 0.0 and t_lo == 0.0:
        return True
    if t_hi == 0.0 or t_lo == 0.0 or math.copysign(1.0, t_hi) != math.copysign(1.0, t_lo):
        return False
    q_emp = math.log(t_lo / t_hi) / math.log(2.0)
    return abs(q_emp - model.q) <= 0.2 * model.q


def second_derivative(f, x, h):
    """Five-point central second difference of ``f`` at ``x`` (error O(h**4))."""
    f0 = f(x)
    fp1, fm1 = f(x + h), f(x - h)
    fp2, fm2 = f(x + 2 * h), f(x - 2 * h)
    return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)
