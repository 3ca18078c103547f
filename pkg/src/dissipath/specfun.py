"""Real-argument special functions.

Only what the damped-particle formulas need: log-gamma, the beta function,
differences of digamma values at positive integers and the Riemann zeta
function to the right of its pole.  All functions work on Python floats.
"""

import math

from .errors import DomainError

__all__ = [
    "log_gamma",
    "beta",
    "digamma_int",
    "hurwitz_zeta",
    "zeta",
    "ZETA_POLE_GUARD",
]

#: Arguments of :func:`zeta` closer than this to the pole are rejected.
ZETA_POLE_GUARD = 1e-6

# B_2k / (2k)! for k = 1..7
_BERNOULLI_OVER_FACTORIAL = (
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
)

# direct terms summed by zeta() before switching to the Euler-Maclaurin tail
_ZETA_DIRECT_TERMS = 16


def log_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def beta(x, y):
    """Euler beta function ``B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)``."""
    x = float(x)
    y = float(y)
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"beta requires x, y > 0, got ({x!r}, {y!r})")
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def digamma_int(p):
    """Return ``psi(p) - psi(1)`` for an integer ``p >= 1``.

    This is the harmonic number ``H_{p-1}``; the Euler constant hidden in
    ``psi(1)`` never needs to be evaluated.
    """
    if isinstance(p, float):
        if not p.is_integer():
            raise DomainError(f"digamma_int requires an integer, got {p!r}")
        p = int(p)
    if not isinstance(p, int) or isinstance(p, bool):
        raise DomainError(f"digamma_int requires an integer, got {p!r}")
    if p < 1:
        raise DomainError(f"digamma_int requires p >= 1, got {p}")
    return math.fsum(1.0 / k for k in range(1, p))


def hurwitz_zeta(q, a):
    """Hurwitz zeta ``sum_{n>=0} (n + a)^(-q)`` for ``q > 1`` and ``a >= 8``.

    Evaluated by the Euler-Maclaurin formula at the lower end of the sum,
    which for ``a >= 8`` is accurate to machine precision with seven
    Bernoulli corrections.  Smaller ``a`` is handled by peeling off direct
    terms first.
    """
    q = float(q)
    a = float(a)
    if not q > 1.0:
        raise DomainError(f"hurwitz_zeta requires q > 1, got {q!r}")
    if not a > 0.0:
        raise DomainError(f"hurwitz_zeta requires a > 0, got {a!r}")
    head = []
    while a < 8.0:
        head.append(a ** -q)
        a += 1.0
    terms = [a ** (1.0 - q) / (q - 1.0), 0.5 * a ** -q]
    # rising factorial q (q+1) ... (q+2k-2) times a^(-q-2k+1)
    rising = q
    power = a ** (-q - 1.0)
    inv_a2 = 1.0 / (a * a)
    for k, coeff in enumerate(_BERNOULLI_OVER_FACTORIAL):
        terms.append(coeff * rising * power)
        rising *= (q + 2 * k + 1) * (q + 2 * k + 2)
        power *= inv_a2
    return math.fsum(head) + math.fsum(terms)


def zeta(x):
    """Riemann zeta function for real ``x > 1``.

    Sixteen direct terms plus an Euler-Maclaurin tail.  Arguments within
    :data:`ZETA_POLE_GUARD` of the pole raise :class:`DomainError`, since
    no caller in this library should ever get that close.
    """
    x = float(x)
    if math.isnan(x) or x <= 1.0 + ZETA_POLE_GUARD:
        raise DomainError(
            f"zeta requires x > 1 + {ZETA_POLE_GUARD:g}, got {x!r}"
        )
    if math.isinf(x):
        return 1.0
    direct = math.fsum(n ** -x for n in range(2, _ZETA_DIRECT_TERMS))
    return 1.0 + direct + hurwitz_zeta(x, _ZETA_DIRECT_TERMS)
