import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dissipath.errors import DomainError, SeriesError
from dissipath.numerics import (
    CompositeTail,
    ExponentialDecay,
    InversePowerTail,
    InverseSquareTail,
    PowerLawDecay,
    QuadResult,
    SumResult,
    gauss_kronrod_15,
    integrate_semi_infinite,
    second_derivative,
    sum_with_tail,
)


def test_gauss_kronrod_polynomial_exact():
    # Kronrod is exact to degree 22, the embedded Gauss rule to degree 13
    val, err = gauss_kronrod_15(lambda x: x ** 20, 0.0, 1.0)
    assert val == pytest.approx(1.0 / 21.0, rel=1e-14)
    assert err > 1e-8
    val, err = gauss_kronrod_15(lambda x: x ** 13, 0.0, 2.0)
    assert val == pytest.approx(2.0 ** 14 / 14.0, rel=1e-14)
    assert err < 1e-10


@pytest.mark.parametrize("f, hint, exact", [
    (lambda w: np.exp(-w), ExponentialDecay(1.0), 1.0),
    (lambda w: 1.0 / (1.0 + w * w), PowerLawDecay(2.0), math.pi / 2),
    (lambda w: w / (1.0 + w * w) ** 2, PowerLawDecay(3.0), 0.5),
    # integrable singularity at the origin; exact value pi / (2 sin(pi/20))
    (lambda w: w ** -0.9 / (1.0 + w * w), PowerLawDecay(2.9), math.pi / (2 * math.sin(0.05 * math.pi))),
])
def test_semi_infinite_reference_integrals(f, hint, exact):
    res = integrate_semi_infinite(f, hint, abs_tol=1e-13, rel_tol=1e-12)
    assert isinstance(res, QuadResult)
    assert res.value == pytest.approx(exact, rel=1e-10)
    assert res.abs_error_estimate >= 0.0
    assert res.evaluations > 0


def test_semi_infinite_complex_result():
    res = integrate_semi_infinite(lambda w: (1 + 2j) * np.exp(-w), ExponentialDecay(1.0))
    assert isinstance(res.value, complex)
    assert res.value == pytest.approx(1 + 2j, rel=1e-10)


def test_breakpoint_resolves_narrow_peak():
    w0, width = 300.0, 1e-3
    f = lambda w: width / math.pi / ((w - w0) ** 2 + width ** 2) + np.exp(-w)
    # the 1/w^2 Lorentzian tail sets the decay hint
    res = integrate_semi_infinite(f, PowerLawDecay(2.0), breakpoints=[w0], rel_tol=1e-10)
    exact = 1.0 + 0.5 + math.atan(w0 / width) / math.pi
    assert res.value == pytest.approx(exact, rel=1e-8)


@given(st.floats(0.05, 20.0))
def test_exponential_scale_property(a):
    res = integrate_semi_infinite(lambda w: np.exp(-a * w), ExponentialDecay(1.0 / a))
    assert res.value == pytest.approx(1.0 / a, rel=1e-8)


def test_decay_hint_validation():
    with pytest.raises(DomainError):
        PowerLawDecay(1.0)
    with pytest.raises(DomainError):
        ExponentialDecay(0.0)
    with pytest.raises(DomainError):
        InversePowerTail(1.0, 0.5)


def test_zeta_two_with_tail():
    res = sum_with_tail(lambda n: 1.0 / n ** 2, InverseSquareTail(1.0))
    assert isinstance(res, SumResult)
    assert res.value == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert res.terms_used >= 64


def test_tail_model_mismatch_detected():
    with pytest.raises(SeriesError, match="mismatch"):
        sum_with_tail(lambda n: 1.0 / n ** 4, InverseSquareTail(1.0), max_terms=2 ** 12)


def test_next_order_tail_term_accelerates():
    # 1/(n^2 + n) = 1/n^2 - 1/n^3 + ...; the sum is exactly 1
    term = lambda n: 1.0 / (n * n + n)
    plain = sum_with_tail(term, InverseSquareTail(1.0), n_terms=256)
    both = sum_with_tail(
        term, CompositeTail((InverseSquareTail(1.0), InversePowerTail(-1.0, 3.0))), n_terms=256,
    )
    assert abs(both.value - 1.0) < 1e-2 * abs(plain.value - 1.0)
    converged = sum_with_tail(term, CompositeTail((InverseSquareTail(1.0), InversePowerTail(-1.0, 3.0))))
    assert converged.value == pytest.approx(1.0, rel=1e-10)


def test_fixed_term_count():
    res = sum_with_tail(lambda n: 1.0 / n ** 2, InverseSquareTail(1.0), n_terms=10)
    assert res.terms_used == 10
    assert res.value == pytest.approx(math.pi ** 2 / 6, rel=1e-14)


def test_second_derivative():
    assert second_derivative(math.sin, 0.7, 1e-2) == pytest.approx(-math.sin(0.7), rel=1e-8)
    assert second_derivative(math.exp, 1.0, 1e-2) == pytest.approx(math.e, rel=1e-8)
