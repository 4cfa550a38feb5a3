import math

import pytest

from degreelab.numerics import AccuracyError, integrate


def test_constant():
    assert integrate(lambda p: 1.0, tol=1e-12) == pytest.approx(1.0, abs=1e-12)


def test_linear_weight_identity():
    # integral of a(1-p)^(a-1) over [0,1] is 1; here a = 2
    assert integrate(lambda p: 2.0 * (1.0 - p), tol=1e-12) == pytest.approx(1.0, abs=1e-11)


def test_arcsine_singularity_plain_form():
    val = integrate(lambda p: p ** -0.5 * (1.0 - p) ** -0.5, tol=5e-8)
    assert val == pytest.approx(math.pi, abs=5e-8)


def test_arcsine_singularity_exact_form():
    val = integrate(lambda p, omp: p ** -0.5 * omp ** -0.5, tol=1e-10)
    assert val == pytest.approx(math.pi, abs=1e-10)


def test_one_sided_singularity():
    # integral of p^(-1/2) is 2
    val = integrate(lambda p: p ** -0.5, tol=1e-10)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_oscillatory():
    val = integrate(lambda p: math.sin(40.0 * p), tol=1e-11)
    assert val == pytest.approx((1.0 - math.cos(40.0)) / 40.0, abs=1e-10)


def test_budget_exhaustion_carries_estimate():
    with pytest.raises(AccuracyError) as err:
        integrate(lambda p: p ** -0.5, tol=1e-13, max_intervals=120)
    assert err.value.estimate == pytest.approx(2.0, abs=1e-4)
    assert err.value.error_bound > 0
