import math

import pytest

from degreelab.numerics import DomainError, beta, integrate, log_beta


def test_beta_one_one():
    assert log_beta(1.0, 1.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 7.5, 100.0])
def test_beta_one_t_is_inverse(t):
    # B(1, t) = 1/t, equivalently the integral of t(1-p)^(t-1) over [0,1] is 1
    assert log_beta(1.0, t) == pytest.approx(math.log(1.0 / t), rel=1e-12)


def test_beta_half_half_vs_quadrature():
    # independent oracle: adaptive quadrature of p^(-1/2)(1-p)^(-1/2)
    oracle = integrate(lambda p, omp: p ** -0.5 * omp ** -0.5, tol=1e-10)
    assert log_beta(0.5, 0.5) == pytest.approx(math.log(oracle), abs=1e-10)
    assert log_beta(0.5, 0.5) == pytest.approx(math.log(math.pi), rel=1e-12)


def test_symmetry_is_exact():
    for a, b in [(0.5, 3.25), (2.0, 9.0), (1e-3, 12.0)]:
        assert log_beta(a, b) == log_beta(b, a)


def test_integer_factorial_identity():
    for a in range(1, 11):
        for b in range(1, 11):
            expect = (math.factorial(a - 1) * math.factorial(b - 1)
                      / math.factorial(a + b - 1))
            assert beta(a, b) == pytest.approx(expect, rel=1e-10)


def test_domain_errors():
    for a, b in [(0.0, 1.0), (-1.0, 2.0), (1.0, 0.0)]:
        with pytest.raises(DomainError):
            log_beta(a, b)
