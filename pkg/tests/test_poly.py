import itertools
import math

import numpy as np
import pytest

from degreelab.boolfn import build_named, weights_table
from degreelab.poly import (InputError, MultiPoly, UniPoly,
                            amplification_poly, chebyshev_or, majority_tail,
                            multilinear_from_values, or_approx_profile,
                            robustness_margin, symmetric_from_levels)


def P(m, terms):
    return MultiPoly(m, terms)


def test_evaluate_basics():
    assert P(2, {(1, 1): 1.0}).evaluate([1, 1]) == 1.0
    half_sum = P(2, {(0, 0): -0.25, (1, 0): 0.5, (0, 1): 0.5})
    assert half_sum.evaluate([1, 1]) == pytest.approx(0.75)
    assert P(1, {(2,): 1.0}).evaluate([0.5]) == pytest.approx(0.25)


def test_evaluate_many_matches_scalar():
    rng = np.random.RandomState(0)
    p = P(3, {(2, 0, 1): 1.5, (0, 1, 0): -2.0, (1, 1, 1): 0.25, (0, 0, 0): 3.0})
    X = rng.rand(40, 3)
    batch = p.evaluate_many(X)
    for i in range(40):
        assert batch[i] == pytest.approx(p.evaluate(X[i]), rel=1e-12)


def test_multilinearize():
    assert P(1, {(2,): 1.0}).multilinearize() == P(1, {(1,): 1.0})
    q = P(2, {(2, 3): 1.0, (0, 1): 1.0}).multilinearize()
    assert q == P(2, {(1, 1): 1.0, (0, 1): 1.0})
    lin = P(2, {(1, 0): 2.0, (0, 1): -1.0})
    assert lin.multilinearize() == lin


def test_multilinearize_preserves_cube_values():
    rng = np.random.RandomState(5)
    for m in (2, 3, 4):
        terms = {tuple(rng.randint(0, 4, size=m)): rng.randn() for _ in range(6)}
        p = P(m, terms)
        q = p.multilinearize()
        for bits in itertools.product((0, 1), repeat=m):
            assert q.evaluate(bits) == pytest.approx(p.evaluate(bits), abs=1e-10)


def test_to_pm_basis():
    ident = P(1, {(1,): 1.0})
    assert ident.to_pm_basis() == P(1, {(1,): 1.0})
    and01 = P(2, {(1, 1): 1.0})
    q = and01.to_pm_basis()
    assert q == P(2, {(1, 1): 0.5, (1, 0): 0.5, (0, 1): 0.5, (0, 0): -0.5})
    const = MultiPoly.constant(3, 1.0)
    assert const.to_pm_basis() == MultiPoly.constant(3, 1.0)


def test_pm_basis_involution():
    rng = np.random.RandomState(9)
    for _ in range(10):
        m = rng.randint(1, 4)
        p = P(m, {tuple(rng.randint(0, 2, size=m)): rng.randn() for _ in range(5)})
        back = p.to_pm_basis().from_pm_basis().prune(0.0)
        for e, c in p.terms.items():
            assert back.terms.get(e, 0.0) == pytest.approx(c, abs=1e-12)


def test_substitute():
    y = P(2, {(1, 0): 1.0, (0, 1): 1.0})
    x1 = MultiPoly.variable(2, 0)
    x2 = MultiPoly.variable(2, 1)
    assert y.substitute([x1, x2]) == y
    prod = P(2, {(1, 1): 1.0})
    assert prod.substitute([x1, x1]) == P(2, {(2, 0): 1.0})
    amp3 = amplification_poly(0.27)  # k = 3
    comp = amp3.as_multipoly_in(MultiPoly.variable(1, 0))
    assert comp.prune() == P(1, {(2,): 3.0, (3,): -2.0})


def test_substitute_degree_bound():
    rng = np.random.RandomState(2)
    p = P(2, {(2, 1): 1.0, (1, 0): -1.0})
    subs = [P(2, {(1, 1): 1.0, (0, 0): 0.5}), P(2, {(2, 0): 2.0})]
    out = p.substitute(subs)
    assert out.degree <= p.degree * max(s.degree for s in subs)


def test_amplification_poly():
    a3 = amplification_poly(0.27)
    assert a3.degree == 3
    assert a3.coeffs == [0.0, 0.0, 3.0, -2.0]
    assert a3(1.0 / 3.0) == pytest.approx(7.0 / 27.0, abs=1e-14)
    for eps in (0.3, 0.1, 0.01, 1e-4):
        a = amplification_poly(eps)
        assert a.degree % 2 == 1
        assert a(0.5) == pytest.approx(0.5, abs=1e-12)
        assert a(1.0 / 3.0) <= eps + 1e-12
        # minimality: two fewer votes would miss the target
        if a.degree > 1:
            num, den = majority_tail(a.degree - 2, 1, 3)
            assert num > eps * den
        grid = np.linspace(0.0, 1.0, 10001)
        vals = np.array([a(x) for x in grid])
        assert vals.min() >= -1e-12 and vals.max() <= 1.0 + 1e-12
        assert (np.diff(vals) >= -1e-9).all()


def test_chebyshev_or_small():
    p1 = chebyshev_or(1, 1.0 / 3.0)
    assert p1 == P(1, {(1,): 1.0})
    p4 = chebyshev_or(4, 1.0 / 3.0)
    assert p4.degree <= 4
    orf = build_named("OR", 4)
    X = np.array([[(i >> (3 - j)) & 1 for j in range(4)] for i in range(16)],
                 dtype=float)
    vals = p4.evaluate_many(X)
    assert (vals >= -1e-10).all() and (vals <= 1.0 + 1e-10).all()
    assert np.abs(vals - orf.table).max() <= 1.0 / 3.0 + 1e-10


def test_chebyshev_or_degree_scaling():
    for n in range(1, 65):
        r, levels = or_approx_profile(n, 1.0 / 3.0)
        deg = min(r, n)
        assert deg / math.sqrt(n) <= 2.0
        lv = np.array(levels)
        assert abs(lv[0]) <= 1e-12
        assert (np.abs(lv[1:] - 1.0) <= 1.0 / 3.0 + 1e-12).all()
        assert (lv >= -1e-12).all() and (lv <= 1.0 + 1e-12).all()


def test_symmetric_from_levels_matches_profile():
    levels = [0.0, 0.9, 1.0, 0.95, 1.0]
    p = symmetric_from_levels(4, levels)
    w = weights_table(4)
    X = np.array([[(i >> (3 - j)) & 1 for j in range(4)] for i in range(16)],
                 dtype=float)
    vals = p.evaluate_many(X)
    for i in range(16):
        assert vals[i] == pytest.approx(levels[w[i]], abs=1e-10)


def test_robustness_margin_linear():
    ident = build_named("OR", 1)
    rep = robustness_margin(MultiPoly.variable(1, 0), ident, 0.1)
    assert rep.exact and float(rep) == pytest.approx(0.1, abs=1e-15)


def test_robustness_margin_or2():
    or2 = build_named("OR", 2)
    p = P(2, {(1, 0): 1.0, (0, 1): 1.0, (1, 1): -1.0})
    rep = robustness_margin(p, or2, 0.1)
    assert float(rep) == pytest.approx(0.19, abs=1e-12)
    assert rep.worst_point == (0, 0)


def test_robustness_margin_delta_zero_is_clean_error():
    f = build_named("AND", 2)
    p = P(2, {(0, 0): -0.25, (1, 0): 0.5, (0, 1): 0.5})
    rep = robustness_margin(p, f, 0.0)
    clean = max(abs(p.evaluate([(i >> 1) & 1, i & 1]) - f.table[i])
                for i in range(4))
    assert float(rep) == pytest.approx(clean, abs=1e-14)


def test_robustness_margin_rejects_nonmultilinear():
    with pytest.raises(InputError):
        robustness_margin(P(1, {(2,): 1.0}), build_named("OR", 1), 0.1)


def test_coeff_norms():
    p = P(2, {(1, 0): 1.0, (0, 1): 1.0, (1, 1): -1.0})
    assert p.coeff_l1() == 3.0 and p.coeff_max() == 1.0
    assert MultiPoly.zero(2).coeff_l1() == 0.0
    t2 = P(1, {(2,): 8.0, (1,): -8.0, (0,): 1.0})
    assert t2.coeff_l1() == 17.0 and t2.coeff_max() == 8.0


def test_bernoulli_expectation_identity():
    rng = np.random.RandomState(17)
    for m in (1, 2, 3, 8, 10):
        vals = rng.randn(1 << m)
        p = multilinear_from_values(vals)
        y = rng.rand(m)
        # expectation over independent Bernoulli bits, by exact enumeration
        expect = 0.0
        for i in range(1 << m):
            prob = 1.0
            for j in range(m):
                b = (i >> (m - 1 - j)) & 1
                prob *= y[j] if b else 1.0 - y[j]
            expect += prob * vals[i]
        assert p.evaluate(y) == pytest.approx(expect, abs=1e-10)


def test_multilinear_from_values_roundtrip():
    rng = np.random.RandomState(23)
    vals = rng.randn(16)
    p = multilinear_from_values(vals)
    assert p.is_multilinear()
    X = np.array([[(i >> (3 - j)) & 1 for j in range(4)] for i in range(16)],
                 dtype=float)
    assert np.allclose(p.evaluate_many(X), vals, atol=1e-12)


def test_json_roundtrip_deterministic():
    p = P(3, {(1, 0, 2): -1.5, (0, 0, 0): 2.0, (1, 1, 1): 0.5})
    text = p.to_json()
    assert MultiPoly.from_json(text) == p
    assert text == MultiPoly.from_json(text).to_json()


def test_unipoly_bernstein_stability():
    a = amplification_poly(1e-4)  # sizeable degree
    # Bernstein evaluation stays in [0,1]; symmetric midpoint exact
    assert a(0.5) == pytest.approx(0.5, abs=1e-13)
    assert 0.0 <= a(0.97) <= 1.0
