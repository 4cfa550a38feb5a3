import itertools

import numpy as np
import pytest

from degreelab.numerics import LpInputError, LpProblem, solve_lp


def _vertex_oracle(problem):
    """Brute-force LP oracle: enumerate vertices of {Ax <= / = / >= b, l <= x <= u}.

    Only for tiny dense problems with a bounded optimum.
    """
    n = problem.c.size
    rows = [(problem.A[i], problem.relations[i], problem.b[i])
            for i in range(problem.b.size)]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(problem.lower[j]):
            rows.append((e, ">=", problem.lower[j]))
        if np.isfinite(problem.upper[j]):
            rows.append((e, "<=", problem.upper[j]))
    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        M = np.array([rows[i][0] for i in subset])
        rhs = np.array([rows[i][2] for i in subset])
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, rhs)
        ok = True
        for a, rel, bb in rows:
            v = a @ x
            if rel == "<=" and v > bb + 1e-8:
                ok = False
            elif rel == ">=" and v < bb - 1e-8:
                ok = False
            elif rel == "=" and abs(v - bb) > 1e-8:
                ok = False
            if not ok:
                break
        if ok:
            val = problem.c @ x
            if best is None or val < best:
                best = val
    return best


def test_bound_constrained_singleton():
    sol = solve_lp(LpProblem(c=[1.0], A=np.zeros((0, 1)), relations=[],
                             b=[], lower=[0.0], upper=[1.0]))
    assert sol.status == "optimal"
    assert sol.x[0] == pytest.approx(0.0, abs=1e-9)
    assert sol.objective == pytest.approx(0.0, abs=1e-9)


def test_symmetric_pair():
    sol = solve_lp(LpProblem(c=[1.0, 1.0], A=[[1.0, 1.0]], relations=[">="],
                             b=[1.0], lower=[0.0, 0.0], upper=None))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(1.0, abs=1e-9)


def test_contradictory_bounds_infeasible():
    sol = solve_lp(LpProblem(c=[0.0], A=[[1.0], [1.0]], relations=[">=", "<="],
                             b=[1.0, 0.0]))
    assert sol.status == "infeasible"
    assert sol.farkas is not None
    # the certificate aggregates the two rows into 0 >= 1 (up to scale)
    y = sol.farkas
    assert abs(y[0] * 1.0 + y[1] * 1.0) < 1e-7 * max(1.0, np.abs(y).max())


def test_unbounded():
    sol = solve_lp(LpProblem(c=[-1.0], A=np.zeros((0, 1)), relations=[],
                             b=[], lower=[0.0], upper=None))
    assert sol.status == "unbounded"


def test_equality_and_free_vars():
    # min x - y s.t. x + y = 3, x - y >= -1, free vars; optimum at y = 2
    sol = solve_lp(LpProblem(c=[1.0, -1.0], A=[[1.0, 1.0], [1.0, -1.0]],
                             relations=["=", ">="], b=[3.0, -1.0]))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(-1.0, abs=1e-8)
    assert sol.x == pytest.approx([1.0, 2.0], abs=1e-8)


def test_dimension_mismatch_rejected():
    with pytest.raises(LpInputError):
        LpProblem(c=[1.0, 2.0], A=[[1.0]], relations=["<="], b=[1.0])


def test_random_problems_against_vertex_oracle():
    rng = np.random.RandomState(42)
    solved = 0
    for _ in range(60):
        n = rng.randint(2, 4)
        m = rng.randint(n, n + 4)
        A = rng.randn(m, n).round(2)
        b = rng.randn(m).round(2) + 1.0
        c = rng.randn(n).round(2)
        rels = ["<="] * m
        prob = LpProblem(c=c, A=A, b=b, relations=rels,
                         lower=np.zeros(n), upper=np.full(n, 3.0))
        sol = solve_lp(prob)
        ref = _vertex_oracle(prob)
        if ref is None:
            assert sol.status == "infeasible"
        else:
            assert sol.status == "optimal"
            assert sol.objective == pytest.approx(ref, abs=1e-6)
            solved += 1
    assert solved > 30


def test_weak_duality_reported():
    rng = np.random.RandomState(3)
    for _ in range(20):
        n, m = 3, 5
        A = rng.randn(m, n)
        b = rng.rand(m) + 0.5
        c = rng.randn(n)
        prob = LpProblem(c=c, A=A, b=b, relations=["<="] * m,
                         lower=np.zeros(n), upper=np.full(n, 2.0))
        sol = solve_lp(prob)
        if sol.status != "optimal":
            continue
        assert sol.objective >= sol.diagnostics["dual_objective"] - 1e-8 \
            or abs(sol.objective - sol.diagnostics["dual_objective"]) < 1e-6
