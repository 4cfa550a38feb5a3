"""Lagrange interpolation on the scaled simplex grid, with the coefficient
bounds it implies for polynomials bounded on the unit cube.

Grid points are the alpha with d*alpha integral in {0..d}^n and
sum(alpha) <= 1; interpolators are built as products of integer-coefficient
linear forms in the scaled variables d*x, so every root is hit exactly.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import MultiPoly


class InputError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


class PreconditionError(RuntimeError):
    pass


GRID_CAP = 5000


@dataclass(frozen=True)
class GridPoint:
    """alpha = numer/d coordinatewise."""

    numer: tuple
    d: int

    def as_floats(self):
        return tuple(j / self.d for j in self.numer)

    def as_fractions(self):
        return tuple(Fraction(j, self.d) for j in self.numer)


def grid(n: int, d: int):
    """All grid points, ordered lexicographically by numerator vector."""
    if n < 1 or d < 1:
        raise InputError("need n, d >= 1")
    size = math.comb(n + d, d)
    if size > GRID_CAP:
        raise ResourceError(f"grid size {size} exceeds cap {GRID_CAP}")
    pts = []
    for numer in itertools.product(range(d + 1), repeat=n):
        if sum(numer) <= d:
            pts.append(GridPoint(numer, d))
    assert len(pts) == size
    return pts


def _int_poly_mul(p, q, n):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _scaled_q(alpha: GridPoint, n: int, d: int):
    """Integer-coefficient expansion of d^d * q_alpha in the variables x.

    q_alpha(x) = prod_{j=k+1}^{d} (sum_i x_i - j/d)
                 * prod_i prod_{j_i=0}^{d a_i - 1} (x_i - j_i/d),
    where k = d * sum(alpha). Each factor is scaled by d, so the product
    carries the exact integer coefficients of d^d q_alpha.
    """
    k = sum(alpha.numer)
    zero = (0,) * n
    poly = {zero: 1}
    for j in range(k + 1, d + 1):
        factor = {zero: -j}
        for i in range(n):
            e = [0] * n
            e[i] = 1
            factor[tuple(e)] = d
        poly = _int_poly_mul(poly, factor, n)
    for i, ai in enumerate(alpha.numer):
        e = [0] * n
        e[i] = 1
        e = tuple(e)
        for j in range(ai):
            poly = _int_poly_mul(poly, {zero: -j, e: d}, n)
    return poly


def build_q(alpha: GridPoint, n: int, d: int) -> MultiPoly:
    """The unnormalized interpolator q_alpha (degree exactly d)."""
    if len(alpha.numer) != n or alpha.d != d or sum(alpha.numer) > d \
            or any(not 0 <= j <= d for j in alpha.numer):
        raise InputError(f"{alpha} is not a grid point for (n={n}, d={d})")
    scaled = _scaled_q(alpha, n, d)
    scale = float(d ** d)
    return MultiPoly(n, {e: c / scale for e, c in scaled.items()})


def _eval_int_poly_at_numer(poly, numer, d):
    """Exact value of a scaled-integer polynomial at x = numer/d (times d^d).

    Substituting x_i = numer_i/d into the d-scaled factors keeps every
    intermediate an integer: each linear factor evaluates d*x_i - j =
    numer_i - j exactly.
    """
    total = Fraction(0)
    for e, c in poly.items():
        term = Fraction(c)
        for i, ei in enumerate(e):
            if ei:
                term *= Fraction(numer[i], d) ** ei
        total += term
    return total


@dataclass
class InterpBasis:
    n: int
    d: int
    points: list
    basis: list = field(repr=False)       # one p_alpha per point
    kronecker_dev: float = 0.0
    interp_residual: float = 0.0


def build_basis(n: int, d: int, check_random: int = 50, seed: int = 0) -> InterpBasis:
    """Normalized interpolators p_alpha = q_alpha / q_alpha(alpha).

    Verifies the Kronecker property on the whole grid and reproduces
    check_random random degree-<=d polynomials from their grid values.
    """
    pts = grid(n, d)
    exps = _monomials(n, d)
    mono_index = {e: k for k, e in enumerate(exps)}
    basis = []
    B = np.zeros((len(pts), len(exps)))   # coefficient matrix of the p_alpha
    for i, alpha in enumerate(pts):
        scaled = _scaled_q(alpha, n, d)
        denom = _eval_int_poly_at_numer(scaled, alpha.numer, d)
        if denom == 0:
            raise PreconditionError(f"vanishing normalizer at {alpha}")
        terms = {e: float(Fraction(c) / denom) for e, c in scaled.items()}
        basis.append(MultiPoly(n, terms))
        for e, c in terms.items():
            B[i, mono_index[e]] = c

    X = np.array([p.as_floats() for p in pts])
    M = np.ones((len(pts), len(exps)))    # monomial values at grid points
    for k, e in enumerate(exps):
        for j, ej in enumerate(e):
            if ej:
                M[:, k] *= X[:, j] ** ej
    vals = M @ B.T                        # p_alpha evaluated on the grid
    dev = float(np.abs(vals - np.eye(len(pts))).max())

    rng = np.random.RandomState(seed)
    resid = 0.0
    for _ in range(check_random):
        coeffs = rng.uniform(-1.0, 1.0, size=len(exps))
        recovered = B.T @ (M @ coeffs)    # sum_alpha r(alpha) p_alpha
        resid = max(resid, float(np.abs(recovered - coeffs).max()))
    return InterpBasis(n=n, d=d, points=pts, basis=basis,
                       kronecker_dev=dev, interp_residual=resid)


def _monomials(n, d):
    out = []
    for total in range(d + 1):
        for e in itertools.product(range(d + 1), repeat=n):
            if sum(e) == total:
                out.append(e)
    return out


# --------------------------------------------------------------------------
# Coefficient bounds for cube-bounded polynomials
# --------------------------------------------------------------------------

def thm_coeff_max_bound(d: int) -> float:
    return float((2 * d) ** (3 * d))


def thm_coeff_l1_bound(n: int, d: int) -> float:
    return float((2 * (n + d)) ** (3 * d))


def lemma_coeff_bound(n: int, d: int) -> float:
    return float((2 * n * d * (n + d)) ** d)


def per_basis_bound(n: int, d: int) -> float:
    return float(d ** d * (2 * n) ** d)


def _certify_bounded(p: MultiPoly, grid_pts: int = 33) -> tuple:
    """(is_bounded, witness point) for |p| <= 1 on the unit cube.

    Multilinear polynomials are certified exactly through their vertex
    values; otherwise a dense grid scan is used.
    """
    n = p.m
    if p.is_multilinear():
        if n > 16:
            raise ResourceError("vertex certification capped at 16 variables")
        from .boolfn import input_bits
        X = np.array([input_bits(i, n) for i in range(1 << n)], dtype=float)
        vals = p.evaluate_many(X)
        bad = np.abs(vals) > 1.0 + 1e-9
        if bad.any():
            return False, tuple(X[int(np.flatnonzero(bad)[0])])
        return True, None
    pts_per_axis = min(grid_pts, max(5, int(round(200000 ** (1.0 / n)))))
    axes = [np.linspace(0.0, 1.0, pts_per_axis)] * n
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    vals = p.evaluate_many(mesh)
    bad = np.abs(vals) > 1.0 + 1e-7
    if bad.any():
        return False, tuple(mesh[int(np.flatnonzero(bad)[0])])
    return True, None


def check_coeff_bounds(p: MultiPoly, n: int, d: int) -> dict:
    """Compare p's coefficient norms against the cube-bounded limits."""
    if p.m != n:
        raise InputError("variable count mismatch")
    if p.degree > d:
        raise InputError(f"degree {p.degree} exceeds stated d={d}")
    ok, witness = _certify_bounded(p)
    if not ok:
        raise PreconditionError(f"polynomial exceeds 1 in magnitude at {witness}")
    report = {
        "n": n,
        "d": d,
        "coeff_max": p.coeff_max(),
        "bound_thm": thm_coeff_max_bound(d),
        "coeff_l1": p.coeff_l1(),
        "bound_l1": thm_coeff_l1_bound(n, d),
        "bound_lemma": lemma_coeff_bound(n, d),
        "violations": [],
    }
    if report["coeff_max"] > report["bound_thm"]:
        report["violations"].append("coeff_max")
    if report["coeff_l1"] > report["bound_l1"]:
        report["violations"].append("coeff_l1")
    if report["coeff_max"] > report["bound_lemma"]:
        report["violations"].append("coeff_max_lemma")
    return report


def basis_coeff_report(n: int, d: int, seed: int = 0) -> dict:
    """Full report: basis health plus per-p_alpha coefficient bound."""
    ib = build_basis(n, d, seed=seed)
    per_max = max(b.coeff_max() for b in ib.basis)
    report = {
        "n": n,
        "d": d,
        "grid_size": len(ib.points),
        "kronecker_dev": ib.kronecker_dev,
        "interp_residual": ib.interp_residual,
        "per_basis_max": per_max,
        "bound_prop": per_basis_bound(n, d),
        "violations": [],
    }
    if per_max > report["bound_prop"]:
        report["violations"].append("per_basis_max")
    return report


# --------------------------------------------------------------------------
# Certified-bounded test corpus
# --------------------------------------------------------------------------

def bounded_corpus(n: int, d: int, count: int, seed: int = 0):
    """Cube-bounded polynomials: Chebyshev products and random multilinears.

    Products of shifted Chebyshev univariates T_k(2x-1) stay in [-1,1] on
    the cube; multilinear polynomials are bounded by their vertex values;
    convex combinations of both preserve boundedness.
    """
    from .poly import chebyshev_coeffs, multilinear_from_values

    rng = np.random.RandomState(seed)
    out = []
    while len(out) < count:
        kind = rng.randint(3)
        if kind == 0 and n <= 12:
            vals = rng.uniform(-1.0, 1.0, size=1 << n)
            p = multilinear_from_values(vals)
            if p.degree > d:
                continue
        else:
            p = MultiPoly.constant(n, 1.0)
            remaining = d
            used = rng.permutation(n)
            for i in used:
                if remaining <= 0:
                    break
                k = rng.randint(0, remaining + 1)
                if k == 0:
                    continue
                cheb = chebyshev_coeffs(k)
                shifted = _shifted_cheb(n, int(i), cheb)
                p = p * shifted
                remaining -= k
            if kind == 2 and n <= 12:
                vals = rng.uniform(-1.0, 1.0, size=1 << n)
                q = multilinear_from_values(vals)
                lam = rng.uniform(0.0, 1.0)
                if q.degree <= d:
                    p = p * lam + q * (1.0 - lam)
        out.append(p.prune(0.0))
    return out


def _shifted_cheb(n, var, cheb):
    x = MultiPoly(n, {tuple(2 if j == var else 0 for j in range(n)): 0.0})
    lin = MultiPoly(n, {tuple(1 if j == var else 0 for j in range(n)): 2.0,
                        (0,) * n: -1.0})
    out = MultiPoly.constant(n, 0.0)
    for c in reversed(cheb):
        out = out * lin + float(c)
    return out
