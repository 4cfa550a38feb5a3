"""Bounded approximate degree, exactly, via linear programming.

The primal LP for best_error(f, d) minimizes eps over polynomials p of
degree <= d in the multilinear monomial basis subject to

    |p(x) - f(x)| <= eps   on Dom(f)          (approximation rows)
    0 <= p(x) <= 1         on all of {0,1}^m  (boundedness rows)

with redundant rows dropped (a 0-point of Dom needs only p <= eps and
p >= 0 once eps is capped below 1, and symmetrically for 1-points; the
cap eps <= 0.6 never binds because p == 1/2 achieves eps = 1/2).

Truth-table LPs have few columns and very many rows, so large instances
are solved through the explicit LP dual, whose simplex multipliers give
back the witness polynomial while its variables carry the dual
certificate weights.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .boolfn import STAR, PartialFn, SymmetricSpec, weights_table
from .numerics import LpProblem, SolverFailure, solve_lp
from .poly import MultiPoly

EPS_DEFAULT = 1.0 / 3.0
_EPS_CAP = 0.6        # provably slack: p == 1/2 gives eps = 1/2
_LP_SLACK = 1e-9
MAX_GENERAL_ARITY = 14


class LogicError(RuntimeError):
    pass


class InputError(ValueError):
    pass


def monomial_masks(m: int, d: int):
    """Bitmasks of all multilinear monomials of degree <= d, by degree then value."""
    masks = []
    for deg in range(d + 1):
        masks.extend(sum(1 << j for j in combo)
                     for combo in itertools.combinations(range(m), deg))
    return np.array(masks, dtype=np.int64)


def design_matrix(m: int, masks: np.ndarray) -> np.ndarray:
    """V[x, M] = product of x_j over j in M (bit j of x's index = var j)."""
    idx = np.arange(1 << m, dtype=np.int64)
    V = np.empty((1 << m, masks.size))
    for k, mask in enumerate(masks):
        V[:, k] = (idx & mask) == mask
    return V


def _var_bit_index(m):
    # input index bit for variable j is (m-1-j); monomial masks use bit j = var j
    idx = np.arange(1 << m, dtype=np.int64)
    out = np.zeros(1 << m, dtype=np.int64)
    for j in range(m):
        out |= ((idx >> (m - 1 - j)) & 1) << j
    return out


@dataclass
class _LpStructure:
    """Primal rows of the best_error LP plus bookkeeping for duals."""

    A: np.ndarray
    b: np.ndarray
    kinds: list          # per row: ("apx+"|"apx-"|"ub"|"lb"|"cap"|"nneg", point)
    n_coeff: int


def _build_structure(f: PartialFn, masks: np.ndarray, bounded: bool) -> _LpStructure:
    m = f.arity
    V_in = design_matrix(m, masks)
    # reindex rows so row i corresponds to truth-table index i
    V = V_in[_var_bit_index(m)]
    n_c = masks.size
    rows, rhs, kinds = [], [], []

    def add(vec_sign, point, eps_coeff, b_val, kind):
        r = np.zeros(n_c + 1)
        r[:n_c] = vec_sign * V[point]
        r[n_c] = eps_coeff
        rows.append(r)
        rhs.append(b_val)
        kinds.append((kind, point))

    table = f.table
    for x in range(1 << m):
        v = int(table[x])
        if v == 0:
            add(+1.0, x, -1.0, 0.0, "apx+")           # p <= eps
            if bounded:
                add(-1.0, x, 0.0, 0.0, "lb")          # p >= 0
            else:
                add(-1.0, x, -1.0, 0.0, "apx-")       # p >= -eps
        elif v == 1:
            add(-1.0, x, -1.0, -1.0, "apx-")          # p >= 1 - eps
            if bounded:
                add(+1.0, x, 0.0, 1.0, "ub")          # p <= 1
            else:
                add(+1.0, x, -1.0, 1.0, "apx+")       # p <= 1 + eps
        elif bounded:
            add(+1.0, x, 0.0, 1.0, "ub")
            add(-1.0, x, 0.0, 0.0, "lb")
    r = np.zeros(n_c + 1)
    r[n_c] = 1.0
    rows.append(r)
    rhs.append(_EPS_CAP)
    kinds.append(("cap", -1))
    r = np.zeros(n_c + 1)
    r[n_c] = -1.0
    rows.append(r)
    rhs.append(0.0)
    kinds.append(("nneg", -1))
    return _LpStructure(A=np.array(rows), b=np.array(rhs), kinds=kinds, n_coeff=n_c)


@dataclass
class BestErrorResult:
    eps: float
    witness: MultiPoly
    coeffs: np.ndarray
    masks: np.ndarray
    structure: _LpStructure = field(repr=False)
    row_duals: np.ndarray = field(repr=False)   # KKT multipliers, >= 0
    max_violation: float = 0.0
    iterations: int = 0


def _coeffs_to_poly(m, masks, coeffs):
    p = MultiPoly(m)
    for mask, c in zip(masks, coeffs):
        if c != 0.0:
            e = tuple((int(mask) >> j) & 1 for j in range(m))
            p._add_term(e, float(c))
    return p


def best_error(f: PartialFn, d: int, bounded: bool = True,
               orientation: str = "auto") -> BestErrorResult:
    """Least achievable max error over degree-<=d polynomials (LP-exact)."""
    m = f.arity
    if not 0 <= d <= m:
        raise InputError(f"degree {d} outside 0..{m}")
    if m > MAX_GENERAL_ARITY:
        raise InputError(f"general LP capped at arity {MAX_GENERAL_ARITY}")
    masks = monomial_masks(m, d)
    st = _build_structure(f, masks, bounded)
    n_rows, n_vars = st.A.shape
    if orientation == "auto":
        orientation = "dual" if n_rows > 2 * n_vars + 64 else "primal"
    c_p = np.zeros(n_vars)
    c_p[-1] = 1.0

    if orientation == "primal":
        sol = solve_lp(LpProblem(c=c_p, A=st.A, relations=["<="] * n_rows, b=st.b))
        if sol.status != "optimal":
            raise SolverFailure(f"best_error primal LP ended {sol.status}")
        x = sol.x
        lam = -sol.duals       # KKT multipliers for <= rows of a min problem
    else:
        dual = LpProblem(c=st.b, A=st.A.T, relations=["="] * n_vars,
                         b=-c_p, lower=np.zeros(n_rows))
        sol = solve_lp(dual)
        if sol.status != "optimal":
            raise SolverFailure(f"best_error dual LP ended {sol.status}")
        x = sol.duals          # multipliers of the dual are the primal point
        lam = sol.x
    eps = float(x[-1])
    resid = st.A @ x - st.b
    max_violation = float(resid.max())
    if max_violation > 1e-6:
        raise SolverFailure(
            f"recovered primal point violates rows by {max_violation}")
    coeffs = x[:-1]
    lam = np.maximum(lam, 0.0)
    return BestErrorResult(eps=eps, witness=_coeffs_to_poly(m, masks, coeffs),
                           coeffs=coeffs, masks=masks, structure=st,
                           row_duals=lam, max_violation=max_violation,
                           iterations=sol.iterations)


# --------------------------------------------------------------------------
# Symmetric (Hamming-level) formulation
# --------------------------------------------------------------------------

def sym_best_error(spec: SymmetricSpec, d: int, bounded: bool = True):
    """best_error for a symmetric function, one value variable per level.

    A symmetric multilinear polynomial takes value V(k) = sum_j a_j C(k,j)
    at Hamming weight k; the LP runs over a_0..a_d and eps.
    """
    n = spec.n
    d = min(d, n)
    rows, rhs = [], []
    C = np.zeros((n + 1, d + 1))
    for k in range(n + 1):
        for j in range(d + 1):
            C[k, j] = math.comb(k, j)

    def add(sign, k, eps_coeff, b_val):
        r = np.zeros(d + 2)
        r[:d + 1] = sign * C[k]
        r[d + 1] = eps_coeff
        rows.append(r)
        rhs.append(b_val)

    for k, v in enumerate(spec.levels):
        if v == 0:
            add(+1.0, k, -1.0, 0.0)
            if bounded:
                add(-1.0, k, 0.0, 0.0)
            else:
                add(-1.0, k, -1.0, 0.0)
        elif v == 1:
            add(-1.0, k, -1.0, -1.0)
            if bounded:
                add(+1.0, k, 0.0, 1.0)
            else:
                add(+1.0, k, -1.0, 1.0)
        elif bounded:
            add(+1.0, k, 0.0, 1.0)
            add(-1.0, k, 0.0, 0.0)
    r = np.zeros(d + 2)
    r[d + 1] = 1.0
    rows.append(r)
    rhs.append(_EPS_CAP)
    sol = solve_lp(LpProblem(c=np.eye(d + 2)[d + 1], A=np.array(rows),
                             relations=["<="] * len(rows), b=np.array(rhs),
                             lower=[-np.inf] * (d + 1) + [0.0]))
    if sol.status != "optimal":
        raise SolverFailure(f"symmetric LP ended {sol.status}")
    return float(sol.x[d + 1]), sol.x[:d + 1]


def sym_witness_poly(n: int, binom_coeffs) -> MultiPoly:
    from .poly import _subsets_of_size
    p = MultiPoly(n)
    for j, a in enumerate(binom_coeffs):
        if abs(a) > 1e-13:
            for e in _subsets_of_size(n, j):
                p._add_term(e, float(a))
    return p


# --------------------------------------------------------------------------
# Degree search and certificates
# --------------------------------------------------------------------------

@dataclass
class DualWitness:
    """Signed point weights certifying that degree d is not enough."""

    d: int
    phi: np.ndarray              # indexed by truth-table input, l1-normalized
    correlation: float           # sum over Dom of phi * (-1)^(1-f)
    purity_residual: float       # max |<phi, monomial>| over degrees <= d
    certified_bound: float       # implied lower bound on best_error(f, d)

    def check(self, eps, tol=1e-8):
        return (self.purity_residual <= tol
                and self.correlation > eps - tol)


def dual_witness(f: PartialFn, d: int, eps: float = EPS_DEFAULT,
                 _res: BestErrorResult = None) -> DualWitness:
    """Extract the LP dual certificate that no degree-d polynomial works."""
    res = _res if _res is not None else best_error(f, d)
    if res.eps <= eps + _LP_SLACK:
        raise LogicError(
            f"approximation succeeds at degree {d} (eps*={res.eps}); no witness")
    m = f.arity
    st = res.structure
    phi = np.zeros(1 << m)
    for lam, (kind, x) in zip(res.row_duals, st.kinds):
        if kind == "apx+":
            phi[x] -= lam       # f(x) = 0 rows
        elif kind == "apx-":
            phi[x] += lam       # f(x) = 1 rows
        elif kind == "ub":
            phi[x] -= lam
        elif kind == "lb":
            phi[x] += lam
    total = float(np.abs(phi).sum())
    if total <= 0.0:
        raise LogicError("degenerate dual: zero certificate")
    phi /= total

    dom = f.dom_mask
    sgn = np.where(f.table == 1, 1.0, -1.0)
    corr = float((phi * sgn)[dom].sum())
    if corr < 0:
        phi = -phi
        corr = -corr
    V = design_matrix(m, res.masks)[_var_bit_index(m)]
    purity = float(np.abs(phi @ V).max())

    pos = np.maximum(phi, 0.0)
    neg = np.maximum(-phi, 0.0)
    is1 = f.table == 1
    is0 = f.table == 0
    out = f.table == STAR
    mass = float(neg[is0].sum() + pos[is1].sum())
    dual_val = float(pos[is1].sum() - neg[is1].sum() - neg[out].sum())
    certified = dual_val / mass if mass > 0 else 0.0
    return DualWitness(d=d, phi=phi, correlation=corr,
                       purity_residual=purity, certified_bound=certified)


@dataclass
class ApproxDegreeResult:
    label: str
    eps: float
    degree: int
    witness: MultiPoly
    achieved_error: float
    dual: DualWitness = None
    errors_by_degree: dict = field(default_factory=dict)


def approx_degree(f: PartialFn, eps: float = EPS_DEFAULT, bounded: bool = True,
                  include_dual: bool = True,
                  materialize_witness: bool = True) -> ApproxDegreeResult:
    """Minimal degree whose best error is <= eps, by ascending scan."""
    if not 0.0 < eps < 0.5:
        raise InputError("need 0 < eps < 1/2")
    m = f.arity
    spec = SymmetricSpec.from_partialfn(f)
    errors = {}
    use_sym = spec is not None and (m > 10 or not include_dual or m > MAX_GENERAL_ARITY)

    last_general = None
    for d in range(m + 1):
        if use_sym:
            e_d, binom = sym_best_error(spec, d, bounded=bounded)
        else:
            last_general = best_error(f, d, bounded=bounded)
            e_d = last_general.eps
        errors[d] = e_d
        if e_d <= eps + _LP_SLACK:
            break
    else:  # pragma: no cover - multilinear interpolation always succeeds
        raise SolverFailure("no degree up to arity achieved the target error")

    if use_sym:
        witness = (sym_witness_poly(m, binom)
                   if materialize_witness and _sym_term_budget(m, d) else None)
    else:
        witness = last_general.witness
    dual = None
    if include_dual and d >= 1 and m <= MAX_GENERAL_ARITY:
        dual = dual_witness(f, d - 1, eps=eps)
    return ApproxDegreeResult(label=f.name or "fn", eps=eps, degree=d,
                              witness=witness, achieved_error=errors[d],
                              dual=dual, errors_by_degree=errors)


def _sym_term_budget(n, d, cap=200000):
    return sum(math.comb(n, j) for j in range(d + 1)) <= cap


# --------------------------------------------------------------------------
# Block-symmetric formulation for g composed with a copies of one f
# --------------------------------------------------------------------------

def _weight_multisets(a, b):
    """Nondecreasing tuples of a block weights, each in 0..b."""
    out = []

    def rec(prefix, lo):
        if len(prefix) == a:
            out.append(tuple(prefix))
            return
        for w in range(lo, b + 1):
            rec(prefix + [w], w)

    rec([], 0)
    return out


def _degree_multisets(a, b, d):
    """Nondecreasing tuples of a per-block degrees, total <= d."""
    out = []

    def rec(prefix, lo, total):
        if len(prefix) == a:
            out.append(tuple(prefix))
            return
        for t in range(lo, b + 1):
            if total + t > d:
                break
            rec(prefix + [t], t, total + t)

    rec([], 0, 0)
    return out


def _orbit_row(weights, b, d, orbit_index):
    """Values of every degree-orbit-sum polynomial at one weight multiset.

    Each block of weight w contributes the generating form
    sum_j C(w, j) z_j; the coefficient of a z-multiset in the product over
    blocks is exactly the orbit-sum value at the point.
    """
    acc = {(0,) * (b + 1): 1.0}  # key: count vector (c_0..c_b)
    for w in weights:
        nxt = {}
        for counts, val in acc.items():
            for j in range(b + 1):
                if sum(k * c for k, c in enumerate(counts)) + j > d:
                    break
                coeff = math.comb(w, j)
                if coeff == 0:
                    continue
                key = list(counts)
                key[j] += 1
                key = tuple(key)
                nxt[key] = nxt.get(key, 0.0) + val * coeff
        acc = nxt
    row = np.zeros(len(orbit_index))
    total_blocks = len(weights)
    for counts, val in acc.items():
        counts = list(counts)
        counts[0] += total_blocks - sum(counts)  # pad degree-0 assignments
        key = tuple(sorted(itertools.chain.from_iterable(
            [j] * c for j, c in enumerate(counts))))
        row[orbit_index[key]] = val
    return row


def block_sym_best_error(outer: SymmetricSpec, inner: SymmetricSpec, d: int,
                         bounded: bool = True):
    """best_error of outer composed with `outer.n` copies of inner.

    Valid because the composed function is invariant under permuting the
    blocks and permuting inside each block, so group-averaging an optimal
    polynomial yields one spanned by monomial-orbit sums.
    """
    a, b = outer.n, inner.n
    d = min(d, a * b)
    orbits = _degree_multisets(a, b, d)
    orbit_index = {t: i for i, t in enumerate(orbits)}
    n_c = len(orbits)
    rows, rhs = [], []
    for weights in _weight_multisets(a, b):
        inner_vals = [inner.levels[w] for w in weights]
        if any(v == STAR for v in inner_vals):
            v = STAR
        else:
            v = outer.levels[sum(inner_vals)]
        vrow = _orbit_row(weights, b, d, orbit_index)

        def add(sign, eps_coeff, b_val):
            r = np.zeros(n_c + 1)
            r[:n_c] = sign * vrow
            r[n_c] = eps_coeff
            rows.append(r)
            rhs.append(b_val)

        if v == 0:
            add(+1.0, -1.0, 0.0)
            add(-1.0, 0.0, 0.0) if bounded else add(-1.0, -1.0, 0.0)
        elif v == 1:
            add(-1.0, -1.0, -1.0)
            add(+1.0, 0.0, 1.0) if bounded else add(+1.0, -1.0, 1.0)
        elif bounded:
            add(+1.0, 0.0, 1.0)
            add(-1.0, 0.0, 0.0)
    r = np.zeros(n_c + 1)
    r[n_c] = 1.0
    rows.append(r)
    rhs.append(_EPS_CAP)
    sol = solve_lp(LpProblem(c=np.eye(n_c + 1)[n_c], A=np.array(rows),
                             relations=["<="] * len(rows), b=np.array(rhs),
                             lower=[-np.inf] * n_c + [0.0]))
    if sol.status != "optimal":
        raise SolverFailure(f"block-symmetric LP ended {sol.status}")
    return float(sol.x[n_c]), sol.x[:n_c], orbits


def composed_approx_degree(outer: PartialFn, inners, eps: float = EPS_DEFAULT,
                           bounded: bool = True) -> int:
    """adeg of outer composed with the inner functions, fast path aware.

    Uses the block-symmetric LP when the outer function and all (equal)
    inner functions are symmetric; otherwise composes the truth table.
    """
    from .boolfn import compose

    inners = list(inners)
    total = sum(f.arity for f in inners)
    homogeneous = all(g == inners[0] for g in inners)
    o_spec = SymmetricSpec.from_partialfn(outer)
    i_spec = SymmetricSpec.from_partialfn(inners[0]) if homogeneous else None
    if o_spec is not None and i_spec is not None:
        for d in range(total + 1):
            e_d, _, _ = block_sym_best_error(o_spec, i_spec, d, bounded=bounded)
            if e_d <= eps + _LP_SLACK:
                return d
        raise SolverFailure("block-symmetric scan did not terminate")
    F = compose(outer, inners)
    return approx_degree(F, eps=eps, bounded=bounded, include_dual=False,
                         materialize_witness=False).degree


# --------------------------------------------------------------------------
# Composition sweeps
# --------------------------------------------------------------------------

SWEEP_COLUMNS = ["instance", "arity", "adeg_outer", "adeg_inner_list",
                 "adeg_composed", "ratio", "theorem_tag"]


def _tag_and_ratio(outer: PartialFn, inners, d_outer, d_inners, d_comp):
    name = (outer.name or "").upper()
    if name.startswith("XOR"):
        return "xor_compose", d_comp / max(1.0, sum(d_inners))
    if name.startswith("OR") or name.startswith("PROR"):
        denom = math.sqrt(sum(v * v for v in d_inners))
        return ("unbalanced" if len(set(map(tuple, [f.table.tolist() for f in inners]))) > 1
                else "or_compose"), d_comp / max(1.0, denom)
    return "sym_compose", d_comp / max(1.0, d_outer * max(d_inners))


def composition_sweep(instances, eps: float = EPS_DEFAULT, jobs: int = 1):
    """adeg of outer-composed-with-inners for each instance description.

    Each instance is (outer PartialFn, [inner PartialFn, ...]); rows come
    back in input order regardless of execution order.
    """
    work = list(enumerate(instances))

    def run(item):
        i, (outer, inners) = item
        total = sum(g.arity for g in inners)
        if total > MAX_GENERAL_ARITY:
            return i, {"instance": _inst_name(outer, inners), "arity": total,
                       "adeg_outer": "", "adeg_inner_list": "",
                       "adeg_composed": "", "ratio": "",
                       "theorem_tag": "skipped_arity_budget"}
        d_comp = composed_approx_degree(outer, inners, eps=eps)
        d_outer = approx_degree(outer, eps=eps, include_dual=False,
                                materialize_witness=False).degree
        d_inners = [approx_degree(g, eps=eps, include_dual=False,
                                  materialize_witness=False).degree
                    for g in inners]
        tag, ratio = _tag_and_ratio(outer, inners, d_outer, d_inners, d_comp)
        return i, {"instance": _inst_name(outer, inners), "arity": total,
                   "adeg_outer": d_outer,
                   "adeg_inner_list": ";".join(str(v) for v in d_inners),
                   "adeg_composed": d_comp, "ratio": ratio, "theorem_tag": tag}

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, work))
    else:
        results = [run(item) for item in work]
    results.sort(key=lambda t: t[0])
    return [row for _, row in results]


def _inst_name(outer, inners):
    return f"{outer.name or 'g'}[{','.join(g.name or 'f' for g in inners)}]"
