"""Dense two-phase tableau simplex with Bland's-rule anti-cycling."""

from dataclasses import dataclass, field

import numpy as np

from .._accel import HAVE_NUMBA, njit

FEAS_TOL = 1e-9
OPT_TOL = 1e-8
_RATIO_TOL = 1e-11
_BLAND_AFTER = 2000


class LpInputError(ValueError):
    pass


class SolverFailure(RuntimeError):
    def __init__(self, msg, best_x=None, iterations=0):
        super().__init__(msg)
        self.best_x = best_x
        self.iterations = iterations


@dataclass
class LpProblem:
    """min c.x subject to A x (<=,=,>=) b and lower <= x <= upper."""

    c: np.ndarray
    A: np.ndarray
    relations: list
    b: np.ndarray
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A = np.asarray(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        n = self.c.size
        if self.A.ndim != 2 or self.A.shape != (self.b.size, n):
            raise LpInputError(
                f"dimension mismatch: A is {self.A.shape}, c has {n}, b has {self.b.size}")
        if len(self.relations) != self.b.size:
            raise LpInputError("one relation required per constraint row")
        for r in self.relations:
            if r not in ("<=", ">=", "="):
                raise LpInputError(f"unknown relation {r!r}")
        if self.lower is None:
            self.lower = np.full(n, -np.inf)
        if self.upper is None:
            self.upper = np.full(n, np.inf)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.size != n or self.upper.size != n:
            raise LpInputError("bound arrays must match variable count")
        for arr, name in ((self.c, "c"), (self.A, "A"), (self.b, "b")):
            if not np.all(np.isfinite(arr)):
                raise LpInputError(f"non-finite entries in {name}")
        if np.any(self.lower > self.upper):
            raise LpInputError("lower bound exceeds upper bound")


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    x: np.ndarray = None
    objective: float = None
    duals: np.ndarray = None     # per original row, sign per relation
    farkas: np.ndarray = None    # infeasibility certificate (per original row)
    iterations: int = 0
    diagnostics: dict = field(default_factory=dict)


@njit(cache=True)
def _pivot_jit(T, r, q):
    m1, n1 = T.shape
    inv = 1.0 / T[r, q]
    for j in range(n1):
        T[r, j] *= inv
    T[r, q] = 1.0
    for i in range(m1):
        if i == r:
            continue
        f = T[i, q]
        if f != 0.0:
            for j in range(n1):
                T[i, j] -= f * T[r, j]
            T[i, q] = 0.0


def _pivot_numpy(T, r, q):
    T[r, :] /= T[r, q]
    col = T[:, q].copy()
    col[r] = 0.0
    T -= col[:, None] * T[r, None, :]
    T[:, q] = 0.0
    T[r, q] = 1.0


_pivot = _pivot_jit if HAVE_NUMBA else _pivot_numpy


def _lex_leaving(T, ties, q, lex_cols):
    """Lexicographic ratio-test tie-break over the initial basis columns.

    Those columns hold B^-1 B0, an invertible submatrix, so rows are never
    lexicographically equal and cycling is impossible.
    """
    cand = ties
    piv = T[cand + 1, q]
    for col in lex_cols:
        vals = T[cand + 1, col] / piv
        vmin = vals.min()
        keep = vals <= vmin + 1e-12 * (1.0 + abs(vmin))
        cand = cand[keep]
        piv = piv[keep]
        if cand.size == 1:
            break
    return int(cand[0])


def _refactorize(T, basis, A_work, b_work, cost):
    """Rebuild the tableau from the basis to purge accumulated roundoff."""
    B = A_work[:, basis]
    rhs = np.concatenate([b_work[:, None], A_work], axis=1)
    try:
        body = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError:
        raise SolverFailure("singular basis during refactorization")
    T[1:, :] = body
    cb = cost[basis]
    T[0, 0] = -float(cb @ body[:, 0])
    T[0, 1:] = cost - cb @ body[:, 1:]


_REFACTOR_EVERY = 400


def _run_simplex(T, basis, eligible, lex_cols, max_iter,
                 A_work, b_work, cost):
    """Minimize row-0 objective over the tableau in place.

    Dantzig pricing, lexicographic ratio test on ties (with a stability
    screen against tiny pivots), periodic refactorization, and Bland's
    entering rule as a safety net after long degenerate stalls. Claimed
    optima are re-verified on a freshly refactorized tableau.
    Returns (status, iterations) with status 'optimal' or 'unbounded'.
    """
    it = 0
    degenerate_run = 0
    bland = False
    since_refactor = 0
    while True:
        red = T[0, 1:]
        if bland:
            cand = np.flatnonzero(eligible & (red < -OPT_TOL))
            q = int(cand[0]) + 1 if cand.size else 0
        else:
            masked = np.where(eligible, red, np.inf)
            q = int(np.argmin(masked)) + 1
            if masked[q - 1] >= -OPT_TOL:
                q = 0
        if q == 0:
            if since_refactor == 0:
                return "optimal", it
            _refactorize(T, basis, A_work, b_work, cost)
            since_refactor = 0
            continue
        col = T[1:, q]
        colmax = float(np.abs(col).max())
        pos = col > max(_RATIO_TOL, 1e-12 * colmax)
        if not np.any(pos):
            return "unbounded", it
        ratios = np.where(pos, T[1:, 0] / np.where(pos, col, 1.0), np.inf)
        rmin = float(ratios.min())
        ties = np.flatnonzero(ratios <= rmin + _RATIO_TOL * (1.0 + abs(rmin)))
        if ties.size > 1:
            # screen out tiny pivots among the tied rows before lex order
            piv = col[ties]
            stable = ties[piv >= 0.01 * piv.max()]
            r = _lex_leaving(T, stable, q, lex_cols) + 1
        else:
            r = int(ties[0]) + 1
        _pivot(T, r, q)
        basis[r - 1] = q - 1
        it += 1
        since_refactor += 1
        if since_refactor >= _REFACTOR_EVERY:
            _refactorize(T, basis, A_work, b_work, cost)
            since_refactor = 0
        if rmin <= _RATIO_TOL:
            degenerate_run += 1
            if degenerate_run >= _BLAND_AFTER:
                bland = True
        else:
            degenerate_run = 0
            bland = False
        if it >= max_iter:
            raise SolverFailure(
                f"simplex iteration limit {max_iter} reached", iterations=it)


def solve_lp(problem: LpProblem, max_iter: int = None) -> LpSolution:
    """Two-phase dense simplex. Dantzig pricing, Bland fallback on stalls."""
    n_orig = problem.c.size
    m_orig = problem.b.size

    # --- standardize variables to u >= 0 ---------------------------------
    # x_j = shift_j + sign_j * u_k (+ optional split second column)
    cols = []          # (orig var, sign) per standardized column
    shifts = np.zeros(n_orig)
    extra_rows = []    # (col index, rhs) rows for two-sided bounds
    for j in range(n_orig):
        lo, hi = problem.lower[j], problem.upper[j]
        if np.isfinite(lo):
            shifts[j] = lo
            cols.append((j, 1.0))
            if np.isfinite(hi):
                extra_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            shifts[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    n_std = len(cols)

    A_std = np.zeros((m_orig + len(extra_rows), n_std))
    for k, (j, sgn) in enumerate(cols):
        A_std[:m_orig, k] = sgn * problem.A[:, j]
    b_std = np.concatenate([problem.b - problem.A @ shifts,
                            np.array([rhs for _, rhs in extra_rows])])
    rels = list(problem.relations) + ["<="] * len(extra_rows)
    for i, (k, _) in enumerate(extra_rows):
        A_std[m_orig + i, k] = 1.0
    c_std = np.array([sgn * problem.c[j] for j, sgn in cols])
    obj_const = float(problem.c @ shifts)
    m = len(rels)

    # --- slacks, row signs, artificials ----------------------------------
    n_slack = sum(1 for r in rels if r != "=")
    A_full = np.zeros((m, n_std + n_slack))
    A_full[:, :n_std] = A_std
    slack_col = {}
    k = n_std
    for i, r in enumerate(rels):
        if r == "<=":
            A_full[i, k] = 1.0
            slack_col[i] = k
            k += 1
        elif r == ">=":
            A_full[i, k] = -1.0
            slack_col[i] = k
            k += 1
    row_sign = np.ones(m)
    b_work = b_std.copy()
    neg = b_work < 0
    row_sign[neg] = -1.0
    A_full[neg, :] *= -1.0
    b_work[neg] *= -1.0

    basis = np.full(m, -1, dtype=np.int64)
    art_rows = []
    for i in range(m):
        s = slack_col.get(i)
        if s is not None and A_full[i, s] == 1.0:
            basis[i] = s
        else:
            art_rows.append(i)
    n_art = len(art_rows)
    n_total = n_std + n_slack + n_art
    A_work = np.zeros((m, n_total))
    A_work[:, :n_std + n_slack] = A_full
    for a, i in enumerate(art_rows):
        A_work[i, n_std + n_slack + a] = 1.0
        basis[i] = n_std + n_slack + a

    if max_iter is None:
        max_iter = max(20000, 60 * m + 2 * n_total)

    T = np.zeros((m + 1, n_total + 1))
    T[1:, 0] = b_work
    T[1:, 1:] = A_work
    art_mask = np.zeros(n_total, dtype=bool)
    art_mask[n_std + n_slack:] = True
    lex_cols = basis + 1  # tableau columns of the initial (identity) basis
    iterations = 0

    # --- phase 1 ----------------------------------------------------------
    if n_art:
        cost1 = np.zeros(n_total)
        cost1[art_mask] = 1.0
        T[0, 1:] = cost1
        T[0, 0] = 0.0
        for i in range(m):  # price out the initial basis
            if cost1[basis[i]] != 0.0:
                T[0, :] -= cost1[basis[i]] * T[i + 1, :]
        status, it1 = _run_simplex(T, basis, ~art_mask, lex_cols, max_iter,
                                    A_work, b_work, cost1)
        iterations += it1
        phase1_obj = -T[0, 0]
        if phase1_obj > 1e-7 * max(1.0, float(np.abs(b_work).max())):
            y = _basis_duals(A_work, basis, cost1, m)
            farkas = np.zeros(m_orig)
            farkas[:m_orig] = -(row_sign[:m_orig] * y[:m_orig])
            return LpSolution(status="infeasible", farkas=farkas,
                              iterations=iterations,
                              diagnostics={"phase1_objective": phase1_obj})
        # force leftover artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n_std + n_slack:
                row = T[i + 1, 1:n_std + n_slack + 1]
                nz = np.flatnonzero(np.abs(row) > 1e-9)
                if nz.size:
                    _pivot(T, i + 1, int(nz[0]) + 1)
                    basis[i] = int(nz[0])
                    iterations += 1

    # --- phase 2 ----------------------------------------------------------
    cost2 = np.zeros(n_total)
    cost2[:n_std] = c_std
    T[0, 1:] = cost2
    T[0, 0] = 0.0
    for i in range(m):
        if cost2[basis[i]] != 0.0:
            T[0, :] -= cost2[basis[i]] * T[i + 1, :]
    try:
        status, it2 = _run_simplex(T, basis, ~art_mask, lex_cols, max_iter,
                                    A_work, b_work, cost2)
    except SolverFailure as fail:
        fail.best_x = _recover_x(A_work, basis, T, cols, shifts, n_orig, b_work)
        raise
    iterations += it2
    if status == "unbounded":
        return LpSolution(status="unbounded", iterations=iterations)

    # --- recover solution, refine, compute duals --------------------------
    x = _recover_x(A_work, basis, T, cols, shifts, n_orig, b_work)
    y_std = _basis_duals(A_work, basis, cost2, m)
    duals = row_sign[:m_orig] * y_std[:m_orig]
    objective = float(problem.c @ x)
    red = cost2 - A_work.T @ y_std
    diagnostics = {
        "min_reduced_cost": float(red[~art_mask].min()) if n_total else 0.0,
        "dual_objective": float(y_std @ b_work) + obj_const,
    }
    return LpSolution(status="optimal", x=x, objective=objective,
                      duals=duals, iterations=iterations,
                      diagnostics=diagnostics)


def _basis_duals(A_work, basis, cost, m):
    B = A_work[:, basis]
    cb = cost[basis]
    try:
        return np.linalg.solve(B.T, cb)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(B.T, cb, rcond=None)[0]


def _recover_x(A_work, basis, T, cols, shifts, n_orig, b_work):
    m = len(basis)
    B = A_work[:, basis]
    try:
        xb = np.linalg.solve(B, b_work)
        xb += np.linalg.solve(B, b_work - B @ xb)  # one refinement step
    except np.linalg.LinAlgError:
        xb = T[1:, 0].copy()
    u = np.zeros(A_work.shape[1])
    u[basis] = xb
    x = shifts.copy()
    for k, (j, sgn) in enumerate(cols):
        x[j] += sgn * u[k]
    return x[:n_orig]
