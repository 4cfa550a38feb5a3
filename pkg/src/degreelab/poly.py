"""Sparse real multivariate polynomials and the amplification machinery."""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import HAVE_NUMBA, njit

COEFF_EPS = 0.0  # exact zero pruning only; callers may prune() with a tol


class InputError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


class MultiPoly:
    """Polynomial over m named variables as {exponent tuple: coefficient}."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms=None):
        if m < 0:
            raise InputError("variable count must be >= 0")
        self.m = m
        self.terms = {}
        if terms:
            for exps, c in (terms.items() if isinstance(terms, dict) else terms):
                self._add_term(tuple(int(e) for e in exps), float(c))

    def _add_term(self, exps, c):
        if len(exps) != self.m:
            raise InputError(f"exponent tuple length {len(exps)} != m={self.m}")
        if any(e < 0 for e in exps):
            raise InputError("negative exponent")
        new = self.terms.get(exps, 0.0) + c
        if new == 0.0:
            self.terms.pop(exps, None)
        else:
            self.terms[exps] = new

    # ----- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def constant(cls, m, c):
        p = cls(m)
        if c != 0.0:
            p.terms[(0,) * m] = float(c)
        return p

    @classmethod
    def variable(cls, m, i):
        if not 0 <= i < m:
            raise InputError("variable index out of range")
        e = [0] * m
        e[i] = 1
        return cls(m, {tuple(e): 1.0})

    # ----- basic algebra --------------------------------------------------
    def copy(self):
        q = MultiPoly(self.m)
        q.terms = dict(self.terms)
        return q

    def __add__(self, other):
        other = self._coerce(other)
        out = self.copy()
        for e, c in other.terms.items():
            out._add_term(e, c)
        return out

    def __sub__(self, other):
        return self + self._coerce(other) * -1.0

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                return MultiPoly(self.m)
            q = MultiPoly(self.m)
            q.terms = {e: c * other for e, c in self.terms.items()}
            return q
        other = self._coerce(other)
        out = MultiPoly(self.m)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out._add_term(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return out

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative power")
        out = MultiPoly.constant(self.m, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, (int, float)):
            return MultiPoly.constant(self.m, other)
        if not isinstance(other, MultiPoly) or other.m != self.m:
            raise InputError("operand variable spaces differ")
        return other

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.m == other.m
                and self.terms == other.terms)

    def __repr__(self):
        return f"MultiPoly(m={self.m}, terms={len(self.terms)}, deg={self.degree})"

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_multilinear(self):
        return all(all(x <= 1 for x in e) for e in self.terms)

    def prune(self, tol=1e-13):
        q = MultiPoly(self.m)
        q.terms = {e: c for e, c in self.terms.items() if abs(c) > tol}
        return q

    # ----- evaluation -----------------------------------------------------
    def evaluate(self, x):
        """Scalar evaluation, Horner-style over one variable at a time."""
        x = [float(v) for v in x]
        if len(x) != self.m:
            raise InputError(f"point has {len(x)} coords, need {self.m}")
        return _horner_eval(self.terms, x, 0)

    def evaluate_many(self, X):
        """Vectorized evaluation at the rows of X (N, m)."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.m:
            raise InputError("X must be (N, m)")
        if not self.terms:
            return np.zeros(X.shape[0])
        E = np.array(list(self.terms.keys()), dtype=np.int64)
        c = np.array([self.terms[tuple(e)] for e in E])
        vals = np.ones((X.shape[0], E.shape[0]))
        for j in range(self.m):
            col = E[:, j]
            nz = col > 0
            if nz.any():
                vals[:, nz] *= X[:, j:j + 1] ** col[nz]
        return vals @ c

    # ----- structural ops -------------------------------------------------
    def multilinearize(self):
        """Clamp every exponent to 1; unchanged on {0,1}^m."""
        out = MultiPoly(self.m)
        for e, c in self.terms.items():
            out._add_term(tuple(min(x, 1) for x in e), c)
        return out

    def substitute(self, subs):
        """Plug one polynomial (over a shared variable space) per variable."""
        subs = list(subs)
        if len(subs) != self.m:
            raise InputError(f"need {self.m} substitution polynomials")
        if not subs:
            raise InputError("empty substitution")
        m_new = subs[0].m
        if any(s.m != m_new for s in subs):
            raise InputError("substitutions must share one variable space")
        powers = [{} for _ in range(self.m)]

        def power(i, e):
            if e not in powers[i]:
                powers[i][e] = subs[i] ** e
            return powers[i][e]

        out = MultiPoly(m_new)
        for e, c in self.terms.items():
            term = MultiPoly.constant(m_new, c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * power(i, ei)
            out = out + term
        return out

    def to_pm_basis(self):
        """Change convention: q(z) = 2 p((z+1)/2) - 1, so {0,1} maps to {-1,1}."""
        half_shift = [MultiPoly(self.m, {_unit(self.m, i): 0.5,
                                         (0,) * self.m: 0.5})
                      for i in range(self.m)]
        return (self.substitute(half_shift) * 2.0 - 1.0).prune(0.0)

    def from_pm_basis(self):
        """Inverse of to_pm_basis: p(x) = (q(2x-1) + 1)/2."""
        two_shift = [MultiPoly(self.m, {_unit(self.m, i): 2.0,
                                        (0,) * self.m: -1.0})
                     for i in range(self.m)]
        return (self.substitute(two_shift) + 1.0) * 0.5

    # ----- norms and serialization -----------------------------------------
    def coeff_l1(self):
        return float(sum(abs(c) for c in self.terms.values()))

    def coeff_max(self):
        return float(max((abs(c) for c in self.terms.values()), default=0.0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def to_json(self):
        return json.dumps({"m": self.m,
                           "terms": [{"exps": list(e), "coeff": c}
                                     for e, c in self.sorted_terms()]})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(int(data["m"]),
                   {tuple(t["exps"]): float(t["coeff"]) for t in data["terms"]})


def _unit(m, i):
    e = [0] * m
    e[i] = 1
    return tuple(e)


def _horner_eval(terms, x, var):
    """Sparse Horner: recurse one variable at a time, descending powers."""
    if not terms:
        return 0.0
    if var == len(x):
        return terms.get((), 0.0)
    groups = {}
    for e, c in terms.items():
        groups.setdefault(e[0], {})[e[1:]] = c
    xv = x[var]
    acc = 0.0
    prev = None
    for e0 in sorted(groups, reverse=True):
        inner = _horner_eval(groups[e0], x, var + 1)
        acc = inner if prev is None else acc * xv ** (prev - e0) + inner
        prev = e0
    if prev:
        acc *= xv ** prev
    return acc


def multilinear_from_values(values) -> MultiPoly:
    """Unique multilinear polynomial matching the given cube values.

    values is indexed like a truth table (leftmost variable most
    significant); coefficients come from the Moebius transform.
    """
    v = np.array(values, dtype=float)
    m = v.size.bit_length() - 1
    if 1 << m != v.size:
        raise InputError("value vector length must be a power of two")
    c = v.copy()
    for j in range(m):  # bit (m-1-j) of the index is variable j
        bit = 1 << (m - 1 - j)
        idx = np.arange(1 << m)
        has = (idx & bit) > 0
        c[has] = c[has] - c[idx[has] ^ bit]
    out = MultiPoly(m)
    for mask in range(1 << m):
        if c[mask] != 0.0:
            e = tuple((mask >> (m - 1 - j)) & 1 for j in range(m))
            out._add_term(e, float(c[mask]))
    return out


# --------------------------------------------------------------------------
# Univariate polynomials and the majority-vote amplifier
# --------------------------------------------------------------------------

@dataclass
class UniPoly:
    """Univariate polynomial; optional Bernstein form for stable evaluation."""

    coeffs: list  # monomial coefficients, ascending degree
    bernstein: list = field(default=None, repr=False)

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        self.coeffs = c

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        if self.bernstein is not None:
            return _de_casteljau(self.bernstein, x)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def as_multipoly_in(self, q: MultiPoly) -> MultiPoly:
        """Compose self with a multivariate polynomial argument."""
        out = MultiPoly.constant(q.m, 0.0)
        for c in reversed(self.coeffs):
            out = out * q + c
        return out


def _de_casteljau(beta, x):
    b = [float(v) for v in beta]
    one = 1.0 - x
    for r in range(1, len(b)):
        for j in range(len(b) - r):
            b[j] = one * b[j] + x * b[j + 1]
    return b[0]


def majority_tail(k: int, num: int, den: int):
    """P[Bin(k, num/den) > k/2] as an exact fraction (numerator, den**k)."""
    total = 0
    for j in range(k // 2 + 1, k + 1):
        total += math.comb(k, j) * num ** j * (den - num) ** (k - j)
    return total, den ** k


def amplification_poly(eps: float) -> UniPoly:
    """Majority-of-k vote polynomial A_k with A_k(1/3) <= eps, k odd minimal.

    A_k(x) = sum_{j > k/2} C(k,j) x^j (1-x)^{k-j}; maps [0,1] into [0,1],
    is monotone, and sends [0,1/3] into [0,eps], [2/3,1] into [1-eps,1].
    """
    if not 0.0 < eps < 1.0 / 3.0:
        raise InputError("need 0 < eps < 1/3")
    k = 1
    while True:
        num, den = majority_tail(k, 1, 3)
        if num * 1.0 <= eps * den:
            break
        k += 2
        if k > 2001:
            raise ResourceError("amplifier degree beyond supported range")
    # exact integer monomial coefficients
    coeffs = [0] * (k + 1)
    for j in range(k // 2 + 1, k + 1):
        ckj = math.comb(k, j)
        for s in range(k - j + 1):
            coeffs[j + s] += ckj * math.comb(k - j, s) * (-1) ** s
    bern = [0.0] * (k // 2 + 1) + [1.0] * (k - k // 2)
    return UniPoly(coeffs, bernstein=bern)


# --------------------------------------------------------------------------
# Chebyshev-style OR approximants
# --------------------------------------------------------------------------

def chebyshev_coeffs(r: int):
    """Monomial coefficients of the Chebyshev polynomial T_r (exact ints)."""
    if r == 0:
        return [1]
    prev, cur = [1], [0, 1]
    for _ in range(r - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def _cheb_val(r, x):
    if abs(x) <= 1.0:
        return math.cos(r * math.acos(x))
    s = 1.0 if x > 0 or r % 2 == 0 else -1.0
    return s * math.cosh(r * math.acosh(abs(x)))


def or_approx_profile(n: int, eps: float):
    """(degree, level values u(0..n)) for the OR approximant on weights."""
    if n < 1:
        raise InputError("n must be >= 1")
    if not 0.0 < eps < 0.5:
        raise InputError("need 0 < eps < 1/2")
    if n == 1:
        return 1, [0.0, 1.0]
    x0 = -(n + 1.0) / (n - 1.0)
    r = 1
    while abs(_cheb_val(r, x0)) < 2.0 / eps:
        r += 1
    t0 = _cheb_val(r, x0)
    delta = 1.0 / abs(t0)
    levels = []
    for k in range(n + 1):
        xk = (2.0 * k - (n + 1.0)) / (n - 1.0)
        levels.append((1.0 - _cheb_val(r, xk) / t0) / (1.0 + delta))
    return r, levels


def symmetric_from_levels(n: int, values, max_terms: int = 500000) -> MultiPoly:
    """Multilinear symmetric polynomial matching the given weight profile.

    Uses Newton's forward differences: value(k) = sum_j a_j C(k, j), with
    a_j the j-th forward difference at 0; monomials of each degree j get
    the common coefficient a_j.
    """
    diffs = [float(v) for v in values]
    a = []
    for _ in range(n + 1):
        a.append(diffs[0])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    deg = max((j for j, c in enumerate(a) if abs(c) > 1e-9), default=0)
    total = sum(math.comb(n, j) for j in range(deg + 1) if abs(a[j]) > 1e-12)
    if total > max_terms:
        raise ResourceError(f"materializing {total} terms exceeds {max_terms}")
    out = MultiPoly(n)
    for j in range(deg + 1):
        if abs(a[j]) <= 1e-12 and j > 0:
            continue
        for subset in _subsets_of_size(n, j):
            out._add_term(subset, a[j])
    return out


def _subsets_of_size(n, j):
    import itertools
    for combo in itertools.combinations(range(n), j):
        e = [0] * n
        for i in combo:
            e[i] = 1
        yield tuple(e)


def chebyshev_or(n: int, eps: float) -> MultiPoly:
    """Symmetric OR approximant: within eps of OR_n on the cube, in [0,1]."""
    _, levels = or_approx_profile(n, eps)
    return symmetric_from_levels(n, levels)


# --------------------------------------------------------------------------
# Robustness margins of multilinear polynomials
# --------------------------------------------------------------------------

@dataclass
class RobustnessReport:
    margin: float
    exact: bool
    samples: int
    worst_point: tuple = None

    def __float__(self):
        return self.margin


def _dense_subset_coeffs(p: MultiPoly):
    c = np.zeros(1 << p.m)
    for e, coef in p.terms.items():
        mask = 0
        for j, ej in enumerate(e):
            if ej:
                mask |= 1 << j
        c[mask] += coef
    return c


def _corner_values_numpy(c, lo, hi):
    """Values of the multilinear polynomial at every box corner.

    c is the dense subset-coefficient vector (bit j of the index marks
    variable j). Returns an array of 2^m corner values.
    """
    m = int(np.log2(c.size))
    V = c.reshape((2,) * m) if m else c
    # contract variables one at a time; axis 0 is variable m-1 after reshape
    vals = V
    for j in range(m):
        # vals shape: (2,)*remaining_exponents + (2,)*j corner axes
        a0 = np.take(vals, 0, axis=0)
        a1 = np.take(vals, 1, axis=0)
        vals = np.stack([a0 + lo[m - 1 - j] * a1, a0 + hi[m - 1 - j] * a1],
                        axis=-1)
    return vals.reshape(-1)


@njit(cache=True)
def _corner_minmax_jit(c, lo, hi, m):
    """Min/max of a multilinear polynomial over the corners of a box.

    Layout invariant at step j: work[e * 2^j + b] where e indexes the
    exponent subsets of the still-unprocessed (highest m-j) variables and
    b indexes corner choices made so far.
    """
    size = c.shape[0]
    work = c.copy()
    buf = np.empty(size)
    for j in range(m):
        exp_size = size >> j
        cor_size = 1 << j
        half = exp_size >> 1
        v = m - 1 - j
        for e in range(half):
            base0 = e * cor_size
            base1 = (e + half) * cor_size
            out = e * (cor_size << 1)
            for b in range(cor_size):
                a0 = work[base0 + b]
                a1 = work[base1 + b]
                buf[out + b] = a0 + lo[v] * a1
                buf[out + cor_size + b] = a0 + hi[v] * a1
        work, buf = buf, work
    vmin = work[0]
    vmax = work[0]
    for i in range(size):
        if work[i] < vmin:
            vmin = work[i]
        if work[i] > vmax:
            vmax = work[i]
    return vmin, vmax


def _corner_minmax(p: MultiPoly, center, delta):
    # noisy bits stay inside [0,1]: box [x-d, x+d] clipped to the unit cube
    lo = np.array([max(0.0, c - delta) for c in center], dtype=float)
    hi = np.array([min(1.0, c + delta) for c in center], dtype=float)
    c = _dense_subset_coeffs(p)
    if HAVE_NUMBA and p.m >= 10:
        vmin, vmax = _corner_minmax_jit(c, lo, hi, p.m)
        return float(vmin), float(vmax)
    vals = _corner_values_numpy(c, lo, hi)
    return float(vals.min()), float(vals.max())


def robustness_margin(p: MultiPoly, h, delta: float,
                      samples: int = 100000, seed: int = 0) -> RobustnessReport:
    """Worst |h(x) - p(y)| over x in Dom(h) and noisy y.

    y ranges over [x - delta, x + delta]^m intersected with [0,1]^m (noisy
    bits remain probabilities). Exact via corner enumeration for m <= 16
    (a multilinear function on a box attains its extrema at vertices);
    random corner sampling beyond, with the sample count reported.
    """
    from .boolfn import STAR, input_bits

    if not p.is_multilinear():
        raise InputError("robustness_margin requires a multilinear polynomial")
    if p.m != h.arity:
        raise InputError("polynomial/function arity mismatch")
    if not 0.0 <= delta < 0.5:
        raise InputError("need 0 <= delta < 1/2")
    m = p.m
    dom = np.flatnonzero(h.dom_mask)
    if m <= 16:
        worst = -1.0
        worst_point = None
        for idx in dom:
            x = input_bits(int(idx), m)
            fval = float(h.table[idx])
            vmin, vmax = _corner_minmax(p, x, delta)
            dev = max(abs(fval - vmin), abs(fval - vmax))
            if dev > worst:
                worst = dev
                worst_point = x
        return RobustnessReport(margin=worst, exact=True,
                                samples=0, worst_point=worst_point)
    rng = np.random.RandomState(seed)
    worst = -1.0
    worst_point = None
    for _ in range(samples):
        idx = int(dom[rng.randint(dom.size)])
        x = np.array(input_bits(idx, m), dtype=float)
        signs = rng.randint(0, 2, size=m) * 2 - 1
        y = np.clip(x + delta * signs, 0.0, 1.0)
        val = p.evaluate(y)
        dev = abs(float(h.table[idx]) - val)
        if dev > worst:
            worst = dev
            worst_point = tuple(int(v) for v in x)
    return RobustnessReport(margin=worst, exact=False,
                            samples=samples, worst_point=worst_point)
