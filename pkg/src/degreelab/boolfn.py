"""Total and partial Boolean functions as explicit truth tables.

Tables are indexed lexicographically with the leftmost input bit most
significant; entries are 0, 1, or STAR (outside the promise).
"""

from dataclasses import dataclass, field

import numpy as np

STAR = -1
MAX_ARITY = 20


class InputError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


def input_bits(index: int, m: int) -> tuple:
    return tuple((index >> (m - 1 - j)) & 1 for j in range(m))


def weights_table(m: int) -> np.ndarray:
    """Hamming weight of every m-bit input index."""
    idx = np.arange(1 << m, dtype=np.int64)
    w = np.zeros(1 << m, dtype=np.int64)
    for j in range(m):
        w += (idx >> j) & 1
    return w


@dataclass(frozen=True)
class PartialFn:
    arity: int
    table: np.ndarray  # int8, values in {0, 1, STAR}
    name: str = ""
    blocks: tuple = field(default=(), compare=False)  # set by compose()

    def __post_init__(self):
        if not (1 <= self.arity <= MAX_ARITY):
            raise InputError(f"arity {self.arity} outside 1..{MAX_ARITY}")
        t = np.asarray(self.table, dtype=np.int8)
        if t.shape != (1 << self.arity,):
            raise InputError("table length must be 2^arity")
        if not np.isin(t, (0, 1, STAR)).all():
            raise InputError("table entries must be 0, 1 or *")
        if not (t != STAR).any():
            raise InputError("everywhere-undefined function rejected")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __eq__(self, other):
        return (isinstance(other, PartialFn) and self.arity == other.arity
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.arity, self.table.tobytes()))

    def __repr__(self):
        label = self.name or "fn"
        return f"PartialFn({label}, arity={self.arity})"

    @property
    def dom_mask(self) -> np.ndarray:
        return self.table != STAR

    @property
    def is_total(self) -> bool:
        return bool(self.dom_mask.all())

    def value(self, bits) -> int:
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        return int(self.table[idx])

    def negate(self) -> "PartialFn":
        t = self.table.copy()
        dom = t != STAR
        t[dom] = 1 - t[dom]
        return PartialFn(self.arity, t, name=f"not({self.name})", blocks=self.blocks)

    def negate_input(self, j: int) -> "PartialFn":
        if not (0 <= j < self.arity):
            raise InputError("input index out of range")
        idx = np.arange(1 << self.arity)
        flipped = idx ^ (1 << (self.arity - 1 - j))
        return PartialFn(self.arity, self.table[flipped],
                         name=f"{self.name}[~x{j}]")

    def restrict(self, positions, bits) -> "PartialFn":
        """Fix input positions to given bits; function of the rest."""
        positions = list(positions)
        bits = list(bits)
        if len(positions) != len(bits) or len(set(positions)) != len(positions):
            raise InputError("positions/bits mismatch")
        if any(not 0 <= p < self.arity for p in positions):
            raise InputError("position out of range")
        if len(positions) >= self.arity:
            raise InputError("cannot fix every input")
        rest = [j for j in range(self.arity) if j not in positions]
        m_new = len(rest)
        out = np.empty(1 << m_new, dtype=np.int8)
        fixed = {p: b for p, b in zip(positions, bits)}
        for i in range(1 << m_new):
            sub = input_bits(i, m_new)
            full = 0
            for j in range(self.arity):
                full = (full << 1) | (fixed[j] if j in fixed else sub[rest.index(j)])
            out[i] = self.table[full]
        return PartialFn(m_new, out, name=f"{self.name}|fix")

    def to_text(self) -> str:
        chars = {0: "0", 1: "1", STAR: "*"}
        return f"arity={self.arity}\n" + "".join(chars[int(v)] for v in self.table) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "PartialFn":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if len(lines) != 2 or not lines[0].startswith("arity="):
            raise InputError("expected 'arity=m' then table line")
        m = int(lines[0].split("=", 1)[1])
        return cls.from_table_string(lines[1], name=name, arity=m)

    @classmethod
    def from_table_string(cls, s: str, name: str = "", arity: int = None) -> "PartialFn":
        vals = {"0": 0, "1": 1, "*": STAR}
        try:
            t = np.array([vals[ch] for ch in s.strip()], dtype=np.int8)
        except KeyError as exc:
            raise InputError(f"bad table character {exc}") from exc
        m = t.size.bit_length() - 1
        if 1 << m != t.size:
            raise InputError("table length must be a power of two")
        if arity is not None and arity != m:
            raise InputError("stated arity disagrees with table length")
        return cls(m, t, name=name)


@dataclass(frozen=True)
class SymmetricSpec:
    """Value per Hamming weight 0..n; STAR marks promise gaps."""

    n: int
    levels: tuple

    def __post_init__(self):
        if len(self.levels) != self.n + 1:
            raise InputError("need one level value per weight 0..n")
        if any(v not in (0, 1, STAR) for v in self.levels):
            raise InputError("level values must be 0, 1 or *")
        if all(v == STAR for v in self.levels):
            raise InputError("everywhere-undefined function rejected")

    def to_partialfn(self, name: str = "") -> PartialFn:
        w = weights_table(self.n)
        t = np.array([self.levels[k] for k in w], dtype=np.int8)
        return PartialFn(self.n, t, name=name or f"sym{self.levels}")

    @classmethod
    def from_partialfn(cls, f: PartialFn):
        """Detect and extract a symmetric level profile, or None."""
        w = weights_table(f.arity)
        levels = []
        for k in range(f.arity + 1):
            vals = set(int(v) for v in f.table[w == k])
            if len(vals) != 1:
                return None
            levels.append(vals.pop())
        return cls(f.arity, tuple(levels))


def build_named(name: str, n: int, k: int = None) -> PartialFn:
    """Truth tables for the named function families."""
    if n < 1:
        raise InputError("n must be >= 1")
    name = name.upper()
    w = weights_table(n)
    if name == "OR":
        t = (w > 0).astype(np.int8)
    elif name == "AND":
        t = (w == n).astype(np.int8)
    elif name == "XOR":
        t = (w % 2).astype(np.int8)
    elif name == "NAND":
        t = (w != n).astype(np.int8)
    elif name == "MAJ":
        t = (2 * w > n).astype(np.int8)
    elif name == "PROR":
        t = np.full(1 << n, STAR, dtype=np.int8)
        t[w == 0] = 0
        t[w == 1] = 1
    elif name == "PRTH":
        if k is None or not (0 <= k < n):
            raise InputError(f"PrTH needs 0 <= k < n, got k={k}, n={n}")
        t = np.full(1 << n, STAR, dtype=np.int8)
        t[w == k] = 0
        t[w == k + 1] = 1
    else:
        raise InputError(f"unknown function name {name!r}")
    label = f"{name}_{n}" if k is None else f"{name}({k})_{n}"
    return PartialFn(n, t, name=label)


def compose(g: PartialFn, fs) -> PartialFn:
    """g applied to the outputs of the inner functions on disjoint blocks.

    The result is * wherever any inner input leaves its promise or the
    inner-output tuple leaves g's promise.
    """
    fs = list(fs)
    if len(fs) != g.arity:
        raise InputError(f"outer arity {g.arity} needs {g.arity} inner functions")
    total = sum(f.arity for f in fs)
    if total > MAX_ARITY:
        raise ResourceError(f"composed arity {total} exceeds {MAX_ARITY}")
    idx = np.arange(1 << total, dtype=np.int64)
    outer_idx = np.zeros(1 << total, dtype=np.int64)
    bad = np.zeros(1 << total, dtype=bool)
    offset = 0
    for f in fs:
        shift = total - offset - f.arity
        sub = (idx >> shift) & ((1 << f.arity) - 1)
        v = f.table[sub].astype(np.int64)
        bad |= v == STAR
        outer_idx = (outer_idx << 1) | np.where(v == STAR, 0, v)
        offset += f.arity
    t = g.table[outer_idx].copy()
    t[bad] = STAR
    inner = ",".join(f.name or "f" for f in fs)
    return PartialFn(total, t, name=f"{g.name or 'g'}({inner})",
                     blocks=tuple(f.arity for f in fs))


def restrict_block(F: PartialFn, i: int, w) -> PartialFn:
    """Fix composed block i to the inner input w; function of the rest."""
    if not F.blocks:
        raise InputError("function carries no block structure (not composed)")
    if not (0 <= i < len(F.blocks)):
        raise InputError("block index out of range")
    m_i = F.blocks[i]
    bits = list(w)
    if len(bits) != m_i or any(b not in (0, 1) for b in bits):
        raise InputError(f"block {i} expects {m_i} bits")
    offset = sum(F.blocks[:i])
    positions = list(range(offset, offset + m_i))
    out = F.restrict(positions, bits)
    blocks = F.blocks[:i] + F.blocks[i + 1:]
    object.__setattr__(out, "blocks", blocks)
    return out


def paturi_break(g: SymmetricSpec) -> int:
    """Location of the value flip nearest n/2, folded below n/2, floored at 1.

    For a total symmetric non-constant g this is the parameter k with
    adeg(g) growing like sqrt(n k).
    """
    if any(v == STAR for v in g.levels):
        raise InputError("paturi_break needs a total symmetric function")
    flips = [k for k in range(g.n) if g.levels[k] != g.levels[k + 1]]
    if not flips:
        raise InputError("constant function has no break")
    half = g.n / 2.0
    k = min(flips, key=lambda kk: (abs(kk - half), kk))
    if k > g.n // 2:
        k = g.n - k
    return max(k, 1)
