"""Ground sets, subsets, set-function oracles and the Lovász extension.

Subsets are ``frozenset`` of element ids ``0..n-1``; the brute-force paths
switch to integer bitmasks (bit ``i`` set iff element ``i`` is a member).
All values are exact ``fractions.Fraction``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, CoordinateOutOfRange, EmptySubset, FormatError

SUPERMODULAR_CHECK_CAP = 16

Subset = frozenset


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set needs at least one element")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise ValueError("labels must be unique, one per element")
            object.__setattr__(self, "labels", labels)

    @property
    def full(self) -> frozenset:
        return frozenset(range(self.n))

    def subset(self, members: Iterable[int]) -> frozenset:
        s = frozenset(int(v) for v in members)
        for v in s:
            if not 0 <= v < self.n:
                raise ValueError(f"element {v} outside ground set of size {self.n}")
        return s

    def complement(self, s: Iterable[int]) -> frozenset:
        return self.full - frozenset(s)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)


def to_mask(s: Iterable[int]) -> int:
    m = 0
    for v in s:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def all_masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def popcounts(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks).astype(np.int64)


def format_rational(x: Fraction) -> str:
    """Always ``p/q``, so ``1`` prints as ``1/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def pick_maximal(masks: Iterable[int]) -> int:
    """Tie-break among equally good masks: largest, then lexicographically smallest ids."""
    best = None
    best_key = None
    for m in masks:
        m = int(m)
        key = (-m.bit_count(), tuple(sorted(from_mask(m))))
        if best_key is None or key < best_key:
            best, best_key = m, key
    if best is None:
        raise ValueError("no candidates")
    return best


def pick_maximal_array(masks: np.ndarray, n: int) -> int:
    """Vectorised :func:`pick_maximal` for large candidate arrays."""
    masks = np.asarray(masks, dtype=np.int64)
    if masks.size == 0:
        raise ValueError("no candidates")
    sizes = popcounts(masks)
    masks = masks[sizes == sizes.max()]
    # equal size: lexicographically smallest ids == largest bit-reversed mask
    rev = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        rev |= ((masks >> i) & 1) << (n - 1 - i)
    return int(masks[np.argmax(rev)])


def argmax_ratio(nums: np.ndarray, sizes: np.ndarray) -> tuple[int, np.ndarray]:
    """Exact argmax of ``nums / sizes`` (sizes > 0); returns (index, all-ties boolean mask)."""
    approx = nums.astype(float) / sizes
    i = int(np.argmax(approx))
    while True:
        p, q = nums[i], sizes[i]
        lhs = nums * q
        rhs = p * sizes
        better = lhs > rhs
        if not better.any():
            return i, lhs == rhs
        i = int(np.flatnonzero(better)[0])


class OracleKind(enum.Enum):
    GRAPH_EDGE_COUNT = "graph"
    WEIGHTED_GRAPH_EDGE_COUNT = "weighted_graph"
    EXPLICIT_TABLE = "table"


class SetFunction:
    """Base class for set-function oracles ``f: 2^U -> Q>=0`` with ``f(empty) = 0``."""

    ground: GroundSet

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def kind(self) -> OracleKind:
        raise NotImplementedError

    @property
    def is_graph(self) -> bool:
        return self.kind is not OracleKind.EXPLICIT_TABLE

    def __call__(self, s: Iterable[int]) -> Fraction:
        raise NotImplementedError

    def scaled_table(self) -> tuple[np.ndarray, int]:
        """Return ``(vals, den)`` with ``f(mask) == vals[mask] / den`` for every mask."""
        raise NotImplementedError


@dataclass(frozen=True)
class GraphFunction(SetFunction):
    """Induced edge weight ``f(S) = sum of w(u, v) over edges with both ends in S``."""

    ground: GroundSet
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        clean = []
        for e in self.edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            else:
                u, v, w = e
            u, v, w = int(u), int(v), int(w)
            if not (0 <= u < self.ground.n and 0 <= v < self.ground.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the ground set")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if w < 0:
                raise ValueError(f"negative weight on edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            clean.append((u, v, w))
        object.__setattr__(self, "edges", tuple(clean))

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "GraphFunction":
        return cls(GroundSet(n, labels), tuple(edges))

    @property
    def kind(self) -> OracleKind:
        if all(w == 1 for _, _, w in self.edges):
            return OracleKind.GRAPH_EDGE_COUNT
        return OracleKind.WEIGHTED_GRAPH_EDGE_COUNT

    def __call__(self, s) -> Fraction:
        s = s if isinstance(s, (set, frozenset)) else frozenset(s)
        return Fraction(sum(w for u, v, w in self.edges if u in s and v in s))

    def weight_into(self, v: int, s) -> int:
        """Total weight of edges joining ``v`` to members of ``s``."""
        total = 0
        for a, b, w in self.edges:
            if a == v and b in s:
                total += w
            elif b == v and a in s:
                total += w
        return total

    def mask_values(self, masks: np.ndarray) -> np.ndarray:
        vals = np.zeros(masks.shape, dtype=np.int64)
        for u, v, w in self.edges:
            both = (masks >> u) & (masks >> v) & 1
            vals += w * both
        return vals

    def scaled_table(self):
        return self._table, 1

    @cached_property
    def _table(self) -> np.ndarray:
        return self.mask_values(all_masks(self.n))


@dataclass(frozen=True)
class TableFunction(SetFunction):
    """Explicit value table indexed by subset bitmask."""

    ground: GroundSet
    values: tuple[Fraction, ...] = ()

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != 1 << self.ground.n:
            raise ValueError(f"table needs {1 << self.ground.n} values, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("f(empty set) must be 0")
        if any(v < 0 for v in vals):
            raise ValueError("table values must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_values(cls, values: Sequence, labels=None) -> "TableFunction":
        n = len(values).bit_length() - 1
        return cls(GroundSet(n, labels), tuple(values))

    @classmethod
    def from_function(cls, n: int, fn) -> "TableFunction":
        return cls(GroundSet(n), tuple(Fraction(fn(from_mask(m))) for m in range(1 << n)))

    @property
    def kind(self) -> OracleKind:
        return OracleKind.EXPLICIT_TABLE

    def __call__(self, s) -> Fraction:
        return self.values[to_mask(s)]

    def scaled_table(self):
        return self._scaled

    @cached_property
    def _scaled(self):
        den = math.lcm(*(v.denominator for v in self.values))
        nums = [v.numerator * (den // v.denominator) for v in self.values]
        dtype = np.int64 if max(nums) < 2**40 else object
        return np.array(nums, dtype=dtype), den


def density(f: SetFunction, s) -> Fraction:
    s = frozenset(s)
    if not s:
        raise EmptySubset("density of the empty set is undefined")
    return f(s) / len(s)


@dataclass(frozen=True)
class PropertyReport:
    monotone: bool
    supermodular: bool
    witness: tuple[frozenset, frozenset] | None = None
    witness_kind: str | None = None


def check_monotone_supermodular(f: SetFunction, cap: int = SUPERMODULAR_CHECK_CAP) -> PropertyReport:
    """Exhaustive check of monotonicity and supermodularity.

    Supermodularity is tested through the equivalent local form
    ``f(S+i+j) - f(S+i) - f(S+j) + f(S) >= 0``; a failure at ``(S, i, j)`` is the
    pair ``A = S+i, B = S+j`` violating ``f(A) + f(B) <= f(A|B) + f(A&B)``.
    """
    n = f.n
    if n > cap:
        raise CapExceeded(n, cap, "property check")
    vals, _ = f.scaled_table()
    masks = all_masks(n)
    witness = None
    kind = None

    monotone = True
    for i in range(n):
        bit = 1 << i
        base = masks[(masks & bit) == 0]
        bad = vals[base | bit] < vals[base]
        if bad.any():
            monotone = False
            s = int(base[np.argmax(bad)])
            witness, kind = (from_mask(s), from_mask(s | bit)), "monotone"
            break

    supermodular = True
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            base = masks[(masks & (bi | bj)) == 0]
            second = vals[base | bi | bj] - vals[base | bi] - vals[base | bj] + vals[base]
            bad = second < 0
            if bad.any():
                supermodular = False
                s = int(base[np.argmax(bad)])
                if witness is None:
                    witness, kind = (from_mask(s | bi), from_mask(s | bj)), "supermodular"
                break
        if not supermodular:
            break
    return PropertyReport(monotone, supermodular, witness, kind)


@dataclass(frozen=True)
class LovaszCoefficients:
    order: tuple[int, ...]
    lambdas: tuple[Fraction, ...]
    prefixes: tuple[frozenset, ...]

    def reconstruct(self, n: int) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * n
        for lam, s in zip(self.lambdas, self.prefixes):
            for v in s:
                x[v] += lam
        return tuple(x)


def lovasz_coefficients(x: Sequence) -> LovaszCoefficients:
    x = [Fraction(c) for c in x]
    for i, c in enumerate(x):
        if not 0 <= c <= 1:
            raise CoordinateOutOfRange(f"coordinate {i} = {c} outside [0, 1]")
    n = len(x)
    order = tuple(sorted(range(n), key=lambda v: (-x[v], v)))
    xs = [x[v] for v in order]
    lambdas = [1 - xs[0]] if n else [Fraction(1)]
    lambdas += [xs[i - 1] - xs[i] for i in range(1, n)]
    if n:
        lambdas.append(xs[-1])
    prefixes = tuple(frozenset(order[:i]) for i in range(n + 1))
    return LovaszCoefficients(order, tuple(lambdas), prefixes)


def lovasz_extension(f: SetFunction, x: Sequence) -> Fraction:
    if len(x) != f.n:
        raise ValueError(f"point has {len(x)} coordinates, ground set has {f.n}")
    coef = lovasz_coefficients(x)
    total = Fraction(0)
    for lam, s in zip(coef.lambdas, coef.prefixes):
        if lam:
            total += lam * f(s)
    return total


def read_graph(path) -> GraphFunction:
    """Parse ``n m`` followed by ``m`` lines ``u v [w]``."""
    with open(path) as fh:
        lines = [(i + 1, ln.strip()) for i, ln in enumerate(fh)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty graph file", path)
    lineno, head = lines[0]
    try:
        n, m = (int(t) for t in head.split())
    except ValueError:
        raise FormatError("header must be 'n m'", path, lineno) from None
    if n < 1 or m < 0:
        raise FormatError("need n >= 1 and m >= 0", path, lineno)
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}", path, lineno)
    edges = []
    seen = set()
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise FormatError("edge line must be 'u v' or 'u v w'", path, lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise FormatError("non-integer token", path, lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"endpoint out of range 0..{n - 1}", path, lineno)
        if u == v:
            raise FormatError("self-loop", path, lineno)
        if w < 1:
            raise FormatError("edge weight must be a positive integer", path, lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {u} {v}", path, lineno)
        seen.add(key)
        edges.append((u, v, w))
    return GraphFunction(GroundSet(n), tuple(edges))


def read_table(path) -> TableFunction:
    """Parse ``n`` followed by ``2^n`` lines ``mask value``."""
    with open(path) as fh:
        lines = [(i + 1, ln.strip()) for i, ln in enumerate(fh)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty table file", path)
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise FormatError("header must be 'n'", path, lineno) from None
    if not 1 <= n <= 24:
        raise FormatError("table size n must be in 1..24", path, lineno)
    values: list[Fraction | None] = [None] * (1 << n)
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError("row must be 'mask value'", path, lineno)
        try:
            mask = int(parts[0])
            val = parse_rational(parts[1])
        except (ValueError, ZeroDivisionError):
            raise FormatError("bad mask or value", path, lineno) from None
        if not 0 <= mask < 1 << n:
            raise FormatError(f"mask {mask} out of range", path, lineno)
        if values[mask] is not None:
            raise FormatError(f"mask {mask} listed twice", path, lineno)
        if val < 0:
            raise FormatError("values must be nonnegative", path, lineno)
        values[mask] = val
    missing = [m for m, v in enumerate(values) if v is None]
    if missing:
        raise FormatError(f"{len(missing)} masks missing (first: {missing[0]})", path)
    if values[0] != 0:
        raise FormatError("f(empty set) must be 0", path)
    return TableFunction(GroundSet(n), tuple(values))
