"""Matroid oracles, rank, co-matroid feasibility and the extension problem."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import GroundSet, all_masks, from_mask, popcounts, to_mask
from .errors import CapExceeded, FormatError, InvalidMatroid

AXIOM_CHECK_CAP = 12


class Matroid:
    ground: GroundSet

    @property
    def n(self) -> int:
        return self.ground.n

    def is_independent(self, s: Iterable[int]) -> bool:
        raise NotImplementedError

    def independence_table(self, masks: np.ndarray) -> np.ndarray:
        """Vectorised independence test over an array of bitmasks."""
        return np.array([self.is_independent(from_mask(int(m))) for m in masks], dtype=bool)


@dataclass(frozen=True)
class CardinalityMatroid(Matroid):
    ground: GroundSet
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise InvalidMatroid("cardinality bound must be nonnegative")

    def is_independent(self, s) -> bool:
        return len(frozenset(s)) <= self.r

    def independence_table(self, masks):
        return popcounts(masks) <= self.r


@dataclass(frozen=True)
class PartitionMatroid(Matroid):
    ground: GroundSet
    blocks: tuple[frozenset, ...]
    limits: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(frozenset(int(v) for v in b) for b in self.blocks)
        limits = tuple(int(r) for r in self.limits)
        if len(blocks) != len(limits):
            raise InvalidMatroid("need exactly one limit per block")
        if any(r < 0 for r in limits):
            raise InvalidMatroid("block limits must be nonnegative")
        covered = [v for b in blocks for v in b]
        if sorted(covered) != list(range(self.ground.n)):
            raise InvalidMatroid("blocks must partition 0..n-1")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "limits", limits)
        object.__setattr__(self, "_block_of", tuple(
            next(i for i, b in enumerate(blocks) if v in b) for v in range(self.ground.n)))

    def is_independent(self, s) -> bool:
        counts = [0] * len(self.blocks)
        for v in s:
            counts[self._block_of[v]] += 1
        return all(c <= r for c, r in zip(counts, self.limits))

    def independence_table(self, masks):
        ok = np.ones(masks.shape, dtype=bool)
        for b, r in zip(self.blocks, self.limits):
            ok &= popcounts(masks & to_mask(b)) <= r
        return ok


@dataclass(frozen=True)
class ExplicitMatroid(Matroid):
    """Matroid given by its full family of independent sets; axioms checked on construction."""

    ground: GroundSet
    independent: frozenset

    def __post_init__(self):
        if self.ground.n > AXIOM_CHECK_CAP:
            raise CapExceeded(self.ground.n, AXIOM_CHECK_CAP, "explicit matroid validation")
        fam = frozenset(frozenset(int(v) for v in s) for s in self.independent)
        for s in fam:
            if any(not 0 <= v < self.ground.n for v in s):
                raise InvalidMatroid(f"independent set {sorted(s)} leaves the ground set")
        object.__setattr__(self, "independent", fam)
        table = np.zeros(1 << self.ground.n, dtype=bool)
        for s in fam:
            table[to_mask(s)] = True
        object.__setattr__(self, "_table", table)
        problem = axiom_violation(self)
        if problem is not None:
            raise InvalidMatroid(problem)

    def is_independent(self, s) -> bool:
        return bool(self._table[to_mask(s)])

    def independence_table(self, masks):
        return self._table[masks]


def axiom_violation(m: Matroid, cap: int = AXIOM_CHECK_CAP) -> str | None:
    """Exhaustive check of the matroid axioms; returns a description of the first failure."""
    n = m.n
    if n > cap:
        raise CapExceeded(n, cap, "matroid axiom check")
    masks = all_masks(n)
    indep = m.independence_table(masks)
    if not indep[0]:
        return "empty set is not independent"
    for i in range(n):
        bit = 1 << i
        with_i = masks[(masks & bit) != 0]
        bad = indep[with_i] & ~indep[with_i ^ bit]
        if bad.any():
            s = int(with_i[np.argmax(bad)])
            return f"hereditary property fails: {sorted(from_mask(s))} independent, dropping {i} is not"
    ind_masks = masks[indep]
    sizes = popcounts(ind_masks)
    # ext[k] = elements x outside A_k with A_k + x independent
    ext = np.zeros(ind_masks.shape, dtype=np.int64)
    for i in range(n):
        bit = 1 << i
        grow = ((ind_masks & bit) == 0) & indep[ind_masks | bit]
        ext |= np.where(grow, bit, 0)
    for k in range(len(ind_masks)):
        bigger = sizes > sizes[k]
        bad = bigger & ((ind_masks & ext[k]) == 0)
        if bad.any():
            a, b = int(ind_masks[k]), int(ind_masks[np.argmax(bad)])
            return f"exchange property fails for A={sorted(from_mask(a))}, B={sorted(from_mask(b))}"
    return None


@dataclass(frozen=True)
class RankResult:
    rank: int
    witness: frozenset


def is_independent(m: Matroid, s) -> bool:
    return m.is_independent(frozenset(s))


def rank(m: Matroid, s) -> RankResult:
    """Greedy id-ascending scan; exact for any matroid by the exchange property."""
    acc: set[int] = set()
    for v in sorted(frozenset(s)):
        acc.add(v)
        if not m.is_independent(acc):
            acc.discard(v)
    return RankResult(len(acc), frozenset(acc))


def is_feasible_comatroid(m: Matroid, s) -> bool:
    return m.is_independent(m.ground.complement(s))


def solve_extension(m: Matroid, a) -> frozenset:
    """Minimum-cardinality ``T`` disjoint from ``a`` with ``U - (a | T)`` independent.

    Keeping a maximum independent subset ``Y`` of ``U - a`` and adding the rest
    is optimal: ``U - (a | T)`` is an independent subset of ``U - a``, so it has
    at most ``rank(U - a)`` elements.
    """
    rest = m.ground.complement(a)
    keep = rank(m, rest).witness
    return rest - keep


def matroid_from_spec(spec: dict, ground: GroundSet) -> Matroid:
    kind = spec.get("type")
    if kind == "cardinality":
        return CardinalityMatroid(ground, int(spec["r"]))
    if kind == "partition":
        return PartitionMatroid(ground, tuple(spec["blocks"]), tuple(spec["limits"]))
    if kind == "explicit":
        return ExplicitMatroid(ground, frozenset(frozenset(s) for s in spec["independent"]))
    raise InvalidMatroid(f"unknown matroid type {kind!r}")


def matroid_to_spec(m: Matroid) -> dict:
    if isinstance(m, CardinalityMatroid):
        return {"type": "cardinality", "r": m.r}
    if isinstance(m, PartitionMatroid):
        return {"type": "partition", "blocks": [sorted(b) for b in m.blocks], "limits": list(m.limits)}
    if isinstance(m, ExplicitMatroid):
        return {"type": "explicit", "independent": sorted(sorted(s) for s in m.independent)}
    raise TypeError(type(m))


def read_matroid(path, ground: GroundSet) -> Matroid:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if not isinstance(spec, dict):
        raise FormatError("matroid spec must be a JSON object", path)
    try:
        return matroid_from_spec(spec, ground)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matroid spec: {exc}", path) from None
    except InvalidMatroid as exc:
        raise FormatError(str(exc), path) from None
