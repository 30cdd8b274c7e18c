"""Densest closed set under dependency constraints (``a in S`` forces ``b in S``)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import GroundSet, SetFunction, argmax_ratio, density, from_mask, pick_maximal_array, popcounts
from .density import (
    BRUTE_CAP,
    DensityResult,
    Engine,
    ExcessQuery,
    _dinkelbach,
    _flow_excess,
    _mask_values,
    closed_filter,
    resolve_engine,
)
from .errors import CapExceeded, FormatError


@dataclass(frozen=True)
class DependencyDigraph:
    ground: GroundSet
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        clean = []
        seen = set()
        for a, b in self.arcs:
            a, b = int(a), int(b)
            if not (0 <= a < self.ground.n and 0 <= b < self.ground.n):
                raise ValueError(f"arc ({a}, {b}) leaves the ground set")
            if a == b or (a, b) in seen:
                continue
            seen.add((a, b))
            clean.append((a, b))
        object.__setattr__(self, "arcs", tuple(clean))

    @classmethod
    def forcing(cls, ground: GroundSet, a: Iterable[int]) -> "DependencyDigraph":
        """Arcs from every element to every member of ``a``: closed nonempty sets contain ``a``."""
        a = sorted(set(a))
        return cls(ground, tuple((u, v) for u in range(ground.n) for v in a))


def is_closed(d: DependencyDigraph, s) -> bool:
    s = frozenset(s)
    return all(b in s for a, b in d.arcs if a in s)


def densest_closure(f: SetFunction, d: DependencyDigraph, engine=None) -> DensityResult:
    """Exact maximum-density nonempty closed set."""
    engine = resolve_engine(f, engine)
    n = f.n
    if engine is Engine.FLOW:
        def solve(alpha):
            return _flow_excess(f, ExcessQuery(alpha), d.arcs)

        return _dinkelbach(f, lambda s: density(f, s), frozenset(range(n)), solve, engine)

    if n > BRUTE_CAP:
        raise CapExceeded(n, BRUTE_CAP)
    masks = np.arange(1, 1 << n, dtype=np.int64)
    masks = masks[closed_filter(masks, d.arcs)]
    vals, den = _mask_values(f, masks)
    sizes = popcounts(masks)
    i, ties = argmax_ratio(vals, sizes)
    best = pick_maximal_array(masks[ties], n)
    return DensityResult(from_mask(best), Fraction(int(vals[i]), den * int(sizes[i])), engine, 1)


@dataclass(frozen=True)
class LPCheck:
    feasible: bool
    objective: Fraction
    violations: tuple[str, ...] = ()


def uniform_lp_certificate(f, d: DependencyDigraph, s) -> LPCheck:
    """Substitute ``x = 1_S / |S|`` (and ``y_e = min`` over endpoints) into the edge/vertex LP.

    Constraints: ``sum x = 1``, ``y_e <= x_i`` for each endpoint, ``x_i <= x_j`` per arc,
    ``x >= 0``.  Objective ``sum w_e y_e``.
    """
    s = frozenset(s)
    share = Fraction(1, len(s))
    x = [share if v in s else Fraction(0) for v in range(f.n)]
    y = [min(x[a], x[b]) for a, b, _ in f.edges]
    problems = []
    if sum(x) != 1:
        problems.append("sum of x is not 1")
    for (a, b, _), ye in zip(f.edges, y):
        if ye > x[a] or ye > x[b]:
            problems.append(f"edge ({a}, {b}) exceeds an endpoint")
    for a, b in d.arcs:
        if x[a] > x[b]:
            problems.append(f"arc ({a}, {b}) violated")
    if any(v < 0 for v in x):
        problems.append("negative x")
    obj = sum((w * ye for (_, _, w), ye in zip(f.edges, y)), Fraction(0))
    return LPCheck(not problems, obj, tuple(problems))


def read_arcs(path, ground: GroundSet) -> DependencyDigraph:
    arcs = []
    with open(path) as fh:
        for lineno, ln in enumerate(fh, 1):
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise FormatError("arc line must be 'a b'", path, lineno)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise FormatError("non-integer token", path, lineno) from None
            if not (0 <= a < ground.n and 0 <= b < ground.n):
                raise FormatError(f"id out of range 0..{ground.n - 1}", path, lineno)
            arcs.append((a, b))
    return DependencyDigraph(ground, tuple(arcs))
