"""Exact density maximisation.

Every solver here reduces to :func:`maximize_excess`, which maximises
``f(S) + bonus(S) - alpha * |S|``.  For graph oracles that is one min-cut on
the edge/vertex project-selection network; otherwise subsets are enumerated.
Densities are then found by Dinkelbach iteration on ``alpha``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .core import (
    SetFunction,
    argmax_ratio,
    density,
    from_mask,
    pick_maximal_array,
    popcounts,
    to_mask,
)
from .errors import CapExceeded, EngineMismatch, GroundExhausted
from .flow import ClosureInstance, max_weight_closure

BRUTE_CAP = 24


class Engine(enum.Enum):
    FLOW = "flow"
    BRUTE = "brute"


def resolve_engine(f: SetFunction, engine=None) -> Engine:
    if engine is None or engine == "auto":
        return Engine.FLOW if f.is_graph else Engine.BRUTE
    engine = Engine(engine)
    if engine is Engine.FLOW and not f.is_graph:
        raise EngineMismatch("the flow engine needs a graph edge-count oracle")
    return engine


@dataclass(frozen=True)
class ExcessQuery:
    alpha: Fraction
    forced: frozenset = frozenset()
    excluded: frozenset = frozenset()
    bonuses: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "forced", frozenset(self.forced))
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        if self.forced & self.excluded:
            raise ValueError("an element cannot be both forced and excluded")
        if any(b < 0 for b in self.bonuses.values()):
            raise ValueError("bonuses must be nonnegative")

    def bonus(self, s) -> int:
        return sum(self.bonuses.get(v, 0) for v in s)


@dataclass(frozen=True)
class ExcessResult:
    set: frozenset
    value: Fraction


@dataclass(frozen=True)
class DensityResult:
    best_set: frozenset
    best_density: Fraction
    engine: Engine
    iterations: int = 0


@dataclass(frozen=True)
class MarginalResult:
    set: frozenset
    marginal_density: Fraction


def _flow_excess(f, q: ExcessQuery, arcs=()) -> ExcessResult:
    p, den = q.alpha.numerator, q.alpha.denominator
    n = f.n
    forced, excluded = q.forced, q.excluded
    free = [v for v in range(n) if v not in forced and v not in excluded]
    index = {v: i for i, v in enumerate(free)}

    # forced vertices sit on the source side: their edges to free vertices become bonuses
    const = den * (int(f(forced)) + q.bonus(forced)) - p * len(forced)
    vweights = [den * (q.bonuses.get(v, 0) + f.weight_into(v, forced)) - p for v in free]
    weights = list(vweights)
    deps = []
    for a, b, w in f.edges:
        if a in index and b in index:
            e = len(weights)
            weights.append(den * w)
            deps.append((e, index[a]))
            deps.append((e, index[b]))
    for a, b in arcs:
        deps.append((index[a], index[b]))
    res = max_weight_closure(ClosureInstance(tuple(weights), tuple(deps)))
    chosen = forced | {free[i] for i in res.closed_set if i < len(free)}
    return ExcessResult(frozenset(chosen), Fraction(res.weight + const, den))


def _deposit(free: list[int], base: int) -> np.ndarray:
    k = len(free)
    local = np.arange(1 << k, dtype=np.int64)
    full = np.full(local.shape, base, dtype=np.int64)
    for j, v in enumerate(free):
        full |= ((local >> j) & 1) << v
    return full


def _mask_values(f, masks):
    """Scaled values ``(vals, den)`` of ``f`` on an array of masks."""
    if f.is_graph:
        return f.mask_values(masks), 1
    vals, den = f.scaled_table()
    return vals[masks], den


def closed_filter(masks: np.ndarray, arcs) -> np.ndarray:
    ok = np.ones(masks.shape, dtype=bool)
    for a, b in arcs:
        ok &= ~(((masks >> a) & 1).astype(bool) & ~((masks >> b) & 1).astype(bool))
    return ok


def _brute_excess(f, q: ExcessQuery, arcs=()) -> ExcessResult:
    n = f.n
    free = [v for v in range(n) if v not in q.forced and v not in q.excluded]
    if len(free) > BRUTE_CAP:
        raise CapExceeded(len(free), BRUTE_CAP)
    masks = _deposit(free, to_mask(q.forced))
    if arcs:
        masks = masks[closed_filter(masks, arcs)]
    vals, den = _mask_values(f, masks)
    bonus = np.zeros(masks.shape, dtype=np.int64)
    for v, b in q.bonuses.items():
        if b:
            bonus += b * ((masks >> v) & 1)
    p, qd = q.alpha.numerator, q.alpha.denominator
    obj = qd * (vals + den * bonus) - p * den * popcounts(masks)
    best = obj.max()
    s = pick_maximal_array(masks[obj == best], n)
    return ExcessResult(from_mask(s), Fraction(int(best), qd * den))


def maximize_excess(f: SetFunction, q: ExcessQuery, engine=None) -> ExcessResult:
    """Maximise ``f(S) + bonus(S) - alpha|S|`` over ``forced <= S``, ``S & excluded = {}``.

    Returns the maximal maximiser (the union of all maximisers when ``f`` is
    supermodular).
    """
    engine = resolve_engine(f, engine)
    if engine is Engine.FLOW:
        return _flow_excess(f, q)
    return _brute_excess(f, q)


def _dinkelbach(f, evaluate, start: frozenset, solve, engine) -> DensityResult:
    """Generic Dinkelbach loop; ``evaluate(S)`` gives the ratio, ``solve(alpha)`` the excess optimum."""
    best = start
    alpha = evaluate(best)
    steps = 0
    while True:
        steps += 1
        r = solve(alpha)
        if r.value <= 0:
            if r.set and evaluate(r.set) == alpha:
                best = r.set
            return DensityResult(best, alpha, engine, steps)
        best = r.set
        new = evaluate(best)
        assert new > alpha
        alpha = new


def _best_singleton(f, candidates, score):
    return max(candidates, key=lambda v: (score(v), -v))


def densest_subset(f: SetFunction, forced: Iterable[int] = (), engine=None) -> DensityResult:
    """Maximum-density set containing ``forced`` (any nonempty set when ``forced`` is empty)."""
    engine = resolve_engine(f, engine)
    forced = frozenset(forced)
    if forced:
        start = forced
    else:
        start = frozenset([_best_singleton(f, range(f.n), lambda v: f([v]))])

    def solve(alpha):
        return maximize_excess(f, ExcessQuery(alpha, forced=forced), engine)

    return _dinkelbach(f, lambda s: density(f, s), start, solve, engine)


def densest_subset_bisection(f: SetFunction, forced: Iterable[int] = (), engine=None) -> DensityResult:
    """Same optimum as :func:`densest_subset`, found by bisection on ``alpha``.

    Two distinct densities differ by at least ``1 / (den * n^2)`` where ``den``
    is the common denominator of the values of ``f``, which bounds the search.
    """
    engine = resolve_engine(f, engine)
    forced = frozenset(forced)
    n = f.n
    if forced:
        best = forced
    else:
        best = frozenset([_best_singleton(f, range(n), lambda v: f([v]))])
    vals, den = f.scaled_table() if not f.is_graph else (None, 1)
    top = f(range(n)) if f.is_graph else Fraction(int(vals.max()), den)
    lo = density(f, best)
    hi = max(top, lo) + 1
    gap = Fraction(1, den * n * n)
    steps = 0

    def solve(alpha):
        return maximize_excess(f, ExcessQuery(alpha, forced=forced), engine)

    while hi - lo >= gap:
        steps += 1
        mid = (lo + hi) / 2
        r = solve(mid)
        if r.value > 0:
            best = r.set
            lo = density(f, best)
        else:
            hi = mid
    r = solve(lo)
    steps += 1
    if r.value > 0:
        lo = density(f, r.set)
        r = solve(lo)
        steps += 1
    if r.set:
        best = r.set
    return DensityResult(best, density(f, best), engine, steps)


def best_marginal(f: SetFunction, d: Iterable[int], engine=None) -> MarginalResult:
    """Nonempty ``X`` outside ``d`` maximising ``(f(d + X) - f(d)) / |X|``; maximal among ties."""
    engine = resolve_engine(f, engine)
    d = frozenset(d)
    rest = [v for v in range(f.n) if v not in d]
    if not rest:
        raise GroundExhausted("no elements left outside the current set")
    base = f(d)
    if engine is Engine.FLOW:
        bonuses = {v: f.weight_into(v, d) for v in rest}

        def marginal(x):
            return (f(d | x) - base) / len(x)

        def solve(alpha):
            return maximize_excess(f, ExcessQuery(alpha, excluded=d, bonuses=bonuses), engine)

        start = frozenset([_best_singleton(f, rest, lambda v: bonuses[v])])
        res = _dinkelbach(f, marginal, start, solve, engine)
        return MarginalResult(res.best_set, res.best_density)

    if len(rest) > BRUTE_CAP:
        raise CapExceeded(len(rest), BRUTE_CAP)
    dmask = to_mask(d)
    masks = _deposit(rest, dmask)[1:]
    vals, den = _mask_values(f, masks)
    base_scaled, _ = _mask_values(f, np.array([dmask], dtype=np.int64))
    gains = vals - base_scaled[0]
    sizes = popcounts(masks) - len(d)
    i, ties = argmax_ratio(gains, sizes)
    x = pick_maximal_array(masks[ties] & ~dmask, f.n)
    return MarginalResult(from_mask(x), Fraction(int(gains[i]), den * int(sizes[i])))
