"""Greedy approximation for density under co-matroid, knapsack-cover and subset constraints.

All three variants grow a chain ``D_1 <= D_2 <= ...`` by repeatedly adding the
block of best marginal density until the chain hits a feasible set, then
complete every prefix to a feasible set and keep the densest completion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .core import SetFunction, density
from .density import DensityResult, best_marginal, densest_subset, resolve_engine
from .errors import InfeasibleInstance, InvariantViolation
from .matroid import Matroid, is_feasible_comatroid, solve_extension


@dataclass(frozen=True)
class ChainStep:
    block: frozenset  # H_i
    prefix: frozenset  # D_i
    marginal_density: Fraction


@dataclass(frozen=True)
class Completion:
    completed: frozenset  # D'_i
    density: Fraction


@dataclass
class GreedyTrace:
    chain: list[ChainStep] = field(default_factory=list)
    augmented: list[Completion] = field(default_factory=list)
    chosen_index: int = 0


@dataclass(frozen=True)
class GreedyResult:
    result: DensityResult
    trace: GreedyTrace


@dataclass(frozen=True)
class KnapsackConstraint:
    weights: tuple[int, ...]
    threshold: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w < 0 for w in self.weights) or self.threshold < 0:
            raise ValueError("knapsack weights and threshold must be nonnegative")

    def weight(self, s) -> int:
        return sum(self.weights[v] for v in s)

    def is_feasible(self, s) -> bool:
        return self.weight(s) >= self.threshold

    @property
    def satisfiable(self) -> bool:
        return sum(self.weights) >= self.threshold


def check_chain(f: SetFunction, trace: GreedyTrace) -> None:
    """Assert the chain invariants: prefix structure, non-increasing marginals, prefix density bound."""
    prev = frozenset()
    last = None
    for i, step in enumerate(trace.chain):
        if step.block & prev or step.prefix != prev | step.block or not step.block:
            raise InvariantViolation(f"step {i + 1}: prefix is not a disjoint extension")
        md = (f(step.prefix) - f(prev)) / len(step.block)
        if md != step.marginal_density:
            raise InvariantViolation(f"step {i + 1}: recorded marginal {step.marginal_density} != {md}")
        if last is not None and md > last:
            raise InvariantViolation(f"step {i + 1}: marginal density increased ({last} -> {md})")
        if density(f, step.prefix) < md:
            raise InvariantViolation(f"step {i + 1}: prefix density below its marginal")
        last = md
        prev = step.prefix


def _greedy(f, first, feasible: Callable, complete: Callable, engine) -> GreedyResult:
    engine = resolve_engine(f, engine)
    trace = GreedyTrace()
    h1 = first.best_set
    trace.chain.append(ChainStep(h1, h1, first.best_density))
    d = h1
    while not feasible(d):
        m = best_marginal(f, d, engine)
        d = d | m.set
        trace.chain.append(ChainStep(m.set, d, m.marginal_density))
    for step in trace.chain:
        done = step.prefix | complete(step.prefix)
        trace.augmented.append(Completion(done, density(f, done)))
    best = max(range(len(trace.augmented)), key=lambda i: (trace.augmented[i].density, -i))
    trace.chosen_index = best
    check_chain(f, trace)
    out = trace.augmented[best]
    return GreedyResult(DensityResult(out.completed, out.density, engine, len(trace.chain)), trace)


def den_m_greedy(f: SetFunction, m: Matroid, engine=None) -> GreedyResult:
    """2-approximation for the densest set whose complement is independent in ``m``."""
    first = densest_subset(f, (), engine)
    return _greedy(f, first, lambda s: is_feasible_comatroid(m, s), lambda s: solve_extension(m, s), engine)


def knapsack_completion(c: KnapsackConstraint, s) -> frozenset:
    """Heaviest-first (ids ascending among equal weights) until the threshold is met."""
    s = frozenset(s)
    total = c.weight(s)
    added = []
    for v in sorted((v for v in range(len(c.weights)) if v not in s), key=lambda v: (-c.weights[v], v)):
        if total >= c.threshold:
            break
        added.append(v)
        total += c.weights[v]
    return frozenset(added)


def den_knapsack_greedy(f: SetFunction, c: KnapsackConstraint, engine=None) -> GreedyResult:
    """3-approximation for the densest set of total weight at least ``c.threshold``."""
    if len(c.weights) != f.n:
        raise ValueError("need one knapsack weight per element")
    if not c.satisfiable:
        raise InfeasibleInstance(f"total weight {sum(c.weights)} is below threshold {c.threshold}")
    first = densest_subset(f, (), engine)
    return _greedy(f, first, c.is_feasible, lambda s: knapsack_completion(c, s), engine)


def den_combo_greedy(f: SetFunction, m: Matroid, a: Iterable[int], engine=None) -> GreedyResult:
    """2-approximation over sets containing ``a`` whose complement is independent in ``m``."""
    a = frozenset(a)
    first = densest_subset(f, a, engine)
    return _greedy(f, first, lambda s: is_feasible_comatroid(m, s), lambda s: solve_extension(m, s), engine)
