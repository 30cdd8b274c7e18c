"""Exhaustive reference solvers: ground truth for every exactness and factor check."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .closure import DependencyDigraph
from .constrained import KnapsackConstraint
from .core import SetFunction, argmax_ratio, from_mask, pick_maximal_array, popcounts, to_mask
from .density import _mask_values, closed_filter
from .errors import CapExceeded, InfeasibleInstance
from .matroid import Matroid

ORACLE_CAP = 20


class Constraint:
    def feasible(self, masks: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Unconstrained(Constraint):
    def feasible(self, masks, n):
        return np.ones(masks.shape, dtype=bool)


@dataclass(frozen=True)
class CoMatroid(Constraint):
    matroid: Matroid

    def feasible(self, masks, n):
        return self.matroid.independence_table(((1 << n) - 1) ^ masks)


@dataclass(frozen=True)
class Knapsack(Constraint):
    constraint: KnapsackConstraint

    def feasible(self, masks, n):
        total = np.zeros(masks.shape, dtype=np.int64)
        for v, w in enumerate(self.constraint.weights):
            total += w * ((masks >> v) & 1)
        return total >= self.constraint.threshold


@dataclass(frozen=True)
class SubsetConstraint(Constraint):
    required: frozenset

    def feasible(self, masks, n):
        a = to_mask(self.required)
        return (masks & a) == a


@dataclass(frozen=True)
class Closure(Constraint):
    digraph: DependencyDigraph

    def feasible(self, masks, n):
        return closed_filter(masks, self.digraph.arcs)


@dataclass(frozen=True)
class Combo(Constraint):
    matroid: Matroid
    required: frozenset

    def feasible(self, masks, n):
        return CoMatroid(self.matroid).feasible(masks, n) & SubsetConstraint(self.required).feasible(masks, n)


@dataclass(frozen=True)
class BruteForceReport:
    opt_set: frozenset
    opt_density: Fraction
    feasible_count: int
    enumerated: int


def brute_optimum(f: SetFunction, constraint: Constraint | None = None, cap: int = ORACLE_CAP) -> BruteForceReport:
    """Densest feasible nonempty set by enumeration; ties go to the largest, then lexicographically first."""
    n = f.n
    if n > cap:
        raise CapExceeded(n, cap, "brute-force oracle")
    constraint = constraint or Unconstrained()
    masks = np.arange(1, 1 << n, dtype=np.int64)
    masks = masks[constraint.feasible(masks, n)]
    if masks.size == 0:
        raise InfeasibleInstance("no nonempty feasible set")
    vals, den = _mask_values(f, masks)
    sizes = popcounts(masks)
    i, ties = argmax_ratio(vals, sizes)
    best = pick_maximal_array(masks[ties], n)
    return BruteForceReport(from_mask(best), Fraction(int(vals[i]), den * int(sizes[i])),
                            int(masks.size), (1 << n) - 1)
