"""Integer max-flow (Dinic) and the max-weight-closure reduction built on it."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import NoFiniteCut

INF = math.inf


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network; a capacity of ``INF`` marks an arc that may never be cut."""

    n: int
    arcs: tuple[tuple[int, int, float], ...]
    source: int
    sink: int

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        for u, v, c in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u}, {v}) leaves the node range")
            if c != INF and (int(c) != c or c < 0):
                raise ValueError(f"capacity {c} on ({u}, {v}) must be a nonnegative integer")


@dataclass
class FlowResult:
    value: int
    source_side: frozenset
    arc_flows: list[int] = field(repr=False)


class _Dinic:
    def __init__(self, n):
        self.n = n
        self.head = [[] for _ in range(n)]
        # parallel arrays: to, cap, index of reverse arc
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u, v, c):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def _levels(self, s, t):
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level

    def _blocking(self, s, t, level):
        to, cap, head = self.to, self.cap, self.head
        it = [0] * self.n
        total = 0
        while True:
            # iterative DFS along the level graph
            path: list[int] = []
            u = s
            while u != t:
                advanced = False
                edges = head[u]
                while it[u] < len(edges):
                    e = edges[it[u]]
                    v = to[e]
                    if cap[e] > 0 and level[v] == level[u] + 1:
                        path.append(e)
                        u = v
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    if u == s:
                        return total
                    level[u] = -1
                    e = path.pop()
                    u = to[e ^ 1]
                    it[u] += 1
            push = min(cap[e] for e in path)
            for e in path:
                cap[e] -= push
                cap[e ^ 1] += push
            total += push

    def run(self, s, t):
        flow = 0
        while True:
            level = self._levels(s, t)
            if level[t] < 0:
                return flow
            flow += self._blocking(s, t, level)

    def reaches_sink(self, t):
        """Nodes with a residual path to ``t``."""
        seen = [False] * self.n
        seen[t] = True
        q = deque([t])
        while q:
            v = q.popleft()
            for e in self.head[v]:
                u = self.to[e]
                # arc e^1 goes u -> v
                if not seen[u] and self.cap[e ^ 1] > 0:
                    seen[u] = True
                    q.append(u)
        return seen


def max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum flow plus the maximal source side of a minimum cut."""
    finite = sum(int(c) for _, _, c in net.arcs if c != INF)
    big = finite + 1
    d = _Dinic(net.n)
    ids = [d.add(u, v, big if c == INF else int(c)) for u, v, c in net.arcs]
    value = d.run(net.source, net.sink)
    if value >= big:
        raise NoFiniteCut("every source-sink cut contains an infinite arc")
    to_sink = d.reaches_sink(net.sink)
    side = frozenset(v for v in range(net.n) if not to_sink[v])
    flows = [d.cap[e ^ 1] for e in ids]
    return FlowResult(value, side, flows)


@dataclass(frozen=True)
class ClosureInstance:
    """Node-weighted digraph; arc ``(u, v)`` means choosing ``u`` forces ``v``."""

    weights: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.weights)

    def is_closed(self, s) -> bool:
        return all(v in s for u, v in self.arcs if u in s)


@dataclass(frozen=True)
class ClosureResult:
    closed_set: frozenset
    weight: int


def max_weight_closure(inst: ClosureInstance) -> ClosureResult:
    """Maximum-weight closed set; the maximal one among ties."""
    n = inst.n
    s, t = n, n + 1
    arcs = []
    for v, w in enumerate(inst.weights):
        if w > 0:
            arcs.append((s, v, w))
        elif w < 0:
            arcs.append((v, t, -w))
    for u, v in inst.arcs:
        if u != v:
            arcs.append((u, v, INF))
    res = max_flow(FlowNetwork(n + 2, tuple(arcs), s, t))
    chosen = res.source_side - {s}
    positive = sum(w for w in inst.weights if w > 0)
    return ClosureResult(frozenset(chosen), positive - res.value)
