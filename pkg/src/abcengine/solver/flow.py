"""Integral min-cost flow with lower bounds.

Lower bounds are removed by the usual transformation: each arc carries its
lower bound up front, the induced imbalances become supplies and demands on
an auxiliary super source and sink, and the remaining problem is solved by
successive shortest paths with Bellman-Ford (arc costs may be negative).
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Arc:
    tail: Hashable
    head: Hashable
    capacity: int
    lower: int = 0
    cost: int = 0


@dataclass
class FlowNetwork:
    source: Hashable
    sink: Hashable
    arcs: list[Arc] = field(default_factory=list)

    def __post_init__(self):
        if self.source == self.sink:
            raise ValueError("source and sink must differ")

    def add_arc(self, tail, head, capacity: int, lower: int = 0, cost: int = 0) -> int:
        if not 0 <= lower <= capacity:
            raise ValueError(f"need 0 <= lower <= capacity, got {lower}, {capacity}")
        self.arcs.append(Arc(tail, head, capacity, lower, cost))
        return len(self.arcs) - 1

    @property
    def nodes(self) -> list:
        seen = {self.source: None, self.sink: None}
        for arc in self.arcs:
            seen.setdefault(arc.tail)
            seen.setdefault(arc.head)
        return list(seen)


@dataclass(frozen=True)
class FlowSolution:
    flows: tuple[int, ...]  # aligned with FlowNetwork.arcs
    cost: int


class _Residual:
    def __init__(self, size: int):
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        self.cost.append(-cost)
        return len(self.to) - 2

    def shortest_path(self, s: int, t: int):
        """Queue-based Bellman-Ford; returns the edge list of a cheapest path."""
        size = len(self.adj)
        dist = [None] * size
        via = [-1] * size
        relaxed = [0] * size
        queued = [False] * size
        dist[s] = 0
        queue = deque([s])
        queued[s] = True
        while queue:
            u = queue.popleft()
            queued[u] = False
            for e in self.adj[u]:
                if self.cap[e] > 0:
                    v = self.to[e]
                    nd = dist[u] + self.cost[e]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        via[v] = e
                        if not queued[v]:
                            relaxed[v] += 1
                            if relaxed[v] > size:
                                raise ValueError("network contains a negative-cost cycle")
                            queue.append(v)
                            queued[v] = True
        if dist[t] is None:
            return None
        path = []
        v = t
        while v != s:
            e = via[v]
            path.append(e)
            v = self.to[e ^ 1]
        return path


def min_cost_flow(net: FlowNetwork, required: int) -> FlowSolution | None:
    """Cheapest integral flow of value ``required`` from source to sink.

    Every arc flow lies between its lower bound and capacity. Returns
    ``None`` when no such flow exists. The network must not contain a cycle
    of negative total cost.
    """
    if required < 0:
        raise ValueError("required flow must be non-negative")
    nodes = net.nodes
    index = {v: i for i, v in enumerate(nodes)}
    super_source, super_sink = len(nodes), len(nodes) + 1
    residual = _Residual(len(nodes) + 2)
    balance = [0] * len(nodes)
    balance[index[net.source]] += required
    balance[index[net.sink]] -= required
    base_cost = 0
    arc_edges = []
    for arc in net.arcs:
        u, v = index[arc.tail], index[arc.head]
        arc_edges.append(residual.add(u, v, arc.capacity - arc.lower, arc.cost))
        balance[v] += arc.lower
        balance[u] -= arc.lower
        base_cost += arc.lower * arc.cost
    demand = 0
    for i, b in enumerate(balance):
        if b > 0:
            residual.add(super_source, i, b, 0)
            demand += b
        elif b < 0:
            residual.add(i, super_sink, -b, 0)

    routed = 0
    cost = base_cost
    while routed < demand:
        path = residual.shortest_path(super_source, super_sink)
        if path is None:
            return None
        push = min(residual.cap[e] for e in path)
        for e in path:
            residual.cap[e] -= push
            residual.cap[e ^ 1] += push
            cost += push * residual.cost[e]
        routed += push
    flows = tuple(arc.lower + residual.cap[e ^ 1] for arc, e in zip(net.arcs, arc_edges))
    return FlowSolution(flows, cost)


def flow_conserved(net: FlowNetwork, flows: Sequence[int]) -> bool:
    """Check conservation at every node other than source and sink."""
    balance: dict = {}
    for arc, f in zip(net.arcs, flows):
        balance[arc.tail] = balance.get(arc.tail, 0) - f
        balance[arc.head] = balance.get(arc.head, 0) + f
    return all(b == 0 for v, b in balance.items() if v not in (net.source, net.sink))
