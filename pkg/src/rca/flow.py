"""Time-expanded networks, unit-capacity max-flow and flow decomposition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from rca.graph import Graph, bfs_distance, bidirect, distance_to
from rca.routes import Route


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cap: int
    origin: int | None  # edge id of the input graph; None for sink-chain arcs
    layer: int  # arc goes from layer - 1 to layer


@dataclass(frozen=True)
class TimeExpandedNetwork:
    """Layered copy of a graph; node ``(v, i)`` has id ``i * n + v``.

    When built from an undirected graph the arcs come from its bidirected
    version and ``origin`` still names the undirected edge.
    """

    graph: Graph
    s: int
    t: int
    tau: int
    p: int
    arcs: tuple[Arc, ...]

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def node_count(self) -> int:
        return self.graph.n * (self.tau + 1)

    def node(self, v: int, layer: int) -> int:
        return layer * self.graph.n + v

    def vertex_of(self, node: int) -> tuple[int, int]:
        layer, v = divmod(node, self.graph.n)
        return v, layer

    @property
    def source(self) -> int:
        return self.node(self.s, 0)

    @property
    def sink(self) -> int:
        return self.node(self.t, self.tau)

    def movement_arcs(self) -> list[Arc]:
        return [a for a in self.arcs if a.origin is not None]

    def chain_arcs(self) -> list[Arc]:
        return [a for a in self.arcs if a.origin is None]


def expand(
    g: Graph,
    s: int,
    t: int,
    tau: int,
    p: int,
    capacity: Mapping[int, int] | None = None,
    trim: bool = False,
) -> TimeExpandedNetwork:
    """Build the ``tau``-time-expanded network with a capacity-``p`` sink chain.

    ``capacity`` overrides the unit capacity of the movement arcs of
    selected edges. With ``trim``, arcs that cannot lie on any layered
    ``(s,0)``-``(t,tau)`` path are left out; node numbering is unchanged.
    """
    if tau < 1:
        raise ValueError("horizon tau must be at least 1")
    if p < 1:
        raise ValueError("p must be at least 1")
    directed, origin = bidirect(g)
    capacity = capacity or {}
    if trim:
        from_s = bfs_distance(directed, s)
        to_t = distance_to(directed, t)
    arcs: list[Arc] = []
    n = g.n
    for i in range(1, tau + 1):
        for aid, (u, v) in enumerate(directed.edges):
            if trim and (from_s[u] > i - 1 or to_t[v] > tau - i):
                continue
            eid = origin[aid]
            arcs.append(Arc((i - 1) * n + u, i * n + v, capacity.get(eid, 1), eid, i))
        if not trim or from_s[t] <= i - 1:
            arcs.append(Arc((i - 1) * n + t, i * n + t, p, None, i))
    return TimeExpandedNetwork(g, s, t, tau, p, tuple(arcs))


@dataclass
class Flow:
    values: list[int]
    value: int


class _Residual:
    """Dinic's algorithm over a flat residual edge list (edge ``j ^ 1`` is the reverse of ``j``)."""

    def __init__(self, node_count: int, arcs: tuple[Arc, ...]) -> None:
        self.adj: list[list[int]] = [[] for _ in range(node_count)]
        self.to: list[int] = []
        self.cap: list[int] = []
        for a in arcs:
            self.adj[a.tail].append(len(self.to))
            self.to.append(a.head)
            self.cap.append(a.cap)
            self.adj[a.head].append(len(self.to))
            self.to.append(a.tail)
            self.cap.append(0)

    def _levels(self, src: int, dst: int) -> list[int] | None:
        level = [-1] * len(self.adj)
        level[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for j in self.adj[u]:
                v = self.to[j]
                if self.cap[j] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[dst] >= 0 else None

    def _blocking(self, src: int, dst: int, level: list[int]) -> int:
        nxt = [0] * len(self.adj)
        total = 0
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = src
            while u != dst:
                adj = self.adj[u]
                advanced = False
                while nxt[u] < len(adj):
                    j = adj[nxt[u]]
                    v = self.to[j]
                    if self.cap[j] > 0 and level[v] == level[u] + 1:
                        path.append(j)
                        u = v
                        advanced = True
                        break
                    nxt[u] += 1
                if not advanced:
                    if not path:
                        return total
                    # dead end: retreat and skip the edge that led here
                    j = path.pop()
                    u = self.to[j ^ 1]
                    nxt[u] += 1
            push = min(self.cap[j] for j in path)
            for j in path:
                self.cap[j] -= push
                self.cap[j ^ 1] += push
            total += push

    def run(self, src: int, dst: int) -> int:
        flow = 0
        if src == dst:
            return 0
        while (level := self._levels(src, dst)) is not None:
            flow += self._blocking(src, dst, level)
        return flow


def max_flow(net: TimeExpandedNetwork) -> Flow:
    """Integral maximum flow from ``(s,0)`` to ``(t,tau)``."""
    res = _Residual(net.node_count, net.arcs)
    value = res.run(net.source, net.sink)
    values = [res.cap[2 * i + 1] for i in range(len(net.arcs))]
    return Flow(values, value)


def decompose_to_walks(net: TimeExpandedNetwork, f: Flow) -> list[Route]:
    """Split a flow into ``f.value`` collision-free ``s``-``t`` walks.

    Each unit is traced along positive-flow arcs, projected to the input
    graph, and cut off the first time it reaches ``t``. Steps are pinned to
    the edge id of the movement arc they use.
    """
    if len(f.values) != len(net.arcs):
        raise ValueError("flow does not match network")
    for val, arc in zip(f.values, net.arcs):
        if not isinstance(val, int) or isinstance(val, bool):
            raise ValueError("flow must be integral")
        if val < 0 or val > arc.cap:
            raise ValueError("flow violates arc capacity")
    remaining = list(f.values)
    out_arcs: dict[int, list[int]] = {}
    for idx, arc in enumerate(net.arcs):
        out_arcs.setdefault(arc.tail, []).append(idx)

    routes: list[Route] = []
    for _ in range(f.value):
        node = net.source
        verts = [net.s]
        pins: list[int | None] = []
        reached = False
        while node != net.sink:
            idx = next((i for i in out_arcs.get(node, ()) if remaining[i] > 0), None)
            if idx is None:
                raise ValueError("flow is not conserved")
            remaining[idx] -= 1
            arc = net.arcs[idx]
            node = arc.head
            if not reached:
                verts.append(net.vertex_of(node)[0])
                pins.append(arc.origin)
                reached = verts[-1] == net.t
        routes.append(Route(tuple(verts), tuple(pins)))
    return routes


def dump_network(net: TimeExpandedNetwork) -> str:
    """Arc list in ``e tail head`` form with a layer comment per arc."""
    lines = [
        f"# time-expanded network: tau={net.tau} p={net.p} source={net.source} sink={net.sink}",
    ]
    if not net.graph.directed:
        lines.append("# undirected input: each edge bidirected before expansion")
    lines += ["rca 1", "directed", f"n {net.node_count}"]
    for a in net.arcs:
        kind = f"edge {a.origin}" if a.origin is not None else "sink-chain"
        lines.append(f"e {a.tail} {a.head} # layer {a.layer - 1}->{a.layer} cap {a.cap} {kind}")
    return "\n".join(lines) + "\n"

