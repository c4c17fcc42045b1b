"""Multigraph representation, the instance text format, and graph transforms."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from rca.errors import ParseError

INF = math.inf


@dataclass(frozen=True)
class Graph:
    """Directed or undirected multigraph on vertices ``0..n-1``.

    Edge ids are positions in ``edges``. Undirected edges are stored once
    with endpoints in ``(min, max)`` order. Parallel edges are allowed,
    self-loops are not.
    """

    directed: bool
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        canon = []
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {eid} ({u},{v}) has an endpoint out of range")
            if u == v:
                raise ValueError(f"edge {eid} is a self-loop at {u}")
            canon.append((u, v) if self.directed or u < v else (v, u))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def out(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, ``(edge_id, neighbor)`` pairs usable when leaving it."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((eid, v))
            if not self.directed:
                adj[v].append((eid, u))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def into(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, ``(edge_id, neighbor)`` pairs arriving at it."""
        if not self.directed:
            return self.out
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[v].append((eid, u))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def _between(self) -> dict[tuple[int, int], tuple[int, ...]]:
        table: dict[tuple[int, int], list[int]] = {}
        for eid, (u, v) in enumerate(self.edges):
            table.setdefault((u, v), []).append(eid)
            if not self.directed:
                table.setdefault((v, u), []).append(eid)
        return {key: tuple(ids) for key, ids in table.items()}

    def edges_between(self, u: int, v: int) -> tuple[int, ...]:
        """Ids of the edges that can be traversed from ``u`` to ``v``, ascending."""
        return self._between.get((u, v), ())

    def joins(self, eid: int, u: int, v: int) -> bool:
        a, b = self.edges[eid]
        return (a, b) == (u, v) or (not self.directed and (b, a) == (u, v))

    def degree(self, v: int) -> int:
        """Number of incident edges (out-arcs when directed)."""
        return len(self.out[v])


EdgeSet = tuple[int, ...]


def edge_set(ids: Iterable[int]) -> EdgeSet:
    return tuple(sorted(set(ids)))


@dataclass(frozen=True)
class Instance:
    """One RCA/FRCA problem: route ``p`` objects from ``s`` to ``t``.

    ``alpha`` is the per-route length cap; ``None`` means plain RCA.
    """

    graph: Graph
    s: int
    t: int
    p: int
    k: int
    kind: str = "walk"
    alpha: int | None = None
    names: dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        n = self.graph.n
        if not (0 <= self.s < n and 0 <= self.t < n):
            raise ValueError("terminals must be vertices of the graph")
        if self.s == self.t:
            raise ValueError("terminals s and t must be distinct")
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {', '.join(KINDS)}")
        if self.alpha is not None and self.alpha < 1:
            raise ValueError("alpha must be at least 1")


KINDS = ("walk", "trail", "path")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} is not an integer: {tok!r}", lineno) from None


def _parse(text: str, require_instance: bool) -> tuple[Graph, dict[str, str], dict[str, int]]:
    lines = [(i, _strip(raw)) for i, raw in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty input", 1)
    it = iter(lines)

    lineno, ln = next(it)
    if ln.split() != ["rca", "1"]:
        raise ParseError("expected header 'rca 1'", lineno)
    try:
        lineno, ln = next(it)
    except StopIteration:
        raise ParseError("missing 'directed' / 'undirected' line", lineno) from None
    if ln not in ("directed", "undirected"):
        raise ParseError("expected 'directed' or 'undirected'", lineno)
    directed = ln == "directed"
    try:
        lineno, ln = next(it)
    except StopIteration:
        raise ParseError("missing vertex count line 'n <count>'", lineno) from None
    toks = ln.split()
    if len(toks) != 2 or toks[0] != "n":
        raise ParseError("expected 'n <vertexCount>'", lineno)
    n = _int(toks[1], lineno, "vertex count")
    if n < 0:
        raise ParseError("vertex count must be nonnegative", lineno)

    edges: list[tuple[int, int]] = []
    fields: dict[str, str] = {}
    field_lines: dict[str, int] = {}
    for lineno, ln in it:
        toks = ln.split()
        key = toks[0]
        if key == "e":
            if fields:
                raise ParseError("edge lines must precede s/t/p/k/kind/alpha", lineno)
            if len(toks) != 3:
                raise ParseError("expected 'e <tail> <head>'", lineno)
            u = _int(toks[1], lineno, "tail")
            v = _int(toks[2], lineno, "head")
            for x in (u, v):
                if not 0 <= x < n:
                    raise ParseError(f"vertex id {x} out of range [0, {n})", lineno)
            if u == v:
                raise ParseError("self-loop", lineno)
            edges.append((u, v))
        elif key in ("s", "t", "p", "k", "kind", "alpha"):
            if len(toks) != 2:
                raise ParseError(f"expected '{key} <value>'", lineno)
            if key in fields:
                raise ParseError(f"duplicate '{key}' line", lineno)
            fields[key] = toks[1]
            field_lines[key] = lineno
        else:
            raise ParseError(f"unknown line type {key!r}", lineno)
    if require_instance:
        for key in ("s", "t", "p", "k", "kind", "alpha"):
            if key not in fields:
                raise ParseError(f"missing '{key}' line", lines[-1][0])
    return Graph(directed, n, tuple(edges)), fields, field_lines


def parse_graph(text: str) -> Graph:
    """Read the graph part of an instance file; trailing instance lines are ignored."""
    return _parse(text, require_instance=False)[0]


def parse_instance(text: str) -> Instance:
    g, fields, where = _parse(text, require_instance=True)
    values: dict[str, int] = {}
    for key in ("s", "t", "p", "k"):
        values[key] = _int(fields[key], where[key], key)
    for key in ("s", "t"):
        if not 0 <= values[key] < g.n:
            raise ParseError(f"{key} = {values[key]} out of range [0, {g.n})", where[key])
    if values["s"] == values["t"]:
        raise ParseError("s and t must be distinct", where["t"])
    if values["p"] < 1:
        raise ParseError("p must be at least 1", where["p"])
    if values["k"] < 0:
        raise ParseError("k must be nonnegative", where["k"])
    kind = fields["kind"]
    if kind not in KINDS:
        raise ParseError(f"kind must be path, trail or walk, got {kind!r}", where["kind"])
    alpha: int | None = None
    if fields["alpha"] != "none":
        alpha = _int(fields["alpha"], where["alpha"], "alpha")
        if alpha < 1:
            raise ParseError("alpha must be at least 1 or 'none'", where["alpha"])
    return Instance(g, values["s"], values["t"], values["p"], values["k"], kind, alpha)


def format_graph(g: Graph) -> str:
    out = ["rca 1", "directed" if g.directed else "undirected", f"n {g.n}"]
    out.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def format_instance(inst: Instance) -> str:
    alpha = "none" if inst.alpha is None else str(inst.alpha)
    return format_graph(inst.graph) + (
        f"s {inst.s}\nt {inst.t}\np {inst.p}\nk {inst.k}\nkind {inst.kind}\nalpha {alpha}\n"
    )


def replicate_arcs(g: Graph, k_set: Iterable[int], x: int) -> tuple[Graph, list[int]]:
    """Replace every edge in ``k_set`` by ``x`` parallel copies.

    Returns the new graph and ``origin``, mapping each new edge id to the
    id of the edge it was copied from. Copies get consecutive ids at the
    position of the original.
    """
    if x < 1:
        raise ValueError("x must be positive")
    chosen = set(k_set)
    for eid in chosen:
        if not 0 <= eid < g.m:
            raise ValueError(f"edge id {eid} not in graph")
    edges: list[tuple[int, int]] = []
    origin: list[int] = []
    for eid, uv in enumerate(g.edges):
        for _ in range(x if eid in chosen else 1):
            edges.append(uv)
            origin.append(eid)
    return Graph(g.directed, g.n, tuple(edges)), origin


def _bfs(adj: Sequence[Sequence[tuple[int, int]]], start: int) -> list[float]:
    dist: list[float] = [INF] * len(adj)
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for _, v in adj[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def bfs_distance(g: Graph, source: int) -> list[float]:
    """Hop distances from ``source``; ``math.inf`` where unreachable."""
    return _bfs(g.out, source)


def distance_to(g: Graph, target: int) -> list[float]:
    """Hop distances from every vertex to ``target`` (reverse BFS when directed)."""
    return _bfs(g.into, target)


def sink_eccentricity(g: Graph, t: int) -> int:
    """Largest finite distance from any vertex to ``t``."""
    return int(max(d for d in distance_to(g, t) if d != INF))


def subdivide3(g: Graph) -> Graph:
    """Replace every edge ``{a,b}`` by a path ``a - x - y - b`` of length three.

    Edge ``e`` of ``g`` becomes edges ``3e, 3e+1, 3e+2``; its inner
    vertices are ``n + 2e`` (next to ``a``) and ``n + 2e + 1``.
    """
    if g.directed:
        raise ValueError("subdivide3 requires an undirected graph")
    edges: list[tuple[int, int]] = []
    for eid, (a, b) in enumerate(g.edges):
        x, y = g.n + 2 * eid, g.n + 2 * eid + 1
        edges += [(a, x), (x, y), (y, b)]
    return Graph(False, g.n + 2 * g.m, tuple(edges))


def is_dag(g: Graph) -> bool:
    if not g.directed:
        raise ValueError("is_dag requires a directed graph")
    indeg = [0] * g.n
    for _, v in g.edges:
        indeg[v] += 1
    stack = [v for v in range(g.n) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for _, v in g.out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen == g.n


def bidirect(g: Graph) -> tuple[Graph, list[int]]:
    """Directed version of an undirected graph: two antiparallel arcs per edge.

    Returns the graph and the origin map from arc id to edge id.
    """
    if g.directed:
        return g, list(range(g.m))
    arcs: list[tuple[int, int]] = []
    origin: list[int] = []
    for eid, (u, v) in enumerate(g.edges):
        arcs += [(u, v), (v, u)]
        origin += [eid, eid]
    return Graph(True, g.n, tuple(arcs)), origin
