"""Timed routes: classification, shared-edge computation and certificate checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from rca.errors import InvalidRoute
from rca.graph import EdgeSet, Graph, Instance, edge_set

# strength order; a route "is at least" a kind if its rank is >= the kind's rank
RANK = {"invalid": 0, "walk": 1, "trail": 2, "path": 3}


@dataclass(frozen=True)
class Route:
    """A vertex sequence traversed one edge per time step.

    ``copies[i]`` optionally pins the edge id used for step ``i + 1``
    (the step from ``vertices[i]`` to ``vertices[i + 1]``); unpinned steps
    use the lowest-id edge between the two vertices.
    """

    vertices: tuple[int, ...]
    copies: tuple[int | None, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise ValueError("a route needs at least one vertex")
        copies = tuple(self.copies) or (None,) * (len(self.vertices) - 1)
        if len(copies) != len(self.vertices) - 1:
            raise ValueError("one copy pin (or None) per step is required")
        object.__setattr__(self, "copies", copies)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @classmethod
    def from_edges(cls, g: Graph, start: int, eids: Sequence[int]) -> Route:
        """Build a pinned route leaving ``start`` along the given edge ids."""
        verts = [start]
        for eid in eids:
            a, b = g.edges[eid]
            cur = verts[-1]
            if cur == a:
                verts.append(b)
            elif cur == b and not g.directed:
                verts.append(a)
            else:
                raise InvalidRoute(f"edge {eid} does not leave vertex {cur}")
        return cls(tuple(verts), tuple(eids))

    def __str__(self) -> str:
        return format_route(self)


def resolve_edges(g: Graph, r: Route) -> list[int]:
    """Edge id used at each step; raises InvalidRoute if a step is impossible."""
    out = []
    for i, v in enumerate(r.vertices):
        if not 0 <= v < g.n:
            raise InvalidRoute(f"vertex {v} out of range")
        if i == 0:
            continue
        u, pin = r.vertices[i - 1], r.copies[i - 1]
        if pin is None:
            ids = g.edges_between(u, v)
            if not ids:
                raise InvalidRoute(f"no edge from {u} to {v} at step {i}")
            out.append(ids[0])
        else:
            if not (0 <= pin < g.m and g.joins(pin, u, v)):
                raise InvalidRoute(f"edge {pin} does not join {u} to {v} at step {i}")
            out.append(pin)
    return out


def classify(g: Graph, r: Route) -> str:
    """Strongest of ``path``, ``trail``, ``walk`` that ``r`` satisfies, or ``invalid``."""
    try:
        resolve_edges(g, r)
    except InvalidRoute:
        return "invalid"
    if len(set(r.vertices)) == len(r.vertices):
        return "path"
    # a trail needs an injective step -> edge-copy assignment respecting pins
    pinned: Counter[int] = Counter()
    free: Counter[tuple[int, int]] = Counter()
    for u, v, pin in zip(r.vertices, r.vertices[1:], r.copies):
        if pin is not None:
            pinned[pin] += 1
        else:
            free[(u, v) if g.directed else (min(u, v), max(u, v))] += 1
    if any(c > 1 for c in pinned.values()):
        return "walk"
    for (u, v), need in free.items():
        spare = sum(1 for eid in g.edges_between(u, v) if eid not in pinned)
        if need > spare:
            return "walk"
    return "trail"


def at_least(kind_found: str, kind_wanted: str) -> bool:
    return RANK[kind_found] >= RANK[kind_wanted]


def shared_edges(g: Graph, routes: Sequence[Route]) -> EdgeSet:
    """Edges used by two different routes at the same time step."""
    resolved = []
    for idx, r in enumerate(routes):
        try:
            resolved.append(resolve_edges(g, r))
        except InvalidRoute as exc:
            raise InvalidRoute(f"route {idx}: {exc}") from None
    horizon = max((len(e) for e in resolved), default=0)
    shared: set[int] = set()
    for step in range(horizon):
        used = Counter(e[step] for e in resolved if step < len(e))
        shared.update(eid for eid, c in used.items() if c > 1)
    return edge_set(shared)


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str | None = None  # count | endpoint | kind | length | budget
    detail: str = ""
    shared: EdgeSet = ()

    def __bool__(self) -> bool:
        return self.accepted


def verify_solution(inst: Instance, routes: Sequence[Route]) -> Verdict:
    """Check a certificate against every condition of the instance."""
    g = inst.graph
    if len(routes) != inst.p:
        return Verdict(False, "count", f"expected {inst.p} routes, got {len(routes)}")
    for idx, r in enumerate(routes):
        if r.start != inst.s or r.end != inst.t:
            return Verdict(False, "endpoint", f"route {idx} runs {r.start} -> {r.end}")
    for idx, r in enumerate(routes):
        found = classify(g, r)
        if not at_least(found, inst.kind):
            return Verdict(False, "kind", f"route {idx} is {found}, need {inst.kind}")
    if inst.alpha is not None:
        for idx, r in enumerate(routes):
            if r.length > inst.alpha:
                return Verdict(
                    False, "length", f"route {idx} has length {r.length} > {inst.alpha}"
                )
    shared = shared_edges(g, routes)
    if len(shared) > inst.k:
        listing = " ".join(map(str, shared))
        return Verdict(
            False, "budget", f"{len(shared)} shared edges > {inst.k}: {listing}", shared
        )
    return Verdict(True, shared=shared)


@dataclass
class SolveResult:
    decision: bool
    witness: list[Route] | None = None
    shared_edges: EdgeSet | None = None
    min_shared: int | None = None
    solver: str = ""
    horizon: int | None = None

    def to_json(self) -> dict:
        return {
            "decision": "yes" if self.decision else "no",
            "sharedEdges": None if self.shared_edges is None else list(self.shared_edges),
            "routes": None if self.witness is None else [format_route(r) for r in self.witness],
            "solverUsed": self.solver,
            "horizon": self.horizon,
        }


def format_route(r: Route) -> str:
    parts = [str(r.vertices[0])]
    for v, pin in zip(r.vertices[1:], r.copies):
        parts.append(f"{v}@{pin}" if pin is not None else str(v))
    return " ".join(parts)


def parse_route(line: str) -> Route:
    verts: list[int] = []
    pins: list[int | None] = []
    for i, tok in enumerate(line.split()):
        vtok, at, pin = tok.partition("@")
        try:
            verts.append(int(vtok))
            if at and not pin:
                raise ValueError
            if i == 0:
                if at:
                    raise ValueError
            else:
                pins.append(int(pin) if pin else None)
        except ValueError:
            raise ValueError(f"bad route token {tok!r}") from None
    if not verts:
        raise ValueError("empty route")
    return Route(tuple(verts), tuple(pins))


def parse_routes(text: str) -> list[Route]:
    """One route per non-blank line; '#' starts a comment."""
    routes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            routes.append(parse_route(line))
        except ValueError as exc:
            raise ValueError(f"{exc} at line {lineno}") from None
    return routes


def format_routes(routes: Iterable[Route]) -> str:
    return "".join(format_route(r) + "\n" for r in routes)
