"""Instances built from Set Cover and Hamiltonian-cycle inputs, plus intended witnesses.

Every generator returns an :class:`Instance` whose ``names`` map gadget
roles (``s``, ``t``, ``v``, ``w``, ``chain4.2``, ``b3`` ...) to vertex ids.
Vertices of an embedded input graph keep their ids ``0..n-1``.
"""

from __future__ import annotations

from typing import Sequence

from rca.graph import Graph, Instance, subdivide3
from rca.oracle import SetCover
from rca.routes import Route, resolve_edges


class _Builder:
    def __init__(self, directed: bool) -> None:
        self.directed = directed
        self.n = 0
        self.edges: list[tuple[int, int]] = []
        self.names: dict[str, int] = {}

    def vertex(self, name: str | None = None) -> int:
        vid = self.n
        self.n += 1
        if name is not None:
            self.names[name] = vid
        return vid

    def edge(self, u: int, v: int) -> int:
        self.edges.append((u, v))
        return len(self.edges) - 1

    def chain(self, u: int, v: int, length: int, name: str) -> list[int]:
        """Path of ``length`` edges from ``u`` to ``v``; returns its edge ids in order."""
        prev, ids = u, []
        for i in range(1, length):
            mid = self.vertex(f"{name}.{i}")
            ids.append(self.edge(prev, mid))
            prev = mid
        ids.append(self.edge(prev, v))
        return ids

    def graph(self) -> Graph:
        return Graph(self.directed, self.n, tuple(self.edges))


def _require_cubic(g: Graph) -> None:
    if g.directed:
        raise ValueError("input graph must be undirected")
    bad = [v for v in range(g.n) if g.degree(v) != 3]
    if bad:
        raise ValueError(f"input graph is not cubic: vertex {bad[0]} has degree {g.degree(bad[0])}")


# --- Set Cover -------------------------------------------------------------


def gen_setcover(sc: SetCover, orientation: str = "dag") -> Instance:
    """Walk instance with ``p = |U| + |F|`` and ``k = l``.

    Every set vertex hangs off ``s`` by an ``(l+2)``-chain and points to
    ``t``; every element vertex hangs off ``s`` by an ``(l+1)``-chain and
    points to the sets containing it. ``orientation="undirected"`` drops
    arc directions and caps route length at ``l + 3``.
    """
    if orientation not in ("dag", "undirected"):
        raise ValueError("orientation must be 'dag' or 'undirected'")
    n, m, ell = sc.universe, len(sc.family), sc.budget
    if n + m == 0:
        raise ValueError("empty universe and empty family give p = 0")
    b = _Builder(directed=orientation == "dag")
    s, t = b.vertex("s"), b.vertex("t")
    elem = [b.vertex(f"u{i}") for i in range(1, n + 1)]
    sets = [b.vertex(f"F{j}") for j in range(1, m + 1)]
    for i in range(1, n + 1):
        for j, f in enumerate(sc.family):
            if i in f:
                b.edge(elem[i - 1], sets[j])
    for j in range(m):
        b.chain(s, sets[j], ell + 2, f"setchain{j + 1}")
    for i in range(n):
        b.chain(s, elem[i], ell + 1, f"elemchain{i + 1}")
    for j in range(m):
        b.edge(sets[j], t)
    alpha = ell + 3 if orientation == "undirected" else None
    return Instance(b.graph(), s, t, n + m, ell, "walk", alpha, b.names)


def gen_setcover_witness(
    sc: SetCover, cover: Sequence[int], inst: Instance | None = None
) -> list[Route]:
    """Walks for a cover given as 0-based set indices: one per chain leaving ``s``.

    Element walks go to the first cover set containing their element.
    """
    if inst is None:
        inst = gen_setcover(sc)
    if len(set(cover)) > sc.budget:
        raise ValueError(f"cover has {len(set(cover))} sets, budget is {sc.budget}")
    for j in cover:
        if not 0 <= j < len(sc.family):
            raise ValueError(f"cover names unknown set index {j}")
    names = inst.names
    routes = []

    def chain_vertices(prefix: str, length: int) -> list[int]:
        return [names[f"{prefix}.{i}"] for i in range(1, length)]

    for j in range(len(sc.family)):
        body = chain_vertices(f"setchain{j + 1}", sc.budget + 2)
        routes.append(Route((inst.s, *body, names[f"F{j + 1}"], inst.t)))
    for i in range(1, sc.universe + 1):
        host = next((j for j in cover if i in sc.family[j]), None)
        if host is None:
            raise ValueError(f"element {i} is not covered")
        body = chain_vertices(f"elemchain{i}", sc.budget + 1)
        routes.append(Route((inst.s, *body, names[f"u{i}"], names[f"F{host + 1}"], inst.t)))
    return routes


# --- Path-RCA from planar cubic Hamiltonian cycle -----------------------------


def _check_triple(g: Graph, x1: int, x2: int, x3: int) -> None:
    nbrs = {w for _, w in g.out[x1]}
    for x in (x2, x3):
        if x not in nbrs:
            raise ValueError(f"vertex {x} is not adjacent to x1={x1}")
    if x2 == x3:
        raise ValueError("x2 and x3 must differ")


def gen_pchc_path(
    g: Graph,
    triple: tuple[int, int, int],
    orientation: str = "undirected",
    pad: int = 0,
) -> Instance:
    """Path instance with ``p = n - 1``; yes exactly when ``g`` is Hamiltonian.

    ``s`` reaches ``w`` by chains of lengths ``4..n+1`` and by
    ``s - v - x1 - (g) - x2/x3 - w``; the chains keep ``{w,t}`` busy at
    steps ``5..n+2``. ``pad > 0`` prepends a ``pad``-chain from a new
    source, which every path must use, and sets ``k = pad``.
    """
    _require_cubic(g)
    x1, x2, x3 = triple
    _check_triple(g, x1, x2, x3)
    if orientation not in ("undirected", "directed"):
        raise ValueError("orientation must be 'undirected' or 'directed'")
    directed = orientation == "directed"
    n = g.n
    b = _Builder(directed)
    for v in range(n):
        b.vertex()
    s, t, v, w = b.vertex("s"), b.vertex("t"), b.vertex("v"), b.vertex("w")
    for a, c in g.edges:
        b.edge(a, c)
        if directed:
            b.edge(c, a)
    b.edge(s, v)
    b.edge(w, t)
    for length in range(4, n + 2):
        b.chain(s, w, length, f"chain{length}")
    b.edge(v, x1)
    b.edge(x2, w)
    b.edge(x3, w)
    b.names.update(x1=x1, x2=x2, x3=x3)
    source = s
    if pad > 0:
        source = b.vertex("s'")
        b.chain(source, s, pad, "pad")
    return Instance(b.graph(), source, t, n - 1, pad, "path", None, b.names)


def _orient_cycle(cycle: Sequence[int], start: int, end_choices: Sequence[int]) -> list[int]:
    """Rotate/reverse a cycle so it starts at ``start`` and ends at one of ``end_choices``."""
    cyc = list(cycle)
    if len(set(cyc)) != len(cyc) or start not in cyc:
        raise ValueError("not a cycle through the required start vertex")
    i = cyc.index(start)
    fwd = cyc[i:] + cyc[:i]
    for order in (fwd, [fwd[0]] + fwd[1:][::-1]):
        if order[-1] in end_choices:
            return order
    raise ValueError(
        f"cycle uses neither edge {{{start},{end_choices[0]}}} nor {{{start},{end_choices[-1]}}}; "
        "pick another outer triple"
    )


def gen_pchc_path_witness(inst: Instance, g: Graph, cycle: Sequence[int]) -> list[Route]:
    """The ``n - 1`` collision-free paths built from a Hamiltonian cycle of ``g``."""
    names = inst.names
    x1, x2, x3 = names["x1"], names["x2"], names["x3"]
    if sorted(cycle) != list(range(g.n)):
        raise ValueError("cycle must visit every vertex exactly once")
    for a, c in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if not g.edges_between(a, c):
            raise ValueError(f"cycle step {a}-{c} is not an edge")
    order = _orient_cycle(cycle, x1, (x2, x3))
    s, t, v, w = names["s"], names["t"], names["v"], names["w"]
    prefix = [names["s'"]] + [names[f"pad.{i}"] for i in range(1, inst.k)] if "s'" in names else []
    routes = []
    for length in range(4, g.n + 2):
        body = [names[f"chain{length}.{i}"] for i in range(1, length)]
        routes.append(Route(tuple(prefix + [s, *body, w, t])))
    routes.append(Route(tuple(prefix + [s, v, *order, w, t])))
    return routes


# --- Trail-RCA, undirected ---------------------------------------------------


def gen_pchc_trail(g: Graph, x: int = 0, subdivide: bool = True) -> Instance:
    """Trail instance with ``p = 2n``; yes exactly when ``g`` is Hamiltonian.

    ``g`` is subdivided once and wired to ``s, v, w, t`` with edges
    ``{s,x} {s,v} {v,w} {w,t} {x,w}``; ``s`` gets ``n - 1`` double-edged
    pendant vertices ``b1..b{n-1}``. The result has parallel edges, so by
    default every edge is then replaced by a path of length three.
    """
    _require_cubic(g)
    if not 0 <= x < g.n:
        raise ValueError(f"x={x} is not a vertex of g")
    n = g.n
    b = _Builder(directed=False)
    for _ in range(n):
        b.vertex()
    for eid, (a, c) in enumerate(g.edges):
        mid = b.vertex(f"sub{eid}")
        b.edge(a, mid)
        b.edge(mid, c)
    s, v, w, t = b.vertex("s"), b.vertex("v"), b.vertex("w"), b.vertex("t")
    b.names["x"] = x
    b.edge(s, x)
    b.edge(s, v)
    b.edge(v, w)
    b.edge(w, t)
    b.edge(x, w)
    for i in range(1, n):
        bi = b.vertex(f"b{i}")
        b.edge(s, bi)
        b.edge(s, bi)
    graph = b.graph()
    if subdivide:
        graph = subdivide3(graph)
    return Instance(graph, s, t, 2 * n, 0, "trail", None, b.names)


def lift_through_subdivision(g: Graph, r: Route) -> Route:
    """Map a route of ``g`` onto ``subdivide3(g)``, tripling every step."""
    eids = resolve_edges(g, r)
    out: list[int] = []
    for u, eid in zip(r.vertices, eids):
        a, _ = g.edges[eid]
        forward = [3 * eid, 3 * eid + 1, 3 * eid + 2]
        out += forward if u == a else forward[::-1]
    return Route.from_edges(subdivide3(g), r.start, out)


def gen_pchc_trail_witness(
    g: Graph, cycle: Sequence[int], x: int = 0, subdivide: bool = True
) -> tuple[Instance, list[Route]]:
    """The ``2n`` trails of the two groups, from a Hamiltonian cycle of ``g``.

    Group 1 bounces through ``b_j..b_{n-1}`` (out on copy 1, back on copy
    2) and leaves via ``v``; group 2 bounces the other way round and walks
    the subdivided cycle from ``x`` before leaving via ``w``.
    """
    inst = gen_pchc_trail(g, x, subdivide=False)
    base, names = inst.graph, inst.names
    n = g.n
    if sorted(cycle) != list(range(n)):
        raise ValueError("cycle must visit every vertex exactly once")
    i = list(cycle).index(x)
    order = list(cycle[i:]) + list(cycle[:i]) + [x]
    tour: list[int] = [x]
    for a, c in zip(order, order[1:]):
        eid = min(e for e in g.edges_between(a, c))
        tour += [names[f"sub{eid}"], c]
    s, v, w, t = names["s"], names["v"], names["w"], names["t"]

    def bounce(j: int, first: int) -> tuple[list[int], list[int | None]]:
        verts: list[int] = [s]
        pins: list[int | None] = []
        for idx in range(j, n):
            bi = names[f"b{idx}"]
            copies = base.edges_between(s, bi)
            verts += [bi, s]
            pins += [copies[first], copies[1 - first]]
        return verts, pins

    routes = []
    for j in range(1, n + 1):
        verts, pins = bounce(j, 0)
        verts += [v, w, t]
        pins += [None] * 3
        routes.append(Route(tuple(verts), tuple(pins)))
    for j in range(1, n + 1):
        verts, pins = bounce(j, 1)
        verts += tour + [w, t]
        pins += [None] * (len(tour) + 2)
        routes.append(Route(tuple(verts), tuple(pins)))
    if subdivide:
        routes = [lift_through_subdivision(base, r) for r in routes]
        inst = gen_pchc_trail(g, x, subdivide=True)
    return inst, routes


# --- Trail-RCA, directed -----------------------------------------------------


def _require_dp23(g: Graph) -> None:
    if not g.directed:
        raise ValueError("input graph must be directed")
    indeg = [0] * g.n
    for _, c in g.edges:
        indeg[c] += 1
    for v in range(g.n):
        out, inn = g.degree(v), indeg[v]
        if max(out, inn) > 2 or out + inn > 3:
            raise ValueError(
                f"vertex {v} has out-degree {out} and in-degree {inn}; "
                "need max <= 2 and sum <= 3"
            )


def gen_dp23hc_trail(g: Graph, x: int = 0) -> Instance:
    """Directed trail instance with ``p = n + 1``; yes exactly when ``g`` has a Hamiltonian circuit.

    Chains run from ``s`` to ``w`` with lengths ``3..n+2``; the remaining
    trail goes ``s -> v -> x``, around ``g`` and out via ``x -> w -> t``.
    """
    _require_dp23(g)
    if not 0 <= x < g.n:
        raise ValueError(f"x={x} is not a vertex of g")
    n = g.n
    b = _Builder(directed=True)
    for _ in range(n):
        b.vertex()
    for a, c in g.edges:
        b.edge(a, c)
    s, t, v, w = b.vertex("s"), b.vertex("t"), b.vertex("v"), b.vertex("w")
    b.names["x"] = x
    b.edge(s, v)
    b.edge(v, x)
    b.edge(x, w)
    b.edge(w, t)
    for length in range(3, n + 3):
        b.chain(s, w, length, f"chain{length}")
    return Instance(b.graph(), s, t, n + 1, 0, "trail", None, b.names)


def gen_dp23hc_trail_witness(inst: Instance, g: Graph, cycle: Sequence[int]) -> list[Route]:
    names = inst.names
    x = names["x"]
    i = list(cycle).index(x)
    order = list(cycle[i:]) + list(cycle[:i]) + [x]
    for a, c in zip(order, order[1:]):
        if not g.edges_between(a, c):
            raise ValueError(f"cycle step {a}->{c} is not an arc")
    s, t, v, w = names["s"], names["t"], names["v"], names["w"]
    routes = []
    for length in range(3, g.n + 3):
        body = [names[f"chain{length}.{j}"] for j in range(1, length)]
        routes.append(Route((s, *body, w, t)))
    routes.append(Route((s, v, *order, w, t)))
    return routes
