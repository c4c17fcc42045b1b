"""Decision procedures for RCA/FRCA and the dispatcher that picks one."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Sequence

from rca.flow import decompose_to_walks, expand, max_flow
from rca.graph import (
    INF,
    Graph,
    Instance,
    bfs_distance,
    distance_to,
    is_dag,
    replicate_arcs,
    sink_eccentricity,
)
from rca.oracle import min_shared
from rca.routes import Route, SolveResult, shared_edges


def shortest_path(g: Graph, s: int, t: int) -> Route | None:
    """A shortest ``s``-``t`` path, preferring low edge ids; pinned."""
    dist = distance_to(g, t)
    if dist[s] == INF:
        return None
    eids = []
    u = s
    while u != t:
        eid, u = min((e, w) for e, w in g.out[u] if dist[w] == dist[u] - 1)
        eids.append(eid)
    return Route.from_edges(g, s, eids)


def horizon_for(inst: Instance) -> int:
    """Time horizon for the flow solvers on a directed instance."""
    g = inst.graph
    if is_dag(g):
        tau = g.n
    else:
        tau = inst.p * sink_eccentricity(g, inst.t)
    if inst.alpha is not None:
        tau = min(tau, inst.alpha)
    return max(tau, 1)


def solve(inst: Instance, jobs: int = 1, budget: int | None = None) -> SolveResult:
    g, s, t = inst.graph, inst.s, inst.t
    dist = bfs_distance(g, s)[t]
    if dist == INF:
        return SolveResult(False, solver="unreachable")
    if inst.alpha is None and dist <= inst.k:
        path = shortest_path(g, s, t)
        assert path is not None
        routes = [path] * inst.p
        return SolveResult(True, routes, shared_edges(g, routes), solver="shortest-path")
    if not g.directed and inst.kind == "walk" and inst.alpha is None:
        return solve_walk_undirected(g, s, t, inst.p, inst.k)
    if g.directed and (inst.kind == "walk" or is_dag(g)):
        tau = horizon_for(inst)
        return solve_k_shared_directed(g, s, t, inst.p, inst.k, tau, jobs=jobs)
    return min_shared(inst, budget=budget, stop_at=inst.k)


def solve_zero_shared_directed(g: Graph, s: int, t: int, p: int, tau: int) -> SolveResult:
    """Are there ``p`` walks of length at most ``tau`` that never share an arc?"""
    net = expand(g, s, t, tau, p, trim=True)
    flow = max_flow(net)
    if flow.value < p:
        return SolveResult(False, solver="time-expanded-flow", horizon=tau)
    routes = decompose_to_walks(net, flow)[:p]
    return SolveResult(True, routes, shared_edges(g, routes), solver="time-expanded-flow", horizon=tau)


def _relevant_arcs(g: Graph, s: int, t: int, tau: int) -> list[int]:
    """Arcs that lie on some ``s``-``t`` walk of length at most ``tau``."""
    from_s = bfs_distance(g, s)
    to_t = distance_to(g, t)
    return [eid for eid, (u, v) in enumerate(g.edges) if from_s[u] + 1 + to_t[v] <= tau]


def _feasible(args: tuple[Graph, int, int, int, int, tuple[int, ...]]) -> bool:
    g, s, t, p, tau, subset = args
    # p parallel unit arcs carry exactly what one arc of capacity p carries
    net = expand(g, s, t, tau, p, capacity={eid: p for eid in subset}, trim=True)
    return max_flow(net).value >= p


def _subsets(arcs: Sequence[int], k: int) -> Iterator[tuple[int, ...]]:
    for size in range(min(k, len(arcs)) + 1):
        yield from itertools.combinations(arcs, size)


def solve_k_shared_directed(
    g: Graph, s: int, t: int, p: int, k: int, tau: int, jobs: int = 1
) -> SolveResult:
    """Try every arc set ``K`` with ``|K| <= k`` as the set of arcs allowed to be shared.

    The first ``K`` in enumeration order (by size, then lexicographic)
    whose ``p``-fold replication admits ``p`` collision-free walks decides
    yes; its walks are mapped back onto the original arcs.
    """
    if not g.directed:
        raise ValueError("solve_k_shared_directed needs a directed graph")
    arcs = _relevant_arcs(g, s, t, tau)
    tasks = ((g, s, t, p, tau, subset) for subset in _subsets(arcs, k))
    winner: tuple[int, ...] | None = None
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            task_list = list(tasks)
            for task, ok in zip(task_list, pool.map(_feasible, task_list, chunksize=16)):
                if ok:
                    winner = task[-1]
                    break
            pool.shutdown(cancel_futures=True)
    else:
        winner = next((task[-1] for task in tasks if _feasible(task)), None)

    if winner is None:
        return SolveResult(False, solver="k-subset-flow", horizon=tau)
    replicated, origin = replicate_arcs(g, winner, p)
    inner = solve_zero_shared_directed(replicated, s, t, p, tau)
    assert inner.decision and inner.witness is not None
    routes = [
        Route(r.vertices, tuple(origin[eid] for eid in r.copies))  # type: ignore[index]
        for r in inner.witness
    ]
    return SolveResult(True, routes, shared_edges(g, routes), solver="k-subset-flow", horizon=tau)


def solve_walk_undirected(g: Graph, s: int, t: int, p: int, k: int) -> SolveResult:
    """Closed-form answer for walks on undirected graphs without a length cap.

    Walks may wait at the source by bouncing across an edge incident to
    ``s``. With ``k >= 1`` every walk bounces on the first edge of one
    shortest path, each a different number of times, so only that edge is
    shared. With ``k = 0`` each walk needs its own edge at ``s`` for step 1.
    """
    if g.directed:
        raise ValueError("solve_walk_undirected needs an undirected graph")
    path = shortest_path(g, s, t)
    if path is None:
        return SolveResult(False, solver="undirected-walk")
    tail: list[int] = [e for e in path.copies if e is not None]
    first = tail[0]
    if k >= 1 or p == 1:
        eid_lists = [[first] * (2 * i) + tail for i in range(p)]
    else:
        others = [eid for eid, _ in g.out[s] if eid != first]
        if 1 + len(others) < p:
            return SolveResult(False, solver="undirected-walk")
        eid_lists = [tail] + [[others[i - 1]] * (2 * i) + tail for i in range(1, p)]
    routes = [Route.from_edges(g, s, eids) for eids in eid_lists]
    return SolveResult(True, routes, shared_edges(g, routes), solver="undirected-walk")
