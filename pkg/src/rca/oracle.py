"""Exhaustive ground-truth solvers for small instances.

Nothing here is clever on purpose: these searches are the reference the
polynomial algorithms are tested against, so they share no code with the
flow machinery.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from rca.errors import Refusal
from rca.graph import INF, Graph, Instance, bfs_distance, distance_to, sink_eccentricity
from rca.routes import Route, SolveResult, shared_edges

DEFAULT_BUDGET = 10**7
HAMILTONIAN_GUARD = 12
FINISHED = -1


def oracle_budget() -> int:
    raw = os.environ.get("RCA_ORACLE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def enumerate_routes(g: Graph, s: int, t: int, kind: str, maxlen: int) -> list[Route]:
    """All ``s``-``t`` routes of ``kind`` with at most ``maxlen`` steps, lexicographically.

    Routes are vertex sequences that stop at their first visit to ``t``;
    parallel copies that give the same sequence are reported once.
    """
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    to_t = distance_to(g, t)
    found: set[tuple[int, ...]] = set()
    verts = [s]
    on_path = {s}
    used: Counter[int] = Counter()

    def pair_key(u: int, v: int) -> tuple[int, int]:
        return (u, v) if g.directed else (min(u, v), max(u, v))

    def extend(u: int) -> None:
        if u == t:
            # a route ends on first arrival; going on can only add sharing
            found.add(tuple(verts))
            return
        left = maxlen - (len(verts) - 1)
        if left == 0:
            return
        for v in sorted({w for _, w in g.out[u]}):
            if to_t[v] > left - 1:
                continue
            if kind == "path" and v in on_path:
                continue
            key = pair_key(u, v)
            if kind == "trail" and used[key] >= len(g.edges_between(u, v)):
                continue
            verts.append(v)
            on_path.add(v)
            used[key] += 1
            extend(v)
            used[key] -= 1
            verts.pop()
            if v not in verts:
                on_path.discard(v)

    if to_t[s] <= maxlen:
        extend(s)
    return [Route(vs) for vs in sorted(found)]


def _copy_variants(g: Graph, r: Route, kind: str) -> list[tuple[int, ...]]:
    """Every assignment of edge copies to the steps of ``r`` (injective for trails)."""
    choices = [g.edges_between(u, v) for u, v in zip(r.vertices, r.vertices[1:])]
    if all(len(c) == 1 for c in choices):
        return [tuple(c[0] for c in choices)]
    out = []
    for combo in itertools.product(*choices):
        if kind != "walk" and len(set(combo)) != len(combo):
            continue
        out.append(combo)
    return out


def length_cap(inst: Instance) -> int:
    """Longest route the exhaustive search has to consider."""
    g = inst.graph
    if inst.kind == "path":
        cap = g.n - 1
    elif inst.kind == "trail":
        cap = g.m
    elif inst.alpha is not None:
        return inst.alpha
    else:
        cap = inst.p * sink_eccentricity(g, inst.t)
    if inst.alpha is not None:
        cap = min(cap, inst.alpha)
    return max(cap, 1)


def min_shared(
    inst: Instance, cap: int | None = None, budget: int | None = None, stop_at: int | None = None
) -> SolveResult:
    """Minimum number of shared edges over all ``p``-tuples of routes of ``inst.kind``.

    ``cap`` overrides the default route-length cap. With ``stop_at`` the
    search returns as soon as a tuple with at most that many shared edges
    is found; ``min_shared`` is then left unset.
    """
    g = inst.graph
    cap = length_cap(inst) if cap is None else cap
    budget = oracle_budget() if budget is None else budget
    if bfs_distance(g, inst.s)[inst.t] > cap:
        return SolveResult(False, solver="oracle", horizon=cap)
    if inst.kind == "walk":
        best, routes = _walk_search(g, inst.s, inst.t, inst.p, cap, budget, stop_at)
    else:
        best, routes = _route_list_search(inst, cap, budget, stop_at)
    if routes is None:
        return SolveResult(False, solver="oracle", horizon=cap)
    shared = shared_edges(g, routes)
    exact = stop_at is None
    return SolveResult(
        decision=best <= inst.k,
        witness=routes,
        shared_edges=shared,
        min_shared=best if exact else None,
        solver="oracle",
        horizon=cap,
    )


def _route_list_search(
    inst: Instance, cap: int, budget: int, stop_at: int | None
) -> tuple[int, list[Route] | None]:
    g, p = inst.graph, inst.p
    base = enumerate_routes(g, inst.s, inst.t, inst.kind, cap)
    variants: list[tuple[Route, tuple[tuple[int, int], ...]]] = []
    for r in base:
        for combo in _copy_variants(g, r, inst.kind):
            variants.append((Route(r.vertices, combo), tuple(enumerate(combo))))
    if not variants:
        return INF, None  # type: ignore[return-value]
    combos = len(variants) ** p
    if combos > budget:
        raise Refusal(
            f"oracle guard: {len(variants)} routes ^ p={p} = {combos} combinations "
            f"exceeds budget {budget} (set RCA_ORACLE_BUDGET to raise it)"
        )
    variants.sort(key=lambda item: (item[0].length, item[0].vertices, item[0].copies))

    occupied: Counter[tuple[int, int]] = Counter()
    shared_count: Counter[int] = Counter()
    chosen: list[int] = []
    best = [INF, None]

    def add(idx: int, sign: int) -> None:
        for slot in variants[idx][1]:
            before = occupied[slot]
            occupied[slot] = before + sign
            # a slot turns shared when its second user arrives
            if sign > 0 and before == 1 or sign < 0 and before == 2:
                shared_count[slot[1]] += sign
                if shared_count[slot[1]] == 0:
                    del shared_count[slot[1]]

    def search(lo: int) -> bool:
        if len(shared_count) >= best[0]:
            return False
        if len(chosen) == p:
            best[0] = len(shared_count)
            best[1] = [variants[i][0] for i in chosen]
            return stop_at is not None and best[0] <= stop_at
        for idx in range(lo, len(variants)):
            chosen.append(idx)
            add(idx, 1)
            done = search(idx)
            add(idx, -1)
            chosen.pop()
            if done:
                return True
        return False

    search(0)
    return best[0], best[1]  # type: ignore[return-value]


def _walk_state_bound(g: Graph, s: int, t: int, p: int, cap: int) -> int:
    from_s = bfs_distance(g, s)
    to_t = distance_to(g, t)
    total = 0
    for i in range(cap + 1):
        live = sum(1 for v in range(g.n) if from_s[v] <= i and to_t[v] <= cap - i)
        total += (live + 1) ** p
    return total


def _walk_search(
    g: Graph, s: int, t: int, p: int, cap: int, budget: int, stop_at: int | None
) -> tuple[int, list[Route] | None]:
    """Move ``p`` walkers in lockstep; a walker at ``t`` may stop or keep going.

    Decides "at most ``b`` shared edges" for increasing ``b``; the state is
    (time, multiset of positions, shared set) and failed states are memoized.
    """
    bound = _walk_state_bound(g, s, t, p, cap)
    if bound > budget:
        raise Refusal(
            f"oracle guard: walk state space bound {bound} exceeds budget {budget} "
            f"(set RCA_ORACLE_BUDGET to raise it)"
        )
    to_t = distance_to(g, t)
    dist = int(bfs_distance(g, s)[t])

    def options(v: int, step: int) -> list[tuple[int, int]]:
        left = cap - step - 1
        opts = [(eid, w) for eid, w in g.out[v] if to_t[w] <= left]
        if v == t:
            opts.append((-1, FINISHED))
        return opts

    def decide(b: int) -> list[list[int]] | None:
        failed: set = set()
        trails: list[list[int]] = [[] for _ in range(p)]

        def rec(step: int, pos: tuple[int, ...], shared: frozenset[int]) -> bool:
            # walkers standing on t may stop there at any time
            if all(x == FINISHED or x == t for x in pos):
                return True
            if step == cap:
                return False
            key = (step, tuple(sorted(pos)), shared)
            if key in failed:
                return False
            groups: dict[int, list[int]] = {}
            for w_idx, x in enumerate(pos):
                if x != FINISHED:
                    groups.setdefault(x, []).append(w_idx)
            per_group = []
            for v, members in groups.items():
                opts = options(v, step)
                per_group.append(
                    (members, list(itertools.combinations_with_replacement(opts, len(members))))
                )
            for picks in itertools.product(*(choices for _, choices in per_group)):
                moves: list[tuple[int, tuple[int, int]]] = []
                for (members, _), pick in zip(per_group, picks):
                    moves.extend(zip(members, pick))
                usage = Counter(eid for _, (eid, _) in moves if eid >= 0)
                extra = {eid for eid, c in usage.items() if c > 1 and eid not in shared}
                if len(shared) + len(extra) > b:
                    continue
                new_pos = list(pos)
                for w_idx, (eid, w) in moves:
                    new_pos[w_idx] = w
                    if eid >= 0:
                        trails[w_idx].append(eid)
                ok = rec(step + 1, tuple(new_pos), shared | extra if extra else shared)
                if ok:
                    return True
                for w_idx, (eid, _) in moves:
                    if eid >= 0:
                        trails[w_idx].pop()
            failed.add(key)
            return False

        if rec(0, (s,) * p, frozenset()):
            return trails
        return None

    targets = [stop_at] if stop_at is not None else range(0, dist + 1)
    for b in targets:
        found = decide(b)
        if found is not None:
            return b, [Route.from_edges(g, s, eids) for eids in found]
    return INF, None  # type: ignore[return-value]


@dataclass(frozen=True)
class SetCover:
    universe: int
    family: tuple[frozenset[int], ...]
    budget: int

    def __post_init__(self) -> None:
        for idx, f in enumerate(self.family):
            bad = [e for e in f if not 1 <= e <= self.universe]
            if bad:
                raise ValueError(f"set {idx} has elements outside 1..{self.universe}: {bad}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")


def parse_set_cover(text: str) -> SetCover:
    """``sc 1`` / ``n <universe>`` / ``f <elem> ...`` per set / ``l <budget>``; elements are 1-based."""
    from rca.errors import ParseError

    universe = budget = None
    family: list[frozenset[int]] = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if not header:
                if toks != ["sc", "1"]:
                    raise ParseError("expected header 'sc 1'", lineno)
                header = True
            elif toks[0] == "n" and len(toks) == 2:
                universe = int(toks[1])
            elif toks[0] == "f":
                family.append(frozenset(int(x) for x in toks[1:]))
            elif toks[0] == "l" and len(toks) == 2:
                budget = int(toks[1])
            else:
                raise ParseError(f"unexpected line {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"non-integer value in {line!r}", lineno) from None
    if universe is None or budget is None:
        raise ParseError("set cover file needs 'n' and 'l' lines", max(1, len(text.splitlines())))
    try:
        return SetCover(universe, tuple(family), budget)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None


def format_set_cover(sc: SetCover) -> str:
    lines = ["sc 1", f"n {sc.universe}"]
    lines += [" ".join(["f", *map(str, sorted(f))]) for f in sc.family]
    lines.append(f"l {sc.budget}")
    return "\n".join(lines) + "\n"


def brute_force_set_cover(universe: int, family: Sequence[frozenset[int]], budget: int) -> bool:
    target = set(range(1, universe + 1))
    for size in range(0, min(budget, len(family)) + 1):
        for pick in itertools.combinations(family, size):
            if set().union(*pick) >= target:
                return True
    return False


def brute_force_hamiltonian(g: Graph, guard: int = HAMILTONIAN_GUARD) -> list[int] | None:
    """A Hamiltonian cycle as a vertex list starting at 0 (closing edge implied), or None."""
    if g.n > guard:
        raise Refusal(f"hamiltonian guard: {g.n} vertices exceeds {guard}")
    n = g.n
    if n == 0 or (not g.directed and n < 3) or n < 2:
        return None
    nbrs = [sorted({w for _, w in g.out[v]}) for v in range(n)]
    order = [0]
    seen = [False] * n
    seen[0] = True

    def rec() -> bool:
        u = order[-1]
        if len(order) == n:
            return 0 in nbrs[u]
        for w in nbrs[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
                if rec():
                    return True
                order.pop()
                seen[w] = False
        return False

    return list(order) if rec() else None
