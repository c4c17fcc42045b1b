"""Shared fixtures, graph builders and a naive reference oracle."""

from __future__ import annotations

import itertools
import random
from collections import Counter

import pytest
from hypothesis import strategies as st

from rca.graph import Graph, Instance

# vertex layout used by several small examples: s=0, v=1, t=2, w=3
S, V, T, W = 0, 1, 2, 3


def diamond() -> Graph:
    # s=0, a=1, b=2, t=3
    return Graph(True, 4, ((0, 1), (0, 2), (1, 3), (2, 3)))


def two_cycle_gadget() -> Graph:
    """Arcs s->v, v->t, s->w, w->s."""
    return Graph(True, 4, ((S, V), (V, T), (S, W), (W, S)))


def k4() -> Graph:
    return Graph(False, 4, tuple(itertools.combinations(range(4), 2)))


def prism() -> Graph:
    tri = ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5))
    return Graph(False, 6, tri + ((0, 3), (1, 4), (2, 5)))


def random_cubic(rng: random.Random, n: int) -> Graph:
    """Simple cubic graph by the pairing model with restarts (n even, n >= 4)."""
    while True:
        points = [v for v in range(n) for _ in range(3)]
        rng.shuffle(points)
        pairs = {tuple(sorted(points[i : i + 2])) for i in range(0, len(points), 2)}
        if len(pairs) == 3 * n // 2 and all(a != b for a, b in pairs):
            return Graph(False, n, tuple(sorted(pairs)))


def random_graph(
    rng: random.Random, directed: bool, n_max: int, m_max: int, n_min: int = 2
) -> Graph:
    n = rng.randint(n_min, n_max)
    m = rng.randint(1, m_max)
    edges = []
    for _ in range(m):
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    return Graph(directed, n, tuple(edges))


# --- naive reference oracle -------------------------------------------------
# Written from the definitions only: enumerate every route as an edge-id
# sequence, then every multiset of p routes, and count shared edges.


def naive_routes(g: Graph, s: int, t: int, kind: str, maxlen: int) -> list[tuple[int, ...]]:
    """Edge-id sequences of all s-t routes of ``kind`` with 1..maxlen steps, ending at first t."""
    steps: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.n)}
    for eid, (a, b) in enumerate(g.edges):
        steps[a].append((eid, b))
        if not g.directed:
            steps[b].append((eid, a))
    found = []

    def rec(u: int, seq: list[int], seen: set[int]) -> None:
        if u == t and seq:
            found.append(tuple(seq))
            return
        if len(seq) == maxlen:
            return
        for eid, w in steps[u]:
            if kind != "walk" and eid in seq:
                continue
            if kind == "path" and w in seen:
                continue
            seq.append(eid)
            rec(w, seq, seen | {w})
            seq.pop()

    rec(s, [], {s})
    return found


def naive_shared(routes) -> set[int]:
    shared = set()
    for step in range(max(len(r) for r in routes)):
        c = Counter(r[step] for r in routes if step < len(r))
        shared |= {e for e, n in c.items() if n > 1}
    return shared


def naive_min_shared(g: Graph, s: int, t: int, p: int, kind: str, maxlen: int) -> float:
    routes = naive_routes(g, s, t, kind, maxlen)
    best = float("inf")
    for combo in itertools.combinations_with_replacement(routes, p):
        best = min(best, len(naive_shared(combo)))
        if best == 0:
            break
    return best


# --- hypothesis strategies --------------------------------------------------


@st.composite
def graphs(draw, directed=None, n_max=5, m_max=8, min_n=2):
    if directed is None:
        directed = draw(st.booleans())
    n = draw(st.integers(min_n, n_max))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    edges = draw(st.lists(pair, min_size=0, max_size=m_max))
    return Graph(directed, n, tuple(edges))


@st.composite
def instances(draw, directed=None, kinds=("walk", "trail", "path"), n_max=5, m_max=7, alpha=None):
    g = draw(graphs(directed=directed, n_max=n_max, m_max=m_max))
    s, t = draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    p = draw(st.integers(1, 3))
    k = draw(st.integers(0, 2))
    kind = draw(st.sampled_from(kinds))
    if alpha is None:
        a = draw(st.one_of(st.none(), st.integers(1, 6)))
    else:
        a = alpha
    return Instance(g, s, t, p, k, kind, a)


@pytest.fixture
def tmp_files(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
