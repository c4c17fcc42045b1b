import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import S, T, V, W, diamond, graphs, two_cycle_gadget
from rca.errors import InvalidRoute
from rca.graph import Graph, Instance, is_dag
from rca.routes import (
    RANK,
    Route,
    classify,
    format_routes,
    parse_route,
    parse_routes,
    shared_edges,
    verify_solution,
)

PATH3 = Graph(False, 3, ((S, V), (V, T)))


def test_classify_examples():
    assert classify(diamond(), Route((0, 1, 3))) == "path"
    assert classify(PATH3, Route((S, V, S, V, T))) == "walk"
    assert classify(diamond(), Route((0, 3))) == "invalid"
    assert classify(diamond(), Route((0, 9))) == "invalid"
    # directed arcs cannot be walked backwards
    assert classify(diamond(), Route((1, 0))) == "invalid"


def test_trail_needs_enough_parallel_copies():
    cycle = ((0, 1), (1, 2), (2, 0))
    r = Route((0, 1, 2, 0, 1))
    assert classify(Graph(True, 3, cycle), r) == "walk"
    assert classify(Graph(True, 3, cycle + ((0, 1),)), r) == "trail"


def test_pins_decide_trail_status():
    g = Graph(True, 3, ((0, 1), (1, 2), (2, 0), (0, 1)))
    assert classify(g, Route((0, 1, 2, 0, 1), (0, 1, 2, 3))) == "trail"
    assert classify(g, Route((0, 1, 2, 0, 1), (0, 1, 2, 0))) == "walk"
    assert classify(g, Route((0, 1), (1,))) == "invalid"


def test_identical_routes_share_everything():
    g = Graph(True, 3, ((S, V), (V, T)))
    r = Route((S, V, T))
    assert shared_edges(g, [r, r]) == (0, 1)


def test_disjoint_routes_share_nothing():
    assert shared_edges(diamond(), [Route((0, 1, 3)), Route((0, 2, 3))]) == ()


def test_same_edge_at_different_steps_is_not_shared():
    routes = [Route((S, V, T)), Route((S, W, S, V, T))]
    assert shared_edges(two_cycle_gadget(), routes) == ()


def test_opposite_directions_share_undirected_edge():
    g = Graph(False, 2, ((0, 1),))
    assert shared_edges(g, [Route((0, 1)), Route((1, 0))]) == (0,)


def test_parallel_copies_do_not_collide():
    g = Graph(True, 2, ((0, 1), (0, 1)))
    assert shared_edges(g, [Route((0, 1), (0,)), Route((0, 1), (1,))]) == ()
    assert shared_edges(g, [Route((0, 1)), Route((0, 1))]) == (0,)


def test_shared_edges_names_bad_route():
    with pytest.raises(InvalidRoute, match="route 1"):
        shared_edges(diamond(), [Route((0, 1, 3)), Route((0, 3))])


def test_verify_reasons():
    inst = Instance(diamond(), 0, 3, 2, 0, "path")
    good = [Route((0, 1, 3)), Route((0, 2, 3))]
    assert verify_solution(inst, good)
    v = verify_solution(inst, good[:1])
    assert (v.accepted, v.reason) == (False, "count")
    v = verify_solution(inst, [Route((0, 1)), good[1]])
    assert v.reason == "endpoint"
    v = verify_solution(inst, [Route((0, 1, 3)), Route((0, 1, 3))])
    assert v.reason == "budget"
    assert v.shared == (0, 2)
    assert "0 2" in v.detail


def test_verify_kind_and_length():
    g = two_cycle_gadget()
    walk = Route((S, W, S, V, T))
    assert verify_solution(Instance(g, S, T, 1, 0, "path"), [walk]).reason == "kind"
    assert verify_solution(Instance(g, S, T, 1, 0, "walk", 3), [walk]).reason == "length"
    assert verify_solution(Instance(g, S, T, 1, 0, "walk", 4), [walk])


def test_route_file_round_trip():
    routes = [Route((0, 1, 3), (0, 2)), Route((0, 2, 3))]
    text = format_routes(routes)
    assert text == "0 1@0 3@2\n0 2 3\n"
    assert parse_routes("# witness\n" + text + "\n") == routes


@pytest.mark.parametrize("line", ["0 x 3", "0@1 2", "0 1@", ""])
def test_bad_route_lines(line):
    with pytest.raises(ValueError):
        parse_route(line)


def test_bad_route_file_names_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_routes("0 1 3\n0 q\n")


# --- properties -------------------------------------------------------------


@st.composite
def walks_on(draw, g, count=3, max_len=5):
    routes = []
    for _ in range(count):
        v = draw(st.integers(0, g.n - 1))
        verts = [v]
        for _ in range(draw(st.integers(0, max_len))):
            nbrs = g.out[verts[-1]]
            if not nbrs:
                break
            eid, w = draw(st.sampled_from(nbrs))
            verts.append(w)
        routes.append(Route(tuple(verts)))
    return routes


@st.composite
def graph_and_walks(draw, directed=None):
    g = draw(graphs(directed=directed))
    return g, draw(walks_on(g))


@given(graph_and_walks(), st.randoms())
def test_shared_edges_permutation_invariant(gw, rnd):
    g, routes = gw
    shuffled = routes[:]
    rnd.shuffle(shuffled)
    assert shared_edges(g, routes) == shared_edges(g, shuffled)


@given(graph_and_walks())
def test_single_route_shares_nothing(gw):
    g, routes = gw
    assert shared_edges(g, routes[:1]) == ()


@given(graph_and_walks())
def test_adding_a_route_only_grows_sharing(gw):
    g, routes = gw
    assert set(shared_edges(g, routes[:2])) <= set(shared_edges(g, routes))


def _has_injective_copies(g, r):
    options = [g.edges_between(u, v) for u, v in zip(r.vertices, r.vertices[1:])]
    return any(len(set(c)) == len(c) for c in itertools.product(*options))


@given(graph_and_walks())
def test_classification_matches_definitions(gw):
    g, routes = gw
    for r in routes:
        is_trail = _has_injective_copies(g, r)
        is_path = is_trail and len(set(r.vertices)) == len(r.vertices)
        expected = "path" if is_path else "trail" if is_trail else "walk"
        found = classify(g, r)
        assert found == expected
        # nesting: a path is a trail is a walk
        assert RANK[found] >= RANK["walk"]


@given(graph_and_walks(directed=True))
def test_routes_on_dags_are_paths(gw):
    g, routes = gw
    assume(is_dag(g))
    for r in routes:
        assert classify(g, r) == "path"
