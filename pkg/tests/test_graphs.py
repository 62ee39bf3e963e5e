import json
from fractions import Fraction

import pytest

from confsect import catalog
from confsect.geometry import Point
from confsect.graphs import (
    Graph,
    GraphError,
    classify_core,
    core_reduction,
    euler_characteristic,
    load_graph,
    maximal_subtree,
    shortest_distance,
)
from conftest import random_point

THETA_JSON = json.dumps(
    {
        "vertices": ["u", "w"],
        "edges": [
            {"id": "e1", "tail": "u", "head": "w"},
            {"id": "e2", "tail": "u", "head": "w"},
            {"id": "e3", "tail": "u", "head": "w"},
        ],
    }
)


def test_load_theta_readback():
    g = load_graph(THETA_JSON)
    assert len(g.vertex_ids) == 2
    assert len(g.edge_ids) == 3


def test_single_loop_accepted_as_circle():
    g = load_graph({"vertices": ["v"], "edges": [{"id": "e1", "tail": "v", "head": "v"}]})
    assert g.is_circle
    assert g.degree("v") == 2


def test_degree_two_rejected_with_suggestion():
    desc = {
        "vertices": ["a", "b", "c"],
        "edges": [
            {"id": "e1", "tail": "a", "head": "b"},
            {"id": "e2", "tail": "b", "head": "c"},
        ],
    }
    with pytest.raises(GraphError, match="degree 2"):
        load_graph(desc)
    g = load_graph(desc, suppress_degree2=True)
    assert len(g.vertex_ids) == 2
    assert len(g.edge_ids) == 1


def test_suppress_degree2_cycle_becomes_circle():
    desc = {
        "vertices": ["a", "b", "c"],
        "edges": [
            {"id": "e1", "tail": "a", "head": "b"},
            {"id": "e2", "tail": "b", "head": "c"},
            {"id": "e3", "tail": "c", "head": "a"},
        ],
    }
    g = load_graph(desc, suppress_degree2=True)
    assert g.is_circle


def test_disconnected_rejected():
    desc = {
        "vertices": ["a", "b", "c", "d"],
        "edges": [
            {"id": "e1", "tail": "a", "head": "b"},
            {"id": "e2", "tail": "c", "head": "d"},
        ],
    }
    with pytest.raises(GraphError, match="connected"):
        load_graph(desc)


def test_euler_characteristic_values():
    assert euler_characteristic(catalog.theta()) == -1
    assert euler_characteristic(catalog.star_3()) == 1
    assert euler_characteristic(catalog.circle()) == 0
    assert euler_characteristic(catalog.wedge_of_circles(3)) == -2


def test_core_reduction_balloon_is_circle():
    red = core_reduction(catalog.balloon())
    assert classify_core(red.core) == "circle"
    assert red.core.is_circle
    # stem edge and free vertex both collapse onto the loop vertex
    assert red.collapsed["u"] == ("vertex", "v")
    assert red.collapsed["s"] == ("vertex", "v")


def test_core_reduction_theta_unchanged():
    red = core_reduction(catalog.theta())
    assert red.collapsed == {}
    assert classify_core(red.core) == "theta"


def test_core_reduction_dumbbell_with_pendant():
    # hand-simulated: delete the pendant, u drops from degree 4 to 3, done
    g = Graph(
        ["u", "w", "p"],
        {"e1": ("u", "u"), "e2": ("w", "w"), "e3": ("u", "w"), "e4": ("u", "p")},
    )
    red = core_reduction(g)
    assert classify_core(red.core) == "dumbbell"
    assert set(red.collapsed) == {"p", "e4"}
    assert red.collapsed["p"] == ("vertex", "u")


def test_core_reduction_rejects_tree():
    with pytest.raises(GraphError, match="tree"):
        core_reduction(catalog.star_3())


def test_core_reduction_preserves_euler(all_graphs):
    for name, g in all_graphs.items():
        if euler_characteristic(g) > 0:
            continue
        red = core_reduction(g)
        assert euler_characteristic(red.core) == euler_characteristic(g), name
        assert not red.core.free_vertices


def test_classify_core_cases():
    assert classify_core(catalog.infinity()) == "infinity"
    assert classify_core(catalog.theta()) == "theta"
    assert classify_core(catalog.dumbbell()) == "dumbbell"
    assert classify_core(catalog.wedge_of_circles(3)) == "other"


def test_maximal_subtree_sizes(all_graphs):
    for name, g in all_graphs.items():
        tree = maximal_subtree(g)
        chi = euler_characteristic(g)
        assert len(g.edge_ids) - len(tree) == 1 - chi, name


def test_maximal_subtree_tree_and_dumbbell():
    star = catalog.star_3()
    assert maximal_subtree(star) == frozenset(star.edge_ids)
    assert maximal_subtree(catalog.dumbbell()) == frozenset({"e3"})


def test_shortest_distance_theta_midpoints(theta):
    p = Point.on_edge("e1", Fraction(1, 2))
    q = Point.on_edge("e2", Fraction(1, 2))
    assert shortest_distance(theta, p, q) == 1


def test_shortest_distance_same_point(theta):
    p = Point.on_edge("e2", Fraction(1, 3))
    assert shortest_distance(theta, p, p) == 0


def test_shortest_distance_loop_wraparound():
    g = catalog.circle()
    p = Point.on_edge("e1", Fraction(1, 10))
    q = Point.on_edge("e1", Fraction(9, 10))
    assert shortest_distance(g, p, q) == Fraction(1, 5)


def test_metric_axioms_random_triples(all_graphs, rng):
    for g in all_graphs.values():
        for _ in range(25):
            p, q, r = (random_point(g, rng) for _ in range(3))
            dpq = shortest_distance(g, p, q)
            assert dpq == shortest_distance(g, q, p)
            assert (dpq == 0) == (p == q)
            assert shortest_distance(g, p, r) <= dpq + shortest_distance(g, q, r)
