from fractions import Fraction

import pytest

from confsect import catalog
from confsect.geometry import (
    Component,
    GeometryError,
    borders,
    check_configuration,
    complement_components,
    component_of,
    is_simply_connected,
    Point,
)
from conftest import random_config


def F(a, b):
    return Fraction(a, b)


def test_configuration_rejects_coincident_tokens(theta):
    with pytest.raises(GeometryError):
        check_configuration(theta, (Point.at_vertex("u"), Point.at_vertex("u")))


def test_theta_both_vertices_gives_three_open_edges(theta):
    comps = complement_components(theta, (Point.at_vertex("u"), Point.at_vertex("w")))
    assert len(comps) == 3
    for c in comps:
        assert c.vertices == ()
        assert len(c.pieces) == 1
        (e, lo, hi) = c.pieces[0]
        assert (lo, hi) == (0, 1)


def test_theta_single_interior_token_one_component(theta):
    comps = complement_components(theta, (Point.on_edge("e1", F(1, 3)),))
    assert len(comps) == 1
    assert set(comps[0].vertices) == {"u", "w"}


def test_star_center_token_three_components(star3):
    comps = complement_components(star3, (Point.at_vertex("c"),))
    assert len(comps) == 3
    for c in comps:
        assert len(c.vertices) == 1  # the free leaf vertex


def test_component_of_lookup(theta, star3):
    comps = complement_components(theta, (Point.at_vertex("u"), Point.at_vertex("w")))
    c = component_of(comps, Point.on_edge("e2", F(1, 2)))
    assert c.pieces[0][0] == "e2"

    comps = complement_components(star3, (Point.at_vertex("c"),))
    c = component_of(comps, Point.on_edge("e1", F(1, 2)))
    assert ("e1", Fraction(0), Fraction(1)) in c.pieces

    with pytest.raises(GeometryError):
        component_of(comps, Point.at_vertex("c"))


def test_borders(theta, star3):
    x = (Point.on_edge("e1", F(1, 4)), Point.on_edge("e1", F(3, 4)))
    comps = complement_components(theta, x)
    middle = component_of(comps, Point.on_edge("e1", F(1, 2)))
    assert borders(theta, middle, x[0])
    assert borders(theta, middle, x[1])
    assert not borders(theta, middle, Point.on_edge("e2", F(1, 2)))

    comps = complement_components(star3, (Point.at_vertex("c"),))
    for c in comps:
        assert borders(star3, c, Point.at_vertex("c"))


def test_is_simply_connected():
    g = catalog.circle()
    comps = complement_components(g, (Point.at_vertex("v"),))
    loop_minus_vertex = comps[0]
    assert is_simply_connected(g, loop_minus_vertex)
    assert not is_simply_connected(g, loop_minus_vertex, extra=Point.at_vertex("v"))

    theta = catalog.theta()
    x = (Point.on_edge("e1", F(1, 4)), Point.on_edge("e1", F(3, 4)))
    comps = complement_components(theta, x)
    middle = component_of(comps, Point.on_edge("e1", F(1, 2)))
    assert middle.is_interval
    assert is_simply_connected(theta, middle, extra=x[0])
    big = component_of(comps, Point.at_vertex("u"))
    # the big component contains the cycle e2 + e3
    assert not is_simply_connected(theta, big)

    star = catalog.star_3()
    comps = complement_components(star, (Point.on_edge("e1", F(1, 2)),))
    bushy = component_of(comps, Point.at_vertex("c"))
    assert is_simply_connected(star, bushy)
    assert is_simply_connected(star, bushy, extra=Point.on_edge("e1", F(1, 2)))


def test_extra_must_border():
    g = catalog.theta()
    x = (Point.at_vertex("u"), Point.at_vertex("w"))
    comps = complement_components(g, x)
    with pytest.raises(GeometryError):
        is_simply_connected(g, comps[0], extra=Point.on_edge(comps[1].pieces[0][0], F(1, 2)))


def test_pieces_partition_total_length(all_graphs, rng):
    # pieces plus tokens account for every edge exactly
    for g in all_graphs.values():
        for n in (1, 2, 3):
            x = random_config(g, n, rng)
            comps = complement_components(g, x)
            per_edge = {e: [] for e in g.edge_ids}
            for c in comps:
                for e, lo, hi in c.pieces:
                    per_edge[e].append((lo, hi))
            for e, ivs in per_edge.items():
                ivs.sort()
                cuts = sorted(p.t for p in x if p.edge == e)
                expected = list(zip([Fraction(0)] + cuts, cuts + [Fraction(1)]))
                assert ivs == expected, (e, ivs, expected)


def test_tree_interior_tokens_count(all_graphs, rng):
    # on a tree, m interior tokens leave m + 1 components
    for name in ("interval", "star_3"):
        g = all_graphs[name]
        for m in (1, 2, 3):
            x = random_config(g, m, rng, vertex_prob=0.0)
            assert len(complement_components(g, x)) == m + 1


def test_component_json_roundtrip(theta):
    comps = complement_components(theta, (Point.on_edge("e1", F(1, 3)),))
    c = comps[0]
    assert Component.from_json(c.to_json()) == c
