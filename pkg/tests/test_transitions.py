from fractions import Fraction

import pytest

from confsect import catalog
from confsect.complexes import Face, enumerate_faces
from confsect.geometry import Point, complement_components, component_of
from confsect.transitions import (
    MoveError,
    _into_vertex_relation,
    _out_of_vertex_relation,
    interior_transition,
    plan_interior_move,
    plan_vertex_entry,
    skeleton_edge_relation,
    vertex_entry_transition,
)


def F(a, b):
    return Fraction(a, b)


def test_interior_star_leaves_center(star3):
    # token departs the center into e1: every leaf branch follows its vertex
    src = (Point.at_vertex("c"),)
    tgt = (Point.on_edge("e1", F(1, 3)),)
    rel = interior_transition(star3, plan_interior_move(star3, src, tgt))
    src_comps = complement_components(star3, src)
    tgt_comps = complement_components(star3, tgt)
    for X in src_comps:
        (Y,) = rel[X]
        leaf = X.vertices[0]
        assert Y == component_of(tgt_comps, Point.at_vertex(leaf))
    e1_side = component_of(src_comps, Point.on_edge("e1", F(1, 2)))
    (img,) = rel[e1_side]
    assert Point.at_vertex("l1").vertex in img.vertices
    assert len(img.pieces) == 1


def test_interior_respacing_tracks_interval(theta):
    src = (Point.on_edge("e1", F(1, 4)), Point.on_edge("e1", F(2, 4)))
    tgt = (Point.on_edge("e1", F(1, 3)), Point.on_edge("e1", F(2, 3)))
    rel = interior_transition(theta, plan_interior_move(theta, src, tgt))
    src_comps = complement_components(theta, src)
    middle = component_of(src_comps, Point.on_edge("e1", F(3, 8)))
    (img,) = rel[middle]
    assert img.pieces == (("e1", F(1, 3), F(2, 3)),)


def test_interior_untouched_component_is_fixed(theta):
    src = (Point.on_edge("e1", F(1, 4)), Point.on_edge("e1", F(3, 4)))
    tgt = (Point.on_edge("e1", F(1, 5)), Point.on_edge("e1", F(3, 4)))
    rel = interior_transition(theta, plan_interior_move(theta, src, tgt))
    src_comps = complement_components(theta, src)
    big = component_of(src_comps, Point.at_vertex("u"))
    (img,) = rel[big]
    assert set(img.vertices) == {"u", "w"}


def test_interior_rejects_vertex_entry(theta):
    src = (Point.on_edge("e1", F(1, 2)),)
    tgt = (Point.at_vertex("w"),)
    with pytest.raises(MoveError, match="enters a vertex"):
        plan_interior_move(theta, src, tgt)
    with pytest.raises(MoveError, match="vertex"):
        plan_interior_move(
            theta,
            (Point.on_edge("e1", F(1, 2)),),
            (Point.on_edge("e2", F(1, 2)),),
        )


def test_interior_loop_departure_tracks_through_the_vertex():
    # loop with a second token: a token leaving the vertex through the far
    # end grows its old bounding interval through the vertex
    g = catalog.circle()
    src = (Point.at_vertex("v"), Point.on_edge("e1", F(1, 2)))
    tgt = (Point.on_edge("e1", F(3, 4)), Point.on_edge("e1", F(1, 2)))
    rel = interior_transition(g, plan_interior_move(g, src, tgt))
    src_comps = complement_components(g, src)
    tgt_comps = complement_components(g, tgt)
    low = component_of(src_comps, Point.on_edge("e1", F(1, 4)))
    (img,) = rel[low]
    assert img == component_of(tgt_comps, Point.at_vertex("v"))
    high = component_of(src_comps, Point.on_edge("e1", F(3, 4)))
    (img2,) = rel[high]
    assert img2 == component_of(tgt_comps, Point.on_edge("e1", F(5, 8)))


def test_vertex_entry_star3(star3):
    # n=1: token on e1 slides onto the center
    src = (Point.on_edge("e1", F(1, 4)),)
    move = plan_vertex_entry(star3, src, 1, "e1", -1)  # toward the tail c
    rel = vertex_entry_transition(star3, move)
    src_comps = complement_components(star3, src)
    tgt_comps = complement_components(star3, move.target)
    free_side = component_of(src_comps, Point.on_edge("e1", F(1, 2)))
    big_side = component_of(src_comps, Point.at_vertex("c"))
    e1_leaf = component_of(tgt_comps, Point.on_edge("e1", F(1, 2)))
    e2_leaf = component_of(tgt_comps, Point.on_edge("e2", F(1, 2)))
    e3_leaf = component_of(tgt_comps, Point.on_edge("e3", F(1, 2)))
    assert rel[free_side] == frozenset([e1_leaf])
    assert rel[big_side] == frozenset([e2_leaf, e3_leaf])


def test_vertex_entry_theta_single_token(theta):
    # behind == ahead: the unique component fans out over the non-swept
    # branches at the vertex, which here all belong to one component
    src = (Point.on_edge("e1", F(1, 2)),)
    move = plan_vertex_entry(theta, src, 1, "e1", 1)  # toward w
    rel = vertex_entry_transition(theta, move)
    src_comps = complement_components(theta, src)
    tgt_comps = complement_components(theta, move.target)
    assert len(src_comps) == 1 and len(tgt_comps) == 1
    assert rel[src_comps[0]] == frozenset([tgt_comps[0]])


def test_vertex_entry_far_component_untouched(theta):
    src = (Point.on_edge("e1", F(1, 2)), Point.on_edge("e2", F(1, 4)), Point.on_edge("e2", F(3, 4)))
    move = plan_vertex_entry(theta, src, 1, "e1", 1)
    rel = vertex_entry_transition(theta, move)
    src_comps = complement_components(theta, src)
    far = component_of(src_comps, Point.on_edge("e2", F(1, 2)))
    assert rel[far] == frozenset([far])


def test_vertex_entry_blocked(theta):
    src = (Point.on_edge("e1", F(1, 4)), Point.on_edge("e1", F(1, 2)))
    with pytest.raises(MoveError, match="blocks"):
        plan_vertex_entry(theta, src, 1, "e1", 1)


def test_vertex_entry_free_vertex_dying_interval(star3):
    # moving onto a free vertex: the interval ahead of the mover dies
    src = (Point.on_edge("e1", F(1, 2)),)
    move = plan_vertex_entry(star3, src, 1, "e1", 1)  # head l1 is free
    rel = vertex_entry_transition(star3, move)
    src_comps = complement_components(star3, src)
    dying = component_of(src_comps, Point.on_edge("e1", F(3, 4)))
    assert rel[dying] == frozenset()
    behind = component_of(src_comps, Point.at_vertex("c"))
    (img,) = rel[behind]
    assert img.contains_point(Point.on_edge("e1", F(3, 4)))


def test_skeleton_star3_n1_composition(star3):
    f = Face.make([], [], [("e1", -1, 1)])  # mover 1 on e1 toward the center
    minus, plus, rel = _into_vertex_relation(star3, f)
    P = (Point.on_edge("e1", F(1, 2)),)
    src_comps = complement_components(star3, P)
    free_side = component_of(src_comps, Point.on_edge("e1", F(3, 4)))
    big_side = component_of(src_comps, Point.at_vertex("c"))
    assert len(rel[free_side]) == 1
    assert len(rel[big_side]) == 2


def test_skeleton_reverse_is_function(all_graphs):
    for name in ("theta", "star_3", "infinity"):
        g = all_graphs[name]
        for f in enumerate_faces(g, 2, 1):
            rel = skeleton_edge_relation(g, f, "out")
            for X, ys in rel.items():
                assert len(ys) == 1


def test_adjointness_k2(all_graphs):
    # for every skeleton edge: Y in forward(X) implies backward(Y) == {X}
    for name in ("theta", "star_3", "infinity", "dumbbell", "lollipop"):
        g = all_graphs[name]
        for f in enumerate_faces(g, 2, 1):
            fwd = skeleton_edge_relation(g, f, "into")
            bwd = skeleton_edge_relation(g, f, "out")
            for X, ys in fwd.items():
                for Y in ys:
                    assert bwd[Y] == frozenset([X]), (name, f.face_id())


def test_departure_free_interior_moves_are_bijections(all_graphs):
    # respacing moves (no token leaves a vertex) permute the components;
    # a vertex departure may merge components instead (the vacated vertex
    # reconnects branches), so only the departure-free case is a bijection
    from confsect.complexes import boundary, realize_vertex

    for name in ("theta", "infinity", "dumbbell"):
        g = all_graphs[name]
        for f in enumerate_faces(g, 2, 1):
            e, d, mover = f.movers[0]
            plus, minus = boundary(g, f, (e, d))
            P = realize_vertex(g, minus)
            Q = realize_vertex(g, plus)
            end_param = Fraction(1) if d > 0 else Fraction(0)
            z = list(Q)
            z[mover - 1] = Point.on_edge(e, (P[mover - 1].t + end_param) / 2)
            rel = interior_transition(g, plan_interior_move(g, P, tuple(z)))
            images = [y for ys in rel.values() for y in ys]
            assert len(images) == len(set(images)) == len(rel)


def test_departing_token_can_merge_components(theta):
    # theta with both vertices occupied: the departure vacates a vertex and
    # the two far edges join; the map stays single-valued but not injective
    src = (Point.at_vertex("u"), Point.at_vertex("w"))
    tgt = (Point.at_vertex("u"), Point.on_edge("e1", F(1, 2)))
    rel = interior_transition(theta, plan_interior_move(theta, src, tgt))
    images = {y for ys in rel.values() for y in ys}
    assert len(rel) == 3
    assert len(images) == 2


def test_midpoint_independence(theta, rng):
    for f in enumerate_faces(theta, 2, 1)[:12]:
        e, d, mover = f.movers[0]
        _, _, base = _into_vertex_relation(theta, f)
        # obstruction after respacing sits at l/(l+1); sample other approach points
        from confsect.complexes import boundary, realize_vertex

        plus, minus = boundary(theta, f, (e, d))
        Q = realize_vertex(theta, plus)
        others = sorted(p.t for p in Q if not p.is_vertex and p.edge == e)
        if d > 0:
            lo = others[-1] if others else Fraction(0)
            lo, hi = lo, Fraction(1)
        else:
            hi = others[0] if others else Fraction(1)
            lo, hi = Fraction(0), hi
        for _ in range(5):
            num = rng.randrange(1, 64)
            mid = lo + (hi - lo) * Fraction(num, 64)
            if mid in (lo, hi):
                continue
            _, _, rel = _into_vertex_relation(theta, f, mid_param=mid)
            assert rel == base
