"""Component transitions along basic moves and skeleton edges.

Two kinds of basic move generate every path we need:

* an *interior move*: tokens may leave vertices and slide inside edge
  interiors, but no token ever enters a vertex.  Each complement component
  of the start has exactly one successor, so the transition is a function.
* a *vertex-entry move*: a single token slides straight from an edge
  interior onto a vertex.  The component the mover backed away from maps to
  the component now covering the swept segment; the component that
  contained the vertex fans out over the other edge-end branches at the
  vertex; every untouched component maps to itself.

Skeleton edges of the cube-complex realize as a respacing interior move
followed by a vertex-entry move (into the vertex), or as a single interior
move (out of the vertex).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import Face, boundary, mover_head, realize_vertex
from .geometry import (
    Component,
    Point,
    complement_components,
    component_of,
)
from .graphs import Graph


class MoveError(ValueError):
    pass


# relation rows: source component -> frozenset of possible target components
TransitionRelation = dict


@dataclass(frozen=True)
class InteriorMove:
    """Both configurations plus, for each token that leaves a vertex, the
    edge it enters and the end (0 = tail side, 1 = head side) it enters by.

    ``itineraries`` maps token index (1-based) -> (edge, end); tokens that
    merely slide inside an edge need no entry.
    """

    source: tuple
    target: tuple
    itineraries: tuple = ()


@dataclass(frozen=True)
class VertexEntryMove:
    """Token ``mover`` slides along ``edge`` (direction +1 toward the head,
    -1 toward the tail) from the interior onto the end vertex."""

    mover: int
    edge: str
    direction: int
    source: tuple
    target: tuple


def _tokens_by_edge(config):
    per_edge = {}
    for i, p in enumerate(config, start=1):
        if not p.is_vertex:
            per_edge.setdefault(p.edge, []).append((p.t, i))
    for lst in per_edge.values():
        lst.sort()
    return per_edge


def plan_interior_move(g: Graph, source, target, itineraries=None) -> InteriorMove:
    """Validate an interior move and fill in departure itineraries."""
    if len(source) != len(target):
        raise MoveError("token count changed")
    itins = dict(itineraries or {})
    occupied = {p.vertex for p in source if p.is_vertex}
    for i, (a, b) in enumerate(zip(source, target), start=1):
        if a == b:
            continue
        if not a.is_vertex:
            if b.is_vertex:
                raise MoveError(f"token {i} enters a vertex")
            if b.edge != a.edge:
                raise MoveError(f"token {i} cannot change edges without crossing a vertex")
            continue
        # departure from a vertex
        if b.is_vertex:
            raise MoveError(f"token {i} enters a vertex")
        tail, head = g.endpoints(b.edge)
        if a.vertex not in (tail, head):
            raise MoveError(f"token {i} departs into a non-incident edge")
        if i not in itins:
            if tail == head:
                itins[i] = (b.edge, _loop_departure_end(g, source, target, i, b))
            else:
                itins[i] = (b.edge, 0 if tail == a.vertex else 1)
        e, end = itins[i]
        if e != b.edge:
            raise MoveError(f"token {i} itinerary does not match its target edge")
    # order preservation inside each edge for tokens interior on both sides
    src_edges = _tokens_by_edge(source)
    for e, lst in src_edges.items():
        stay = [(t, i) for t, i in lst if not target[i - 1].is_vertex and target[i - 1].edge == e]
        finals = [target[i - 1].t for _, i in stay]
        if any(x >= y for x, y in zip(finals, finals[1:])):
            raise MoveError(f"tokens cross on edge {e!r}")
    return InteriorMove(tuple(source), tuple(target), tuple(sorted(itins.items())))


def _loop_departure_end(g, source, target, i, b):
    others = [
        target[j - 1].t
        for j in range(1, len(source) + 1)
        if j != i and not target[j - 1].is_vertex and target[j - 1].edge == b.edge
    ]
    if not others:
        return 0 if b.t <= Fraction(1, 2) else 1
    if b.t < min(others):
        return 0
    if b.t > max(others):
        return 1
    raise MoveError(f"token {i} cannot reach its loop target without crossing")


def _find_piece(comps, e, lo=None, hi=None):
    for c in comps:
        for pe, plo, phi in c.pieces:
            if pe == e and (lo is None or plo == lo) and (hi is None or phi == hi):
                return c
    raise MoveError(f"no piece on {e!r} with bounds ({lo}, {hi})")


def _track_intact(src_comp, tgt_comps):
    for c in tgt_comps:
        if c == src_comp:
            return c
    raise MoveError("untouched component not found in the target complement")


def _atomic_departure(g, cur, i, edge, end):
    """Move token i from its vertex a tiny step into ``edge`` through ``end``;
    returns (next configuration, component map for this step)."""
    v = cur[i - 1].vertex
    end_param = Fraction(end)
    occupants = [t for t, j in _tokens_by_edge(cur).get(edge, [])]
    if end == 0:
        inside = min(occupants) if occupants else Fraction(1)
        dep = inside / 2
    else:
        inside = max(occupants) if occupants else Fraction(0)
        dep = (inside + 1) / 2
    nxt = list(cur)
    nxt[i - 1] = Point.on_edge(edge, dep)
    nxt = tuple(nxt)
    src = complement_components(g, cur)
    tgt = complement_components(g, nxt)
    mapping = {}
    for X in src:
        if X.vertices:
            u = X.vertices[0]
            mapping[X] = component_of(tgt, Point.at_vertex(u))
            continue
        (pe, lo, hi) = X.pieces[0]
        tail, head = g.endpoints(pe)
        if (lo, hi) == (0, 1) and tail == head:
            # full loop bounded by its occupied vertex
            if tail == v:
                mapping[X] = component_of(tgt, Point.at_vertex(v))
            else:
                mapping[X] = _track_intact(X, tgt)
            continue
        lo_is_v = lo == 0 and tail == v
        hi_is_v = hi == 1 and head == v
        if not lo_is_v and not hi_is_v:
            mapping[X] = _track_intact(X, tgt)
            continue
        enters_lo = lo_is_v and edge == pe and end == 0
        enters_hi = hi_is_v and edge == pe and end == 1
        if enters_lo:
            mapping[X] = component_of(tgt, Point.on_edge(pe, (dep + hi) / 2))
        elif enters_hi:
            mapping[X] = component_of(tgt, Point.on_edge(pe, (lo + dep) / 2))
        else:
            # the token vacates the vertex without entering this interval
            mapping[X] = component_of(tgt, Point.at_vertex(v))
    return nxt, mapping


def _interior_respace(g, cur, target):
    """Map components across a move where every change is interior."""
    src = complement_components(g, cur)
    tgt = complement_components(g, target)
    mapping = {}

    def final_param(e, bound, side):
        # bound at 0/1 is a vertex; interior bound is a token, look up its end
        if bound in (0, 1):
            return Fraction(bound)
        for j, p in enumerate(cur, start=1):
            if not p.is_vertex and p.edge == e and p.t == bound:
                return target[j - 1].t
        raise MoveError(f"no token at parameter {bound} on {e!r}")

    for X in src:
        if X.vertices:
            mapping[X] = component_of(tgt, Point.at_vertex(X.vertices[0]))
            continue
        (pe, lo, hi) = X.pieces[0]
        lo2 = final_param(pe, lo, "lo")
        hi2 = final_param(pe, hi, "hi")
        if not lo2 < hi2:
            raise MoveError("interval inverted during interior move")
        mapping[X] = component_of(tgt, Point.on_edge(pe, (lo2 + hi2) / 2))
    return mapping


def interior_transition(g: Graph, move: InteriorMove) -> TransitionRelation:
    """The (single-valued) component map of an interior move, as a relation
    with singleton rows."""
    move = plan_interior_move(g, move.source, move.target, dict(move.itineraries))
    cur = move.source
    mapping = {X: X for X in complement_components(g, cur)}
    for i, (edge, end) in move.itineraries:
        cur2, step = _atomic_departure(g, cur, i, edge, end)
        mapping = {X: step[Y] for X, Y in mapping.items()}
        cur = cur2
    step = _interior_respace(g, cur, move.target)
    mapping = {X: step[Y] for X, Y in mapping.items()}
    return {X: frozenset([Y]) for X, Y in mapping.items()}


def plan_vertex_entry(g: Graph, source, mover: int, edge: str, direction: int) -> VertexEntryMove:
    p = source[mover - 1]
    if p.is_vertex or p.edge != edge:
        raise MoveError("mover must start in the interior of the given edge")
    v = mover_head(g, edge, direction)
    if any(q == Point.at_vertex(v) for q in source):
        raise MoveError(f"target vertex {v!r} is occupied")
    end_param = Fraction(1) if direction > 0 else Fraction(0)
    lo, hi = sorted((p.t, end_param))
    for j, q in enumerate(source, start=1):
        if j != mover and not q.is_vertex and q.edge == edge and lo < q.t < hi:
            raise MoveError(f"token {j} blocks the mover on {edge!r}")
    target = list(source)
    target[mover - 1] = Point.at_vertex(v)
    return VertexEntryMove(mover, edge, direction, tuple(source), tuple(target))


def vertex_entry_transition(g: Graph, move: VertexEntryMove) -> TransitionRelation:
    v = mover_head(g, move.edge, move.direction)
    p = move.source[move.mover - 1]
    src = complement_components(g, move.source)
    tgt = complement_components(g, move.target)
    swept_end = 1 if move.direction > 0 else 0
    end_param = Fraction(swept_end)

    ahead = component_of(src, Point.at_vertex(v))
    if move.direction > 0:
        behind = _find_piece(src, move.edge, hi=p.t)
    else:
        behind = _find_piece(src, move.edge, lo=p.t)
    came_from = component_of(tgt, Point.on_edge(move.edge, (p.t + end_param) / 2))
    star = []
    for e2, end2 in g.vertex_ends(v):
        if (e2, end2) == (move.edge, swept_end):
            continue
        germ = _find_piece(tgt, e2, lo=Fraction(0) if end2 == 0 else None,
                           hi=Fraction(1) if end2 == 1 else None)
        star.append(germ)
    fan_out = frozenset(star)

    rows = {}
    for X in src:
        if X == ahead:
            rows[X] = fan_out
        elif X == behind:  # behind == ahead already handled above
            rows[X] = frozenset([came_from])
        else:
            rows[X] = frozenset([_track_intact(X, tgt)])
    return rows


def _into_vertex_relation(g, one_face: Face, mid_param=None) -> tuple:
    """(minus_face, plus_face, relation) for the into-vertex direction."""
    e, d, mover = one_face.movers[0]
    plus, minus = boundary(g, one_face, (e, d))
    P = realize_vertex(g, minus)
    Q = realize_vertex(g, plus)
    end_param = Fraction(1) if d > 0 else Fraction(0)
    if mid_param is None:
        mid_param = (P[mover - 1].t + end_param) / 2
    z = list(Q)
    z[mover - 1] = Point.on_edge(e, mid_param)
    z = tuple(z)
    m1 = plan_interior_move(g, P, z)
    r1 = interior_transition(g, m1)
    m2 = plan_vertex_entry(g, z, mover, e, d)
    r2 = vertex_entry_transition(g, m2)
    rel = {}
    for X, mids in r1.items():
        out = set()
        for Y in mids:
            out |= r2[Y]
        rel[X] = frozenset(out)
    return minus, plus, rel


def _out_of_vertex_relation(g, one_face: Face) -> tuple:
    """(plus_face, minus_face, relation) for the out-of-vertex direction."""
    e, d, mover = one_face.movers[0]
    plus, minus = boundary(g, one_face, (e, d))
    P = realize_vertex(g, minus)
    Q = realize_vertex(g, plus)
    m = plan_interior_move(g, Q, P)
    return plus, minus, interior_transition(g, m)


def skeleton_edge_relation(g: Graph, one_face: Face, direction: str) -> TransitionRelation:
    """Relation across a skeleton edge.

    ``direction`` is ``"into"`` (mover slides onto the vertex; rows may fan
    out) or ``"out"`` (mover leaves the vertex; a single-valued function).
    """
    if one_face.dim != 1:
        raise MoveError("skeleton edges correspond to 1-faces")
    if direction == "into":
        return _into_vertex_relation(g, one_face)[2]
    if direction == "out":
        return _out_of_vertex_relation(g, one_face)[2]
    raise MoveError("direction must be 'into' or 'out'")
