"""Points, configurations, and connected components of a punctured graph.

A configuration is an ordered tuple of pairwise-distinct points (tokens).
The complement of a configuration decomposes into connected components; each
is stored in a canonical combinatorial form (open edge sub-intervals plus
the unoccupied vertices it contains) so components compare by equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    """A vertex or an edge-interior location (exact rational parameter)."""

    vertex: str | None = None
    edge: str | None = None
    t: Fraction | None = None

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, "", Fraction(0))
        return (1, "", self.edge, self.t)

    @staticmethod
    def at_vertex(v: str) -> "Point":
        return Point(vertex=v)

    @staticmethod
    def on_edge(e: str, t) -> "Point":
        t = Fraction(t)
        if not 0 < t < 1:
            raise GeometryError(f"edge parameter {t} not strictly inside (0, 1)")
        return Point(edge=e, t=t)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def to_json(self):
        if self.is_vertex:
            return {"vertex": self.vertex}
        return {"edge": self.edge, "t": str(self.t)}

    @staticmethod
    def from_json(data) -> "Point":
        if "vertex" in data:
            return Point.at_vertex(data["vertex"])
        return Point.on_edge(data["edge"], Fraction(data["t"]))


def check_point(g: Graph, p: Point):
    if p.is_vertex:
        if p.vertex not in g.vertex_ids:
            raise GeometryError(f"unknown vertex {p.vertex!r}")
    else:
        if p.edge not in g.edge_ids:
            raise GeometryError(f"unknown edge {p.edge!r}")
        if not 0 < p.t < 1:
            raise GeometryError(f"parameter {p.t} outside (0, 1)")


def check_configuration(g: Graph, points) -> tuple:
    """Validate an ordered tuple of pairwise-distinct on-graph points."""
    pts = tuple(points)
    for p in pts:
        check_point(g, p)
    if len(set(pts)) != len(pts):
        raise GeometryError("configuration has coincident tokens")
    return pts


@dataclass(frozen=True)
class Component:
    """One connected component of the complement of a configuration.

    ``pieces`` are open intervals (edge, lo, hi) with 0 <= lo < hi <= 1;
    interval endpoints at 0/1 abut a vertex, interior endpoints abut tokens.
    ``vertices`` are the unoccupied vertices the component contains.  Both
    are sorted, so equality and hashing are structural.
    """

    pieces: tuple
    vertices: tuple

    @staticmethod
    def make(pieces, vertices) -> "Component":
        return Component(tuple(sorted(pieces)), tuple(sorted(vertices)))

    def contains_point(self, p: Point) -> bool:
        if p.is_vertex:
            return p.vertex in self.vertices
        return any(e == p.edge and lo < p.t < hi for e, lo, hi in self.pieces)

    @property
    def is_interval(self) -> bool:
        """Single edge sub-interval containing no vertex."""
        return not self.vertices and len(self.pieces) == 1

    def sort_key(self):
        return (self.pieces, self.vertices)

    def to_json(self):
        return {
            "pieces": [{"edge": e, "lo": str(lo), "hi": str(hi)} for e, lo, hi in self.pieces],
            "vertices": list(self.vertices),
        }

    @staticmethod
    def from_json(data) -> "Component":
        pieces = [(p["edge"], Fraction(p["lo"]), Fraction(p["hi"])) for p in data["pieces"]]
        return Component.make(pieces, data["vertices"])


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def complement_components(g: Graph, config) -> tuple:
    """All connected components of the graph minus the tokens, canonical.

    Each edge is split at its interior tokens; the resulting open arcs are
    glued through unoccupied vertices with a union-find.
    """
    occupied = {p.vertex for p in config if p.is_vertex}
    on_edge = {}
    for p in config:
        if not p.is_vertex:
            on_edge.setdefault(p.edge, []).append(p.t)
    uf = _UnionFind()
    arcs = []
    for e in g.edge_ids:
        cuts = sorted(on_edge.get(e, []))
        params = [Fraction(0)] + cuts + [Fraction(1)]
        tail, head = g.endpoints(e)
        for lo, hi in zip(params, params[1:]):
            arc = ("arc", e, lo, hi)
            arcs.append(arc)
            uf.add(arc)
            if lo == 0 and tail not in occupied:
                uf.add(("v", tail))
                uf.union(("v", tail), arc)
            if hi == 1 and head not in occupied:
                uf.add(("v", head))
                uf.union(("v", head), arc)
    for v in g.vertex_ids:
        if v not in occupied:
            uf.add(("v", v))
    groups = {}
    for arc in arcs:
        groups.setdefault(uf.find(arc), []).append(arc)
    vert_groups = {}
    for v in g.vertex_ids:
        if v not in occupied:
            vert_groups.setdefault(uf.find(("v", v)), []).append(v)
    comps = []
    for root, members in groups.items():
        pieces = [(e, lo, hi) for _, e, lo, hi in members]
        verts = vert_groups.get(root, [])
        comps.append(Component.make(pieces, verts))
    return tuple(sorted(comps, key=Component.sort_key))


def component_of(components, p: Point) -> Component:
    """The unique component containing p; p must not be a token position."""
    for c in components:
        if c.contains_point(p):
            return c
    raise GeometryError(f"point {p} is occupied or not in any component")


def borders(g: Graph, c: Component, q: Point) -> bool:
    """True iff q lies in the closure of the component."""
    if q.is_vertex:
        if q.vertex in c.vertices:
            return True
        for e, lo, hi in c.pieces:
            tail, head = g.endpoints(e)
            if (lo == 0 and tail == q.vertex) or (hi == 1 and head == q.vertex):
                return True
        return False
    return any(e == q.edge and lo <= q.t <= hi for e, lo, hi in c.pieces)


def _piece_end_nodes(g, c, piece, extra):
    """Attachment nodes of a piece's two boundary points, for cycle checks."""
    e, lo, hi = piece
    tail, head = g.endpoints(e)
    nodes = []
    for side, param, vert in (("lo", lo, tail), ("hi", hi, head)):
        if param in (0, 1):
            boundary = Point.at_vertex(vert)
        else:
            boundary = Point(edge=e, t=param)
        if boundary.is_vertex and boundary.vertex in c.vertices:
            nodes.append(("v", boundary.vertex))
        elif extra is not None and boundary == extra:
            nodes.append(("extra",))
        else:
            nodes.append(("leaf", e, side, param))
    return nodes


def is_simply_connected(g: Graph, c: Component, extra: Point | None = None) -> bool:
    """True iff the component (optionally with one boundary point adjoined)
    contains no cycle."""
    if extra is not None and not borders(g, c, extra):
        raise GeometryError("extra point does not border the component")
    uf = _UnionFind()
    for piece in c.pieces:
        a, b = _piece_end_nodes(g, c, piece, extra)
        uf.add(a)
        uf.add(b)
        if uf.find(a) == uf.find(b):
            return False
        uf.union(a, b)
    return True
