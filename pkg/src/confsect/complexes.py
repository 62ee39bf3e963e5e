"""Cube-complex model of the n-token configuration space of a graph.

A k-face distributes the indices 1..n over three kinds of slots: an ordered
tuple per positive edge (tokens spread along the edge), at most one index
per branched vertex, and exactly k *moving* indices attached to oriented
edges whose head is branched (a moving token slides from the edge interior
onto that head).  Every index is used exactly once, and each branched vertex
carries at most one index counting both its own slot and the moving slots
aimed at it.

0-faces realize as configurations with tokens spread evenly on each edge
(slot j of l sits at parameter j/(l+1)) and vertex tokens on their vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .geometry import Point
from .graphs import Graph


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Face:
    """A face of the complex; dimension = number of moving indices.

    ``edge_tuples``: ((edge, (i1, i2, ...)), ...) nonempty tuples only,
    ordered along the edge's positive direction, sorted by edge id.
    ``vertex_tokens``: ((vertex, index), ...) sorted.
    ``movers``: ((edge, direction, index), ...) sorted; direction +1 moves
    toward the head, -1 toward the tail.
    """

    edge_tuples: tuple
    vertex_tokens: tuple
    movers: tuple

    @staticmethod
    def make(edge_tuples, vertex_tokens, movers=()) -> "Face":
        return Face(
            tuple(sorted((e, tuple(idx)) for e, idx in edge_tuples if idx)),
            tuple(sorted(vertex_tokens)),
            tuple(sorted(movers)),
        )

    @property
    def dim(self) -> int:
        return len(self.movers)

    def face_id(self) -> str:
        parts = [f"{e}:{','.join(map(str, idx))}" for e, idx in self.edge_tuples]
        parts += [f"{v}={i}" for v, i in self.vertex_tokens]
        parts += [f"{e}{'+' if d > 0 else '-'}>{i}" for e, d, i in self.movers]
        return "|".join(parts)

    def to_json(self):
        return self.face_id()


def mover_head(g: Graph, e: str, direction: int) -> str:
    return g.head(e) if direction > 0 else g.tail(e)


def validate_face(g: Graph, n: int, f: Face):
    used = []
    for e, idx in f.edge_tuples:
        if e not in g.edge_ids:
            raise ComplexError(f"unknown edge {e!r}")
        used.extend(idx)
    heads = []
    for v, i in f.vertex_tokens:
        if v not in g.branched_vertices:
            raise ComplexError(f"vertex slot at non-branched vertex {v!r}")
        used.append(i)
        heads.append(v)
    for e, d, i in f.movers:
        v = mover_head(g, e, d)
        if v not in g.branched_vertices:
            raise ComplexError(f"moving index on edge {e!r} with non-branched head")
        used.append(i)
        heads.append(v)
    if sorted(used) != list(range(1, n + 1)):
        raise ComplexError("indices must be exactly 1..n, each used once")
    if len(set(heads)) != len(heads):
        raise ComplexError("a branched vertex carries more than one index")


def enumerate_faces(g: Graph, n: int, k: int) -> list:
    """All k-faces in deterministic order."""
    if g.is_circle:
        raise ComplexError(
            "the one-vertex loop (circle) has no branched vertices and no "
            "usable complex; build its sections directly instead"
        )
    if n < 1:
        raise ComplexError("need at least one token")
    oriented = [
        (e, d)
        for e in g.edge_ids
        for d in (1, -1)
        if mover_head(g, e, d) in g.branched_vertices
    ]
    faces = []
    indices = list(range(1, n + 1))
    for mover_indices in combinations(indices, k):
        for oe_subset in combinations(oriented, k):
            heads = [mover_head(g, e, d) for e, d in oe_subset]
            if len(set(heads)) != len(heads):
                continue
            for perm in permutations(oe_subset):
                movers = tuple((e, d, i) for i, (e, d) in zip(mover_indices, perm))
                banned = {mover_head(g, e, d) for e, d, _ in movers}
                rest = [i for i in indices if i not in mover_indices]
                faces.extend(
                    _distribute(g, rest, movers, banned)
                )
    return faces


def _distribute(g, rest, movers, banned_vertices):
    branched = [v for v in g.branched_vertices if v not in banned_vertices]
    tuples = {e: [] for e in g.edge_ids}
    at_vertex = {}
    out = []

    def rec(pos):
        if pos == len(rest):
            out.append(
                Face.make(
                    ((e, tuple(t)) for e, t in tuples.items()),
                    at_vertex.items(),
                    movers,
                )
            )
            return
        i = rest[pos]
        for e in g.edge_ids:
            tup = tuples[e]
            for slot in range(len(tup) + 1):
                tup.insert(slot, i)
                rec(pos + 1)
                tup.pop(slot)
        for v in branched:
            if v not in at_vertex:
                at_vertex[v] = i
                rec(pos + 1)
                del at_vertex[v]

    rec(0)
    return out


def boundary(g: Graph, f: Face, oriented_edge) -> tuple:
    """The two bounding faces (plus, minus) obtained by stopping one mover.

    ``plus`` parks the moving token on the head vertex; ``minus`` parks it in
    the edge interior, appended at the head end of the edge's tuple (back of
    the tuple for a positively oriented move, front otherwise).
    """
    e, d = oriented_edge
    match = [m for m in f.movers if (m[0], m[1]) == (e, d)]
    if not match:
        raise ComplexError(f"face has no moving index on {e!r} direction {d}")
    (_, _, i) = match[0]
    movers = tuple(m for m in f.movers if m != match[0])
    v = mover_head(g, e, d)
    plus = Face.make(f.edge_tuples, f.vertex_tokens + ((v, i),), movers)
    tuples = dict(f.edge_tuples)
    tup = list(tuples.get(e, ()))
    if d > 0:
        tup.append(i)
    else:
        tup.insert(0, i)
    tuples[e] = tuple(tup)
    minus = Face.make(tuples.items(), f.vertex_tokens, movers)
    return plus, minus


def realize_vertex(g: Graph, f: Face) -> tuple:
    """Embed a 0-face as a configuration: tuple position j of l on an edge
    sits at parameter j/(l+1); vertex indices sit on their vertices."""
    if f.dim != 0:
        raise ComplexError("only 0-faces realize as configurations")
    n = sum(len(idx) for _, idx in f.edge_tuples) + len(f.vertex_tokens)
    points = [None] * n
    for e, idx in f.edge_tuples:
        l = len(idx)
        for j, i in enumerate(idx, start=1):
            points[i - 1] = Point.on_edge(e, Fraction(j, l + 1))
    for v, i in f.vertex_tokens:
        points[i - 1] = Point.at_vertex(v)
    return tuple(points)


@dataclass(frozen=True)
class Skeleton:
    """1-skeleton: nodes are 0-face ids; each edge records its 1-face."""

    nodes: tuple  # face ids
    edges: tuple  # (one_face_id, minus_id, plus_id)
    node_component: dict  # face id -> component index

    @property
    def component_count(self) -> int:
        return len(set(self.node_component.values())) if self.node_component else 0


def one_skeleton(g: Graph, n: int) -> Skeleton:
    zero = enumerate_faces(g, n, 0)
    one = enumerate_faces(g, n, 1)
    ids = [f.face_id() for f in zero]
    edges = []
    for f in one:
        e, d, _ = f.movers[0]
        plus, minus = boundary(g, f, (e, d))
        edges.append((f.face_id(), minus.face_id(), plus.face_id()))
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    roots = {}
    comp = {}
    for i in ids:
        r = find(i)
        comp[i] = roots.setdefault(r, len(roots))
    return Skeleton(tuple(ids), tuple(edges), comp)


@dataclass(frozen=True)
class ComplexStats:
    cells_per_dim: tuple
    euler: int
    dim: int
    skeleton_components: int

    def to_json(self):
        return {
            "cells": list(self.cells_per_dim),
            "euler": self.euler,
            "dim": self.dim,
            "skeleton_components": self.skeleton_components,
        }


def complex_stats(g: Graph, n: int) -> ComplexStats:
    max_dim = min(len(g.branched_vertices), n)
    counts = []
    for k in range(max_dim + 1):
        counts.append(len(enumerate_faces(g, n, k)))
    while counts and counts[-1] == 0:
        counts.pop()
    euler = sum((-1) ** k * c for k, c in enumerate(counts))
    skel = one_skeleton(g, n)
    return ComplexStats(
        cells_per_dim=tuple(counts),
        euler=euler,
        dim=len(counts) - 1,
        skeleton_components=skel.component_count,
    )


def skeleton_dot(g: Graph, n: int) -> str:
    """Graphviz DOT rendering of the 1-skeleton."""
    skel = one_skeleton(g, n)
    lines = ["graph skeleton {"]
    for node in skel.nodes:
        lines.append(f'  "{node}";')
    for one_id, a, b in skel.edges:
        lines.append(f'  "{a}" -- "{b}" [label="{one_id}"];')
    lines.append("}")
    return "\n".join(lines)
