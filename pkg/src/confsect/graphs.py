"""Finite metric graphs with unit-length edges.

A graph here is a connected 1-complex: named vertices, named edges, every
edge of length 1 with a fixed positive direction tail -> head (loops have
tail == head).  The usual cellular convention applies: no vertex may have
degree 2, except for the one-vertex one-loop presentation of the circle.
A *branched* vertex has degree >= 3, a *free* vertex degree 1.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction


class GraphError(ValueError):
    """Malformed or unsupported graph description."""


class Graph:
    """Immutable connected graph with unit edge lengths.

    Construct via :func:`load_graph` or directly from ``vertices`` (iterable
    of ids) and ``edges`` (mapping id -> (tail, head)).
    """

    def __init__(self, vertices, edges):
        self.vertex_ids = tuple(sorted(dict.fromkeys(vertices)))
        items = sorted(edges.items()) if isinstance(edges, dict) else sorted(edges)
        self.edge_ids = tuple(e for e, _ in items)
        self._ends = {e: (tail, head) for e, (tail, head) in items}
        self._validate()
        self._degree = {v: 0 for v in self.vertex_ids}
        self._vertex_ends = {v: [] for v in self.vertex_ids}
        for e in self.edge_ids:
            tail, head = self._ends[e]
            self._degree[tail] += 1
            self._degree[head] += 1
            self._vertex_ends[tail].append((e, 0))
            self._vertex_ends[head].append((e, 1))
        for v in self.vertex_ids:
            self._vertex_ends[v] = tuple(sorted(self._vertex_ends[v]))
        self._check_degrees()
        self._dist = self._vertex_distances()
        self._nonsep = {e: self._edge_on_cycle(e) for e in self.edge_ids}

    # -- structure ---------------------------------------------------------

    def tail(self, e):
        return self._ends[e][0]

    def head(self, e):
        return self._ends[e][1]

    def endpoints(self, e):
        return self._ends[e]

    def is_loop(self, e):
        tail, head = self._ends[e]
        return tail == head

    def degree(self, v):
        return self._degree[v]

    def vertex_ends(self, v):
        """All edge ends at v as (edge, end) with end 0 = tail, 1 = head."""
        return self._vertex_ends[v]

    @property
    def branched_vertices(self):
        return tuple(v for v in self.vertex_ids if self._degree[v] >= 3)

    @property
    def free_vertices(self):
        return tuple(v for v in self.vertex_ids if self._degree[v] == 1)

    @property
    def is_circle(self):
        """True for the one-vertex one-loop presentation of the circle."""
        return len(self.vertex_ids) == 1 and len(self.edge_ids) == 1 and self.is_loop(self.edge_ids[0])

    def neighbors(self, v):
        out = set()
        for e, end in self._vertex_ends[v]:
            tail, head = self._ends[e]
            out.add(head if end == 0 else tail)
        return sorted(out)

    def vertex_distance(self, u, v):
        """Integer shortest-path distance between two vertices."""
        return self._dist[u][v]

    def is_separating_edge(self, e):
        """True iff removing one interior point of e disconnects the graph."""
        return not self._nonsep[e]

    # -- validation --------------------------------------------------------

    def _validate(self):
        if not self.vertex_ids:
            raise GraphError("graph has no vertices")
        if not self.edge_ids:
            raise GraphError("graph has no edges")
        if len(set(self.edge_ids)) != len(self.edge_ids):
            raise GraphError("duplicate edge id")
        vs = set(self.vertex_ids)
        for e, (tail, head) in self._ends.items():
            if tail not in vs or head not in vs:
                raise GraphError(f"edge {e!r} has unknown endpoint")
        # connectivity
        seen = {self.vertex_ids[0]}
        queue = deque(seen)
        adj = {v: set() for v in self.vertex_ids}
        for tail, head in self._ends.values():
            adj[tail].add(head)
            adj[head].add(tail)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if seen != vs:
            raise GraphError("graph is not connected")

    def _check_degrees(self):
        if self.is_circle:
            return
        for v in self.vertex_ids:
            if self._degree[v] == 2:
                raise GraphError(
                    f"vertex {v!r} has degree 2; suppress it (merge its two edges) "
                    "or load with suppress_degree2=True / --suppress2"
                )
            if self._degree[v] == 0:
                raise GraphError(f"vertex {v!r} is isolated")

    # -- precomputed tables --------------------------------------------------

    def _vertex_distances(self):
        dist = {}
        for s in self.vertex_ids:
            d = {s: 0}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.neighbors(u):
                    if w not in d:
                        d[w] = d[u] + 1
                        queue.append(w)
            dist[s] = d
        return dist

    def _edge_on_cycle(self, e):
        if self.is_loop(e):
            return True
        tail, head = self._ends[e]
        # connected in G minus e?
        seen = {tail}
        queue = deque([tail])
        while queue:
            u = queue.popleft()
            for e2, end in self._vertex_ends[u]:
                if e2 == e:
                    continue
                t2, h2 = self._ends[e2]
                w = h2 if end == 0 else t2
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return head in seen

    # -- misc ----------------------------------------------------------------

    def to_json(self):
        return {
            "vertices": list(self.vertex_ids),
            "edges": [
                {"id": e, "tail": self.tail(e), "head": self.head(e)}
                for e in self.edge_ids
            ],
        }

    def __repr__(self):
        return f"Graph(|V|={len(self.vertex_ids)}, |E|={len(self.edge_ids)})"


def load_graph(description, suppress_degree2=False):
    """Build a validated Graph from a JSON string or parsed dict.

    Schema: ``{"vertices": ["a", ...], "edges": [{"id": "e1", "tail": "a",
    "head": "b"}, ...]}``; loops have tail == head.  With
    ``suppress_degree2`` the loader merges away degree-2 vertices (each merge
    replaces two unit edges by one) before validating.
    """
    if isinstance(description, str):
        try:
            description = json.loads(description)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(description, dict):
        raise GraphError("description must be a JSON object")
    try:
        vertices = list(description["vertices"])
        edge_list = list(description["edges"])
    except KeyError as exc:
        raise GraphError(f"missing field {exc}") from exc
    edges = {}
    for rec in edge_list:
        try:
            e, tail, head = rec["id"], rec["tail"], rec["head"]
        except (TypeError, KeyError) as exc:
            raise GraphError(f"bad edge record {rec!r}") from exc
        if e in edges:
            raise GraphError(f"duplicate edge id {e!r}")
        edges[e] = (tail, head)
    if suppress_degree2:
        vertices, edges = _suppress_degree2(vertices, edges)
    return Graph(vertices, edges)


def _suppress_degree2(vertices, edges):
    """Merge away degree-2 vertices; a fully degree-2 cycle becomes one loop."""
    vertices = list(vertices)
    edges = dict(edges)
    while True:
        degree = {v: 0 for v in vertices}
        ends = {v: [] for v in vertices}
        for e, (tail, head) in edges.items():
            degree[tail] += 1
            degree[head] += 1
            ends[tail].append((e, 0))
            ends[head].append((e, 1))
        candidates = [
            v for v in sorted(vertices)
            if degree[v] == 2 and len({e for e, _ in ends[v]}) == 2
        ]
        if not candidates:
            return vertices, edges
        v = candidates[0]
        (e1, end1), (e2, end2) = sorted(ends[v])
        a = edges[e1][1 - end1]
        b = edges[e2][1 - end2]
        merged = f"{e1}+{e2}"
        while merged in edges:
            merged += "'"
        del edges[e1], edges[e2]
        edges[merged] = (a, b)
        vertices.remove(v)


def euler_characteristic(g: Graph) -> int:
    """Vertices minus edges."""
    return len(g.vertex_ids) - len(g.edge_ids)


@dataclass(frozen=True)
class CoreReduction:
    """Result of deleting pendant trees: the core plus a collapse map.

    ``collapsed`` sends each removed vertex/edge id to its attachment point
    in the core, encoded as ``("vertex", v)`` or ``("edge", e, param)``.
    """

    core: Graph
    collapsed: dict


def core_reduction(g: Graph) -> CoreReduction:
    """Delete free edges and suppress the resulting degree-2 vertices until
    no free vertex remains.  Requires chi(g) <= 0 (a tree has no core)."""
    if euler_characteristic(g) > 0:
        raise GraphError("graph is a tree; it has no core")
    vertices = list(g.vertex_ids)
    edges = {e: g.endpoints(e) for e in g.edge_ids}
    attach = {}  # removed id -> surviving vertex it hung from

    def degrees():
        deg = {v: 0 for v in vertices}
        for tail, head in edges.values():
            deg[tail] += 1
            deg[head] += 1
        return deg

    while True:
        deg = degrees()
        free = sorted(v for v in vertices if deg[v] == 1)
        if not free:
            break
        for v in free:
            incident = [e for e, (t, h) in edges.items() if v in (t, h)]
            if not incident:
                continue
            e = incident[0]
            tail, head = edges[e]
            other = head if tail == v else tail
            del edges[e]
            vertices.remove(v)
            attach[v] = other
            attach[e] = other

    # resolve attachment chains onto surviving vertices
    def resolve(v):
        while v not in vertices:
            v = attach[v]
        return v

    attach = {k: resolve(v) for k, v in attach.items()}

    # suppress leftover degree-2 vertices, tracking their landing spots
    deg = degrees()
    suppressed = {}
    merged_members = {e: [(e, 0, 1)] for e in edges}  # new edge -> [(old edge, lo, hi)] spans
    while True:
        ends = {v: [] for v in vertices}
        for e, (tail, head) in edges.items():
            ends[tail].append((e, 0))
            ends[head].append((e, 1))
        deg = degrees()
        cands = [
            v for v in sorted(vertices)
            if deg[v] == 2 and len({e for e, _ in ends[v]}) == 2
        ]
        if not cands:
            break
        v = cands[0]
        (e1, end1), (e2, end2) = sorted(ends[v])
        a = edges[e1][1 - end1]
        b = edges[e2][1 - end2]
        merged = f"{e1}+{e2}"
        while merged in edges:
            merged += "'"
        del edges[e1], edges[e2]
        edges[merged] = (a, b)
        vertices.remove(v)
        suppressed[v] = (merged, Fraction(1, 2))
        merged_members[merged] = merged_members.pop(e1) + merged_members.pop(e2)

    collapsed = {}
    for k, v in attach.items():
        if v in vertices:
            collapsed[k] = ("vertex", v)
        else:
            e, t = suppressed[v]
            collapsed[k] = ("edge", e, t)
    for v, (e, t) in suppressed.items():
        collapsed[v] = ("edge", e, t)
    core = Graph(vertices, edges)
    return CoreReduction(core=core, collapsed=collapsed)


def classify_core(g: Graph) -> str:
    """Classify a graph with no free vertices as one of
    ``circle | infinity | theta | dumbbell | other``."""
    if g.free_vertices:
        raise GraphError("classify_core expects a graph without free vertices")
    nv, ne = len(g.vertex_ids), len(g.edge_ids)
    if g.is_circle:
        return "circle"
    if nv == 1 and ne == 2 and all(g.is_loop(e) for e in g.edge_ids):
        return "infinity"
    if nv == 2 and ne == 3:
        loops = [e for e in g.edge_ids if g.is_loop(e)]
        if not loops:
            return "theta"  # three parallel edges between two vertices
        if len(loops) == 2:
            u, w = g.vertex_ids
            loop_vertices = {g.tail(e) for e in loops}
            if loop_vertices == {u, w}:
                return "dumbbell"
    return "other"


def maximal_subtree(g: Graph) -> frozenset:
    """Edge ids of a spanning tree; the complement has exactly 1 - chi edges."""
    seen = {g.vertex_ids[0]}
    tree = set()
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for e, end in g.vertex_ends(u):
            if g.is_loop(e):
                continue
            tail, head = g.endpoints(e)
            w = head if end == 0 else tail
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    return frozenset(tree)


def _point_ends(g, p):
    """(vertex, cost) pairs for routing a point through edge endpoints."""
    if p.vertex is not None:
        return ((p.vertex, Fraction(0)),)
    tail, head = g.endpoints(p.edge)
    return ((tail, p.t), (head, 1 - p.t))


def shortest_distance(g: Graph, p, q) -> Fraction:
    """Exact shortest-path distance between two points of the graph."""
    if p == q:
        return Fraction(0)
    best = None
    if p.edge is not None and q.edge is not None and p.edge == q.edge:
        best = abs(p.t - q.t)
    for u, cu in _point_ends(g, p):
        for v, cv in _point_ends(g, q):
            cand = cu + g.vertex_distance(u, v) + cv
            if best is None or cand < best:
                best = cand
    return best
