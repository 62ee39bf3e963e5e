"""Search for consistent systems of components on the 0-skeleton.

Variables are 0-faces, domains are the complement components of their
realizations, and every skeleton edge constrains the two labels through the
into-vertex transition relation.  A satisfying assignment is exactly the
discrete shadow any identifying function must cast, so an exhaustive Unsat
is evidence that no section exists; a Sat labeling proves nothing by itself
(the constraints are necessary, not sufficient).

With pairs enabled the solver additionally tracks *distinguished pairs*:
whenever every remaining label of some face is the open interval between
tokens i and j on a non-separating edge, (i, j) is recorded, every other
face whose realization carries i before j adjacently on that edge is forced
to the same interval label, and two recorded pairs with disjoint indices
(or incompatibly ordered shared indices on one edge) refute the branch.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import Face, boundary, enumerate_faces, one_skeleton, realize_vertex
from .geometry import (
    Component,
    Point,
    complement_components,
    component_of,
    is_simply_connected,
)
from .graphs import Graph, euler_characteristic
from .transitions import plan_vertex_entry, skeleton_edge_relation, vertex_entry_transition


class SearchError(ValueError):
    pass


class _BudgetExhausted(Exception):
    pass


# ---------------------------------------------------------------------------
# distinguished pairs


@dataclass(frozen=True)
class DistinguishedPair:
    """Indices (first, second) adjacent in that order along the positive
    direction of a non-separating edge, with the added point between them."""

    first: int
    second: int
    edge: str

    def to_json(self):
        return {"i": self.first, "j": self.second, "edge": self.edge}

    def key(self):
        return f"({self.first},{self.second})@{self.edge}"


def pairs_conflict(p: DistinguishedPair, q: DistinguishedPair) -> str | None:
    """The rule a pair of pairs violates, if any."""
    if not {p.first, p.second} & {q.first, q.second}:
        return "disjoint-indices"
    if p.edge == q.edge:
        if p.second == q.first and p.first != q.second:
            return "incompatible-order"
        if q.second == p.first and q.first != p.second:
            return "incompatible-order"
    return None


def _component_pair(g, config, comp) -> DistinguishedPair | None:
    """The pair witnessed by labeling this component, when it is an interval
    between two tokens on a non-separating edge."""
    if not comp.is_interval:
        return None
    e, lo, hi = comp.pieces[0]
    if g.is_separating_edge(e):
        return None
    tail, head = g.endpoints(e)

    def token_at(param, vert):
        target = Point.at_vertex(vert) if param in (0, 1) else Point.on_edge(e, param)
        for i, p in enumerate(config, start=1):
            if p == target:
                return i
        return None

    i = token_at(lo, tail)
    j = token_at(hi, head)
    if i is None or j is None:
        return None
    return DistinguishedPair(i, j, e)


def _face_pair_slots(g, config):
    """All (pair -> forced interval component) entries this realization can
    witness: token pairs adjacent along one non-separating edge."""
    out = {}
    for e in g.edge_ids:
        if g.is_separating_edge(e):
            continue
        tail, head = g.endpoints(e)
        on_e = []
        for i, p in enumerate(config, start=1):
            if not p.is_vertex and p.edge == e:
                on_e.append((p.t, i))
            elif p.is_vertex and p.vertex == tail:
                on_e.append((Fraction(0), i))
            elif p.is_vertex and p.vertex == head:
                on_e.append((Fraction(1), i))
        on_e.sort()
        for (t1, i), (t2, j) in zip(on_e, on_e[1:]):
            if t1 == t2:
                continue  # loop: same token listed at both ends cannot happen
            forced = Component.make([(e, t1, t2)], [])
            out[DistinguishedPair(i, j, e)] = forced
    return out


def extract_distinguished_pairs(g: Graph, n: int, labeling: dict) -> frozenset:
    """Pairs witnessed by a (partial) labeling keyed face id -> Component."""
    by_id = {f.face_id(): f for f in enumerate_faces(g, n, 0)}
    pairs = set()
    for fid, comp in labeling.items():
        p = _component_pair(g, realize_vertex(g, by_id[fid]), comp)
        if p is not None:
            pairs.add(p)
    return frozenset(pairs)


@dataclass(frozen=True)
class PairRules:
    """Consistency verdict plus the forcing rules a pair set induces."""

    pairs: frozenset
    consistent: bool
    conflicts: tuple

    def forced_component(self, g: Graph, face: Face) -> Component | None:
        slots = _face_pair_slots(g, realize_vertex(g, face))
        for pair, comp in slots.items():
            if pair in self.pairs:
                return comp
        return None


def pair_constraints(pairs) -> PairRules:
    pairs = frozenset(pairs)
    conflicts = []
    ordered = sorted(pairs, key=DistinguishedPair.key)
    for a in range(len(ordered)):
        for b in range(a + 1, len(ordered)):
            rule = pairs_conflict(ordered[a], ordered[b])
            if rule:
                conflicts.append((ordered[a], ordered[b], rule))
    return PairRules(pairs, not conflicts, tuple(conflicts))


# ---------------------------------------------------------------------------
# problem assembly


@dataclass
class _Constraint:
    one_id: str
    minus_id: str
    plus_id: str
    forward: dict  # Component -> frozenset[Component]


class _Problem:
    def __init__(self, g: Graph, n: int):
        self.graph = g
        self.n = n
        zero = enumerate_faces(g, n, 0)
        self.faces = {f.face_id(): f for f in zero}
        self.configs = {fid: realize_vertex(g, f) for fid, f in self.faces.items()}
        self.domains_full = {
            fid: list(complement_components(g, cfg)) for fid, cfg in self.configs.items()
        }
        self.constraints = []
        self.incident = {fid: [] for fid in self.faces}
        for f in enumerate_faces(g, n, 1):
            e, d, _ = f.movers[0]
            plus, minus = boundary(g, f, (e, d))
            rel = skeleton_edge_relation(g, f, "into")
            c = _Constraint(f.face_id(), minus.face_id(), plus.face_id(), rel)
            idx = len(self.constraints)
            self.constraints.append(c)
            self.incident[c.minus_id].append(idx)
            self.incident[c.plus_id].append(idx)
        skel = one_skeleton(g, n)
        groups = {}
        for fid in sorted(self.faces):
            groups.setdefault(skel.node_component[fid], []).append(fid)
        self.components = [groups[k] for k in sorted(groups)]
        # pair bookkeeping (used only when pairs are enabled)
        self.value_pair = {}
        self.pair_slots = {}
        for fid, cfg in self.configs.items():
            self.pair_slots[fid] = _face_pair_slots(g, cfg)
            self.value_pair[fid] = {
                comp: _component_pair(g, cfg, comp) for comp in self.domains_full[fid]
            }


# ---------------------------------------------------------------------------
# certificates


def _comp_key(comp: Component) -> str:
    pieces = "+".join(f"{e}({lo},{hi})" for e, lo, hi in comp.pieces)
    verts = ",".join(comp.vertices)
    return f"{pieces}|{verts}"


@dataclass
class Certificate:
    result: str  # "sat" | "unsat" | "inconclusive"
    labeling: dict | None = None  # face_id -> Component
    trace: tuple | None = None
    flags: tuple = ()
    steps: int = 0

    def to_json(self):
        out = {"result": self.result, "flags": list(self.flags), "steps": self.steps}
        if self.labeling is not None:
            out["labeling"] = {
                fid: comp.to_json() for fid, comp in sorted(self.labeling.items())
            }
        if self.trace is not None:
            out["trace"] = list(self.trace)
        return out


@dataclass
class SearchOptions:
    pairs: bool = False
    budget: int = 10_000_000
    seed: int = 0
    value_order_seed: int | None = None  # shuffles value order (restart harness)


# ---------------------------------------------------------------------------
# the solver


class _Solver:
    def __init__(self, problem: _Problem, face_ids, options: SearchOptions, counter):
        self.p = problem
        self.g = problem.graph
        self.face_ids = list(face_ids)
        self.options = options
        self.counter = counter  # shared [steps] budget cell
        self.trace = []
        if options.value_order_seed is None:
            self.domains = {fid: list(self.p.domains_full[fid]) for fid in self.face_ids}
        else:
            import random

            rng = random.Random(options.value_order_seed)
            self.domains = {}
            for fid in self.face_ids:
                vals = list(self.p.domains_full[fid])
                rng.shuffle(vals)
                self.domains[fid] = vals
        self.local_constraints = [
            i
            for i, c in enumerate(self.p.constraints)
            if c.minus_id in self.domains and c.plus_id in self.domains
        ]
        self.local_set = set(self.local_constraints)

    # -- bookkeeping --------------------------------------------------------

    def _tick(self):
        self.counter[0] += 1
        if self.counter[0] > self.options.budget:
            raise _BudgetExhausted()

    def _emit(self, event):
        self.trace.append(event)

    # -- propagation --------------------------------------------------------

    def _revise(self, domains, cidx, side):
        """Remove unsupported values from one side of a constraint."""
        self._tick()
        c = self.p.constraints[cidx]
        removed = []
        if side == "minus":
            dom = domains[c.minus_id]
            other = domains[c.plus_id]
            other_set = set(other)
            keep = []
            for X in dom:
                if c.forward[X] & other_set:
                    keep.append(X)
                else:
                    removed.append(X)
            domains[c.minus_id] = keep
            fid = c.minus_id
            other_id = c.plus_id
        else:
            dom = domains[c.plus_id]
            minus_dom = domains[c.minus_id]
            supported = set()
            for X in minus_dom:
                supported |= c.forward[X]
            keep = [Y for Y in dom if Y in supported]
            removed = [Y for Y in dom if Y not in supported]
            domains[c.plus_id] = keep
            fid = c.plus_id
            other_id = c.minus_id
        if removed:
            self._emit(
                {
                    "event": "prune",
                    "face": fid,
                    "removed": [_comp_key(x) for x in removed],
                    "reason": {"kind": "arc", "edge": c.one_id, "other": other_id},
                }
            )
            if not domains[fid]:
                self._emit({"event": "wipeout", "face": fid})
                return fid, True
        return (fid, False) if removed else (None, False)

    def _ac3(self, domains, seed_faces=None):
        if seed_faces is None:
            queue = deque(
                (i, side) for i in self.local_constraints for side in ("minus", "plus")
            )
        else:
            queue = deque()
            for fid in seed_faces:
                for i in self.p.incident[fid]:
                    if i in self.local_set:
                        queue.append((i, "minus"))
                        queue.append((i, "plus"))
        while queue:
            cidx, side = queue.popleft()
            fid, wiped = self._revise(domains, cidx, side)
            if wiped:
                return False
            if fid is not None:
                for j in self.p.incident[fid]:
                    if j in self.local_set:
                        c2 = self.p.constraints[j]
                        queue.append((j, "plus" if c2.minus_id == fid else "minus"))
                        queue.append((j, "minus" if c2.minus_id == fid else "plus"))
        return True

    def _derive_pairs(self, domains, known):
        new = []
        for fid in self.face_ids:
            dom = domains[fid]
            if not dom:
                continue
            pairs = {self.p.value_pair[fid][X] for X in dom}
            if len(pairs) == 1:
                (pair,) = pairs
                if pair is not None and pair not in known:
                    new.append((pair, fid))
        return new

    def _force_pairs(self, domains, known):
        """Prune every face that witnesses a known pair to the forced interval."""
        changed = []
        for fid in self.face_ids:
            slots = self.p.pair_slots[fid]
            for pair, forced in slots.items():
                if pair not in known:
                    continue
                dom = domains[fid]
                if dom == [forced]:
                    continue
                removed = [X for X in dom if X != forced]
                keep = [X for X in dom if X == forced]
                if not removed:
                    continue
                domains[fid] = keep
                self._emit(
                    {
                        "event": "prune",
                        "face": fid,
                        "removed": [_comp_key(x) for x in removed],
                        "reason": {"kind": "pair", "pair": pair.to_json()},
                    }
                )
                changed.append(fid)
                if not keep:
                    self._emit({"event": "wipeout", "face": fid})
                    return None
        return changed

    def _propagate(self, domains, pairs, seed_faces=None):
        """AC-3 plus (optionally) the pair derivation/forcing loop."""
        ok = self._ac3(domains, seed_faces)
        if not ok:
            return False
        if not self.options.pairs:
            return True
        while True:
            new = self._derive_pairs(domains, pairs)
            if not new:
                return True
            for pair, fid in new:
                self._emit({"event": "pair", "pair": pair.to_json(), "face": fid})
                for old in pairs:
                    rule = pairs_conflict(pair, old)
                    if rule:
                        self._emit(
                            {
                                "event": "conflict",
                                "kind": rule,
                                "pairs": [pair.to_json(), old.to_json()],
                            }
                        )
                        return False
                pairs.add(pair)
            changed = self._force_pairs(domains, pairs)
            if changed is None:
                return False
            if changed:
                if not self._ac3(domains, seed_faces=changed):
                    return False

    # -- search -------------------------------------------------------------

    def solve(self):
        domains = {fid: list(vals) for fid, vals in self.domains.items()}
        for fid in self.face_ids:
            if not domains[fid]:
                self._emit({"event": "wipeout", "face": fid})
                return None
        pairs = set()
        if not self._propagate(domains, pairs):
            self._emit({"event": "result", "value": "unsat"})
            return None
        result = self._search(domains, pairs, 0)
        if result is None:
            self._emit({"event": "result", "value": "unsat"})
        return result

    def _search(self, domains, pairs, level):
        undecided = [fid for fid in self.face_ids if len(domains[fid]) > 1]
        if not undecided:
            return {fid: domains[fid][0] for fid in self.face_ids}
        var = min(undecided, key=lambda fid: (len(domains[fid]), fid))
        for value in list(domains[var]):
            self._emit(
                {"event": "decide", "face": var, "value": _comp_key(value), "level": level}
            )
            sub = {fid: list(vals) for fid, vals in domains.items()}
            sub[var] = [value]
            sub_pairs = set(pairs)
            if self._propagate(sub, sub_pairs, seed_faces=[var]):
                result = self._search(sub, sub_pairs, level + 1)
                if result is not None:
                    return result
            self._emit({"event": "backtrack", "level": level})
        self._emit({"event": "exhausted", "face": var, "level": level})
        return None


def search_consistent(g: Graph, n: int, options: SearchOptions | None = None) -> Certificate:
    """Search every skeleton component for a consistent labeling.

    Returns Sat with one labeling covering all 0-faces, Unsat with a
    replayable trace from the first refuted component, or Inconclusive when
    the propagation budget runs out (never Unsat on a budget exhaust).
    """
    options = options or SearchOptions()
    problem = _Problem(g, n)
    counter = [0]
    labeling = {}
    try:
        for face_ids in problem.components:
            solver = _Solver(problem, face_ids, options, counter)
            result = solver.solve()
            if result is None:
                cert = Certificate(
                    result="unsat", trace=tuple(solver.trace), steps=counter[0]
                )
                return cert
            labeling.update(result)
    except _BudgetExhausted:
        return Certificate(
            result="inconclusive", flags=("budget-exhausted",), steps=counter[0]
        )
    flags = []
    verdict = predict(g, n).verdict
    if verdict in ("not_exists", "unknown"):
        flags.append("necessary-condition-only")
    return Certificate(
        result="sat", labeling=labeling, flags=tuple(flags), steps=counter[0]
    )


def validate_labeling(g: Graph, n: int, labeling: dict) -> bool:
    """Re-check a labeling from scratch against freshly computed relations.

    Shares no state with the propagator: every skeleton edge relation is
    recomputed and membership re-verified, and every label must be an actual
    complement component of its face's realization.
    """
    by_id = {f.face_id(): f for f in enumerate_faces(g, n, 0)}
    if set(labeling) != set(by_id):
        return False
    for fid, face in by_id.items():
        comps = complement_components(g, realize_vertex(g, face))
        if labeling[fid] not in comps:
            return False
    for f in enumerate_faces(g, n, 1):
        e, d, _ = f.movers[0]
        plus, minus = boundary(g, f, (e, d))
        rel = skeleton_edge_relation(g, f, "into")
        if labeling[plus.face_id()] not in rel[labeling[minus.face_id()]]:
            return False
    return True


# ---------------------------------------------------------------------------
# trace replay


class _Frame:
    __slots__ = ("var", "level", "snapshot", "snapshot_pairs", "expected", "tried")

    def __init__(self, var, level, snapshot, snapshot_pairs, expected, tried):
        self.var = var
        self.level = level
        self.snapshot = snapshot
        self.snapshot_pairs = snapshot_pairs
        self.expected = expected
        self.tried = tried


def replay_trace(g: Graph, n: int, trace) -> bool:
    """Semantically replay an Unsat trace to its contradiction.

    Every arc pruning is re-justified against a freshly computed relation,
    every pair event re-derived, decision values are checked against the
    domain state, and exhausted decisions must have tried the whole domain.
    Returns True iff the trace is a valid exhaustive refutation.
    """
    problem = _Problem(g, n)
    fresh = {c.one_id: c for c in problem.constraints}
    domains = {fid: list(problem.domains_full[fid]) for fid in problem.faces}
    keys = {fid: {_comp_key(x): x for x in domains[fid]} for fid in domains}
    stack = []
    pairs = set()

    def snap():
        return {fid: list(v) for fid, v in domains.items()}

    def supported(c, side, X):
        if side == "minus":
            return bool(c.forward[X] & set(domains[c.plus_id]))
        return any(X in c.forward[Y] for Y in domains[c.minus_id])

    for ev in trace:
        kind = ev["event"]
        if kind == "prune":
            fid = ev["face"]
            try:
                removed = [keys[fid][k] for k in ev["removed"]]
            except KeyError:
                return False
            reason = ev["reason"]
            if reason["kind"] == "arc":
                c = fresh.get(reason["edge"])
                if c is None or fid not in (c.minus_id, c.plus_id):
                    return False
                side = "minus" if c.minus_id == fid else "plus"
                for X in removed:
                    if X not in domains[fid] or supported(c, side, X):
                        return False
            elif reason["kind"] == "pair":
                pair = DistinguishedPair(
                    reason["pair"]["i"], reason["pair"]["j"], reason["pair"]["edge"]
                )
                if pair not in pairs:
                    return False
                forced = problem.pair_slots[fid].get(pair)
                if forced is None:
                    return False
                for X in removed:
                    if X not in domains[fid] or X == forced:
                        return False
            else:
                return False
            domains[fid] = [X for X in domains[fid] if X not in removed]
        elif kind == "wipeout":
            if domains[ev["face"]]:
                return False
        elif kind == "pair":
            fid = ev["face"]
            want = DistinguishedPair(ev["pair"]["i"], ev["pair"]["j"], ev["pair"]["edge"])
            if not domains[fid]:
                return False
            got = {problem.value_pair[fid][X] for X in domains[fid]}
            if got != {want}:
                return False
            pairs.add(want)
        elif kind == "conflict":
            p1, p2 = (DistinguishedPair(d["i"], d["j"], d["edge"]) for d in ev["pairs"])
            if not pairs_conflict(p1, p2):
                return False
            if p1 not in pairs or p2 not in pairs:
                return False
        elif kind == "decide":
            var, level = ev["face"], ev["level"]
            value = keys[var].get(ev["value"])
            if value is None:
                return False
            if stack and stack[-1].level == level:
                frame = stack[-1]
                if frame.var != var:
                    return False
                domains = {fid: list(v) for fid, v in frame.snapshot.items()}
                pairs = set(frame.snapshot_pairs)
                nxt = len(frame.tried)
                if nxt >= len(frame.expected) or frame.expected[nxt] != value:
                    return False
                frame.tried.append(value)
            else:
                if stack and level != stack[-1].level + 1:
                    return False
                if not stack and level != 0:
                    return False
                expected = list(domains[var])
                if not expected or expected[0] != value:
                    return False
                stack.append(_Frame(var, level, snap(), set(pairs), expected, [value]))
            domains[var] = [value]
        elif kind == "backtrack":
            if not stack or stack[-1].level != ev["level"]:
                return False
        elif kind == "exhausted":
            if not stack:
                return False
            frame = stack.pop()
            if frame.var != ev["face"] or frame.level != ev["level"]:
                return False
            if frame.tried != frame.expected:
                return False
            domains = {fid: list(v) for fid, v in frame.snapshot.items()}
            pairs = set(frame.snapshot_pairs)
        elif kind == "result":
            if stack:
                return False
            return ev["value"] == "unsat"
        else:
            return False
    return False


# ---------------------------------------------------------------------------
# prediction


@dataclass(frozen=True)
class Prediction:
    verdict: str  # "exists" | "not_exists" | "unknown"
    cite: str
    advice: str | None = None

    def to_json(self):
        out = {"predict": self.verdict, "cite": self.cite}
        if self.advice:
            out["advice"] = self.advice
        return out


def doubly_attached_components(g: Graph, w: str):
    """Components of the complement of a vertex that attach to it >= twice."""
    comps = complement_components(g, (Point.at_vertex(w),))
    counts = {c: 0 for c in comps}
    for e, end in g.vertex_ends(w):
        if end == 0:
            germ = Point.on_edge(e, Fraction(1, 10**6))
        else:
            germ = Point.on_edge(e, Fraction(10**6 - 1, 10**6))
        counts[component_of(comps, germ)] += 1
    return [c for c in comps if counts[c] >= 2]


def wedge_vertex(g: Graph, n: int) -> str | None:
    """A vertex whose complement has >= n doubly-attached components."""
    for w in g.vertex_ids:
        if len(doubly_attached_components(g, w)) >= n:
            return w
    return None


def predict(g: Graph, n: int) -> Prediction:
    """Existence decision table driven by the Euler characteristic."""
    chi = euler_characteristic(g)
    if n < 1:
        raise SearchError("need at least one token")
    if chi == 1:
        if n == 1:
            return Prediction("not_exists", "tree-fixed-point")
        return Prediction("exists", "tree-nearest-token-offset")
    if chi == 0:
        return Prediction("exists", "oriented-flow")
    if n == 1:
        return Prediction("exists", "cycle-antipode")
    if n >= 2 - chi:
        return Prediction("not_exists", "token-count-threshold")
    if wedge_vertex(g, n) is not None:
        return Prediction("exists", "doubly-attached-star")
    return Prediction(
        "unknown",
        "undetermined-zone",
        advice="run the consistency search with pairs enabled on the core graph",
    )


# ---------------------------------------------------------------------------
# chasing


DEAD_END = "dead-end"


def chase(g: Graph, face: Face, token: int, comp: Component) -> frozenset:
    """Push one token into its component until the label is pinned between
    two tokens; returns the distinguished pairs reachable that way (plus
    ``"dead-end"`` markers where a free vertex or separating edge stops the
    chase).  Requires the component plus the token's position to be simply
    connected."""
    config = realize_vertex(g, face)
    return _chase(g, config, token, comp)


def _chase(g, config, token, comp):
    pos = config[token - 1]
    if not is_simply_connected(g, comp, extra=pos):
        raise SearchError("component plus chasing token is not simply connected")
    if not comp.vertices:
        pair = _component_pair(g, config, comp)
        return frozenset([pair]) if pair is not None else frozenset([DEAD_END])
    # find the unique piece of the component abutting the token
    candidates = []
    for e, lo, hi in comp.pieces:
        tail, head = g.endpoints(e)
        if pos.is_vertex:
            if lo == 0 and tail == pos.vertex:
                candidates.append((e, lo, hi, 1))
            if hi == 1 and head == pos.vertex:
                candidates.append((e, lo, hi, -1))
        else:
            if e == pos.edge and hi == pos.t:
                candidates.append((e, lo, hi, -1))
            if e == pos.edge and lo == pos.t:
                candidates.append((e, lo, hi, 1))
    if len(candidates) != 1:
        raise SearchError("chasing token must abut its component along one edge end")
    e, lo, hi, direction = candidates[0]
    if pos.is_vertex:
        # slide through the whole edge onto the far endpoint
        entry = Fraction(1, 2) * (lo + hi)
        stepped = list(config)
        stepped[token - 1] = Point.on_edge(e, entry)
        stepped = tuple(stepped)
    else:
        stepped = config
    move = plan_vertex_entry(g, stepped, token, e, direction)
    rel = vertex_entry_transition(g, move)
    src = complement_components(g, stepped)
    ahead = component_of(src, Point.at_vertex(
        g.head(e) if direction > 0 else g.tail(e)
    ))
    results = set()
    for nxt in rel[ahead]:
        results |= _chase(g, move.target, token, nxt)
    return frozenset(results)
