"""Directed modular graphs and their structural moves.

A graph carries a genus and a degree at each vertex, directed edges, and two
ordered marking lists: positive (outgoing) and negative (incoming) tails.
The moves are cutting an edge into a pair of tails, contracting an edge,
gluing the last positive tail to the last negative tail, and flipping the
orientation of the last tail of either kind.

Cutting places the new positive tail at the edge source and the new negative
tail at the edge target.  This is the unique convention that preserves the
in/out valence of every vertex and makes glue the exact inverse of cut;
``CUT_CONVENTION_NOTE`` records it for the diagnostics channel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DomainError

CUT_CONVENTION_NOTE = (
    "cut convention: outgoing tail at source(e), incoming tail at target(e) "
    "(valence-preserving; glue is its exact inverse)"
)


@dataclass(frozen=True)
class VertexData:
    id: str
    genus: int
    degree: int


@dataclass(frozen=True)
class EdgeData:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class DirectedModularGraph:
    vertices: tuple[VertexData, ...]
    edges: tuple[EdgeData, ...]
    pos_markings: tuple[str, ...]  # index k = marking k+1, value = vertex id
    neg_markings: tuple[str, ...]

    # -- lookups -------------------------------------------------------------

    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    def vertex(self, vid: str) -> VertexData:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise DomainError(f"no vertex {vid!r}")

    def edge(self, eid: str) -> EdgeData:
        for e in self.edges:
            if e.id == eid:
                return e
        raise DomainError(f"no edge {eid!r}")

    def in_valence(self, vid: str) -> int:
        return sum(1 for e in self.edges if e.target == vid) + sum(
            1 for m in self.neg_markings if m == vid
        )

    def out_valence(self, vid: str) -> int:
        return sum(1 for e in self.edges if e.source == vid) + sum(
            1 for m in self.pos_markings if m == vid
        )

    def valences(self) -> dict[str, tuple[int, int]]:
        return {v.id: (self.in_valence(v.id), self.out_valence(v.id)) for v in self.vertices}

    def total_degree(self) -> int:
        return sum(v.degree for v in self.vertices)

    # -- JSON schema ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": v.id, "genus": v.genus, "degree": v.degree} for v in self.vertices
            ],
            "edges": [
                {"id": e.id, "source": e.source, "target": e.target} for e in self.edges
            ],
            "pos_markings": list(self.pos_markings),
            "neg_markings": list(self.neg_markings),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DirectedModularGraph":
        try:
            vertices = tuple(
                VertexData(str(v["id"]), int(v["genus"]), int(v["degree"]))
                for v in data["vertices"]
            )
            edges = tuple(
                EdgeData(str(e["id"]), str(e["source"]), str(e["target"]))
                for e in data.get("edges", [])
            )
            pos = tuple(str(m) for m in data.get("pos_markings", []))
            neg = tuple(str(m) for m in data.get("neg_markings", []))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed graph JSON: {exc}") from exc
        return cls(vertices, edges, pos, neg)


def validate(g: DirectedModularGraph) -> list[str]:
    """All invariant violations, as human-readable strings; empty means ok."""
    problems = []
    ids = [v.id for v in g.vertices]
    idset = set(ids)
    if len(ids) != len(idset):
        problems.append("duplicate vertex ids")
    eids = [e.id for e in g.edges]
    if len(eids) != len(set(eids)):
        problems.append("duplicate edge ids")
    for v in g.vertices:
        if v.genus < 0:
            problems.append(f"vertex {v.id}: negative genus")
    for e in g.edges:
        if e.source not in idset:
            problems.append(f"edge {e.id}: dangling source {e.source!r}")
        if e.target not in idset:
            problems.append(f"edge {e.id}: dangling target {e.target!r}")
    for k, m in enumerate(g.pos_markings, start=1):
        if m not in idset:
            problems.append(f"positive marking {k}: dangling vertex {m!r}")
    for k, m in enumerate(g.neg_markings, start=1):
        if m not in idset:
            problems.append(f"negative marking {k}: dangling vertex {m!r}")
    return problems


def _require_valid(g: DirectedModularGraph):
    problems = validate(g)
    if problems:
        raise DomainError("; ".join(problems))


def arithmetic_genus(g: DirectedModularGraph) -> int:
    """Sum of vertex genera + |E| - |V| + number of connected components."""
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        rs, rt = find(e.source), find(e.target)
        if rs != rt:
            parent[rs] = rt
    components = len({find(v.id) for v in g.vertices})
    return sum(v.genus for v in g.vertices) + len(g.edges) - len(g.vertices) + components


def _fresh_edge_id(g: DirectedModularGraph) -> str:
    used = {e.id for e in g.edges}
    k = 0
    while f"e{k}" in used:
        k += 1
    return f"e{k}"


def cut_edge(g: DirectedModularGraph, edge_id: str) -> DirectedModularGraph:
    """Remove the edge; append an outgoing tail at its source and an incoming
    tail at its target.  Genus and degree functions are unchanged."""
    e = g.edge(edge_id)
    return replace(
        g,
        edges=tuple(x for x in g.edges if x.id != edge_id),
        pos_markings=g.pos_markings + (e.source,),
        neg_markings=g.neg_markings + (e.target,),
    )


def contract_edge(g: DirectedModularGraph, edge_id: str) -> DirectedModularGraph:
    """Merge the endpoints of the edge into one vertex.

    Distinct endpoints: genus and degree add.  Loop: genus increases by one,
    degree is unchanged.  The merged vertex keeps the source's id.
    """
    e = g.edge(edge_id)
    if e.source == e.target:
        vertices = tuple(
            replace(v, genus=v.genus + 1) if v.id == e.source else v for v in g.vertices
        )
        return replace(g, vertices=vertices, edges=tuple(x for x in g.edges if x.id != edge_id))

    src, tgt = g.vertex(e.source), g.vertex(e.target)
    merged = VertexData(src.id, src.genus + tgt.genus, src.degree + tgt.degree)

    def q(vid: str) -> str:
        return src.id if vid == tgt.id else vid

    vertices = tuple(merged if v.id == src.id else v for v in g.vertices if v.id != tgt.id)
    edges = tuple(
        EdgeData(x.id, q(x.source), q(x.target)) for x in g.edges if x.id != edge_id
    )
    return DirectedModularGraph(
        vertices,
        edges,
        tuple(q(m) for m in g.pos_markings),
        tuple(q(m) for m in g.neg_markings),
    )


def glue(g: DirectedModularGraph) -> DirectedModularGraph:
    """Remove the last outgoing and last incoming tails; join them by an edge
    from the outgoing vertex to the incoming vertex."""
    if not g.pos_markings:
        raise DomainError("glue needs at least one positive marking")
    if not g.neg_markings:
        raise DomainError("glue needs at least one negative marking")
    new_edge = EdgeData(_fresh_edge_id(g), g.pos_markings[-1], g.neg_markings[-1])
    return replace(
        g,
        edges=g.edges + (new_edge,),
        pos_markings=g.pos_markings[:-1],
        neg_markings=g.neg_markings[:-1],
    )


def flip_neg_to_pos(g: DirectedModularGraph) -> DirectedModularGraph:
    """Turn the last incoming tail into an outgoing tail; the degree at its
    vertex drops by one."""
    if not g.neg_markings:
        raise DomainError("no negative markings to flip")
    vid = g.neg_markings[-1]
    vertices = tuple(
        replace(v, degree=v.degree - 1) if v.id == vid else v for v in g.vertices
    )
    return replace(
        g,
        vertices=vertices,
        neg_markings=g.neg_markings[:-1],
        pos_markings=g.pos_markings + (vid,),
    )


def flip_pos_to_neg(g: DirectedModularGraph) -> DirectedModularGraph:
    """Turn the last outgoing tail into an incoming tail; degrees unchanged."""
    if not g.pos_markings:
        raise DomainError("no positive markings to flip")
    vid = g.pos_markings[-1]
    return replace(
        g,
        pos_markings=g.pos_markings[:-1],
        neg_markings=g.neg_markings + (vid,),
    )


def is_isomorphic(g1: DirectedModularGraph, g2: DirectedModularGraph) -> bool:
    """Isomorphism over matched marking indices.

    A bijection of vertices must preserve genus, degree, the vertex of every
    marking index, and the multiset of directed edges (edge ids are treated
    as unlabeled).  The search refines candidates by (genus, degree, in/out
    valence) before backtracking.
    """
    _require_valid(g1)
    _require_valid(g2)
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    if len(g1.pos_markings) != len(g2.pos_markings):
        return False
    if len(g1.neg_markings) != len(g2.neg_markings):
        return False

    def profile(g, vid):
        return (
            g.vertex(vid).genus,
            g.vertex(vid).degree,
            g.in_valence(vid),
            g.out_valence(vid),
            tuple(k for k, m in enumerate(g.pos_markings) if m == vid),
            tuple(k for k, m in enumerate(g.neg_markings) if m == vid),
        )

    ids1 = [v.id for v in g1.vertices]
    candidates = {}
    for v1 in ids1:
        p1 = profile(g1, v1)
        cands = [v2.id for v2 in g2.vertices if profile(g2, v2.id) == p1]
        if not cands:
            return False
        candidates[v1] = cands

    edges1 = sorted((e.source, e.target) for e in g1.edges)

    def backtrack(i, mapping, used):
        if i == len(ids1):
            mapped = sorted((mapping[s], mapping[t]) for s, t in edges1)
            return mapped == sorted((e.source, e.target) for e in g2.edges)
        v1 = ids1[i]
        for v2 in candidates[v1]:
            if v2 in used:
                continue
            mapping[v1] = v2
            used.add(v2)
            if backtrack(i + 1, mapping, used):
                return True
            del mapping[v1]
            used.remove(v2)
        return False

    return backtrack(0, {}, set())
