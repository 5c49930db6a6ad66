"""Squares glued by vertex identification, and integer-lattice unit-distance embeddings.

Graphs are built as unions of 4-cycles ("squares") plus loose vertices and
edges, then quotiented by an explicit vertex identification.  The finalized
graph is simple and carries, on every vertex, the set of structural names
merged into it.  An embedding is a total map vertex id -> lattice point; the
verifier checks unit edges and injectivity only (a vertex can never sit in
the interior of a unit lattice segment, so the vertex-on-edge condition is
implied and not checked separately).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

Point = tuple[int, int]
Embedding = dict[int, Point]

# Families in canonical sort order.  L/T/R are frame squares, H the axis
# path, SC* side chains, C/C' armature chains, F/F' flags.
_FAMILIES = ("L", "T", "R", "H", "SC1", "SC1'", "SC2", "SC2'", "C", "C'", "F", "F'")
_FAMILY_RANK = {f: i for i, f in enumerate(_FAMILIES)}


class LatticeError(Exception):
    """Raised on structural misuse of the builder or verifier."""


@dataclass(frozen=True)
class StructuralName:
    """A structural role: family, index tuple, and corner (1..4, None for H)."""

    family: str
    indices: tuple[int, ...]
    corner: Optional[int] = None

    def __post_init__(self):
        if self.family not in _FAMILY_RANK:
            raise LatticeError(f"unknown family {self.family!r}")
        if self.family == "H":
            if self.corner is not None:
                raise LatticeError("axis vertices carry no corner index")
        elif self.corner is not None and not 1 <= self.corner <= 4:
            raise LatticeError(f"corner index {self.corner} out of 1..4")

    @property
    def sort_key(self) -> tuple:
        return (_FAMILY_RANK[self.family], self.indices, self.corner or 0)

    def __str__(self) -> str:
        fam = self.family
        if fam == "H":
            return f"H[{self.indices[0]}]"
        if fam in ("C", "C'"):
            k, i = self.indices
            body = f"{fam}[k={k}][{i}]"
        elif fam in ("F", "F'"):
            i, j = self.indices
            body = f"{fam}[i={i}][j={j}]"
        else:
            body = f"{fam}[{self.indices[0]}]"
        return f"{body}.{self.corner}" if self.corner is not None else body


def square_name(family: str, indices: tuple[int, ...] | int) -> tuple[StructuralName, ...]:
    """The four corner names of a square, in cycle order 1..4."""
    idx = (indices,) if isinstance(indices, int) else tuple(indices)
    return tuple(StructuralName(family, idx, c) for c in (1, 2, 3, 4))


@dataclass(frozen=True)
class Graph:
    """A finalized simple undirected graph with per-vertex label sets."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise LatticeError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise LatticeError(f"edge ({u},{v}) out of range")
        if len(self.labels) != self.n:
            raise LatticeError("label table size mismatch")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertex_by_label(self, label: str) -> int:
        for i, labs in enumerate(self.labels):
            if label in labs:
                return i
        raise KeyError(label)


class QuotientGraphBuilder:
    """Accumulates squares/vertices/edges and a vertex identification.

    Identification is kept as a union-find; root-level adjacency is tracked
    so that an identification that would create a self-loop is rejected
    immediately.
    """

    def __init__(self):
        self._name_of: list[StructuralName] = []
        self._by_name: dict[StructuralName, int] = {}
        self._parent: list[int] = []
        self._adj: dict[int, set[int]] = {}
        self._edges: list[tuple[int, int]] = []
        self._squares: set[tuple[str, tuple[int, ...]]] = set()

    # -- union-find ---------------------------------------------------------

    def _find(self, v: int) -> int:
        root = v
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[v] != root:
            self._parent[v], v = root, self._parent[v]
        return root

    # -- construction -------------------------------------------------------

    def add_vertex(self, name: StructuralName) -> int:
        if name in self._by_name:
            raise LatticeError(f"duplicate vertex name {name}")
        h = len(self._name_of)
        self._name_of.append(name)
        self._by_name[name] = h
        self._parent.append(h)
        self._adj[h] = set()
        return h

    def add_edge(self, u: int, v: int) -> None:
        ru, rv = self._find(u), self._find(v)
        if ru == rv:
            raise LatticeError("edge would be a self-loop under current identification")
        self._edges.append((u, v))
        self._adj[ru].add(rv)
        self._adj[rv].add(ru)

    def add_square(self, family: str, indices: tuple[int, ...] | int) -> tuple[int, int, int, int]:
        """Add a fresh 4-cycle; returns the four corner handles in order 1..4."""
        idx = (indices,) if isinstance(indices, int) else tuple(indices)
        if (family, idx) in self._squares:
            raise LatticeError(f"duplicate square {family}{idx}")
        self._squares.add((family, idx))
        c = [self.add_vertex(nm) for nm in square_name(family, idx)]
        for a, b in ((0, 1), (1, 2), (2, 3), (3, 0)):
            self.add_edge(c[a], c[b])
        return c[0], c[1], c[2], c[3]

    def handle(self, name: StructuralName) -> int:
        return self._by_name[name]

    def identify(self, u: int, v: int) -> None:
        """Merge the equivalence classes of u and v.

        Identifying a vertex with itself is a no-op; identifying the two
        endpoints of an edge would create a self-loop and is an error.
        """
        ru, rv = self._find(u), self._find(v)
        if ru == rv:
            return
        if rv in self._adj[ru]:
            raise LatticeError(
                f"identifying {self._name_of[u]} with {self._name_of[v]} creates a self-loop"
            )
        # Merge smaller adjacency set into larger.
        if len(self._adj[ru]) < len(self._adj[rv]):
            ru, rv = rv, ru
        self._parent[rv] = ru
        for x in self._adj.pop(rv):
            self._adj[x].discard(rv)
            self._adj[x].add(ru)
            self._adj[ru].add(x)

    @property
    def vertex_count(self) -> int:
        """Number of equivalence classes so far."""
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        """Number of distinct edges under the current identification."""
        return len({self._canonical_edge(u, v) for u, v in self._edges})

    def _canonical_edge(self, u: int, v: int) -> tuple[int, int]:
        ru, rv = self._find(u), self._find(v)
        return (ru, rv) if ru < rv else (rv, ru)

    def finalize(self) -> Graph:
        """Quotient, collapse parallel edges, and number vertices deterministically.

        Vertex ids are assigned by sorting classes on their smallest
        structural name.  Re-finalizing yields the same graph.
        """
        if not self._name_of:
            raise LatticeError("empty builder")
        classes: dict[int, list[StructuralName]] = {}
        for h, name in enumerate(self._name_of):
            classes.setdefault(self._find(h), []).append(name)
        reps = sorted(classes, key=lambda r: min(n.sort_key for n in classes[r]))
        vid = {r: i for i, r in enumerate(reps)}
        labels = tuple(
            tuple(str(n) for n in sorted(classes[r], key=lambda n: n.sort_key)) for r in reps
        )
        edge_set = set()
        for u, v in self._edges:
            a, b = vid[self._find(u)], vid[self._find(v)]
            edge_set.add((a, b) if a < b else (b, a))
        return Graph(n=len(reps), edges=tuple(sorted(edge_set)), labels=labels)


@dataclass
class VerificationReport:
    """Outcome of checking an embedding: offending edges and coincident pairs."""

    non_unit_edges: list[tuple[int, int]] = field(default_factory=list)
    overlaps: list[tuple[int, int]] = field(default_factory=list)
    # Vertex-on-edge never needs checking on the unit lattice: two points at
    # distance 1 have no lattice point strictly between them.
    vertex_on_edge: str = "implied by lattice injectivity"

    @property
    def accepted(self) -> bool:
        return not self.non_unit_edges and not self.overlaps


def verify_embedding(g: Graph, emb: Embedding) -> VerificationReport:
    """Check unit edges and injectivity; raises LatticeError if emb is not total."""
    missing = [v for v in range(g.n) if v not in emb]
    if missing:
        raise LatticeError(f"embedding not total: missing vertices {missing[:5]}")
    report = VerificationReport()
    for u, v in g.edges:
        (x1, y1), (x2, y2) = emb[u], emb[v]
        if (x1 - x2) ** 2 + (y1 - y2) ** 2 != 1:
            report.non_unit_edges.append((u, v))
    seen: dict[Point, int] = {}
    for v in range(g.n):
        p = emb[v]
        if p in seen:
            report.overlaps.append((seen[p], v))
        else:
            seen[p] = v
    return report


# -- JSON interchange -------------------------------------------------------


def graph_to_json(g: Graph) -> str:
    doc = {
        "vertices": [{"id": i, "labels": list(g.labels[i])} for i in range(g.n)],
        "edges": [list(e) for e in g.edges],
    }
    return json.dumps(doc, indent=1)


def graph_from_json(text: str) -> Graph:
    doc = json.loads(text)
    verts = sorted(doc["vertices"], key=lambda v: v["id"])
    if [v["id"] for v in verts] != list(range(len(verts))):
        raise LatticeError("vertex ids must be 0..n-1")
    labels = tuple(tuple(v["labels"]) for v in verts)
    edges = tuple(sorted(tuple(sorted((int(u), int(v)))) for u, v in doc["edges"]))
    return Graph(n=len(verts), edges=edges, labels=labels)


def embedding_to_json(emb: Embedding) -> str:
    pts = [[v, x, y] for v, (x, y) in sorted(emb.items())]
    return json.dumps({"points": pts}, indent=1)


def embedding_from_json(text: str) -> Embedding:
    doc = json.loads(text)
    return {int(v): (int(x), int(y)) for v, x, y in doc["points"]}
