"""Ditrees, label functions and width trees.

A *ditree* is a directed graph whose underlying undirected graph is a tree.
Some degree one vertices may be designated boundary vertices.  A *width tree*
pairs a ditree with an integer labelling of its vertices and edges (values
at least -1) such that

1. a boundary vertex carries the same label as its incident edge, and
2. every vertex label is at least the sum of the nonnegative labels on its
   incoming edges, and at least the same sum over its outgoing edges.

An empty sum is zero, so condition 2 forces every vertex label to be
nonnegative; only edges can carry -1.

Vertex ids are opaque strings and edges are ``(tail, head)`` pairs.  Width
trees are compared up to equivalence through :func:`canonical_form`, never by
vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional, Union

from .errors import (
    BoundaryMismatch,
    CutViolation,
    LabelBelowMinusOne,
    LabelMismatch,
    NotATree,
    UnknownEdge,
)

Vertex = str
Edge = tuple[str, str]
Item = Union[Vertex, Edge]


@dataclass(frozen=True)
class Ditree:
    """A directed tree with an optional set of boundary leaves.

    Vertices and edges are stored sorted so that two ditrees built from the
    same data in a different order compare equal.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    boundary: frozenset[Vertex] = frozenset()

    def __init__(self, vertices: Iterable[Vertex] = (),
                 edges: Iterable[Edge] = (),
                 boundary: Iterable[Vertex] = ()):
        edges = [tuple(e) for e in edges]
        verts = set(vertices)
        for e in edges:
            if len(e) != 2:
                raise NotATree(f"malformed edge {e!r}")
            verts.update(e)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "boundary", frozenset(boundary))
        self._check()

    def _check(self):
        vs = self.vertices
        if not vs:
            raise NotATree("a ditree needs at least one vertex")
        for v in vs:
            if not isinstance(v, str):
                raise NotATree(f"vertex id {v!r} is not a string")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise NotATree(f"self-loop at {a!r}")
            key = frozenset((a, b))
            if key in seen:
                raise NotATree(f"more than one edge between {a!r} and {b!r}")
            seen.add(key)
        if len(self.edges) != len(vs) - 1:
            raise NotATree(
                f"{len(vs)} vertices need {len(vs) - 1} edges, "
                f"got {len(self.edges)}")
        # |E| = |V| - 1 plus connectivity implies acyclic.
        reached = {vs[0]}
        stack = [vs[0]]
        while stack:
            v = stack.pop()
            for w in self.neighbors[v]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != len(vs):
            raise NotATree("underlying graph is not connected")
        for v in self.boundary:
            if v not in self.neighbors:
                raise NotATree(f"boundary vertex {v!r} is not a vertex")
            if len(self.neighbors[v]) != 1:
                raise NotATree(f"boundary vertex {v!r} does not have degree 1")

    @cached_property
    def neighbors(self) -> Mapping[Vertex, tuple[Vertex, ...]]:
        nbrs = {v: [] for v in self.vertices}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return MappingProxyType({v: tuple(sorted(n)) for v, n in nbrs.items()})

    @cached_property
    def in_edges(self) -> Mapping[Vertex, tuple[Edge, ...]]:
        ins = {v: [] for v in self.vertices}
        for e in self.edges:
            ins[e[1]].append(e)
        return MappingProxyType({v: tuple(es) for v, es in ins.items()})

    @cached_property
    def out_edges(self) -> Mapping[Vertex, tuple[Edge, ...]]:
        outs = {v: [] for v in self.vertices}
        for e in self.edges:
            outs[e[0]].append(e)
        return MappingProxyType({v: tuple(es) for v, es in outs.items()})

    @cached_property
    def _edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, e) -> bool:
        return tuple(e) in self._edge_set

    def degree(self, v: Vertex) -> int:
        return len(self.neighbors[v])

    def incident_edge(self, v: Vertex) -> Edge:
        """The unique edge at a degree one vertex."""
        (e,) = self.in_edges[v] + self.out_edges[v]
        return e

    def reversed(self) -> Ditree:
        return Ditree(self.vertices, [(b, a) for a, b in self.edges], self.boundary)

    def items(self) -> tuple[Item, ...]:
        return self.vertices + self.edges


@dataclass(frozen=True, eq=False)
class LabelFunction:
    """Integer labels on the vertices and edges of a ditree."""

    vertex_labels: Mapping[Vertex, int]
    edge_labels: Mapping[Edge, int]

    def __init__(self, vertex_labels: Mapping[Vertex, int],
                 edge_labels: Mapping[Edge, int]):
        object.__setattr__(self, "vertex_labels",
                           MappingProxyType({v: int(x) for v, x in vertex_labels.items()}))
        object.__setattr__(self, "edge_labels",
                           MappingProxyType({tuple(e): int(x) for e, x in edge_labels.items()}))

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, LabelFunction):
            return NotImplemented
        return (dict(self.vertex_labels) == dict(other.vertex_labels)
                and dict(self.edge_labels) == dict(other.edge_labels))

    def __getitem__(self, item: Item) -> int:
        if isinstance(item, tuple):
            return self.edge_labels[item]
        return self.vertex_labels[item]

    @classmethod
    def from_items(cls, labels: Mapping[Item, int]) -> LabelFunction:
        """Build from a single mapping keyed by vertex ids and edge pairs."""
        vl = {k: x for k, x in labels.items() if not isinstance(k, tuple)}
        el = {k: x for k, x in labels.items() if isinstance(k, tuple)}
        return cls(vl, el)

    def map(self, fn) -> LabelFunction:
        return LabelFunction({v: fn(x) for v, x in self.vertex_labels.items()},
                             {e: fn(x) for e, x in self.edge_labels.items()})

    def values(self) -> list[int]:
        return list(self.vertex_labels.values()) + list(self.edge_labels.values())


@dataclass(frozen=True, eq=False)
class WidthTree:
    """A labelled ditree satisfying the boundary and cut conditions.

    Construction validates; an instance always satisfies both conditions.
    ``delta`` is an optional distance threshold, stored as data only.
    """

    tree: Ditree
    labels: LabelFunction
    delta: Optional[int] = None

    def __post_init__(self):
        _check_width_tree(self.tree, self.labels)
        if self.delta is not None and self.delta < 0:
            raise ValueError("distance threshold must be nonnegative")

    def __getitem__(self, item: Item) -> int:
        return self.labels[item]

    @property
    def vertices(self):
        return self.tree.vertices

    @property
    def edges(self):
        return self.tree.edges

    def reversed(self) -> WidthTree:
        """The same width tree with every edge orientation reversed."""
        lam = self.labels
        return WidthTree(
            self.tree.reversed(),
            LabelFunction(lam.vertex_labels,
                          {(b, a): x for (a, b), x in lam.edge_labels.items()}),
            self.delta)

    def with_labels(self, labels: LabelFunction) -> WidthTree:
        return WidthTree(self.tree, labels, self.delta)

    def with_delta(self, delta: Optional[int]) -> WidthTree:
        return WidthTree(self.tree, self.labels, delta)

    def __repr__(self):
        vl = ", ".join(f"{v}={x}" for v, x in sorted(self.labels.vertex_labels.items()))
        el = ", ".join(f"{a}->{b}={x}" for (a, b), x in sorted(self.labels.edge_labels.items()))
        bd = f", boundary={sorted(self.tree.boundary)}" if self.tree.boundary else ""
        dl = f", delta={self.delta}" if self.delta is not None else ""
        return f"WidthTree({vl}; {el}{bd}{dl})"


def _nonneg_sum(lam: LabelFunction, edges) -> int:
    return sum(x for x in (lam.edge_labels[e] for e in edges) if x >= 0)


def _check_width_tree(tree: Ditree, lam: LabelFunction):
    if set(lam.vertex_labels) != set(tree.vertices):
        raise LabelMismatch("vertex labels do not match the vertex set")
    if set(lam.edge_labels) != set(tree.edges):
        raise LabelMismatch("edge labels do not match the edge set")
    for item in tree.items():
        if lam[item] < -1:
            raise LabelBelowMinusOne(f"{item!r} has label {lam[item]}")
    for v in sorted(tree.boundary):
        e = tree.incident_edge(v)
        if lam[v] != lam[e]:
            raise BoundaryMismatch(v, lam[v], lam[e])
    for v in tree.vertices:
        need = _nonneg_sum(lam, tree.in_edges[v])
        if lam[v] < need:
            raise CutViolation(v, "incoming", lam[v], need)
        need = _nonneg_sum(lam, tree.out_edges[v])
        if lam[v] < need:
            raise CutViolation(v, "outgoing", lam[v], need)


def validate(tree: Ditree, labels: LabelFunction, delta: Optional[int] = None) -> WidthTree:
    """Return the width tree ``(tree, labels)`` or raise the first violation.

    Raises NotATree (from the ditree), LabelMismatch, LabelBelowMinusOne,
    BoundaryMismatch or CutViolation.
    """
    return WidthTree(tree, labels, delta)


def width_tree(edges: Iterable[tuple[Vertex, Vertex, int]],
               vertex_labels: Mapping[Vertex, int],
               boundary: Iterable[Vertex] = (),
               delta: Optional[int] = None) -> WidthTree:
    """Convenience constructor from ``(tail, head, label)`` triples.

    >>> wt = width_tree([("a", "b", 1)], {"a": 2, "b": 2})
    >>> wt["a"], wt[("a", "b")]
    (2, 1)
    """
    edges = list(edges)
    tree = Ditree(vertex_labels.keys(), [(a, b) for a, b, _ in edges], boundary)
    lam = LabelFunction(vertex_labels, {(a, b): x for a, b, x in edges})
    return WidthTree(tree, lam, delta)


# -- structural predicates ----------------------------------------------------

def is_product_edge(wt: WidthTree, e: Edge) -> bool:
    """Whether ``e`` is a product edge at one of its endpoints.

    ``e`` is a product edge at a nonboundary endpoint ``v`` when it is the
    only incoming or the only outgoing edge at ``v`` and carries the same
    label as ``v``.
    """
    e = tuple(e)
    tree = wt.tree
    if not tree.has_edge(e):
        raise UnknownEdge(f"{e!r} is not an edge")
    tail, head = e
    for v, sole in ((tail, len(tree.out_edges[tail]) == 1),
                    (head, len(tree.in_edges[head]) == 1)):
        if v in tree.boundary:
            continue
        if sole and wt[e] == wt[v]:
            return True
    return False


class Classification(NamedTuple):
    nonnegative: bool
    positive: bool
    productless: bool
    slim: bool


def classify(wt: WidthTree) -> Classification:
    values = wt.labels.values()
    nonnegative = all(x >= 0 for x in values)
    positive = all(x >= 1 for x in values)
    productless = not any(is_product_edge(wt, e) for e in wt.edges)
    slim = (nonnegative and productless
            and wt.delta is not None and wt.delta >= 2)
    return Classification(nonnegative, positive, productless, slim)


class SourceSinkSummary(NamedTuple):
    sources: frozenset[Vertex]
    sinks: frozenset[Vertex]
    n2_minus: int
    n2_plus: int


def sources_sinks(tree: Ditree) -> SourceSinkSummary:
    """Sources, sinks, and the counts of vertices with a single incoming
    (``n2_minus``) or single outgoing (``n2_plus``) edge."""
    ins, outs = tree.in_edges, tree.out_edges
    return SourceSinkSummary(
        frozenset(v for v in tree.vertices if not ins[v]),
        frozenset(v for v in tree.vertices if not outs[v]),
        sum(1 for v in tree.vertices if len(ins[v]) == 1),
        sum(1 for v in tree.vertices if len(outs[v]) == 1),
    )


def is_path(tree: Ditree) -> bool:
    if len(tree.vertices) == 1:
        return True
    degrees = [tree.degree(v) for v in tree.vertices]
    return degrees.count(1) == 2 and max(degrees) <= 2


def is_coherent_path(tree: Ditree) -> bool:
    if not is_path(tree):
        return False
    return all(len(tree.in_edges[v]) == 1 and len(tree.out_edges[v]) == 1
               for v in tree.vertices if tree.degree(v) == 2)


# -- canonical form ---------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    """Equal for two width trees exactly when they are equivalent."""

    code: bytes = field(repr=False)

    def __repr__(self):
        return f"CanonicalForm({len(self.code)} bytes)"


def _centers(tree: Ditree) -> list[Vertex]:
    degree = {v: tree.degree(v) for v in tree.vertices}
    layer = [v for v, d in degree.items() if d <= 1]
    remaining = len(degree)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in tree.neighbors[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(tree: Ditree, vlabel, elabel, root: Vertex) -> tuple:
    # iterative post-order; trees may be long paths
    parent = {root: None}
    order = [root]
    for v in order:
        for w in tree.neighbors[v]:
            if w != parent[v]:
                parent[w] = v
                order.append(w)
    codes = {}
    for v in reversed(order):
        children = []
        for w in tree.neighbors[v]:
            if w == parent[v]:
                continue
            if tree.has_edge((v, w)):
                children.append((0, elabel((v, w)), codes.pop(w)))
            else:
                children.append((1, elabel((w, v)), codes.pop(w)))
        children.sort()
        codes[v] = (vlabel(v), v in tree.boundary, tuple(children))
    return codes[root]


def _oriented_code(tree: Ditree, vlabel, elabel) -> tuple:
    return min(_rooted_code(tree, vlabel, elabel, c) for c in _centers(tree))


def tree_code(tree: Ditree, vlabel=lambda v: 0, elabel=lambda e: 0) -> bytes:
    """Canonical bytes for a ditree with arbitrary item labels, taken up to
    isomorphism that preserves or globally reverses orientations."""
    forward = _oriented_code(tree, vlabel, elabel)
    backward = _oriented_code(tree.reversed(), vlabel, lambda e: elabel((e[1], e[0])))
    return repr(min(forward, backward)).encode()


def canonical_form(wt: WidthTree) -> CanonicalForm:
    """Canonical code of a width tree up to equivalence.

    The tree is rooted at its center (both centers are tried when there are
    two); each subtree is encoded by its vertex label, boundary flag and the
    sorted codes of its children, each tagged with the child edge's label and
    direction relative to the root.  The code of the reversed tree is also
    computed and the smaller of the two is kept.
    """
    lam = wt.labels
    return CanonicalForm(tree_code(wt.tree, lam.vertex_labels.__getitem__,
                                   lam.edge_labels.__getitem__))


def equivalent(a: WidthTree, b: WidthTree) -> bool:
    return canonical_form(a) == canonical_form(b)
