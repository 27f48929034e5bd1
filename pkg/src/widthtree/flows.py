"""Flows on augmented ditrees and the min flow / max cut lower bound.

Everything here assumes boundaryless ditrees.  The pieces are:

* :func:`augment` attaches a pendant edge ``v -> A+(v)`` at every vertex
  with exactly one outgoing edge and ``A-(v) -> v`` at every vertex with
  exactly one incoming edge.  A positive productless labelling extended by
  ones is then a positive width tree on the augmented ditree.
* :func:`make_flow` pushes excess label along chains of "special" edges,
  first forwards and then on the reversed tree, producing a conservative
  labelling with the same net extent that dominates the input.
* :func:`min_flow_max_cut` lowers a flow along adjusting paths until the
  reached set of the search is a strong source-sink cut whose size equals
  the flow's net extent, certifying both optimality of the labelling and
  maximality of the cut.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .core import (
    Ditree,
    Edge,
    LabelFunction,
    Vertex,
    WidthTree,
    classify,
    sources_sinks,
)
from .errors import (
    HasBoundary,
    InternalError,
    InvalidCut,
    NoValidCut,
    NotConservative,
    NotPositive,
    NotProductless,
    TooLarge,
)
from .invariants import net_extent

AUGMENTED_CUT = "augmented_cut"
PAPER_FORMULA = "paper_formula"

BRUTEFORCE_LIMIT = 25


@dataclass(frozen=True)
class AugmentedDitree:
    base: Ditree
    tree: Ditree
    plus_vertices: Mapping[Vertex, Vertex]
    minus_vertices: Mapping[Vertex, Vertex]

    @property
    def plus_edges(self) -> dict[Vertex, Edge]:
        return {v: (v, a) for v, a in self.plus_vertices.items()}

    @property
    def minus_edges(self) -> dict[Vertex, Edge]:
        return {v: (a, v) for v, a in self.minus_vertices.items()}

    def augmenting_vertices(self) -> frozenset[Vertex]:
        return frozenset(self.plus_vertices.values()) | frozenset(self.minus_vertices.values())

    def augmenting_edges(self) -> frozenset[Edge]:
        return frozenset(self.plus_edges.values()) | frozenset(self.minus_edges.values())


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def augment(tree: Ditree) -> AugmentedDitree:
    if tree.boundary:
        raise HasBoundary("augmentation is defined for boundaryless ditrees")
    taken = set(tree.vertices)
    plus, minus = {}, {}
    for v in tree.vertices:
        if len(tree.out_edges[v]) == 1:
            plus[v] = _fresh(f"{v}^+", taken)
        if len(tree.in_edges[v]) == 1:
            minus[v] = _fresh(f"{v}^-", taken)
    edges = list(tree.edges)
    edges += [(v, a) for v, a in plus.items()]
    edges += [(a, v) for v, a in minus.items()]
    full = Ditree(taken, edges)
    return AugmentedDitree(tree, full, MappingProxyType(plus), MappingProxyType(minus))


def _require_positive_productless(wt: WidthTree):
    if wt.tree.boundary:
        raise HasBoundary("flows are defined for boundaryless width trees")
    cls = classify(wt)
    if not cls.positive:
        raise NotPositive("width tree must be positive")
    if not cls.productless:
        raise NotProductless("width tree must be productless")


def extend_labels(wt: WidthTree, aug: AugmentedDitree = None) -> LabelFunction:
    """Extend a positive productless labelling by one on every augmenting item."""
    _require_positive_productless(wt)
    if aug is None:
        aug = augment(wt.tree)
    vl = dict(wt.labels.vertex_labels)
    el = dict(wt.labels.edge_labels)
    vl.update((a, 1) for a in aug.augmenting_vertices())
    el.update((e, 1) for e in aug.augmenting_edges())
    return LabelFunction(vl, el)


def is_conservative(tree: Ditree, labels: LabelFunction) -> bool:
    ins, outs = tree.in_edges, tree.out_edges
    for v in tree.vertices:
        if ins[v] and labels[v] != sum(labels[e] for e in ins[v]):
            return False
        if outs[v] and labels[v] != sum(labels[e] for e in outs[v]):
            return False
    return all(x >= 1 for x in labels.values())


@dataclass(frozen=True)
class Flow:
    """A positive conservative labelling of an augmented ditree."""

    host: AugmentedDitree
    values: LabelFunction

    def __post_init__(self):
        if not is_conservative(self.host.tree, self.values):
            raise NotConservative("labelling is not a positive conservative flow")

    def __getitem__(self, item):
        return self.values[item]

    def as_width_tree(self) -> WidthTree:
        return WidthTree(self.host.tree, self.values)

    def restrict(self) -> LabelFunction:
        """The flow's labels on the base ditree."""
        base = self.host.base
        return LabelFunction({v: self.values[v] for v in base.vertices},
                             {e: self.values[e] for e in base.edges})


def layer_order(tree: Ditree) -> list[Vertex]:
    """Vertices sorted by directed distance from the source set, then by id."""
    dist = {v: 0 for v in tree.vertices if not tree.in_edges[v]}
    queue = deque(sorted(dist))
    while queue:
        v = queue.popleft()
        for _, w in tree.out_edges[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return sorted(tree.vertices, key=lambda v: (dist[v], v))


def _push_forward(tree: Ditree, labels: dict):
    """One pass: make every non-sink's label equal its outgoing sum.

    Each vertex's deficit is pushed along the chain of special edges (the
    outgoing edge with the smallest head id) down to a sink.  Every vertex on
    the chain gains the deficit on both its label and its chain edges, so
    previously balanced vertices stay balanced and net extent is unchanged.
    Processing order does not affect correctness; the layer order is used
    for determinism.
    """
    outs = tree.out_edges
    special = {v: min(es, key=lambda e: e[1]) for v, es in outs.items() if es}
    for v in layer_order(tree):
        if v not in special:
            continue
        delta = labels[v] - sum(labels[e] for e in outs[v])
        if delta < 0:
            raise InternalError(f"negative deficit {delta} at {v!r}")
        if delta == 0:
            continue
        e = special[v]
        while True:
            labels[e] += delta
            w = e[1]
            labels[w] += delta
            if w not in special:
                break
            e = special[w]


def make_flow(wt: WidthTree) -> Flow:
    """A flow on the augmented ditree with the same net extent as ``wt`` and
    dominating the extended labelling pointwise."""
    aug = augment(wt.tree)
    start = extend_labels(wt, aug)
    tree = aug.tree
    labels = dict(start.vertex_labels)
    labels.update(start.edge_labels)
    _push_forward(tree, labels)
    rev = {((k[1], k[0]) if isinstance(k, tuple) else k): x for k, x in labels.items()}
    _push_forward(tree.reversed(), rev)
    final = LabelFunction.from_items(
        {((k[1], k[0]) if isinstance(k, tuple) else k): x for k, x in rev.items()})
    flow = Flow(aug, final)
    if any(final[x] < start[x] for x in tree.items()):
        raise InternalError("flow does not dominate the extended labelling")
    if net_extent(flow.as_width_tree()) != net_extent(wt):
        raise InternalError("flow construction changed net extent")
    return flow


# -- cuts -------------------------------------------------------------------------

def _cut_problems(tree: Ditree, members: frozenset) -> list[str]:
    problems = []
    unknown = members - set(tree.vertices)
    if unknown:
        problems.append(f"unknown vertices {sorted(unknown)}")
    summary = sources_sinks(tree)
    if not summary.sources <= members:
        problems.append("does not contain every source")
    if summary.sinks & members:
        problems.append("contains a sink")
    for a, b in tree.edges:
        if b in members and a not in members:
            problems.append(f"edge {a}->{b} enters the cut")
            break
    return problems


@dataclass(frozen=True)
class StrongCut:
    """A strong source-sink cut: contains every source, no sink, and no edge
    has its tail outside and its head inside."""

    host: Ditree
    members: frozenset[Vertex]

    def __init__(self, host: Ditree, members):
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "members", frozenset(members))
        problems = _cut_problems(host, self.members)
        if problems:
            raise InvalidCut("; ".join(problems))

    def boundary_edges(self) -> list[Edge]:
        return [e for e in self.host.edges
                if e[0] in self.members and e[1] not in self.members]


def is_strong_cut(tree: Ditree, members) -> bool:
    return not _cut_problems(tree, frozenset(members))


def cut_size(cut: StrongCut) -> int:
    return len(cut.boundary_edges())


def cut_value(flow: Flow, cut: StrongCut) -> int:
    if cut.host != flow.host.tree:
        raise InvalidCut("cut and flow live on different ditrees")
    return sum(flow[e] for e in cut.boundary_edges())


def max_cut_bruteforce(tree: Ditree) -> tuple[int, StrongCut]:
    """Exhaustive maximum strong cut; ties go to the lexicographically least
    sorted member tuple."""
    n = len(tree.vertices)
    if n > BRUTEFORCE_LIMIT:
        raise TooLarge(f"{n} vertices exceeds the brute-force limit of {BRUTEFORCE_LIMIT}")
    summary = sources_sinks(tree)
    if summary.sources & summary.sinks:
        raise NoValidCut("a vertex is both a source and a sink")
    free = [v for v in tree.vertices if v not in summary.sources and v not in summary.sinks]
    index = {v: i for i, v in enumerate(tree.vertices)}
    fixed = 0
    for v in summary.sources:
        fixed |= 1 << index[v]
    edges = [(1 << index[a], 1 << index[b]) for a, b in tree.edges]
    best = None
    for pick in range(1 << len(free)):
        mask = fixed
        for j, v in enumerate(free):
            if pick >> j & 1:
                mask |= 1 << index[v]
        size = 0
        ok = True
        for ta, hb in edges:
            tail_in, head_in = mask & ta, mask & hb
            if head_in and not tail_in:
                ok = False
                break
            if tail_in and not head_in:
                size += 1
        if not ok:
            continue
        members = tuple(v for v in tree.vertices if mask >> index[v] & 1)
        if best is None or size > best[0] or (size == best[0] and members < best[1]):
            best = (size, members)
    if best is None:
        raise NoValidCut("no strong source-sink cut exists")
    return best[0], StrongCut(tree, best[1])


def max_cut_size(tree: Ditree) -> int:
    """Maximum strong cut size by dynamic programming over the tree."""
    summary = sources_sinks(tree)
    if summary.sources & summary.sinks:
        raise NoValidCut("a vertex is both a source and a sink")
    neg = float("-inf")
    root = tree.vertices[0]
    parent = {root: None}
    order = [root]
    for v in order:
        for w in tree.neighbors[v]:
            if w != parent[v]:
                parent[w] = v
                order.append(w)
    best = {}
    for v in reversed(order):
        allowed = [s for s in (0, 1)
                   if not (s == 0 and v in summary.sources)
                   and not (s == 1 and v in summary.sinks)]
        row = [neg, neg]
        for s in allowed:
            total = 0
            for c in tree.neighbors[v]:
                if c == parent[v]:
                    continue
                down = tree.has_edge((v, c))
                options = []
                for t in (0, 1):
                    if best[c][t] == neg:
                        continue
                    tail, head = (s, t) if down else (t, s)
                    if head and not tail:
                        continue
                    options.append(best[c][t] + (1 if tail and not head else 0))
                if not options:
                    total = neg
                    break
                total += max(options)
            row[s] = total
        best[v] = row
    value = max(best[root])
    if value == neg:
        raise NoValidCut("no strong source-sink cut exists")
    return int(value)


def lower_bound(tree: Ditree, mode: str = AUGMENTED_CUT) -> int:
    """Lower bound on net extent over positive productless labellings.

    ``augmented_cut`` is the maximum strong cut on the augmented ditree,
    which is attained.  ``paper_formula`` is ``N2- + N2+ + max cut on T``;
    it agrees with ``augmented_cut`` unless some vertex has exactly one
    incoming and one outgoing edge, where it overcounts.
    """
    if tree.boundary:
        raise HasBoundary("lower bound is defined for boundaryless ditrees")
    if mode == AUGMENTED_CUT:
        return max_cut_size(augment(tree).tree)
    if mode == PAPER_FORMULA:
        summary = sources_sinks(tree)
        return summary.n2_minus + summary.n2_plus + max_cut_size(tree)
    raise ValueError(f"unknown bound mode {mode!r}")


# -- min flow / max cut -----------------------------------------------------------

class BoundCertificate(NamedTuple):
    bound: int
    witness_cut: StrongCut
    witness_flow: Flow
    extremal_labelling: LabelFunction
    adjustments: tuple[int, ...] = ()


def _find_adjusting_path(tree: Ditree, flow: dict, sources, sinks):
    """Breadth-first search from the sources following forward edges with
    value at least 2 and every edge backwards.

    Returns ``(path, reached)`` where ``path`` is a list of ``(edge,
    forward)`` steps from a source to a sink, or ``None`` with the final
    reached set.
    """
    reached = set(sources)
    parent = {}
    queue = deque(sorted(sources))
    while queue:
        v = queue.popleft()
        for e in tree.out_edges[v]:
            w = e[1]
            if flow[e] >= 2 and w not in reached:
                reached.add(w)
                parent[w] = (v, e, True)
                if w in sinks:
                    path = []
                    while w in parent:
                        u, edge, forward = parent[w]
                        path.append((edge, forward))
                        w = u
                    return path[::-1], reached
                queue.append(w)
        for e in tree.in_edges[v]:
            w = e[0]
            if w not in reached:
                reached.add(w)
                parent[w] = (v, e, False)
                queue.append(w)
    return None, reached


def min_flow_max_cut(wt: WidthTree) -> BoundCertificate:
    """Reduce the flow of ``wt`` along adjusting paths until no sink is
    reachable, returning the optimal flow, its restriction to the base tree,
    and the reached set as a maximum strong cut of the augmented ditree."""
    _require_positive_productless(wt)
    if len(wt.vertices) == 1:
        raise NoValidCut("a single vertex is both a source and a sink")
    flow = make_flow(wt)
    aug, tree = flow.host, flow.host.tree
    summary = sources_sinks(tree)
    values = dict(flow.values.vertex_labels)
    values.update(flow.values.edge_labels)
    current = net_extent(flow.as_width_tree())
    adjustments = []
    while True:
        path, reached = _find_adjusting_path(tree, values, summary.sources, summary.sinks)
        if path is None:
            break
        eps = min(values[e] for e, fwd in path if fwd) - 1
        if eps < 1:
            raise InternalError("adjusting path with no slack")
        for e, fwd in path:
            values[e] += -eps if fwd else eps
        for v in tree.vertices:
            values[v] = max(sum(values[e] for e in tree.in_edges[v]),
                            sum(values[e] for e in tree.out_edges[v]))
        flow = Flow(aug, LabelFunction.from_items(values))
        ne = net_extent(flow.as_width_tree())
        if ne != current - eps:
            raise InternalError("adjustment did not lower net extent by epsilon")
        current = ne
        adjustments.append(eps)
    cut = StrongCut(tree, reached)
    if cut_size(cut) != current:
        raise InternalError("terminal cut size differs from net extent")
    return BoundCertificate(current, cut, flow, flow.restrict(), tuple(adjustments))


def seed_labelling(tree: Ditree) -> WidthTree:
    """Edges labelled 1, vertices ``max(in-degree, out-degree) + 1``: a
    positive productless width tree on any ditree."""
    vl = {v: max(len(tree.in_edges[v]), len(tree.out_edges[v])) + 1 for v in tree.vertices}
    return WidthTree(tree, LabelFunction(vl, {e: 1 for e in tree.edges}))


def synthesize_equality_labelling(tree: Ditree) -> tuple[WidthTree, BoundCertificate]:
    """A positive productless labelling of ``tree`` of least net extent."""
    cert = min_flow_max_cut(seed_labelling(tree))
    return WidthTree(tree, cert.extremal_labelling), cert
