"""Exhaustive enumeration of small width trees, brute-force oracles and the
example families drawn in the figures.

Enumeration works shape by shape.  A *shape* is an oriented ditree with a
boundary set, one representative per equivalence class.  All labellings of a
shape are generated at once as integer arrays, vertex column by vertex
column, keeping only labels allowed by the cut condition.  Duplicates are
then removed with the shape's symmetry group (automorphisms together with
orientation-reversing isomorphisms onto itself): a labelling is kept exactly
when its integer code is the smallest in its orbit.
"""

from __future__ import annotations

import builtins
import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher

from .core import (
    Ditree,
    LabelFunction,
    WidthTree,
    is_coherent_path,
    sources_sinks,
    tree_code,
)
from .errors import BadParams, GuardExceeded
from .flows import lower_bound

MAX_VERTICES = 8
MAX_LABEL = 6

PREDICATES = frozenset({"positive", "productless", "nonnegative", "boundaryless", "coherent_path"})


@dataclass(frozen=True)
class EnumerationSpec:
    max_vertices: int
    max_label: int
    require: frozenset[str] = frozenset()
    min_vertices: int = 1

    def __post_init__(self):
        object.__setattr__(self, "require", frozenset(self.require))
        unknown = self.require - PREDICATES
        if unknown:
            raise BadParams(f"unknown predicates {sorted(unknown)}")
        if not 1 <= self.min_vertices <= self.max_vertices <= MAX_VERTICES:
            raise GuardExceeded(f"vertex range must lie within 1..{MAX_VERTICES}")
        if not -1 <= self.max_label <= MAX_LABEL:
            raise GuardExceeded(f"max_label must lie within -1..{MAX_LABEL}")

    @property
    def min_label(self) -> int:
        if "positive" in self.require:
            return 1
        if "nonnegative" in self.require:
            return 0
        return -1


# -- shapes -----------------------------------------------------------------------

@dataclass(frozen=True)
class Shape:
    tree: Ditree
    # each symmetry is a column permutation of (vertex columns + edge columns)
    symmetries: tuple[tuple[int, ...], ...]


def _free_trees(n: int):
    if n == 1:
        g = nx.Graph()
        g.add_node(0)
        return [g]
    return list(nx.nonisomorphic_trees(n))


def _symmetries(tree: Ditree) -> tuple[tuple[int, ...], ...]:
    g = nx.DiGraph()
    for v in tree.vertices:
        g.add_node(v, boundary=v in tree.boundary)
    g.add_edges_from(tree.edges)
    match = lambda a, b: a["boundary"] == b["boundary"]
    vindex = {v: i for i, v in builtins.enumerate(tree.vertices)}
    nv = len(tree.vertices)
    eindex = {e: nv + i for i, e in builtins.enumerate(tree.edges)}
    perms = set()
    for target, flip in ((g, False), (g.reverse(copy=True), True)):
        for m in DiGraphMatcher(g, target, node_match=match).isomorphisms_iter():
            # labelling moves along m: new[m(x)] = old[x]
            perm = [0] * (nv + len(tree.edges))
            for v, w in m.items():
                perm[vindex[w]] = vindex[v]
            for a, b in tree.edges:
                image = (m[b], m[a]) if flip else (m[a], m[b])
                perm[eindex[image]] = eindex[(a, b)]
            perms.add(tuple(perm))
    return tuple(sorted(perms))


@lru_cache(maxsize=None)
def shapes(n: int, boundaryless: bool = False) -> tuple[Shape, ...]:
    """One oriented ditree (with boundary set) per equivalence class on
    ``n`` vertices, sorted by canonical code."""
    if not 1 <= n <= MAX_VERTICES:
        raise GuardExceeded(f"n must lie within 1..{MAX_VERTICES}")
    found = {}
    names = [f"v{i}" for i in range(n)]
    for g in _free_trees(n):
        und = [(names[a], names[b]) for a, b in g.edges()]
        leaves = [names[v] for v in g.nodes if g.degree(v) == 1]
        subsets = [()] if boundaryless else [
            c for k in range(len(leaves) + 1) for c in itertools.combinations(leaves, k)]
        for bits in itertools.product((0, 1), repeat=len(und)):
            edges = [(a, b) if s == 0 else (b, a) for (a, b), s in zip(und, bits)]
            for boundary in subsets:
                tree = Ditree(names, edges, boundary)
                code = tree_code(tree)
                if code not in found:
                    found[code] = tree
    return tuple(Shape(found[c], _symmetries(found[c])) for c in sorted(found))


# -- labelling batches ------------------------------------------------------------------

def label_batch(shape: Shape, spec: EnumerationSpec) -> tuple[np.ndarray, np.ndarray]:
    """All labellings of ``shape`` meeting ``spec``, one per equivalence class.

    Returns ``(vertex_labels, edge_labels)`` as int64 arrays with one row per
    width tree; columns follow ``shape.tree.vertices`` and ``shape.tree.edges``.
    """
    tree = shape.tree
    lo, hi = spec.min_label, spec.max_label
    nv, ne = len(tree.vertices), len(tree.edges)
    if "boundaryless" in spec.require and tree.boundary:
        return np.zeros((0, nv), np.int64), np.zeros((0, ne), np.int64)
    if "coherent_path" in spec.require and not is_coherent_path(tree):
        return np.zeros((0, nv), np.int64), np.zeros((0, ne), np.int64)

    eidx = {e: i for i, e in builtins.enumerate(tree.edges)}
    if ne:
        edges = np.array(list(itertools.product(range(lo, hi + 1), repeat=ne)), dtype=np.int64)
    else:
        edges = np.zeros((1, 0), dtype=np.int64)
    # boundary edges carry their vertex's label, which is nonnegative
    for v in tree.boundary:
        col = eidx[tree.incident_edge(v)]
        edges = edges[edges[:, col] >= max(lo, 0)]
    pos = np.maximum(edges, 0)
    rows = np.arange(len(edges))
    columns = []
    productless = "productless" in spec.require
    for v in tree.vertices:
        ins = [eidx[e] for e in tree.in_edges[v]]
        outs = [eidx[e] for e in tree.out_edges[v]]
        if v in tree.boundary:
            columns.append(edges[rows, eidx[tree.incident_edge(v)]])
            continue
        need = np.maximum(pos[rows][:, ins].sum(axis=1), pos[rows][:, outs].sum(axis=1))
        low = np.maximum(need, lo)
        count = np.clip(hi - low + 1, 0, None)
        keep = np.repeat(np.arange(len(rows)), count)
        starts = np.cumsum(count) - count
        value = low[keep] + (np.arange(len(keep)) - starts[keep])
        rows = rows[keep]
        columns = [c[keep] for c in columns]
        if productless:
            ok = np.ones(len(rows), dtype=bool)
            for group in (ins, outs):
                if len(group) == 1:
                    ok &= value != edges[rows, group[0]]
            rows, value = rows[ok], value[ok]
            columns = [c[ok] for c in columns]
        columns.append(value)
    vert = np.stack(columns, axis=1) if columns else np.zeros((len(rows), 0), np.int64)
    edge = edges[rows]

    if len(shape.symmetries) > 1 and len(vert):
        full = np.concatenate([vert, edge], axis=1)
        base = hi + 2
        weights = base ** np.arange(full.shape[1] - 1, -1, -1, dtype=np.int64)
        shifted = full + 1
        code = shifted @ weights
        keep = np.ones(len(full), dtype=bool)
        for perm in shape.symmetries:
            keep &= code <= shifted[:, list(perm)] @ weights
        vert, edge = vert[keep], edge[keep]
    return vert, edge


def batches(spec: EnumerationSpec) -> Iterator[tuple[Shape, np.ndarray, np.ndarray]]:
    boundaryless = "boundaryless" in spec.require
    for n in range(spec.min_vertices, spec.max_vertices + 1):
        for shape in shapes(n, boundaryless):
            vert, edge = label_batch(shape, spec)
            if len(vert):
                yield shape, vert, edge


def batch_tree(shape: Shape, vert_row, edge_row) -> WidthTree:
    tree = shape.tree
    return WidthTree(tree, LabelFunction(dict(zip(tree.vertices, vert_row.tolist())),
                                         dict(zip(tree.edges, edge_row.tolist()))))


def enumerate(spec: EnumerationSpec) -> Iterator[WidthTree]:
    """Every width tree meeting ``spec`` exactly once up to equivalence."""
    for shape, vert, edge in batches(spec):
        for i in range(len(vert)):
            yield batch_tree(shape, vert[i], edge[i])


def count(spec: EnumerationSpec) -> int:
    return sum(len(v) for _, v, _ in batches(spec))


def ditrees(max_vertices: int, min_vertices: int = 1) -> Iterator[Ditree]:
    """Boundaryless ditrees up to equivalence."""
    for n in range(min_vertices, max_vertices + 1):
        for shape in shapes(n, True):
            yield shape.tree


# -- brute-force oracles ------------------------------------------------------------

def min_net_extent_bruteforce(tree: Ditree, cap: int) -> int:
    """Least net extent over positive productless labellings with labels in
    ``1..cap``.

    Every edge labelling is tried.  Given the edges, each vertex label is
    constrained only by its own incident edges, so the minimum is the sum of
    per-vertex minima: the least value at least 1 and both nonnegative sums,
    skipping the label of a sole incoming or sole outgoing edge.
    """
    if tree.boundary:
        raise BadParams("oracle is defined for boundaryless ditrees")
    if cap < 1 or len(tree.edges) > 12 or cap ** len(tree.edges) > 5_000_000:
        raise GuardExceeded("search space too large")
    best = None
    ins, outs = tree.in_edges, tree.out_edges
    for labels in itertools.product(range(1, cap + 1), repeat=len(tree.edges)):
        lam = dict(zip(tree.edges, labels))
        total = -sum(labels)
        for v in tree.vertices:
            x = max(1, sum(lam[e] for e in ins[v]), sum(lam[e] for e in outs[v]))
            banned = set()
            if len(ins[v]) == 1:
                banned.add(lam[ins[v][0]])
            if len(outs[v]) == 1:
                banned.add(lam[outs[v][0]])
            while x in banned:
                x += 1
            if x > cap:
                total = None
                break
            total += x
        if total is not None and (best is None or total < best):
            best = total
    if best is None:
        raise GuardExceeded(f"no positive productless labelling with labels <= {cap}")
    return best


def random_width_tree(rng: random.Random, max_vertices: int = 12, max_label: int = 9,
                      boundary_rate: float = 0.3) -> WidthTree:
    """A random valid width tree built so that both conditions hold by
    construction: edge labels are drawn within the capacity left at both
    endpoints, then vertex labels between their requirement and the cap."""
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    edges = []
    if n == 2:
        edges = [(names[0], names[1])]
    elif n > 2:
        prufer = [rng.randrange(n) for _ in range(n - 2)]
        edges = [(names[a], names[b]) for a, b in nx.from_prufer_sequence(prufer).edges()]
    edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in edges]
    degree = {v: 0 for v in names}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    boundary = {v for v in names if degree[v] == 1 and rng.random() < boundary_rate}
    # two adjacent boundary vertices would leave nothing to label freely
    if len(names) == 2 and len(boundary) == 2:
        boundary = {names[0]}
    out_used = {v: 0 for v in names}
    in_used = {v: 0 for v in names}
    elab = {}
    order = list(edges)
    rng.shuffle(order)
    for a, b in order:
        room = max_label - max(out_used[a], in_used[b])
        low = 0 if (a in boundary or b in boundary) else -1
        x = rng.randint(low, room)
        elab[(a, b)] = x
        if x > 0:
            out_used[a] += x
            in_used[b] += x
    vlab = {}
    for v in names:
        if v in boundary:
            (e,) = [e for e in edges if v in e]
            vlab[v] = elab[e]
        else:
            vlab[v] = rng.randint(max(in_used[v], out_used[v]), max_label)
    return WidthTree(Ditree(names, edges, boundary), LabelFunction(vlab, elab))


# -- example families -----------------------------------------------------------------

# Figure 6: nine vertices labelled 2 and eight edges labelled 1, every edge
# drawn pointing down the page.  Among the orientations with N2+ = 4,
# maximum cut 5 realised by the sources and augmented bound 10 (see
# figure6_orientations) it is the one whose sources are the top row.  Its
# N2- is 2.  No 9-vertex tree labelled this way has N2- odd: every
# in-degree is at most 2 and the in-degrees sum to 8.
FIGURE6_SHAPE = (
    ("t1", "b1"), ("t2", "b1"), ("t2", "m1"), ("t3", "m1"),
    ("m1", "m2"), ("m2", "b2"), ("m2", "b3"), ("t4", "b3"),
)
FIGURE6_EDGES = FIGURE6_SHAPE


def figure6_orientations(n2_minus: Optional[int] = None) -> list[tuple[tuple[str, str], ...]]:
    """Orientations of the Figure 6 shape that carry the all-2/all-1
    labelling and have N2+ = 4, maximum cut 5 attained by the source set,
    and augmented bound 10; optionally also the given N2-."""
    from .flows import StrongCut, cut_size, is_strong_cut, max_cut_bruteforce

    found = []
    for bits in itertools.product((0, 1), repeat=len(FIGURE6_SHAPE)):
        edges = tuple((a, b) if s == 0 else (b, a) for (a, b), s in zip(FIGURE6_SHAPE, bits))
        tree = Ditree((), edges)
        if any(len(tree.in_edges[v]) > 2 or len(tree.out_edges[v]) > 2 for v in tree.vertices):
            continue
        summary = sources_sinks(tree)
        if summary.n2_plus != 4:
            continue
        if n2_minus is not None and summary.n2_minus != n2_minus:
            continue
        best, _ = max_cut_bruteforce(tree)
        if best != 5 or not is_strong_cut(tree, summary.sources):
            continue
        if cut_size(StrongCut(tree, summary.sources)) != 5 or lower_bound(tree) != 10:
            continue
        found.append(edges)
    return found


def _figure6() -> WidthTree:
    tree = Ditree((), FIGURE6_EDGES)
    return WidthTree(tree, LabelFunction({v: 2 for v in tree.vertices},
                                         {e: 1 for e in tree.edges}))


def _figure2() -> WidthTree:
    # Centre sphere (6) meets thin spheres labelled 3, 3 on one side and 0, 2
    # on the other, which is the split needing exactly one ghost arc.
    edges = [("top_right", "centre", 3), ("bottom_left", "centre", 3),
             ("centre", "top_left", 0), ("centre", "bottom_right", 2),
             ("far_left", "top_left", 0)]
    labels = {"centre": 6, "top_left": 4, "top_right": 4, "bottom_left": 4,
              "bottom_right": 3, "far_left": 3}
    return _build(edges, labels)


def _build(edges, labels, delta=None) -> WidthTree:
    tree = Ditree(labels.keys(), [(a, b) for a, b, _ in edges])
    return WidthTree(tree, LabelFunction(labels, {(a, b): x for a, b, x in edges}), delta)


def _half(value: int, name: str) -> int:
    if value % 2:
        raise BadParams(f"{name} must be even")
    return value // 2


def _take(params: dict, keys) -> list[int]:
    try:
        return [int(params.pop(k)) for k in keys]
    except KeyError as exc:
        raise BadParams(f"missing parameter {exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise BadParams(str(exc)) from None


def family(name: str, params: Optional[dict] = None) -> WidthTree:
    """Width trees drawn in the figures.

    ``figure1_left``/``figure1_center``/``figure1_right`` are the three small
    examples (bridge position, concentric thin position, non-concentric),
    ``figure2`` the six-vertex tree with one ghost arc, ``figure6`` the tree
    attaining the min flow / max cut bound, and ``davies_zupan`` the
    four-vertex tree of the configuration k'(r1, r2, s1, s2) with
    caller-supplied edge labels ``e1, e2, e3`` (top to bottom).  Any family
    accepts ``delta``.
    """
    params = dict(params or {})
    delta = params.pop("delta", None)
    if name == "figure1_left":
        wt = _build([], {"H": 1})
    elif name == "figure1_center":
        wt = _build([("H1", "H2", 1)], {"H1": 5, "H2": 2})
    elif name == "figure1_right":
        wt = _build([("H", "H1", 1), ("H", "H2", 1)], {"H": 3, "H1": 2, "H2": 3})
    elif name == "figure2":
        wt = _figure2()
    elif name == "figure6":
        wt = _figure6()
    elif name == "davies_zupan":
        r1, r2, s1, s2 = _take(params, ("r1", "r2", "s1", "s2"))
        outer = r2 + _half(s1 + s2, "s1 + s2") - 1
        inner = r1 + _half(s1, "s1") - 1
        e1, e2, e3 = _take(params, ("e1", "e2", "e3"))
        labels = {"top": outer, "upper": inner, "lower": inner, "bottom": outer}
        edges = [("top", "upper", e1), ("upper", "lower", e2), ("lower", "bottom", e3)]
        try:
            wt = _build(edges, labels)
        except Exception as exc:
            raise BadParams(f"parameters do not give a width tree: {exc}") from None
    else:
        raise BadParams(f"unknown family {name!r}")
    if params:
        raise BadParams(f"unused parameters {sorted(params)}")
    return wt.with_delta(delta) if delta is not None else wt


FAMILIES = ("figure1_left", "figure1_center", "figure1_right", "figure2",
            "figure6", "davies_zupan")
