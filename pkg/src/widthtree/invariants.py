"""Exact integer invariants of width trees and combinatorial amalgamation."""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .core import (
    Ditree,
    LabelFunction,
    Vertex,
    WidthTree,
    classify,
    is_coherent_path,
)
from .errors import (
    BoundaryLeaf,
    HasBoundary,
    LabelTooSmall,
    NotALeaf,
    NotCoherentPath,
    NotSlim,
)

SUM = "sum"
MAX = "max"


def net_extent(wt: WidthTree) -> int:
    lam = wt.labels
    return sum(lam.vertex_labels.values()) - sum(lam.edge_labels.values())


def net_extent_by_vertex_sums(wt: WidthTree) -> tuple[int, int]:
    """Net extent summed vertex by vertex, once charging each edge to its
    head and once to its tail."""
    lam, tree = wt.labels, wt.tree
    via_in = sum(lam[v] - sum(lam[e] for e in tree.in_edges[v]) for v in tree.vertices)
    via_out = sum(lam[v] - sum(lam[e] for e in tree.out_edges[v]) for v in tree.vertices)
    return via_in, via_out


def width(wt: WidthTree) -> int:
    lam = wt.labels
    return 2 * (sum(x * x for x in lam.vertex_labels.values())
                - sum(x * x for x in lam.edge_labels.values()))


def trunk(wt: WidthTree) -> int:
    return max(wt.labels.vertex_labels.values())


def gabai_candidate(wt: WidthTree) -> int:
    """Gabai width of the thin position a coherent-path width tree describes.

    Equal to ``2 * (sum (lambda(v)+1)**2 - sum (lambda(e)+1)**2)``, i.e. the
    classical alternating sum of squared half puncture counts.
    """
    if not is_coherent_path(wt.tree):
        raise NotCoherentPath("Gabai width is only defined for coherent paths")
    return width(wt) + 4 * net_extent(wt) + 2


class InvariantReport(NamedTuple):
    net_extent: int
    width: int
    trunk: int
    gabai_candidate: Optional[int]
    mu_net_extent: int


def report(wt: WidthTree) -> InvariantReport:
    ne, w = net_extent(wt), width(wt)
    gabai = gabai_candidate(wt) if is_coherent_path(wt.tree) else None
    # net extent of (T, 2 lambda^2 - lambda), defined whatever the labels
    return InvariantReport(ne, w, trunk(wt), gabai, w - ne)


def batch_invariants(vertex_labels: np.ndarray, edge_labels: np.ndarray):
    """Net extent, width and trunk for a batch of labellings of one shape.

    Rows are labellings; columns are vertices (resp. edges).  Returns three
    int64 arrays.
    """
    v = vertex_labels.astype(np.int64)
    e = edge_labels.astype(np.int64)
    ne = v.sum(axis=1) - e.sum(axis=1)
    w = 2 * ((v * v).sum(axis=1) - (e * e).sum(axis=1))
    return ne, w, v.max(axis=1)


# -- amalgamation ---------------------------------------------------------------

def amalgamate_leaf(wt: WidthTree, leaf: Vertex, mode: str = SUM) -> WidthTree:
    """Remove ``leaf`` and its edge, folding its label into its neighbour.

    With ``mode="sum"`` the neighbour ``w`` gets ``lambda(u) + lambda(w) -
    lambda(f)``, which preserves net extent; with ``mode="max"`` it gets
    ``max(lambda(u), lambda(w))``, which preserves trunk.
    """
    tree = wt.tree
    if leaf not in tree.neighbors or tree.degree(leaf) != 1:
        raise NotALeaf(f"{leaf!r} is not a leaf")
    (w,) = tree.neighbors[leaf]
    if leaf in tree.boundary or w in tree.boundary:
        raise BoundaryLeaf(f"cannot amalgamate across boundary vertex at {leaf!r}")
    f = tree.incident_edge(leaf)
    lam = wt.labels
    if mode == SUM:
        new_w = lam[leaf] + lam[w] - lam[f]
    elif mode == MAX:
        new_w = max(lam[leaf], lam[w])
    else:
        raise ValueError(f"unknown amalgamation mode {mode!r}")
    vl = {v: x for v, x in lam.vertex_labels.items() if v != leaf}
    vl[w] = new_w
    el = {e: x for e, x in lam.edge_labels.items() if e != f}
    new_tree = Ditree(vl.keys(), el.keys(), tree.boundary)
    return WidthTree(new_tree, LabelFunction(vl, el), wt.delta)


def full_amalgamation(wt: WidthTree, mode: str = SUM) -> int:
    """Amalgamate leaves (smallest id first) down to one vertex; return its label."""
    if wt.tree.boundary:
        raise HasBoundary("amalgamation to a single vertex needs a boundaryless tree")
    while len(wt.vertices) > 1:
        leaf = min(v for v in wt.vertices if wt.tree.degree(v) == 1)
        wt = amalgamate_leaf(wt, leaf, mode)
    (v,) = wt.vertices
    return wt[v]


# -- label transforms -------------------------------------------------------------

def mu_transform(wt: WidthTree) -> WidthTree:
    """Replace every label x by 2x^2 - x.

    The net extent of the result is width minus net extent of the input.
    """
    if any(x < 1 for x in wt.labels.values()):
        raise LabelTooSmall("mu transform needs every label to be at least 1")
    return wt.with_labels(wt.labels.map(lambda x: 2 * x * x - x))


class TopologicalFlags(NamedTuple):
    """Edge-label indicators on a slim width tree.

    has_minus1_edge marks a split tangle, has_zero_edge a composite one, and
    has_one_edge an essential Conway sphere or a 4-punctured boundary sphere.
    """

    has_minus1_edge: bool
    has_zero_edge: bool
    has_one_edge: bool


def topological_flags(wt: WidthTree) -> TopologicalFlags:
    if not classify(wt).slim:
        raise NotSlim("flags are only meaningful on slim width trees")
    labels = set(wt.labels.edge_labels.values())
    return TopologicalFlags(-1 in labels, 0 in labels, 1 in labels)
