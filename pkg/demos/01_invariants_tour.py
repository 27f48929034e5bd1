"""
Width tree invariants
=====================

Build a few small width trees, compute their invariants and look at how
the numbers are distributed over an exhaustive enumeration.
"""

import numpy as np

from widthtree import family, net_extent, trunk, width, full_amalgamation, mu_transform
from widthtree.core import width_tree
from widthtree.harness import EnumerationSpec, batches
from widthtree.invariants import batch_invariants, report

## A single edge: two thick spheres of extent 2 joined by a thin sphere of extent 1
ab = width_tree([("a", "b", 1)], {"a": 2, "b": 2})
print("a->b:", report(ab))

## The nine-vertex example tree
fig6 = family("figure6")
print("figure6: net extent", net_extent(fig6), "width", width(fig6), "trunk", trunk(fig6))

# amalgamating leaves one at a time recovers net extent (sum) and trunk (max)
print("amalgamation sum/max:", full_amalgamation(fig6, "sum"), full_amalgamation(fig6, "max"))

# mu relabels lambda as 2 lambda^2 - lambda; its net extent is width - net extent
mu = mu_transform(ab)
print("mu(a->b) net extent:", net_extent(mu), "=", width(ab), "-", net_extent(ab))

## Bulk statistics over every nonnegative width tree with <= 5 vertices, labels <= 3
ratios = []
for shape, v, e in batches(EnumerationSpec(5, 3, {"nonnegative"})):
    ne, w, tr = batch_invariants(v, e)
    ok = ne > 0
    ratios.append(w[ok] / (2.0 * ne[ok] ** 2))

ratios = np.concatenate(ratios)
print("trees:", len(ratios))
print("width / (2 ne^2): min %.3f  median %.3f  max %.3f"
      % (ratios.min(), np.median(ratios), ratios.max()))

# histogram in ten bins, printed as text
counts, edges = np.histogram(ratios, bins=10, range=(0, 1))
for c, lo in zip(counts, edges):
    print(f"  {lo:.1f}  {'#' * int(60 * c / counts.max())}")
