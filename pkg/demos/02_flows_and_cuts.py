"""
Lower bounds from cuts
======================

The least net extent of a positive productless labelling of a ditree equals
the largest strong cut of its augmented ditree.  This script walks through
the pieces and then surveys where the shortcut formula
N2- + N2+ + max|dS| overshoots.
"""

from collections import Counter

from widthtree import augment, family, lower_bound, make_flow, net_extent
from widthtree.core import Ditree
from widthtree.flows import PAPER_FORMULA, min_flow_max_cut, synthesize_equality_labelling
from widthtree.harness import ditrees, min_net_extent_bruteforce

## Augmenting a path adds a fresh neighbour at every sole incoming/outgoing edge
path3 = Ditree((), [("a", "v"), ("v", "b")])
aug = augment(path3)
print("augmented path edges:", aug.tree.edges)

## Flow, adjusting paths, certificate
fig6 = family("figure6")
flow = make_flow(fig6)
print("flow net extent:", net_extent(flow.as_width_tree()))
cert = min_flow_max_cut(fig6)
print("bound", cert.bound, "witness cut", sorted(cert.witness_cut.members))

## A labelling attaining the bound, found from the shape alone
wt, cert = synthesize_equality_labelling(path3)
print("path labels:", dict(wt.labels.vertex_labels), dict(wt.labels.edge_labels))
print("brute force minimum:", min_net_extent_bruteforce(path3, 4))

## Survey: formula minus true bound over all ditrees with 2..7 vertices
gap = Counter()
total = 0
for tree in ditrees(7, 2):
    total += 1
    gap[lower_bound(tree, PAPER_FORMULA) - lower_bound(tree)] += 1

print(f"{total} ditrees")
for g in sorted(gap):
    print(f"  formula - bound = {g}: {gap[g]}")
