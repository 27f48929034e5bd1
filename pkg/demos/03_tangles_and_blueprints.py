"""
From width trees to blueprints
==============================

Realize trivialpods as combinatorial tangles, glue them into a blueprint
for a whole width tree and merge the resulting curves into one knot.
"""

from widthtree import Trivialpod, associate, realize, assemble, count_components
from widthtree.io import export_dot, serialize_blueprint
from widthtree.harness import family
from widthtree.tangle import FEWEST_GHOSTS, knotify_trace

## One tangle: thick label 3 over two thin labels 1
data = realize(Trivialpod(3, (1, 1)))
print("bridge arcs", data.bridge_arcs, "vertical", data.vertical, "ghosts", data.ghosts)
for arc in data.arcs:
    print("   ", arc)
print("back to the pod:", associate(data))

## A whole tree
wt = family("figure2")
bp = assemble(wt, FEWEST_GHOSTS)
print("spheres", len(bp.spheres), "tangles", len(bp.tangles), "ghost arcs", bp.ghost_arc_count)

# identity gluings leave many closed curves; each transposition merges two
print("components:", count_components(bp))
for step, nxt in enumerate(knotify_trace(bp), 1):
    print(f"  after swap {step}: {count_components(nxt)}")
    bp = nxt

## Documents
text = serialize_blueprint(bp)
print("blueprint document:", len(text.splitlines()), "lines")
print(export_dot(wt, "figure2"))
