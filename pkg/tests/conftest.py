import itertools

import pytest

from widthtree.core import Ditree, LabelFunction, WidthTree, width_tree
from widthtree.harness import family


def path_tree(*labels, edges=None, directions=None):
    """Path v0 - v1 - ... with the given vertex labels; edges point forward
    unless ``directions`` says otherwise (+1 forward, -1 backward)."""
    names = [f"v{i}" for i in range(len(labels))]
    edges = edges or [1] * (len(labels) - 1)
    directions = directions or [1] * (len(labels) - 1)
    triples = []
    for i, (x, d) in enumerate(zip(edges, directions)):
        a, b = names[i], names[i + 1]
        triples.append((a, b, x) if d > 0 else (b, a, x))
    return width_tree(triples, dict(zip(names, labels)))


def isomorphic_bruteforce(a: WidthTree, b: WidthTree) -> bool:
    """Try every vertex bijection, with and without global reversal."""
    if len(a.vertices) != len(b.vertices):
        return False
    if sorted(a.labels.values()) != sorted(b.labels.values()):
        return False
    av, bv = a.vertices, b.vertices
    for perm in itertools.permutations(bv):
        m = dict(zip(av, perm))
        if any(a[v] != b[m[v]] or (v in a.tree.boundary) != (m[v] in b.tree.boundary)
               for v in av):
            continue
        for flip in (False, True):
            ok = True
            for x, y in a.edges:
                image = (m[y], m[x]) if flip else (m[x], m[y])
                if not b.tree.has_edge(image) or b[image] != a[(x, y)]:
                    ok = False
                    break
            if ok:
                return True
    return False


def relabel(wt: WidthTree, mapping) -> WidthTree:
    tree = wt.tree
    vl = {mapping[v]: wt[v] for v in tree.vertices}
    el = {(mapping[a], mapping[b]): wt[(a, b)] for a, b in tree.edges}
    new = Ditree(vl.keys(), el.keys(), {mapping[v] for v in tree.boundary})
    return WidthTree(new, LabelFunction(vl, el), wt.delta)


@pytest.fixture
def figure6():
    return family("figure6")


@pytest.fixture
def path3():
    return Ditree((), [("a", "v"), ("v", "b")])


# -- acceptance report ------------------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
