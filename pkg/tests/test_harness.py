import itertools
import random

import pytest

from widthtree.core import Ditree, WidthTree, canonical_form, classify, sources_sinks, width_tree
from widthtree.errors import BadParams, GuardExceeded
from widthtree.flows import lower_bound, max_cut_bruteforce, synthesize_equality_labelling
from widthtree.harness import (
    FAMILIES,
    EnumerationSpec,
    count,
    ditrees,
    enumerate as enumerate_trees,
    family,
    figure6_orientations,
    min_net_extent_bruteforce,
    random_width_tree,
)
from widthtree.invariants import net_extent


# -- enumeration -------------------------------------------------------------------------

def test_enumerate_single_vertex_positive():
    trees = list(enumerate_trees(EnumerationSpec(1, 1, {"positive"})))
    assert len(trees) == 1 and trees[0][trees[0].vertices[0]] == 1


def test_enumerate_edge_positive_productless():
    spec = EnumerationSpec(2, 2, {"positive", "productless", "boundaryless"}, 2)
    (wt,) = enumerate_trees(spec)
    assert sorted(wt.labels.vertex_labels.values()) == [2, 2]
    assert list(wt.labels.edge_labels.values()) == [1]


def test_enumerate_edge_by_hand():
    # boundaryless a -> b, labels in 0..1: edge x, vertices >= x each;
    # reversal identifies (p, q, x) with (q, p, x)
    hand = {(min(p, q), max(p, q), x) for x in (0, 1) for p in (0, 1) for q in (0, 1)
            if p >= x and q >= x}
    spec = EnumerationSpec(2, 1, {"nonnegative", "boundaryless"}, 2)
    got = set()
    for wt in enumerate_trees(spec):
        p, q = (wt[v] for v in wt.vertices)
        (x,) = wt.labels.edge_labels.values()
        got.add((min(p, q), max(p, q), x))
    assert got == hand and count(spec) == len(hand)


def test_enumeration_duplicate_free():
    forms = [canonical_form(wt) for wt in enumerate_trees(EnumerationSpec(5, 2))]
    assert len(forms) == len(set(forms))


def test_predicates_respected():
    spec = EnumerationSpec(5, 2, {"positive", "productless", "coherent_path"})
    for wt in enumerate_trees(spec):
        c = classify(wt)
        assert c.positive and c.productless


def _brute_key(vertices, edges, vl, el, boundary):
    n = len(vertices)
    best = None
    for perm in itertools.permutations(range(n)):
        p = dict(zip(vertices, perm))
        for flip in (False, True):
            es = tuple(sorted(((p[b], p[a]) if flip else (p[a], p[b])) + (el[(a, b)],)
                              for a, b in edges))
            vs = tuple(sorted((p[v], vl[v], v in boundary) for v in vertices))
            key = (vs, es)
            best = key if best is None or key < best else best
    return best


def _recursive_generation(max_n, max_label):
    """Independent generator: every edge set on range(n), every orientation,
    boundary leaf subset and labelling, checked against the raw conditions."""
    keys = set()
    for n in range(1, max_n + 1):
        verts = list(range(n))
        pairs = list(itertools.combinations(verts, 2))
        for edge_set in itertools.combinations(pairs, n - 1):
            # connected with n - 1 edges means a tree
            seen, stack = {0}, [0]
            while stack:
                x = stack.pop()
                for a, b in edge_set:
                    for y, z in ((a, b), (b, a)):
                        if y == x and z not in seen:
                            seen.add(z)
                            stack.append(z)
            if len(seen) != n:
                continue
            for flips in itertools.product((False, True), repeat=n - 1):
                edges = [(b, a) if f else (a, b) for (a, b), f in zip(edge_set, flips)]
                deg = {v: sum(v in e for e in edges) for v in verts}
                leaves = [v for v in verts if deg[v] == 1]
                for k in range(len(leaves) + 1):
                    for boundary in itertools.combinations(leaves, k):
                        for elabels in itertools.product(range(-1, max_label + 1), repeat=n - 1):
                            el = dict(zip(edges, elabels))
                            need = {}
                            for v in verts:
                                inc = sum(max(el[e], 0) for e in edges if e[1] == v)
                                out = sum(max(el[e], 0) for e in edges if e[0] == v)
                                need[v] = max(inc, out)
                            ok_boundary = True
                            fixed = {}
                            for v in boundary:
                                (e,) = [e for e in edges if v in e]
                                fixed[v] = el[e]
                                ok_boundary &= el[e] >= need[v]
                            if not ok_boundary:
                                continue
                            choices = [[fixed[v]] if v in fixed
                                       else range(need[v], max_label + 1) for v in verts]
                            for vlabels in itertools.product(*choices):
                                vl = dict(zip(verts, vlabels))
                                keys.add(_brute_key(verts, edges, vl, el, set(boundary)))
    return keys


def test_enumeration_complete_against_recursive_generation():
    expected = _recursive_generation(4, 1)
    got = set()
    for wt in enumerate_trees(EnumerationSpec(4, 1)):
        el = dict(wt.labels.edge_labels)
        got.add(_brute_key(list(wt.vertices), list(wt.edges), dict(wt.labels.vertex_labels),
                           el, set(wt.tree.boundary)))
    assert got == expected
    assert count(EnumerationSpec(4, 1)) == len(expected)


def test_guards():
    with pytest.raises(GuardExceeded):
        EnumerationSpec(9, 1)
    with pytest.raises(GuardExceeded):
        EnumerationSpec(3, 7)
    with pytest.raises(BadParams):
        EnumerationSpec(3, 1, {"sparkly"})


def test_ditrees_counts():
    # oriented trees up to isomorphism and reversal: 1, 1, 2, 5 on 1..4 vertices
    assert [sum(1 for _ in ditrees(n, n)) for n in range(1, 5)] == [1, 1, 2, 5]


# -- brute-force oracle ---------------------------------------------------------------

def test_min_net_extent_examples(figure6):
    assert min_net_extent_bruteforce(Ditree((), [("a", "b")]), 3) == 3
    assert min_net_extent_bruteforce(Ditree((), [("a", "v"), ("v", "b")]), 4) == 4
    assert min_net_extent_bruteforce(figure6.tree, 3) == 10


def test_min_net_extent_matches_full_search():
    # vertex labels searched too, not just derived
    for tree in ditrees(4, 2):
        best = None
        items = list(tree.vertices) + list(tree.edges)
        for labels in itertools.product(range(1, 5), repeat=len(items)):
            lam = dict(zip(items, labels))
            try:
                wt = width_tree([(a, b, lam[(a, b)]) for a, b in tree.edges],
                                {v: lam[v] for v in tree.vertices})
            except Exception:
                continue
            if classify(wt).productless:
                ne = net_extent(wt)
                best = ne if best is None else min(best, ne)
        assert min_net_extent_bruteforce(tree, 4) == best


def test_min_net_extent_errors():
    with pytest.raises(GuardExceeded):
        min_net_extent_bruteforce(Ditree((), [("a", "b")]), 1)
    with pytest.raises(BadParams):
        min_net_extent_bruteforce(Ditree((), [("a", "b")], ["b"]), 3)


def test_min_net_extent_equals_bound():
    for tree in ditrees(6, 2):
        wt, _ = synthesize_equality_labelling(tree)
        assert min_net_extent_bruteforce(tree, max(wt.labels.values())) == lower_bound(tree)


def test_random_width_trees_valid():
    rng = random.Random(11)
    for _ in range(300):
        wt = random_width_tree(rng, 10, 6)
        WidthTree(wt.tree, wt.labels)
        assert max(wt.labels.values()) <= 6


# -- families ----------------------------------------------------------------------------

@pytest.mark.parametrize("name", [f for f in FAMILIES if f != "davies_zupan"])
def test_families_validate(name):
    wt = family(name)
    WidthTree(wt.tree, wt.labels)


def test_figure1_left():
    wt = family("figure1_left")
    assert len(wt.vertices) == 1 and wt[wt.vertices[0]] == 1


def test_figure6_family(figure6):
    assert net_extent(figure6) == 10
    assert len(figure6.vertices) == 9 and len(figure6.edges) == 8
    assert set(figure6.labels.vertex_labels.values()) == {2}
    assert set(figure6.labels.edge_labels.values()) == {1}
    s = sources_sinks(figure6.tree)
    assert s.n2_plus == 4 and max_cut_bruteforce(figure6.tree)[0] == 5


def test_figure6_orientation_search(figure6):
    found = figure6_orientations()
    assert set(found[0]) == set(figure6.edges)
    assert all(sources_sinks(Ditree((), o)).n2_minus % 2 == 0 for o in found)
    assert figure6_orientations(n2_minus=1) == []


def test_davies_zupan():
    wt = family("davies_zupan", {"r1": 3, "r2": 0, "s1": 2, "s2": 4, "e1": 1, "e2": 2, "e3": 1})
    assert [wt[v] for v in ("top", "upper", "lower", "bottom")] == [2, 3, 3, 2]
    with pytest.raises(BadParams):
        family("davies_zupan", {"r1": 3, "r2": 0, "s1": 3, "s2": 3})
    with pytest.raises(BadParams):
        family("davies_zupan", {"r1": 3, "r2": 0, "s1": 2, "s2": 4})
    with pytest.raises(BadParams):
        family("davies_zupan", {"r1": 3, "r2": 0, "s1": 2, "s2": 4, "e1": 9, "e2": 2, "e3": 1})


def test_family_errors():
    with pytest.raises(BadParams):
        family("figure9")
    with pytest.raises(BadParams):
        family("figure6", {"colour": 1})
    assert family("figure6", {"delta": 2}).delta == 2
