"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary).  Label bounds not fixed by a criterion are chosen so the
whole module runs in a few minutes; they are noted next to each test.
"""

import contextlib
import itertools
import random
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from widthtree.core import Ditree, classify, sources_sinks
from widthtree.flows import (
    PAPER_FORMULA,
    augment,
    cut_size,
    extend_labels,
    is_conservative,
    lower_bound,
    make_flow,
    max_cut_bruteforce,
    min_flow_max_cut,
    synthesize_equality_labelling,
)
from widthtree.harness import (
    EnumerationSpec,
    batch_tree,
    batches,
    ditrees,
    enumerate as enumerate_trees,
    family,
    min_net_extent_bruteforce,
    random_width_tree,
)
from widthtree.invariants import (
    amalgamate_leaf,
    batch_invariants,
    full_amalgamation,
    gabai_candidate,
    mu_transform,
    net_extent,
    net_extent_by_vertex_sums,
    trunk,
    width,
)
from widthtree.cli import main
from widthtree.core import equivalent, width_tree
from widthtree.tangle import (
    ALL_IN,
    ALL_OUT,
    Trivialpod,
    assemble,
    associate,
    check_tangle,
    count_components,
    dual_width_tree,
    knotify,
    realize,
)


@contextlib.contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            detail = f" (runtime {elapsed:.2f}s, limit {limit}s)"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s, limit {limit}s")
        status = "PASS"
        detail = f" ({elapsed:.2f}s)"
    except AssertionError as exc:
        if not detail:
            detail = f": {exc}".splitlines()[0]
        raise
    finally:
        line = f"criterion {number}: {status} {title}{detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def check(condition, message):
    if not condition:
        raise AssertionError(message)


# -- 1 ----------------------------------------------------------------------------------

def test_criterion_01_figure6():
    with criterion(1, "figure 6 reproduction", limit=1.0):
        wt = family("figure6")
        s = sources_sinks(wt.tree)
        observed = {
            "net_extent": net_extent(wt), "width": width(wt), "trunk": trunk(wt),
            "n2_minus": s.n2_minus, "n2_plus": s.n2_plus,
            "max_cut": max_cut_bruteforce(wt.tree)[0], "bound": lower_bound(wt.tree),
            "synthesized": net_extent(synthesize_equality_labelling(wt.tree)[0]),
        }
        expected = {"net_extent": 10, "width": 56, "trunk": 2, "n2_minus": 1, "n2_plus": 4,
                    "max_cut": 5, "bound": 10, "synthesized": 10}
        wrong = {k: (observed[k], v) for k, v in expected.items() if observed[k] != v}
        check(not wrong, "observed != expected: "
              + ", ".join(f"{k} {o} != {e}" for k, (o, e) in wrong.items()))


# -- 2 ----------------------------------------------------------------------------------

def test_criterion_02_easy_sum():
    rng = random.Random(20261015)
    trees = [random_width_tree(rng, 12, 9) for _ in range(10_000)]
    with criterion(2, "easy-sum identity on 10,000 random trees", limit=5.0):
        for wt in trees:
            ne = net_extent(wt)
            check(net_extent_by_vertex_sums(wt) == (ne, ne), f"vertex sums differ on {wt}")


# -- 3 ----------------------------------------------------------------------------------

def test_criterion_03_relations():
    with criterion(3, "2 trunk^2 <= width <= 2 net_extent^2 (<= 6 vertices, labels <= 4)",
                   limit=60.0):
        total = 0
        for _, v, e in batches(EnumerationSpec(6, 4, {"nonnegative"})):
            ne, w, tr = batch_invariants(v, e)
            check(np.all(2 * tr * tr <= w) and np.all(w <= 2 * ne * ne), "inequality fails")
            total += len(v)
        check(total > 0, "empty enumeration")


# -- 4 ----------------------------------------------------------------------------------

def _elimination_orders(tree):
    """Every full sequence of leaf removals as (leaf index, neighbour index,
    edge index) steps."""
    vidx = {v: i for i, v in enumerate(tree.vertices)}
    edges = [(vidx[a], vidx[b]) for a, b in tree.edges]

    def go(alive, remaining):
        if len(alive) == 1:
            yield ()
            return
        for u in sorted(alive):
            incident = [k for k in remaining if u in edges[k]]
            if len(incident) == 1:
                (k,) = incident
                a, b = edges[k]
                w = b if a == u else a
                for rest in go(alive - {u}, remaining - {k}):
                    yield ((u, w, k),) + rest

    return list(go(frozenset(range(len(tree.vertices))), frozenset(range(len(edges)))))


def _all_orders_object(wt, mode):
    seen = set()

    def go(cur):
        if len(cur.vertices) == 1:
            seen.add(cur[cur.vertices[0]])
            return
        for v in cur.vertices:
            if cur.tree.degree(v) == 1:
                go(amalgamate_leaf(cur, v, mode))

    go(wt)
    return seen


def test_criterion_04_amalgamation():
    # all leaf orders: array replay at labels <= 3, library amalgamate_leaf at
    # labels <= 1; full_amalgamation itself at labels <= 2
    with criterion(4, "amalgamation over all leaf orders (<= 5 vertices)"):
        for shape, v, e in batches(EnumerationSpec(5, 3, {"boundaryless"})):
            ne, _, tr = batch_invariants(v, e)
            for order in _elimination_orders(shape.tree):
                s, m = v.copy(), v.copy()
                for u, w, k in order:
                    s[:, w] = s[:, u] + s[:, w] - e[:, k]
                    m[:, w] = np.maximum(m[:, u], m[:, w])
                last = order[-1][1] if order else 0
                check(np.array_equal(s[:, last], ne), "sum amalgamation differs")
                check(np.array_equal(m[:, last], tr), "max amalgamation differs")
        for wt in enumerate_trees(EnumerationSpec(5, 1, {"boundaryless"})):
            check(_all_orders_object(wt, "sum") == {net_extent(wt)}, f"sum order on {wt}")
            check(_all_orders_object(wt, "max") == {trunk(wt)}, f"max order on {wt}")
        for wt in enumerate_trees(EnumerationSpec(5, 2, {"boundaryless"})):
            check(full_amalgamation(wt, "sum") == net_extent(wt), f"sum on {wt}")
            check(full_amalgamation(wt, "max") == trunk(wt), f"max on {wt}")


# -- 5 ----------------------------------------------------------------------------------

def test_criterion_05_flow_existence():
    with criterion(5, "make_flow on positive productless boundaryless trees (<= 6, <= 3)"):
        n = 0
        for wt in enumerate_trees(EnumerationSpec(6, 3, {"positive", "productless",
                                                         "boundaryless"})):
            flow = make_flow(wt)
            host = flow.host
            lam = extend_labels(wt, host)
            check(is_conservative(host.tree, flow.values), f"not conservative on {wt}")
            check(all(flow[x] >= lam[x] for x in host.tree.items()), f"F < lambda on {wt}")
            check(net_extent(flow.as_width_tree()) == net_extent(wt), f"net extent on {wt}")
            n += 1
        check(n > 0, "empty enumeration")


# -- 6 ----------------------------------------------------------------------------------

def test_criterion_06_duality():
    with criterion(6, "four-way duality on ditrees (<= 6 vertices)"):
        for tree in ditrees(6, 2):
            wt, cert = synthesize_equality_labelling(tree)
            cap = max(wt.labels.values())
            brute = min_net_extent_bruteforce(tree, cap)
            bound = lower_bound(tree)
            flow_bound = min_flow_max_cut(wt).bound
            cut = max_cut_bruteforce(augment(tree).tree)[0]
            check(brute == bound == flow_bound == cut == cert.bound,
                  f"{tree}: {brute} {bound} {flow_bound} {cut} {cert.bound}")
            c = classify(wt)
            check(c.positive and c.productless, f"synthesized labelling on {tree}")
            check(net_extent(wt) == bound, f"not extremal on {tree}")
            check(cut_size(cert.witness_cut) == bound, f"witness cut on {tree}")


# -- 7 ----------------------------------------------------------------------------------

def test_criterion_07_documented_discrepancy(capsys, tmp_path):
    with criterion(7, "path a->v->b: paper formula 5 vs minimum 4, with warning"):
        tree = Ditree((), [("a", "v"), ("v", "b")])
        check(lower_bound(tree, PAPER_FORMULA) == 5, "formula value")
        check(min_net_extent_bruteforce(tree, 4) == 4, "brute-force minimum")
        check(lower_bound(tree) == 4, "augmented cut bound")
        doc = tmp_path / "path3.json"
        doc.write_text('{"vertices": [{"id": "a"}, {"id": "v"}, {"id": "b"}],'
                       ' "edges": [{"tail": "a", "head": "v"}, {"tail": "v", "head": "b"}]}')
        code = main(["bound", str(doc), "--mode", "both"])
        out, err = capsys.readouterr()
        check(code == 0 and "paper_formula=5" in out and "augmented_cut=4" in out, out)
        check("warning:" in err, "no discrepancy warning")


# -- 8 ----------------------------------------------------------------------------------

def test_criterion_08_gabai_identity():
    # coherent paths <= 6 vertices, labels <= 4 in bulk; library function at <= 5 / <= 3
    with criterion(8, "gabai candidate identity on coherent paths"):
        for _, v, e in batches(EnumerationSpec(6, 4, {"coherent_path"})):
            ne, w, _ = batch_invariants(v, e)
            rhs = 2 * ((v + 1) ** 2).sum(axis=1) - 2 * ((e + 1) ** 2).sum(axis=1)
            check(np.array_equal(w + 4 * ne + 2, rhs), "identity fails in bulk")
        for wt in enumerate_trees(EnumerationSpec(5, 3, {"coherent_path"})):
            lam = wt.labels
            rhs = (2 * sum((x + 1) ** 2 for x in lam.vertex_labels.values())
                   - 2 * sum((x + 1) ** 2 for x in lam.edge_labels.values()))
            check(gabai_candidate(wt) == rhs, f"identity fails on {wt}")
        check(gabai_candidate(width_tree([], {"v": 1})) == 8, "single vertex")


# -- 9 ----------------------------------------------------------------------------------

def test_criterion_09_trivialpod_round_trip():
    with criterion(9, "associate . realize = id (<= 5 thins, labels in [-1, 4])"):
        n = 0
        for k in range(6):
            for thins in itertools.product(range(-1, 5), repeat=k):
                for thick in range(-1, 5):
                    for orientation in (ALL_IN, ALL_OUT):
                        pod = Trivialpod(thick, thins, orientation)
                        if not pod.feasible:
                            continue
                        data = realize(pod)
                        check_tangle(data)
                        check(associate(data, orientation) == pod, f"round trip on {pod}")
                        n += 1
        check(n > 0, "no pods")


# -- 10 ---------------------------------------------------------------------------------

def test_criterion_10_assembly():
    # labels <= 2
    with criterion(10, "assemble and knotify (boundaryless nonnegative, <= 5 vertices)"):
        for wt in enumerate_trees(EnumerationSpec(5, 2, {"boundaryless", "nonnegative"})):
            bp = assemble(wt)
            check(all(s.punctures == 2 * wt[s.item] + 2 for s in bp.spheres),
                  f"puncture counts on {wt}")
            check(equivalent(dual_width_tree(bp), wt), f"dual tree on {wt}")
            check(count_components(knotify(bp)) == 1, f"knotify on {wt}")


# -- 11 ---------------------------------------------------------------------------------

def test_criterion_11_mu_transform():
    # positive slim trees, <= 6 vertices, labels <= 4, delta 2
    with criterion(11, "mu-transform on slim trees (>= 2 edges, vertex labels >= 2)"):
        n = 0
        spec = EnumerationSpec(6, 4, {"positive", "productless", "boundaryless"}, 3)
        for shape, v, e in batches(spec):
            keep = v.min(axis=1) >= 2
            for i in np.flatnonzero(keep):
                wt = batch_tree(shape, v[i], e[i]).with_delta(2)
                check(classify(wt).slim, f"not slim: {wt}")
                mu = mu_transform(wt)
                c = classify(mu)
                check(c.positive and c.productless, f"mu not positive productless on {wt}")
                ne = net_extent(mu)
                check(ne == width(wt) - net_extent(wt), f"mu net extent on {wt}")
                check(ne >= lower_bound(wt.tree), f"mu below bound on {wt}")
                n += 1
        check(n > 0, "no slim trees")
