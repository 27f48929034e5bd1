"""Trivialpods, combinatorial c-trivial tangles and decomposition blueprints.

A c-trivial tangle is recorded combinatorially.  It has ``b`` bridge arcs
(both ends on the positive boundary sphere) and ``v_i`` vertical arcs
running to negative boundary sphere ``i``.  A forest of ghost arcs joins
negative boundaries to one another.  Every arc end is a *slot*: a pair
``(boundary, index)``, where boundary ``POSITIVE`` (-1) is the positive
sphere and ``i >= 0`` is negative sphere ``i``.

A sphere meeting the tangle in ``2k`` points has extent ``k - 1``.  So the
positive sphere of a tangle has label ``-1 + b + sum(v)/2`` and negative
sphere ``i`` has ``-1 + (v_i + deg_i)/2``.  Those labels form the tangle's
trivialpod (:func:`associate`); :func:`realize` goes the other way.

:func:`assemble` realizes both half-stars of every vertex of a width tree.
It then glues everything along puncture bijections, giving a
:class:`DecompositionBlueprint`.  The blueprint's arcs and gluings form a
closed 1-manifold whose components :func:`count_components` counts and
:func:`knotify` merges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .core import Ditree, Edge, LabelFunction, Vertex, WidthTree, equivalent
from .errors import (
    InfeasiblePod,
    InvalidBlueprint,
    InvalidTangle,
    OddPositivePunctures,
    OpenBoundary,
    Stuck,
)

POSITIVE = -1
ALL_IN = "all_in"
ALL_OUT = "all_out"
PATH = "path"
FEWEST_GHOSTS = "fewest_ghosts"

Slot = tuple[int, int]
Arc = tuple[Slot, Slot]


# -- trivialpods ----------------------------------------------------------------

@dataclass(frozen=True)
class Trivialpod:
    """A rooted star: one thick vertex and its thin neighbours, all edges
    pointing the same way relative to the thick vertex.

    The label condition (thick label at least the sum of the nonnegative
    thin labels) is reported by :attr:`feasible` rather than enforced here:
    the product tangle between two unpunctured spheres associates to
    thick -1, thin -1, which fails it.
    """

    thick_label: int
    thin_labels: tuple[int, ...]
    orientation: str = ALL_OUT

    def __post_init__(self):
        object.__setattr__(self, "thin_labels", tuple(self.thin_labels))
        if self.orientation not in (ALL_IN, ALL_OUT):
            raise InfeasiblePod(f"orientation must be {ALL_IN!r} or {ALL_OUT!r}")
        if min((self.thick_label, *self.thin_labels)) < -1:
            raise InfeasiblePod("trivialpod labels must be at least -1")

    @property
    def feasible(self) -> bool:
        return self.thick_label >= sum(x for x in self.thin_labels if x >= 0)


# -- c-trivial tangle data ------------------------------------------------------------

def _is_forest(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def standard_arcs(bridge_arcs: int, vertical: Sequence[int],
                  ghosts: Sequence[tuple[int, int]]) -> tuple[Arc, ...]:
    """Deterministic slot layout.

    Bridge arcs take positive slots ``(0,1), (2,3), ...``.  Vertical arcs
    then take the next positive slots, boundary by boundary, each paired
    with the lowest free slot on its negative sphere.  Ghost arcs take the
    remaining negative slots in ghost-edge order.
    """
    arcs = [((POSITIVE, 2 * k), (POSITIVE, 2 * k + 1)) for k in range(bridge_arcs)]
    top = 2 * bridge_arcs
    for i, count in enumerate(vertical):
        for k in range(count):
            arcs.append(((POSITIVE, top), (i, k)))
            top += 1
    nxt = list(vertical)
    for i, j in ghosts:
        arcs.append(((i, nxt[i]), (j, nxt[j])))
        nxt[i] += 1
        nxt[j] += 1
    return tuple(arcs)


@dataclass(frozen=True)
class CTrivialTangleData:
    bridge_arcs: int
    vertical: tuple[int, ...]
    ghosts: tuple[tuple[int, int], ...] = ()
    arcs: Optional[tuple[Arc, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "vertical", tuple(self.vertical))
        ghosts = tuple(tuple(sorted(g)) for g in self.ghosts)
        object.__setattr__(self, "ghosts", ghosts)
        arcs = self.arcs
        if arcs is None:
            self._check_counts()
            arcs = standard_arcs(self.bridge_arcs, self.vertical, ghosts)
        arcs = tuple(tuple(sorted((tuple(a), tuple(b)))) for a, b in arcs)
        object.__setattr__(self, "arcs", arcs)
        check_tangle(self)

    def _check_counts(self):
        if self.bridge_arcs < 0 or any(x < 0 for x in self.vertical):
            raise InvalidTangle("arc counts must be nonnegative")
        n = len(self.vertical)
        if any(not (0 <= i < n and 0 <= j < n) for i, j in self.ghosts):
            raise InvalidTangle("ghost arc joins an unknown negative boundary")

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * len(self.vertical)
        for i, j in self.ghosts:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @property
    def positive_punctures(self) -> int:
        return 2 * self.bridge_arcs + sum(self.vertical)

    @property
    def negative_punctures(self) -> tuple[int, ...]:
        return tuple(v + d for v, d in zip(self.vertical, self.degrees))

    def punctures(self, boundary: int) -> int:
        if boundary == POSITIVE:
            return self.positive_punctures
        return self.negative_punctures[boundary]


def check_tangle(data: CTrivialTangleData) -> None:
    """Raise :class:`InvalidTangle` unless every tangle invariant holds."""
    data._check_counts()
    if not _is_forest(len(data.vertical), data.ghosts):
        raise InvalidTangle("ghost arc graph has a cycle")
    for i, p in enumerate(data.negative_punctures):
        if p % 2:
            raise InvalidTangle(f"negative boundary {i} has {p} punctures, an odd number")

    used = Counter()
    kinds = Counter()
    vertical = Counter()
    ghosts = Counter()
    for a, b in data.arcs:
        used[a] += 1
        used[b] += 1
        if a == b:
            raise InvalidTangle(f"arc {a}-{b} is degenerate")
        sides = (a[0] == POSITIVE) + (b[0] == POSITIVE)
        kinds[sides] += 1
        if sides == 1:
            vertical[b[0]] += 1
        elif sides == 0:
            ghosts[(a[0], b[0])] += 1
    expected = {(POSITIVE, k) for k in range(data.positive_punctures)}
    for i, p in enumerate(data.negative_punctures):
        expected.update((i, k) for k in range(p))
    if set(used) != expected or any(c != 1 for c in used.values()):
        raise InvalidTangle("arcs must use every puncture slot exactly once")
    if kinds[2] != data.bridge_arcs:
        raise InvalidTangle("bridge arc count disagrees with the arc table")
    if any(vertical[i] != v for i, v in enumerate(data.vertical)):
        raise InvalidTangle("vertical arc counts disagree with the arc table")
    if ghosts != Counter(data.ghosts):
        raise InvalidTangle("ghost arcs disagree with the ghost arc graph")


# -- association ------------------------------------------------------------------

def associate(data: CTrivialTangleData, orientation: str = ALL_OUT) -> Trivialpod:
    if sum(data.vertical) % 2:
        raise OddPositivePunctures("positive boundary has an odd number of punctures")
    thick = -1 + data.bridge_arcs + sum(data.vertical) // 2
    thins = tuple(-1 + p // 2 for p in data.negative_punctures)
    return Trivialpod(thick, thins, orientation)


def realize(pod: Trivialpod, strategy: str = PATH) -> CTrivialTangleData:
    """A c-trivial tangle whose trivialpod is ``pod``.

    Thin vertices labelled -1 become unpunctured boundaries.  The others
    are chained by ghost arcs in input order, which keeps every ghost degree
    at most two.  Boundary ``i`` then gets ``2 m_i + 2 - deg_i`` vertical
    arcs, and bridge arcs make up the thick label.

    ``strategy="path"`` chains all nonnegative thin vertices.
    ``strategy="fewest_ghosts"`` adds only as many ghost arcs as are needed
    to keep the bridge count nonnegative.
    """
    if not pod.feasible:
        need = sum(x for x in pod.thin_labels if x >= 0)
        raise InfeasiblePod(
            f"thick label {pod.thick_label} is below {need}, the sum of "
            f"nonnegative thin labels")
    live = [i for i, m in enumerate(pod.thin_labels) if m >= 0]
    if strategy == PATH:
        n_ghosts = max(len(live) - 1, 0)
    elif strategy == FEWEST_GHOSTS:
        n_ghosts = max(0, sum(pod.thin_labels[i] + 1 for i in live) - pod.thick_label - 1)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    ghosts = tuple((live[k], live[k + 1]) for k in range(n_ghosts))
    deg = Counter(i for g in ghosts for i in g)
    vertical = tuple(2 * m + 2 - deg[i] if m >= 0 else 0
                     for i, m in enumerate(pod.thin_labels))
    bridge = pod.thick_label + 1 - sum(vertical) // 2
    return CTrivialTangleData(bridge, vertical, ghosts)


# -- blueprints -----------------------------------------------------------------------

THICK = "thick"
THIN = "thin"
PLUS = "+"
MINUS = "-"


@dataclass(frozen=True)
class Sphere:
    id: str
    kind: str
    item: Union[Vertex, Edge]
    punctures: int


@dataclass(frozen=True)
class PlacedTangle:
    """One side of a thick sphere.

    ``side`` is ``"+"`` for the outgoing half-star and ``"-"`` for the
    incoming one.  ``negative`` lists the sphere ids of the tangle's
    negative boundaries, in the order used by ``data``.
    """

    thick: str
    side: str
    negative: tuple[str, ...]
    data: CTrivialTangleData


@dataclass(frozen=True)
class Gluing:
    """Puncture bijection across a sphere.

    Slot ``k`` of ``left = (tangle index, boundary)`` is glued to slot
    ``perm[k]`` of ``right``.
    """

    sphere: str
    left: tuple[int, int]
    right: tuple[int, int]
    perm: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class DecompositionBlueprint:
    width_tree: WidthTree
    spheres: tuple[Sphere, ...]
    tangles: tuple[PlacedTangle, ...]
    gluings: tuple[Gluing, ...]

    def __post_init__(self):
        check_blueprint(self)

    def __eq__(self, other):
        if not isinstance(other, DecompositionBlueprint):
            return NotImplemented
        a, b = self.width_tree, other.width_tree
        return ((a.tree, a.labels, a.delta) == (b.tree, b.labels, b.delta)
                and (self.spheres, self.tangles, self.gluings)
                == (other.spheres, other.tangles, other.gluings))

    __hash__ = None

    def sphere(self, sid: str) -> Sphere:
        return self._sphere_map[sid]

    @property
    def _sphere_map(self) -> dict[str, Sphere]:
        return {s.id: s for s in self.spheres}

    @property
    def closed(self) -> bool:
        """True when every sphere bounds tangles on both sides."""
        return all(len(w) == 2 for w in _attachments(self).values())

    @property
    def ghost_arc_count(self) -> int:
        return sum(len(t.data.ghosts) for t in self.tangles)


def _attachments(bp: DecompositionBlueprint) -> dict[str, list[tuple[int, int]]]:
    """Sphere id -> list of (tangle index, boundary) where it appears."""
    seen: dict[str, list[tuple[int, int]]] = {s.id: [] for s in bp.spheres}
    for t, tangle in enumerate(bp.tangles):
        for boundary, sid in [(POSITIVE, tangle.thick), *enumerate(tangle.negative)]:
            if sid not in seen:
                raise InvalidBlueprint(f"tangle {t} refers to unknown sphere {sid!r}")
            seen[sid].append((t, boundary))
    return seen


def check_blueprint(bp: DecompositionBlueprint) -> None:
    """Raise :class:`InvalidBlueprint` unless the blueprint is consistent.

    Checks are made on the document alone: sphere puncture counts against
    the tangles, sphere counts against the width tree, and gluings.  The
    dual width tree must match the stored one.
    """
    ids = [s.id for s in bp.spheres]
    if len(set(ids)) != len(ids):
        raise InvalidBlueprint("duplicate sphere id")
    spheres = bp._sphere_map
    places = _attachments(bp)
    wt = bp.width_tree
    for s in bp.spheres:
        if s.kind not in (THICK, THIN):
            raise InvalidBlueprint(f"sphere {s.id!r} has unknown kind {s.kind!r}")
        if s.kind == THICK:
            known = s.item in wt.tree.neighbors and s.item not in wt.tree.boundary
        else:
            known = isinstance(s.item, tuple) and wt.tree.has_edge(s.item)
        if not known:
            raise InvalidBlueprint(f"sphere {s.id!r} names no {s.kind} item of the tree")
        label = wt[s.item]
        if s.punctures != 2 * label + 2:
            raise InvalidBlueprint(
                f"sphere {s.id!r} has {s.punctures} punctures, expected {2 * label + 2}")
        for t, boundary in places[s.id]:
            if bp.tangles[t].data.punctures(boundary) != s.punctures:
                raise InvalidBlueprint(f"tangle {t} disagrees on the punctures of {s.id!r}")
        n = len(places[s.id])
        if s.kind == THICK:
            sides = sorted(bp.tangles[t].side for t, b in places[s.id] if b == POSITIVE)
            if sides != [PLUS, MINUS] or n != 2:
                raise InvalidBlueprint(f"thick sphere {s.id!r} needs exactly one tangle per side")
        elif n > 2 or any(b == POSITIVE for _, b in places[s.id]):
            raise InvalidBlueprint(f"thin sphere {s.id!r} must bound at most two tangles")

    glued = {}
    for g in bp.gluings:
        if g.sphere not in spheres:
            raise InvalidBlueprint(f"gluing along unknown sphere {g.sphere!r}")
        if g.sphere in glued:
            raise InvalidBlueprint(f"sphere {g.sphere!r} is glued twice")
        if sorted((g.left, g.right)) != sorted(places[g.sphere]):
            raise InvalidBlueprint(f"gluing of {g.sphere!r} does not join its two sides")
        if sorted(g.perm) != list(range(spheres[g.sphere].punctures)):
            raise InvalidBlueprint(f"gluing of {g.sphere!r} is not a puncture bijection")
        glued[g.sphere] = g
    for sid, where in places.items():
        if len(where) == 2 and sid not in glued:
            raise InvalidBlueprint(f"sphere {sid!r} bounds two tangles but is not glued")

    if not equivalent(dual_width_tree(bp), wt):
        raise InvalidBlueprint("blueprint structure does not match its width tree")


def dual_width_tree(bp: DecompositionBlueprint) -> WidthTree:
    """Rebuild the width tree from the blueprint's spheres and tangles alone.

    Thick spheres become vertices and thin spheres become edges, directed
    from the ``+`` side tangle to the ``-`` side tangle.  A thin sphere
    bounding only one tangle gains a fresh boundary vertex (two, if it
    bounds none: an edge joining two boundary vertices).  Labels are
    ``punctures / 2 - 1``.
    """
    label = {s.id: s.punctures // 2 - 1 for s in bp.spheres}
    ends: dict[str, dict[str, str]] = {s.id: {} for s in bp.spheres if s.kind == THIN}
    for tangle in bp.tangles:
        for sid in tangle.negative:
            ends.setdefault(sid, {})[tangle.side] = tangle.thick
    vl = {s.id: label[s.id] for s in bp.spheres if s.kind == THICK}
    el = {}
    boundary = []
    for sid, sides in sorted(ends.items()):
        tail = sides.get(PLUS)
        head = sides.get(MINUS)
        if tail is None and head is None:
            tail, head = f"boundary:{sid}:tail", f"boundary:{sid}:head"
            boundary += [tail, head]
            vl[tail] = vl[head] = label[sid]
        elif tail is None or head is None:
            free = f"boundary:{sid}"
            boundary.append(free)
            vl[free] = label[sid]
            tail, head = (tail, free) if head is None else (free, head)
        el[(tail, head)] = label[sid]
    tree = Ditree(vl.keys(), el.keys(), boundary)
    return WidthTree(tree, LabelFunction(vl, el), bp.width_tree.delta)


def assemble(wt: WidthTree, strategy: str = PATH) -> DecompositionBlueprint:
    """Glue realizations of every half-star of ``wt`` with identity maps."""
    tree = wt.tree
    spheres = []
    thick_id = {}
    for v in tree.vertices:
        if v not in tree.boundary:
            thick_id[v] = f"H{len(thick_id)}"
            spheres.append(Sphere(thick_id[v], THICK, v, 2 * wt[v] + 2))
    thin_id = {}
    for e in tree.edges:
        thin_id[e] = f"S{len(thin_id)}"
        spheres.append(Sphere(thin_id[e], THIN, e, 2 * wt[e] + 2))

    tangles = []
    index = {}
    for v in thick_id:
        for side, star, orientation in ((MINUS, tree.in_edges[v], ALL_IN),
                                        (PLUS, tree.out_edges[v], ALL_OUT)):
            pod = Trivialpod(wt[v], tuple(wt[e] for e in star), orientation)
            index[(v, side)] = len(tangles)
            tangles.append(PlacedTangle(thick_id[v], side,
                                        tuple(thin_id[e] for e in star),
                                        realize(pod, strategy)))

    gluings = []
    for v, sid in thick_id.items():
        gluings.append(Gluing(sid, (index[(v, MINUS)], POSITIVE), (index[(v, PLUS)], POSITIVE),
                              tuple(range(2 * wt[v] + 2))))
    for e, sid in thin_id.items():
        tail, head = e
        if tail in tree.boundary or head in tree.boundary:
            continue
        left = (index[(tail, PLUS)], tree.out_edges[tail].index(e))
        right = (index[(head, MINUS)], tree.in_edges[head].index(e))
        gluings.append(Gluing(sid, left, right, tuple(range(2 * wt[e] + 2))))
    return DecompositionBlueprint(wt, tuple(spheres), tuple(tangles), tuple(gluings))


# -- the closed 1-manifold ------------------------------------------------------------

def _components(bp: DecompositionBlueprint) -> dict[tuple[int, int, int], int]:
    """Label every slot ``(tangle, boundary, index)`` with a component number."""
    if not bp.closed:
        raise OpenBoundary("blueprint has unglued boundary spheres")
    nbr: dict[tuple, list[tuple]] = {}
    for t, tangle in enumerate(bp.tangles):
        for (b1, k1), (b2, k2) in tangle.data.arcs:
            x, y = (t, b1, k1), (t, b2, k2)
            nbr.setdefault(x, []).append(y)
            nbr.setdefault(y, []).append(x)
    for g in bp.gluings:
        for k, j in enumerate(g.perm):
            x, y = (*g.left, k), (*g.right, j)
            nbr.setdefault(x, []).append(y)
            nbr.setdefault(y, []).append(x)
    comp = {}
    for start in sorted(nbr):
        if start in comp:
            continue
        c = len(set(comp.values()))
        stack = [start]
        comp[start] = c
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if y not in comp:
                    comp[y] = c
                    stack.append(y)
    return comp


def count_components(bp: DecompositionBlueprint) -> int:
    return len(set(_components(bp).values()))


def _transposition(bp: DecompositionBlueprint):
    comp = _components(bp)
    for n, g in enumerate(bp.gluings):
        first = None
        for k in range(len(g.perm)):
            c = comp[(*g.left, k)]
            if first is None:
                first = (k, c)
            elif c != first[1]:
                return n, first[0], k
    return None


def knotify_trace(bp: DecompositionBlueprint) -> Iterator[DecompositionBlueprint]:
    """Yield the blueprint after each transposition made by :func:`knotify`."""
    while count_components(bp) > 1:
        found = _transposition(bp)
        if found is None:
            raise Stuck("no sphere meets two distinct components")
        n, a, b = found
        g = bp.gluings[n]
        perm = list(g.perm)
        perm[a], perm[b] = perm[b], perm[a]
        gluings = list(bp.gluings)
        gluings[n] = Gluing(g.sphere, g.left, g.right, tuple(perm))
        bp = DecompositionBlueprint(bp.width_tree, bp.spheres, bp.tangles, tuple(gluings))
        yield bp


def knotify(bp: DecompositionBlueprint) -> DecompositionBlueprint:
    """Compose gluings with transpositions until one component remains.

    Swapping the gluing partners of two slots on distinct components merges
    those two components and nothing else, so each step lowers the count by
    exactly one.
    """
    for bp in knotify_trace(bp):
        pass
    return bp
