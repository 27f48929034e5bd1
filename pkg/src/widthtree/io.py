"""JSON documents for width trees and blueprints, and DOT export.

A width tree document looks like::

    {"vertices": [{"id": "a", "label": 2, "boundary": false}, ...],
     "edges": [{"tail": "a", "head": "b", "label": 1}, ...],
     "delta": 2}

``boundary`` and ``delta`` are optional.  Malformed documents raise
:class:`DocumentSyntaxError` naming the line or field; well-formed documents
describing an invalid width tree raise :class:`SemanticError` wrapping the
validation error.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .core import Ditree, LabelFunction, WidthTree
from .errors import DocumentSyntaxError, NotATree, SemanticError, WidthTreeError
from .tangle import (
    CTrivialTangleData,
    DecompositionBlueprint,
    Gluing,
    PlacedTangle,
    Sphere,
    THICK,
)


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, line=exc.lineno) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _get(obj, key, kind, where, default=...):
    if not isinstance(obj, dict):
        raise DocumentSyntaxError("expected an object", field=where)
    if key not in obj:
        if default is not ...:
            return default
        raise DocumentSyntaxError("missing field", field=f"{where}.{key}" if where else key)
    value = obj[key]
    # bool is an int subclass; never accept it where an integer is meant
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise DocumentSyntaxError(f"expected {name}", field=f"{where}.{key}" if where else key)
    return value


def _semantic(fn, *args):
    try:
        return fn(*args)
    except WidthTreeError as exc:
        raise SemanticError(exc) from exc


# -- width trees ------------------------------------------------------------------

def width_tree_to_obj(wt: WidthTree) -> dict:
    tree = wt.tree
    obj = {
        "vertices": [{"id": v, "label": wt[v], "boundary": v in tree.boundary}
                     for v in tree.vertices],
        "edges": [{"tail": a, "head": b, "label": wt[(a, b)]} for a, b in tree.edges],
    }
    if wt.delta is not None:
        obj["delta"] = wt.delta
    return obj


def _read_structure(obj, where: str, labelled: bool):
    verts = _get(obj, "vertices", list, where)
    edges = _get(obj, "edges", list, where)
    ids, vl, boundary = [], {}, []
    for n, item in enumerate(verts):
        at = f"{where}.vertices[{n}]" if where else f"vertices[{n}]"
        vid = _get(item, "id", str, at)
        ids.append(vid)
        label = _get(item, "label", int, at, None if not labelled else ...)
        if label is not None:
            vl[vid] = label
        if _get(item, "boundary", bool, at, False):
            boundary.append(vid)
    pairs, el = [], {}
    for n, item in enumerate(edges):
        at = f"{where}.edges[{n}]" if where else f"edges[{n}]"
        e = (_get(item, "tail", str, at), _get(item, "head", str, at))
        pairs.append(e)
        label = _get(item, "label", int, at, None if not labelled else ...)
        if label is not None:
            el[e] = label
    delta = _get(obj, "delta", int, where, None)
    if len(set(ids)) != len(ids):
        raise SemanticError(NotATree("duplicate vertex id"))
    if len(set(pairs)) != len(pairs):
        raise SemanticError(NotATree("duplicate edge"))
    unknown = {v for e in pairs for v in e} - set(ids)
    if unknown:
        raise SemanticError(NotATree(f"edges mention undeclared vertices {sorted(unknown)}"))
    tree = _semantic(Ditree, ids, pairs, boundary)
    return tree, vl, el, delta


def width_tree_from_obj(obj, where: str = "") -> WidthTree:
    tree, vl, el, delta = _read_structure(obj, where, labelled=True)
    if delta is not None and delta < 0:
        raise DocumentSyntaxError("delta must be nonnegative", field="delta")
    return _semantic(WidthTree, tree, LabelFunction(vl, el), delta)


def serialize_width_tree(wt: WidthTree) -> str:
    return _dump(width_tree_to_obj(wt))


def parse_width_tree(text: str) -> WidthTree:
    return width_tree_from_obj(_load(text))


def parse_ditree(text: str) -> Ditree:
    """Read only the shape of a width tree document; labels may be absent."""
    tree, _, _, _ = _read_structure(_load(text), "", labelled=False)
    return tree


def serialize_ditree(tree: Ditree) -> str:
    return _dump({
        "vertices": [{"id": v, "boundary": v in tree.boundary} for v in tree.vertices],
        "edges": [{"tail": a, "head": b} for a, b in tree.edges],
    })


# -- blueprints -----------------------------------------------------------------------

def blueprint_to_obj(bp: DecompositionBlueprint) -> dict:
    return {
        "width_tree": width_tree_to_obj(bp.width_tree),
        "spheres": [{"id": s.id, "kind": s.kind,
                     "item": s.item if s.kind == THICK else list(s.item),
                     "punctures": s.punctures} for s in bp.spheres],
        "tangles": [{"thick": t.thick, "side": t.side, "negative": list(t.negative),
                     "bridge_arcs": t.data.bridge_arcs,
                     "vertical": list(t.data.vertical),
                     "ghosts": [list(g) for g in t.data.ghosts],
                     "arcs": [[list(a), list(b)] for a, b in t.data.arcs]}
                    for t in bp.tangles],
        "gluings": [{"sphere": g.sphere, "left": list(g.left), "right": list(g.right),
                     "perm": list(g.perm)} for g in bp.gluings],
    }


def _int_list(value, where, length: Optional[int] = None) -> list[int]:
    if not isinstance(value, list) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise DocumentSyntaxError("expected a list of integers", field=where)
    if length is not None and len(value) != length:
        raise DocumentSyntaxError(f"expected {length} integers", field=where)
    return value


def blueprint_from_obj(obj) -> DecompositionBlueprint:
    wt = width_tree_from_obj(_get(obj, "width_tree", dict, ""), "width_tree")
    spheres = []
    for n, item in enumerate(_get(obj, "spheres", list, "")):
        at = f"spheres[{n}]"
        kind = _get(item, "kind", str, at)
        ref = _get(item, "item", str if kind == THICK else list, at)
        if kind != THICK:
            if len(ref) != 2 or not all(isinstance(x, str) for x in ref):
                raise DocumentSyntaxError("expected [tail, head]", field=f"{at}.item")
            ref = tuple(ref)
        spheres.append(Sphere(_get(item, "id", str, at), kind, ref,
                              _get(item, "punctures", int, at)))
    tangles = []
    for n, item in enumerate(_get(obj, "tangles", list, "")):
        at = f"tangles[{n}]"
        negative = _get(item, "negative", list, at)
        if not all(isinstance(x, str) for x in negative):
            raise DocumentSyntaxError("expected sphere ids", field=f"{at}.negative")
        ghosts = [tuple(_int_list(g, f"{at}.ghosts", 2)) for g in _get(item, "ghosts", list, at)]
        arcs = []
        for a in _get(item, "arcs", list, at):
            if not isinstance(a, list) or len(a) != 2:
                raise DocumentSyntaxError("expected a pair of slots", field=f"{at}.arcs")
            arcs.append(tuple(tuple(_int_list(s, f"{at}.arcs", 2)) for s in a))
        data = _semantic(CTrivialTangleData, _get(item, "bridge_arcs", int, at),
                         tuple(_int_list(_get(item, "vertical", list, at), f"{at}.vertical")),
                         tuple(ghosts), tuple(arcs))
        tangles.append(PlacedTangle(_get(item, "thick", str, at), _get(item, "side", str, at),
                                    tuple(negative), data))
    gluings = []
    for n, item in enumerate(_get(obj, "gluings", list, "")):
        at = f"gluings[{n}]"
        gluings.append(Gluing(
            _get(item, "sphere", str, at),
            tuple(_int_list(_get(item, "left", list, at), f"{at}.left", 2)),
            tuple(_int_list(_get(item, "right", list, at), f"{at}.right", 2)),
            tuple(_int_list(_get(item, "perm", list, at), f"{at}.perm"))))
    return _semantic(DecompositionBlueprint, wt, tuple(spheres), tuple(tangles), tuple(gluings))


def serialize_blueprint(bp: DecompositionBlueprint) -> str:
    return _dump(blueprint_to_obj(bp))


def parse_blueprint(text: str) -> DecompositionBlueprint:
    return blueprint_from_obj(_load(text))


# -- DOT ------------------------------------------------------------------------------

def _quote(s: str) -> str:
    return json.dumps(s)


def export_dot(wt: WidthTree, name: str = "widthtree") -> str:
    """Graphviz digraph: vertex and edge labels as text, boundary vertices
    drawn as dashed boxes."""
    lines = [f"digraph {_quote(name)} {{"]
    for v in wt.vertices:
        style = ", shape=box, style=dashed" if v in wt.tree.boundary else ""
        lines.append(f"  {_quote(v)} [label=\"{wt[v]}\"{style}];")
    for a, b in wt.edges:
        lines.append(f"  {_quote(a)} -> {_quote(b)} [label=\"{wt[(a, b)]}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
