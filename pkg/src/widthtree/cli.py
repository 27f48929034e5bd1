"""Command line interface.

Every command reads a document from a path (or ``-`` for standard input)
where it needs one, and prints either ``key=value`` lines or JSON
(``--format json``).  Exit status is 0 on success, 1 on a domain error
(reported by its error class name) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import flows, harness, invariants, io, tangle
from .core import classify, sources_sinks
from .errors import SemanticError, WidthTreeError

BOUND_MODES = {"augmented-cut": flows.AUGMENTED_CUT, "paper-formula": flows.PAPER_FORMULA}
DISCREPANCY = ("paper-formula exceeds augmented-cut; the formula overcounts "
               "and is not a valid lower bound for this ditree")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(args, report: dict, text: Optional[str] = None):
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    elif text is not None:
        print(text, end="" if text.endswith("\n") else "\n")
    else:
        for key, value in report.items():
            if isinstance(value, (list, dict)):
                value = json.dumps(value, sort_keys=True)
            elif value is None:
                value = "-"
            elif isinstance(value, bool):
                value = str(value).lower()
            print(f"{key}={value}")


def _labels(values) -> dict:
    return {"vertices": dict(values.vertex_labels),
            "edges": {f"{a}->{b}": x for (a, b), x in values.edge_labels.items()}}


# -- commands ---------------------------------------------------------------------------

def cmd_validate(args):
    wt = io.parse_width_tree(_read(args.file))
    _emit(args, {"valid": True, **classify(wt)._asdict()})


def cmd_invariants(args):
    wt = io.parse_width_tree(_read(args.file))
    rep = invariants.report(wt)
    via_in, via_out = invariants.net_extent_by_vertex_sums(wt)
    _emit(args, {**rep._asdict(), "net_extent_by_vertex_sums": [via_in, via_out]})


def cmd_bound(args):
    tree = io.parse_ditree(_read(args.file))
    modes = list(BOUND_MODES) if args.mode == "both" else [args.mode]
    report = {BOUND_MODES[m]: flows.lower_bound(tree, BOUND_MODES[m]) for m in modes}
    warning = None
    if len(report) == 2 and report[flows.PAPER_FORMULA] != report[flows.AUGMENTED_CUT]:
        warning = DISCREPANCY
        print(f"warning: {warning}", file=sys.stderr)
    if args.format == "json" and args.mode == "both":
        report["warning"] = warning
    _emit(args, report)


def cmd_flow(args):
    wt = io.parse_width_tree(_read(args.file))
    flow = flows.make_flow(wt)
    _emit(args, {"net_extent": invariants.net_extent(flow.as_width_tree()),
                 "flow": _labels(flow.values)})


def cmd_synthesize(args):
    tree = io.parse_ditree(_read(args.file))
    wt, cert = flows.synthesize_equality_labelling(tree)
    report = {"bound": cert.bound,
              "witness_cut": sorted(cert.witness_cut.members),
              "adjustments": list(cert.adjustments),
              "width_tree": io.width_tree_to_obj(wt)}
    _emit(args, report)


def cmd_cut_oracle(args):
    tree = io.parse_ditree(_read(args.file))
    if args.augmented:
        tree = flows.augment(tree).tree
    size, cut = flows.max_cut_bruteforce(tree)
    _emit(args, {"max_cut": size, "members": sorted(cut.members)})


def cmd_sources_sinks(args):
    tree = io.parse_ditree(_read(args.file))
    s = sources_sinks(tree)
    _emit(args, {"sources": sorted(s.sources), "sinks": sorted(s.sinks),
                 "n2_minus": s.n2_minus, "n2_plus": s.n2_plus})


def cmd_realize(args):
    pod = tangle.Trivialpod(args.thick, tuple(args.thin), args.orientation)
    data = tangle.realize(pod, args.strategy)
    _emit(args, {"bridge_arcs": data.bridge_arcs, "vertical": list(data.vertical),
                 "ghosts": [list(g) for g in data.ghosts],
                 "arcs": [[list(a), list(b)] for a, b in data.arcs]})


def cmd_assemble(args):
    wt = io.parse_width_tree(_read(args.file))
    bp = tangle.assemble(wt, args.strategy)
    steps = 0
    if args.knotify:
        for bp in tangle.knotify_trace(bp):
            steps += 1
    components = tangle.count_components(bp) if bp.closed else None
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(io.serialize_blueprint(bp))
    report = {"spheres": len(bp.spheres), "tangles": len(bp.tangles),
              "ghost_arcs": bp.ghost_arc_count, "components": components,
              "transpositions": steps}
    if args.format == "json":
        report["blueprint"] = io.blueprint_to_obj(bp)
    _emit(args, report)


def cmd_enumerate(args):
    spec = harness.EnumerationSpec(args.max_vertices, args.max_label,
                                   frozenset(args.require), args.min_vertices)
    if args.count:
        _emit(args, {"count": harness.count(spec)})
        return
    trees = [io.width_tree_to_obj(wt) for wt in harness.enumerate(spec)]
    if args.format == "json":
        _emit(args, {"count": len(trees), "width_trees": trees})
    else:
        print("\n".join(json.dumps(t, sort_keys=True) for t in trees))


def cmd_family(args):
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"parameter {item!r} is not key=value")
        params[key] = value
    if args.delta is not None:
        params["delta"] = args.delta
    wt = harness.family(args.name, params)
    _emit(args, io.width_tree_to_obj(wt), io.serialize_width_tree(wt))


def cmd_dot(args):
    wt = io.parse_width_tree(_read(args.file))
    print(io.export_dot(wt), end="")


# -- parser -----------------------------------------------------------------------------

def _thin_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _predicates(text: str) -> list[str]:
    return [p for p in text.split(",") if p]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="widthtree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, file=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if file:
            p.add_argument("file", nargs="?", default="-", help="document path, or - for stdin")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check a width tree document")
    add("invariants", cmd_invariants, "net extent, width, trunk and friends")
    p = add("bound", cmd_bound, "net extent lower bound of a ditree")
    p.add_argument("--mode", choices=(*BOUND_MODES, "both"), default="augmented-cut")
    add("flow", cmd_flow, "conservative flow on the augmented ditree")
    add("synthesize", cmd_synthesize, "labelling attaining the lower bound")
    p = add("cut-oracle", cmd_cut_oracle, "brute-force maximum strong cut")
    p.add_argument("--augmented", action="store_true", help="search the augmented ditree")
    add("sources-sinks", cmd_sources_sinks, "sources, sinks and degree-one counts")
    p = add("realize", cmd_realize, "c-trivial tangle for a trivialpod", file=False)
    p.add_argument("--thick", type=int, required=True)
    p.add_argument("--thin", type=_thin_list, default=[])
    p.add_argument("--orientation", choices=(tangle.ALL_IN, tangle.ALL_OUT), default=tangle.ALL_OUT)
    p.add_argument("--strategy", choices=(tangle.PATH, tangle.FEWEST_GHOSTS), default=tangle.PATH)
    p = add("assemble", cmd_assemble, "decomposition blueprint of a width tree")
    p.add_argument("--knotify", action="store_true")
    p.add_argument("--strategy", choices=(tangle.PATH, tangle.FEWEST_GHOSTS), default=tangle.PATH)
    p.add_argument("--output", help="write the blueprint document here")
    p = add("enumerate", cmd_enumerate, "width trees up to equivalence", file=False)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--min-vertices", type=int, default=1)
    p.add_argument("--max-label", type=int, required=True)
    p.add_argument("--require", type=_predicates, default=[],
                   help="comma separated: " + ",".join(sorted(harness.PREDICATES)))
    p.add_argument("--count", action="store_true", help="print only the count")
    p = add("family", cmd_family, "example width trees", file=False)
    p.add_argument("name", choices=harness.FAMILIES)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--delta", type=int)
    add("dot", cmd_dot, "Graphviz rendering of a width tree")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except WidthTreeError as exc:
        cause = exc.cause if isinstance(exc, SemanticError) else exc
        print(f"error: {cause.name}: {cause}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps({"error": cause.name, "message": str(cause)}, sort_keys=True))
        return 1
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
