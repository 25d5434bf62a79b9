"""Command-line front end.

Exit codes: 0 success / verification pass, 1 verification or validation
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import parse_element
from .catalog import BUILTINS
from .graph import GraphError, load_graph, to_dot
from .ideal import (
    PairError,
    breaking_vertices,
    hereditary_saturated_closure,
    make_admissible_pair,
    sorted_vertices,
)
from .iso import DepthInsufficient, Phi, VerifyConfig, factorize_into_H, factorize_into_S
from .spines import build_hedgehog, build_porcupine, hedgehog_map_degrees, spine_sets


class UsageError(Exception):
    pass


def _vertex_list(text: str | None) -> list[str]:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _graph(args):
    if not args.graph:
        raise UsageError("--graph is required")
    if not os.path.exists(args.graph) and args.graph in BUILTINS:
        return BUILTINS[args.graph][0]()
    try:
        return load_graph(args.graph)
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from None


def _pair(args):
    g = _graph(args)
    return make_admissible_pair(g, _vertex_list(args.H), _vertex_list(args.S))


def _index_bound(args) -> int:
    return args.index_bound if args.index_bound is not None else args.depth


def _emit(args, doc, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(text)


def _write_dot(args, graph, labels=None) -> None:
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(graph, labels))


def cmd_closure(args) -> int:
    g = _graph(args)
    cl = sorted(hereditary_saturated_closure(g, _vertex_list(args.H)))
    _emit(args, cl, " ".join(cl) if cl else "(empty)")
    return 0


def cmd_breaking(args) -> int:
    g = _graph(args)
    bh = sorted(breaking_vertices(g, _vertex_list(args.H)))
    _emit(args, bh, " ".join(bh) if bh else "(empty)")
    return 0


def cmd_pair_check(args) -> int:
    pair = _pair(args)
    doc = {"admissible": True, "H": sorted(pair.H), "S": sorted(pair.S),
           "B_H": sorted(breaking_vertices(pair.graph, pair.H))}
    _emit(args, doc, f"admissible: H={doc['H']} S={doc['S']} B_H={doc['B_H']}")
    return 0


def cmd_spines(args) -> int:
    pair = _pair(args)
    sp = spine_sets(pair, args.depth, _index_bound(args))
    doc = sp.to_doc()
    _emit(args, doc, f"F1: {' '.join(doc['F1']) or '(empty)'}\nF2: {' '.join(doc['F2']) or '(empty)'}")
    return 0


def cmd_porcupine(args) -> int:
    porc = build_porcupine(_pair(args), args.depth, _index_bound(args))
    _write_dot(args, porc.graph, porc.labels())
    doc = porc.to_doc()
    _emit(args, doc, to_dot(porc.graph, porc.labels()).rstrip())
    return 0


def cmd_hedgehog(args) -> int:
    hh = build_hedgehog(_pair(args), args.depth, _index_bound(args))
    _write_dot(args, hh.graph, hh.labels())
    _emit(args, hh.to_doc(), to_dot(hh.graph, hh.labels()).rstrip())
    return 0


def cmd_phi(args) -> int:
    porc = build_porcupine(_pair(args), args.depth, _index_bound(args))
    phi = Phi(porc)
    P = porc.graph
    if args.element:
        x = parse_element(P, args.element)
        img = str(phi(x))
        _emit(args, {"element": str(x), "image": img}, img)
        return 0
    doc = {
        "vertices": {v: str(phi.vertex(v)) for v in P.vertices},
        "edges": {e.label: str(phi.edge(e)) for e in P.edges(porc.index_bound)},
    }
    labels = porc.labels()
    text = "\n".join(f"phi({labels.get(k, k)}) = {v}" for part in doc.values() for k, v in part.items())
    _emit(args, doc, text)
    return 0


def cmd_factorize(args) -> int:
    pair = _pair(args)
    if not args.path:
        raise UsageError("--path is required")
    porc = build_porcupine(pair, args.depth, _index_bound(args))
    p = pair.graph.parse_path(args.path)
    try:
        if p.end in pair.H:
            m = factorize_into_H(pair, porc, p)
        elif p.end in pair.S:
            m = factorize_into_S(pair, porc, p)
        else:
            raise UsageError(f"range of {p} is in neither H nor S")
    except DepthInsufficient as exc:
        print(f"depth insufficient: {exc}", file=sys.stderr)
        return 1
    labels = porc.labels()
    pieces = [labels.get(e.bundle, e.label) for e in m.edges] or [m.start]
    doc = {"path": p.label, "factorization": [e.label for e in m.edges] or [m.start],
           "display": pieces, "image": str(Phi(porc).path(m))}
    _emit(args, doc, " ".join(pieces) + f"  ->  {doc['image']}")
    return 0


def cmd_verify(args) -> int:
    pair = _pair(args)
    cfg = VerifyConfig(depth=args.depth, samples=args.samples, seed=args.seed, index_bound=_index_bound(args))
    rep = cfg.run(pair)
    if args.json:
        print(rep.to_json())
    else:
        print(rep.to_text(), end="")
    return 0 if rep.passed else 1


def cmd_degrees(args) -> int:
    degs = hedgehog_map_degrees(_pair(args), args.depth, _index_bound(args))
    _emit(args, [[e, d] for e, d in degs], "\n".join(f"{e}\t{d}" for e, d in degs))
    return 0


def cmd_example(args) -> int:
    if args.name not in BUILTINS:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(BUILTINS)}")
    make, pair = BUILTINS[args.name]
    g = make()
    _write_dot(args, g)
    doc = g.to_doc()
    doc["pair"] = pair
    print(json.dumps(doc, indent=2))
    return 0


COMMANDS = {
    "closure": cmd_closure,
    "breaking": cmd_breaking,
    "pair-check": cmd_pair_check,
    "spines": cmd_spines,
    "porcupine": cmd_porcupine,
    "hedgehog": cmd_hedgehog,
    "phi": cmd_phi,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "degrees": cmd_degrees,
    "example": cmd_example,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph JSON file, or a built-in name (toeplitz, infinite-emitter)")
    common.add_argument("--H", default="", help="comma-separated vertex names")
    common.add_argument("--S", default="", help="comma-separated vertex names")
    common.add_argument("--depth", type=int, default=4)
    common.add_argument("--index-bound", type=int, default=None, help="omega-bundle indices enumerated (default: depth)")
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dot", metavar="FILE", help="also write the constructed graph as DOT")
    common.add_argument("--json", action="store_true", help="JSON on stdout")

    parser = argparse.ArgumentParser(prog="porcupine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "phi":
            sp.add_argument("--element", help="element over the porcupine graph to map")
        if name == "factorize":
            sp.add_argument("--path", help="path of E ending in H or S")
        if name == "example":
            sp.add_argument("name", help="toeplitz | infinite-emitter")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth < 1:
        parser.error("--depth must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"porcupine: {exc}", file=sys.stderr)
        return 2
    except (GraphError, PairError, ValueError) as exc:
        print(f"porcupine: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
