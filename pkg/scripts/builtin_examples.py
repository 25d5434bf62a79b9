"""Walk through the two built-in examples: spine sets, porcupine graph,
phi on generators, a few factorizations, hedgehog degrees, full verification.

    python3 scripts/builtin_examples.py [--depth 4] [--dot-dir out/]
"""

import argparse
from pathlib import Path as FsPath

from porcupine.catalog import BUILTINS
from porcupine.graph import to_dot
from porcupine.ideal import breaking_vertices, make_admissible_pair
from porcupine.iso import Phi, VerifyConfig, factorize_into_H
from porcupine.spines import build_porcupine, hedgehog_map_degrees, spine_sets


def show(name, depth, dot_dir=None):
    make, sel = BUILTINS[name]
    g = make()
    pair = make_admissible_pair(g, sel["H"], sel["S"])
    print(f"== {name}: H={sorted(pair.H)} S={sorted(pair.S)} B_H={sorted(breaking_vertices(g, pair.H))}")
    sp = spine_sets(pair, 3, 1)
    print("  F1:", " ".join(p.label for p in sp.F1) or "-")
    print("  F2:", " ".join(p.label for p in sp.F2) or "-")

    porc = build_porcupine(pair, depth)
    lab = porc.labels()
    print(f"  porcupine at depth {depth}: {len(porc.graph.vertices)} vertices, complete={porc.complete}")
    phi = Phi(porc)
    for v in porc.graph.vertices:
        print(f"    phi({lab.get(v, v)}) = {phi.vertex(v)}")
    for e in porc.graph.edges(1):
        print(f"    phi({lab.get(e.bundle, e.label)}) = {phi.edge(e)}")

    for p in g.paths_into(pair.H, 3, 1):
        try:
            m = factorize_into_H(pair, porc, p)
        except LookupError:
            continue
        print(f"    {p.label:<10} <- {' '.join(lab.get(e.bundle, e.label) for e in m.edges)}")

    print("  hedgehog edge degrees:", hedgehog_map_degrees(pair, 3, 1))
    rep = VerifyConfig(depth=depth).run(pair)
    print("  " + rep.to_text().replace("\n", "\n  ").rstrip())
    if dot_dir:
        out = FsPath(dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.dot").write_text(to_dot(g))
        (out / f"{name}-porcupine.dot").write_text(to_dot(porc.graph, lab))
    return rep.passed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--dot-dir")
    args = ap.parse_args()
    ok = all([show(name, args.depth, args.dot_dir) for name in BUILTINS])
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
