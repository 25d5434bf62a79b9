"""Verify phi on many random graphs and every admissible pair reachable from
closures of random vertex subsets.

    python3 scripts/random_sweep.py --graphs 200 --depth 3 --seed 1
"""

import argparse
import random
import time
from dataclasses import dataclass, field

from porcupine.catalog import random_graph
from porcupine.ideal import breaking_vertices, hereditary_saturated_closure, make_admissible_pair
from porcupine.iso import VerifyConfig


@dataclass
class SweepConfig:
    graphs: int = 100
    max_vertices: int = 5
    max_bundles: int = 8
    subsets_per_graph: int = 3
    seed: int = 0
    verify: VerifyConfig = field(default_factory=lambda: VerifyConfig(depth=3, samples=50))


def pairs_of(g, rng, k):
    seen = set()
    for _ in range(k):
        H = hereditary_saturated_closure(g, [v for v in g.vertices if rng.random() < 0.5])
        B = sorted(breaking_vertices(g, H))
        for mask in range(2 ** len(B)):
            S = frozenset(b for j, b in enumerate(B) if mask >> j & 1)
            if (H, S) not in seen:
                seen.add((H, S))
                yield make_admissible_pair(g, H, S)


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    stats = {"graphs": 0, "pairs": 0, "with_S": 0, "incomplete": 0, "failed": 0}
    for i in range(cfg.graphs):
        g = random_graph(rng, cfg.max_vertices, cfg.max_bundles)
        stats["graphs"] += 1
        for pair in pairs_of(g, rng, cfg.subsets_per_graph):
            rep = cfg.verify.run(pair)
            stats["pairs"] += 1
            stats["with_S"] += bool(pair.S)
            stats["incomplete"] += not rep.complete
            if not rep.passed:
                stats["failed"] += 1
                print(f"graph {i}: {g}\n  H={sorted(pair.H)} S={sorted(pair.S)}\n{rep.to_text()}")
    return stats


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=100)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SweepConfig(graphs=args.graphs, seed=args.seed,
                      verify=VerifyConfig(depth=args.depth, samples=args.samples, seed=args.seed))
    t = time.perf_counter()
    stats = sweep(cfg)
    print(" ".join(f"{k}={v}" for k, v in stats.items()), f"time={time.perf_counter() - t:.1f}s")
    raise SystemExit(1 if stats["failed"] else 0)


if __name__ == "__main__":
    main()
