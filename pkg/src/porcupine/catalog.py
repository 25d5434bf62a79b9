"""Built-in graphs and a random graph generator."""

from __future__ import annotations

import random

from .graph import OMEGA, Bundle, Graph


def toeplitz() -> Graph:
    """``w`` with a loop ``e`` and an edge ``g`` to the sink ``v``."""
    return Graph(("w", "v"), (Bundle("e", "w", "w"), Bundle("g", "w", "v")))


def infinite_emitter() -> Graph:
    """``a -e1-> w``, ``w`` emits ``e2`` to ``b`` and infinitely many edges ``q`` to ``v``,
    and ``b`` emits ``e3`` to ``v`` and ``e4`` to the sink ``c``."""
    return Graph(
        ("a", "w", "v", "b", "c"),
        (
            Bundle("e1", "a", "w"),
            Bundle("q", "w", "v", OMEGA),
            Bundle("e2", "w", "b"),
            Bundle("e3", "b", "v"),
            Bundle("e4", "b", "c"),
        ),
    )


BUILTINS = {
    "toeplitz": (toeplitz, {"H": ["v"], "S": []}),
    "infinite-emitter": (infinite_emitter, {"H": ["v"], "S": ["w"]}),
}


def random_graph(rng: random.Random, max_vertices: int = 5, max_bundles: int = 8,
                 max_count: int = 2, omega: bool = True) -> Graph:
    """A random graph with at most one omega bundle."""
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_bundles)
    bundles = []
    omega_at = rng.randrange(m) if omega and m and rng.random() < 0.5 else None
    for i in range(m):
        count = OMEGA if i == omega_at else rng.choice([1] * 3 + list(range(2, max_count + 1)))
        bundles.append(Bundle(f"b{i}", rng.choice(vs), rng.choice(vs), count))
    return Graph(tuple(vs), tuple(bundles))
