"""Spine paths F1, F2 and the porcupine and hedgehog graphs of an admissible pair.

F1 holds the paths ``e_1...e_n`` with ``r(e_n)`` in H and ``s(e_n)``
outside H and S; F2 holds the paths of positive length ending in S.
Both are suffix closed, which is what lets the porcupine graph chain its
spine edges: ``f^{eq}`` runs from ``w^{eq}`` to ``w^q``.
"""

from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass, field

from .graph import Bundle, Edge, Graph, Path
from .ideal import AdmissiblePair


class SpineKind(enum.Enum):
    F1 = "F1"
    F2 = "F2"


def classify(pair: AdmissiblePair, p: Path) -> SpineKind | None:
    if not p.edges:
        return None
    if p.end in pair.S:
        return SpineKind.F2
    last = p.edges[-1]
    if last.dst in pair.H and last.src not in pair.H and last.src not in pair.S:
        return SpineKind.F1
    return None


@dataclass(frozen=True)
class SpineSets:
    F1: tuple[Path, ...]
    F2: tuple[Path, ...]
    max_len: int
    index_bound: int
    _members: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = {p: SpineKind.F1 for p in self.F1}
        members.update({p: SpineKind.F2 for p in self.F2})
        object.__setattr__(self, "_members", members)

    def kind(self, p: Path) -> SpineKind | None:
        return self._members.get(p)

    def __contains__(self, p: Path) -> bool:
        return p in self._members

    def all(self) -> list[Path]:
        return sorted(self.F1 + self.F2, key=Path.sort_key)

    def to_doc(self) -> dict:
        return {"F1": [p.label for p in self.F1], "F2": [p.label for p in self.F2]}


def spine_sets(pair: AdmissiblePair, max_len: int, index_bound: int | None = None) -> SpineSets:
    if index_bound is None:
        index_bound = max_len
    g = pair.graph
    F1, F2 = [], []
    for p in g.paths_into(pair.H | pair.S, max_len, index_bound):
        k = classify(pair, p)
        if k is SpineKind.F1:
            F1.append(p)
        elif k is SpineKind.F2:
            F2.append(p)
    return SpineSets(tuple(F1), tuple(F2), max_len, index_bound)


def spines_finite(pair: AdmissiblePair) -> bool:
    """Whether F1 and F2 together are finite.

    Every spine path is ``p e`` with ``e`` a final edge (range in S, or
    range in H with source outside H and S) and ``p`` any path into
    ``s(e)``.  That family is finite iff no final edge lies in an omega
    bundle and the ancestors of the final sources span an acyclic subgraph
    not fed by any omega bundle.
    """
    g = pair.graph
    finals = [
        b for b in g.bundles
        if b.dst in pair.S or (b.dst in pair.H and b.src not in pair.H and b.src not in pair.S)
    ]
    if any(b.infinite for b in finals):
        return False
    anc = set()
    stack = [b.src for b in finals]
    while stack:
        v = stack.pop()
        if v in anc:
            continue
        anc.add(v)
        stack.extend(b.src for b in g.in_bundles(v))
    preds: dict[str, set[str]] = {v: set() for v in anc}
    for b in g.bundles:
        if b.dst in anc:
            if b.infinite or b.src == b.dst:
                return False
            preds[b.dst].add(b.src)
    try:
        tuple(graphlib.TopologicalSorter(preds).static_order())
    except graphlib.CycleError:
        return False
    return True


# -- porcupine -----------------------------------------------------------------


def _tag(p: Path) -> str:
    return ",".join(e.bundle if e.label == e.bundle else f"{e.bundle}:{e.index}" for e in p.edges)


def spine_vertex_name(p: Path) -> str:
    return "w^{" + _tag(p) + "}"


def spine_edge_name(p: Path) -> str:
    return "f^{" + _tag(p) + "}"


@dataclass(frozen=True)
class PorcupineGraph:
    """Porcupine graph truncated to spines of length ``<= depth``.

    ``vertex_path`` and ``edge_path`` map the names of ``w^p`` and ``f^p`` to
    ``p``.  ``complete`` is true when nothing was cut off.
    """

    pair: AdmissiblePair
    graph: Graph
    spines: SpineSets
    vertex_path: dict[str, Path]
    edge_path: dict[str, Path]
    depth: int
    complete: bool
    retained: frozenset[str] = field(default_factory=frozenset)

    @property
    def index_bound(self) -> int:
        return self.spines.index_bound

    def spine_vertex(self, p: Path) -> str:
        return spine_vertex_name(p)

    def spine_edge(self, p: Path) -> Edge:
        return self.graph.edge(spine_edge_name(p))

    def labels(self) -> dict[str, str]:
        out = {name: "w^" + p.label for name, p in self.vertex_path.items()}
        out.update({name: "f^" + p.label for name, p in self.edge_path.items()})
        return out

    def to_doc(self) -> dict:
        doc = self.graph.to_doc()
        doc["depth"] = self.depth
        doc["index_bound"] = self.index_bound
        doc["complete"] = self.complete
        doc["provenance"] = {name: p.label for name, p in {**self.vertex_path, **self.edge_path}.items()}
        return doc


def retained_bundles(pair: AdmissiblePair) -> list[Bundle]:
    """Edges of E kept in both constructions: sources in H, or in S with range in H."""
    return [b for b in pair.graph.bundles if b.src in pair.H or (b.src in pair.S and b.dst in pair.H)]


def build_porcupine(pair: AdmissiblePair, depth: int, index_bound: int | None = None) -> PorcupineGraph:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    g = pair.graph
    sp = spine_sets(pair, depth, index_bound)
    vertices = [v for v in g.vertices if v in pair.H or v in pair.S]
    keep = retained_bundles(pair)
    bundles = list(keep)
    vpath, epath = {}, {}
    for p in sp.all():
        w = spine_vertex_name(p)
        vertices.append(w)
        vpath[w] = p
    for p in sp.all():
        f = spine_edge_name(p)
        dst = p.end if len(p) == 1 else spine_vertex_name(p.suffix(1))
        bundles.append(Bundle(f, spine_vertex_name(p), dst, 1))
        epath[f] = p
    P = Graph(tuple(vertices), tuple(bundles))
    # spines are suffix closed, so any spine longer than depth has one of length depth+1
    complete = spines_finite(pair) and not any(
        len(p) > depth and classify(pair, p) for p in g.paths_into(pair.H | pair.S, depth + 1, 1)
    )
    return PorcupineGraph(pair, P, sp, vpath, epath, depth, complete, frozenset(b.name for b in keep))


# -- hedgehog ------------------------------------------------------------------


def hedgehog_vertex_name(p: Path) -> str:
    return "u^{" + _tag(p) + "}"


def hedgehog_edge_name(p: Path) -> str:
    return "bar^{" + _tag(p) + "}"


@dataclass(frozen=True)
class HedgehogGraph:
    pair: AdmissiblePair
    graph: Graph
    spines: SpineSets
    vertex_path: dict[str, Path]
    edge_path: dict[str, Path]
    depth: int

    def labels(self) -> dict[str, str]:
        out = {name: p.label for name, p in self.vertex_path.items()}
        out.update({name: "bar(" + p.label + ")" for name, p in self.edge_path.items()})
        return out

    def to_doc(self) -> dict:
        doc = self.graph.to_doc()
        doc["depth"] = self.depth
        doc["index_bound"] = self.spines.index_bound
        doc["provenance"] = {name: p.label for name, p in {**self.vertex_path, **self.edge_path}.items()}
        return doc


def build_hedgehog(pair: AdmissiblePair, depth: int, index_bound: int | None = None) -> HedgehogGraph:
    """Generalized hedgehog graph: one vertex per spine path ``p`` and one edge ``p -> r(p)``."""
    g = pair.graph
    sp = spine_sets(pair, depth, index_bound)
    vertices = [v for v in g.vertices if v in pair.H or v in pair.S]
    bundles = retained_bundles(pair)
    vpath, epath = {}, {}
    for p in sp.all():
        u, b = hedgehog_vertex_name(p), hedgehog_edge_name(p)
        vertices.append(u)
        bundles.append(Bundle(b, u, p.end, 1))
        vpath[u], epath[b] = p, p
    return HedgehogGraph(pair, Graph(tuple(vertices), tuple(bundles)), sp, vpath, epath, depth)


def hedgehog_map_degrees(pair: AdmissiblePair, depth: int, index_bound: int | None = None) -> list[tuple[str, int]]:
    """Degree of the classical image ``p`` of each hedgehog spine edge ``bar(p)``."""
    hh = build_hedgehog(pair, depth, index_bound)
    return [("bar(" + p.label + ")", len(p)) for p in hh.edge_path.values()]
