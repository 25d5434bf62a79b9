"""Hereditary/saturated vertex sets, breaking vertices, and the graded ideal I(H, S)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .algebra import Element
from .graph import Graph, GraphError, Path, VertexKind


class PairError(ValueError):
    pass


def _as_set(g: Graph, X: Iterable[str]) -> frozenset[str]:
    X = frozenset(X)
    for v in X:
        g._check_vertex(v)
    return X


def sorted_vertices(g: Graph, X: Iterable[str]) -> list[str]:
    """``X`` in the graph's declaration order."""
    X = set(X)
    return [v for v in g.vertices if v in X]


def is_hereditary(g: Graph, X: Iterable[str]) -> bool:
    X = _as_set(g, X)
    return all(b.dst in X for b in g.bundles if b.src in X)


def is_saturated(g: Graph, X: Iterable[str]) -> bool:
    X = _as_set(g, X)
    for v in g.vertices:
        if v in X or g.vertex_kind(v) is not VertexKind.REGULAR:
            continue
        if all(b.dst in X for b in g.out_bundles(v)):
            return False
    return True


def hereditary_saturated_closure(g: Graph, X: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary saturated set containing ``X``."""
    X = set(_as_set(g, X))
    while True:
        size = len(X)
        stack = list(X)
        while stack:
            v = stack.pop()
            for b in g.out_bundles(v):
                if b.dst not in X:
                    X.add(b.dst)
                    stack.append(b.dst)
        for v in g.vertices:
            if v not in X and g.is_regular(v) and all(b.dst in X for b in g.out_bundles(v)):
                X.add(v)
        if len(X) == size:
            return frozenset(X)


def exiting_edges(g: Graph, H: Iterable[str], v: str):
    """Edges from ``v`` with range outside ``H``; ``None`` if there are infinitely many."""
    H = frozenset(H)
    out = []
    for b in g.out_bundles(v):
        if b.dst in H:
            continue
        if b.infinite:
            return None
        out.extend(g.edge(b.name, i) for i in range(b.count))
    return out


def breaking_vertices(g: Graph, H: Iterable[str]) -> frozenset[str]:
    H = _as_set(g, H)
    if not (is_hereditary(g, H) and is_saturated(g, H)):
        raise PairError("H must be hereditary and saturated")
    out = set()
    for v in g.vertices:
        if v in H or g.vertex_kind(v) is not VertexKind.INFINITE_EMITTER:
            continue
        ex = exiting_edges(g, H, v)
        if ex:
            out.add(v)
    return frozenset(out)


@dataclass(frozen=True)
class AdmissiblePair:
    graph: Graph
    H: frozenset[str]
    S: frozenset[str]

    def __post_init__(self):
        g = self.graph
        object.__setattr__(self, "H", _as_set(g, self.H))
        object.__setattr__(self, "S", _as_set(g, self.S))
        if not is_hereditary(g, self.H):
            raise PairError(f"H={sorted_vertices(g, self.H)} is not hereditary")
        if not is_saturated(g, self.H):
            raise PairError(f"H={sorted_vertices(g, self.H)} is not saturated")
        bad = self.S - breaking_vertices(g, self.H)
        if bad:
            raise PairError(f"S is not contained in B_H: {sorted_vertices(g, bad)}")

    def gap(self, v: str) -> Element:
        return gap_projection(self, v)


def make_admissible_pair(g: Graph, H: Iterable[str], S: Iterable[str] = ()) -> AdmissiblePair:
    return AdmissiblePair(g, frozenset(H), frozenset(S))


def gap_projection(pair: AdmissiblePair, v: str) -> Element:
    """``v^H = v - sum ee*`` over the edges from ``v`` leaving ``H``."""
    g = pair.graph
    if v not in breaking_vertices(g, pair.H):
        raise PairError(f"{v!r} is not a breaking vertex of H")
    x = Element.vertex(g, v)
    for e in exiting_edges(g, pair.H, v):
        ep = Path.of((e,))
        x = x - Element.monomial(g, ep, ep)
    return x


class MonomialKind(enum.Enum):
    INTO_H = "IntoH"
    GAP_AT_S = "GapAtS"


@dataclass(frozen=True)
class SpanningMonomial:
    """``p q*`` (INTO_H) or ``p v^H q*`` (GAP_AT_S) with ``r(p) = r(q)``."""

    kind: MonomialKind
    p: Path
    q: Path

    @property
    def vertex(self) -> str:
        return self.p.end

    @property
    def degree(self) -> int:
        return len(self.p) - len(self.q)

    def element(self, pair: AdmissiblePair) -> Element:
        g = pair.graph
        if self.kind is MonomialKind.INTO_H:
            return Element.monomial(g, self.p, self.q)
        return Element.path(g, self.p) * pair.gap(self.vertex) * Element.path(g, self.q).star()

    def __str__(self) -> str:
        if self.kind is MonomialKind.INTO_H:
            return f"{self.p}.{self.q}'"
        return f"{self.p}.{self.vertex}^H.{self.q}'"


def paths_ending_at(g: Graph, targets: Iterable[str], max_len: int, index_bound: int) -> dict[str, list[Path]]:
    """Paths of length ``0..max_len`` grouped by range vertex."""
    targets = sorted_vertices(g, targets)
    out = {t: [Path.vertex(t)] for t in targets}
    for p in g.paths_into(targets, max_len, index_bound):
        out[p.end].append(p)
    return out


def ideal_spanning_monomials(pair: AdmissiblePair, max_len: int, index_bound: int) -> list[SpanningMonomial]:
    g = pair.graph
    out = []
    for kind, targets in ((MonomialKind.INTO_H, pair.H), (MonomialKind.GAP_AT_S, pair.S)):
        for t, paths in paths_ending_at(g, targets, max_len, index_bound).items():
            for p in paths:
                for q in paths:
                    out.append(SpanningMonomial(kind, p, q))
    return out


def monomial_in_ideal(pair: AdmissiblePair, p: Path, q: Path) -> bool:
    """Whether ``p q*`` lies in I(H, S); this holds exactly when ``r(p)`` is in ``H``."""
    if p.end != q.end:
        raise GraphError(f"ranges of {p} and {q} differ")
    return p.end in pair.H
