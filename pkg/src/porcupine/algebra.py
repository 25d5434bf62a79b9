"""Exact arithmetic in the Leavitt path algebra L_K(E), K = Q.

Elements are finite linear combinations of monomials ``p q*`` kept in
normal form: no monomial has ``p`` and ``q`` ending in the same edge ``e``
when ``e`` is the order-maximal edge emitted by the regular vertex
``s(e)``.  That orientation of CK2 (``e e* -> v - sum_{f != e} f f*``)
terminates because each step shortens the monomial.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .graph import Edge, Graph, GraphError, Path


class Degree(enum.Enum):
    """Non-integer outcomes of :func:`degree`."""

    ZERO = "zero"  # the zero element is homogeneous of every degree
    INHOMOGENEOUS = "inhomogeneous"


@dataclass(frozen=True, slots=True)
class Monomial:
    p: Path
    q: Path

    def __post_init__(self):
        if self.p.end != self.q.end:
            raise GraphError(f"monomial {self.p}.{self.q}' has mismatched ranges")

    @property
    def degree(self) -> int:
        return len(self.p) - len(self.q)

    def star(self) -> Monomial:
        return Monomial(self.q, self.p)

    def sort_key(self):
        return (self.p.sort_key(), self.q.sort_key())

    @property
    def text(self) -> str:
        if not self.q.edges:
            return self.p.label
        if not self.p.edges:
            return self.q.label + "'"
        return f"{self.p.label}.{self.q.label}'"

    def __repr__(self) -> str:
        return self.text


def _reduce(graph: Graph, p: Path, q: Path) -> dict[Monomial, int]:
    cache = graph.__dict__.setdefault("_nf_cache", {})
    key = (p, q)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if p.edges and q.edges and p.edges[-1] == q.edges[-1] and p.edges[-1] in graph.reducible_edges:
        e = p.edges[-1]
        p0, q0 = p.prefix(len(p) - 1), q.prefix(len(q) - 1)
        out = dict(_reduce(graph, p0, q0))
        for f in graph.out_edges(e.src):
            if f == e:
                continue
            m = Monomial(Path(p0.start, p0.edges + (f,), f.dst), Path(q0.start, q0.edges + (f,), f.dst))
            out[m] = out.get(m, 0) - 1
        out = {m: c for m, c in out.items() if c}
    else:
        out = {Monomial(p, q): 1}
    cache[key] = out
    return out


def _mono_product(graph: Graph, a: Monomial, b: Monomial) -> dict[Monomial, int]:
    """Normal form of ``(p q*)(r s*)``, by prefix comparison of ``q`` and ``r``."""
    cache = graph.__dict__.setdefault("_mul_cache", {})
    key = (a, b)
    hit = cache.get(key)
    if hit is not None:
        return hit
    p, q, r, s = a.p, a.q, b.p, b.q
    if q.start != r.start:
        out = {}
    elif len(q) <= len(r):
        if r.edges[: len(q)] != q.edges:
            out = {}
        else:
            out = _reduce(graph, p + r.suffix(len(q)), s)
    else:
        if q.edges[: len(r)] != r.edges:
            out = {}
        else:
            out = _reduce(graph, p, s + q.suffix(len(r)))
    cache[key] = out
    return out


class Element:
    """An element of L_K(E) as a map from normal-form monomials to nonzero rationals."""

    __slots__ = ("graph", "terms", "_hash")

    def __init__(self, graph: Graph, terms: Mapping[Monomial, Fraction | int] | None = None):
        self.graph = graph
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, graph: Graph) -> Element:
        return cls(graph)

    @classmethod
    def vertex(cls, graph: Graph, v: str) -> Element:
        graph._check_vertex(v)
        p = Path.vertex(v)
        return cls(graph, {Monomial(p, p): 1})

    @classmethod
    def edge(cls, graph: Graph, e: Edge) -> Element:
        return cls(graph, {Monomial(Path.of((e,)), Path.vertex(e.dst)): 1})

    @classmethod
    def ghost(cls, graph: Graph, e: Edge) -> Element:
        return cls(graph, {Monomial(Path.vertex(e.dst), Path.of((e,))): 1})

    @classmethod
    def path(cls, graph: Graph, p: Path) -> Element:
        return cls(graph, {Monomial(p, Path.vertex(p.end)): 1})

    @classmethod
    def monomial(cls, graph: Graph, p: Path, q: Path, coeff=1) -> Element:
        """Normal form of ``coeff * p q*``."""
        return cls(graph, {m: coeff * c for m, c in _reduce(graph, p, q).items()})

    # -- arithmetic ------------------------------------------------------------

    def _same(self, other: Element) -> None:
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphError("elements live over different graphs")

    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.graph, out)

    def __neg__(self) -> Element:
        return Element(self.graph, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return Element(self.graph, {m: c * other for m, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Element):
            return NotImplemented
        return (other.graph is self.graph or other.graph == self.graph) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def star(self) -> Element:
        return star(self)

    def degree(self):
        return degree(self)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({format_element(self)})"


def multiply(a: Element, b: Element) -> Element:
    a._same(b)
    g = a.graph
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            for m, c in _mono_product(g, m1, m2).items():
                out[m] = out.get(m, 0) + c1 * c2 * c
    return Element(g, out)


def star(a: Element) -> Element:
    # the normal-form condition is symmetric in p and q, so no rewriting is needed
    return Element(a.graph, {m.star(): c for m, c in a.terms.items()})


def degree(a: Element):
    degs = {m.degree for m in a.terms}
    if not degs:
        return Degree.ZERO
    if len(degs) > 1:
        return Degree.INHOMOGENEOUS
    return degs.pop()


def homogeneous_components(a: Element) -> dict[int, Element]:
    parts: dict[int, dict] = {}
    for m, c in a.terms.items():
        parts.setdefault(m.degree, {})[m] = c
    return {n: Element(a.graph, t) for n, t in sorted(parts.items())}


def generator(graph: Graph, gen) -> Element:
    """Element for a generator: a vertex name, an Edge, or ``("*", Edge)``."""
    if isinstance(gen, str):
        return Element.vertex(graph, gen)
    if isinstance(gen, Edge):
        return Element.edge(graph, gen)
    if isinstance(gen, tuple) and len(gen) == 2 and gen[0] == "*":
        return Element.ghost(graph, gen[1])
    raise TypeError(f"not a generator: {gen!r}")


def normal_form(graph: Graph, raw: Iterable[tuple[Fraction | int, Iterable]]) -> Element:
    """Normal form of a formal sum of products of generators.

    ``raw`` is an iterable of ``(coefficient, word)`` pairs; a word is a
    sequence of generators as accepted by :func:`generator`.  Incomposable
    juxtapositions evaluate to zero.
    """
    total = Element.zero(graph)
    for coeff, word in raw:
        word = list(word)
        if not word:
            raise ValueError("empty word")
        x = generator(graph, word[0])
        for gen in word[1:]:
            if not x:
                break
            x = x * generator(graph, gen)
        total = total + x * coeff
    return total


# -- text syntax ------------------------------------------------------------------
#
#   element := "0" | ["-"] term (("+" | "-") term)*
#   term    := [coeff "*"] factor ("." factor)*
#   coeff   := integer | integer "/" integer
#   factor  := path ["'"]          ("'" takes the adjoint of that path)
#   path    := vertex name | concatenated edge labels ("e", "q[3]")


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(a: Element) -> str:
    if not a.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(a.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = m.text if mag == 1 else f"{_fmt_coeff(mag)}*{m.text}"
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_COEFF = re.compile(r"^(\d+)(?:/(\d+))?\*")


def parse_element(graph: Graph, text: str) -> Element:
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    if text == "0":
        return Element.zero(graph)
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)
    # split yields ["", sign, term, sign, term, ...]
    if pieces[0] != "":
        raise ValueError(f"cannot parse {text!r}")
    total = Element.zero(graph)
    for sign, term in zip(pieces[1::2], pieces[2::2]):
        term = term.strip()
        coeff = Fraction(1)
        m = _COEFF.match(term)
        if m:
            coeff = Fraction(int(m.group(1)), int(m.group(2) or 1))
            term = term[m.end():]
        if sign == "-":
            coeff = -coeff
        x = None
        for factor in term.split("."):
            factor = factor.strip()
            starred = factor.endswith("'")
            p = graph.parse_path(factor.rstrip("'"))
            y = Element.path(graph, p)
            if starred:
                y = y.star()
            x = y if x is None else x * y
        total = total + x * coeff
    return total


# -- Cuntz-Krieger families ----------------------------------------------------------


@dataclass
class AxiomFailure:
    axiom: str
    generators: str
    difference: str


@dataclass
class CKReport:
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[AxiomFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def _record(self, axiom: str, lhs: Element, rhs: Element, gens: str) -> None:
        self.checked[axiom] = self.checked.get(axiom, 0) + 1
        if lhs != rhs:
            self.failures.append(AxiomFailure(axiom, gens, str(lhs - rhs)))


def check_ck_family(
    gP: Graph,
    vertex_image: Callable[[str], Element],
    edge_image: Callable[[Edge], Element],
    ghost_image: Callable[[Edge], Element] | None = None,
    index_bound: int = 2,
) -> CKReport:
    """Check (V), (E1), (E2), (CK1), (CK2) for images of ``gP``'s generators.

    Omega bundles of ``gP`` are sampled at indices ``< index_bound``.  CK2 is
    checked at every regular vertex of ``gP``.  CK1 for edges with different
    sources is implied by (V), (E1), (E2) and is not enumerated.
    """
    if ghost_image is None:
        def ghost_image(e):
            return edge_image(e).star()

    rep = CKReport()
    A = {v: vertex_image(v) for v in gP.vertices}
    edges = list(gP.edges(index_bound))
    B = {e: edge_image(e) for e in edges}
    C = {e: ghost_image(e) for e in edges}

    for u in gP.vertices:
        for w in gP.vertices:
            expect = A[u] if u == w else A[u] * 0
            rep._record("V", A[u] * A[w], expect, f"{u}*{w}")
    for e in edges:
        rep._record("E1", A[e.src] * B[e], B[e], f"s({e.label})*{e.label}")
        rep._record("E1", B[e] * A[e.dst], B[e], f"{e.label}*r({e.label})")
        rep._record("E2", A[e.dst] * C[e], C[e], f"r({e.label})*{e.label}'")
        rep._record("E2", C[e] * A[e.src], C[e], f"{e.label}'*s({e.label})")
    by_src: dict[str, list[Edge]] = {}
    for e in edges:
        by_src.setdefault(e.src, []).append(e)
    for es in by_src.values():
        for e in es:
            for f in es:
                expect = A[e.dst] if e == f else A[e.dst] * 0
                rep._record("CK1", C[e] * B[f], expect, f"{e.label}'*{f.label}")
    for v in gP.vertices:
        if not gP.is_regular(v):
            continue
        total = A[v] * 0
        for e in gP.out_edges(v):
            total = total + B[e] * C[e]
        rep._record("CK2", total, A[v], v)
    return rep
