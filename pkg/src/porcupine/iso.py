"""The graded *-homomorphism phi: L_K(P_(H,S)) -> I(H,S) and its verification.

phi on generators of the porcupine graph:

    v in H          -> v              edge of E           -> itself
    v in S          -> v^H            f^e, e in F1        -> e
    w^p, p in F1    -> p p*           f^e, e in F2        -> e r(e)^H
    w^p, p in F2    -> p r(p)^H p*    f^{eq}, q in F1     -> e q q*
                                      f^{eq}, q in F2     -> e q r(q)^H q*

and phi(g*) = phi(g)*.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, replace

from . import linalg
from .algebra import Degree, Element, Monomial, check_ck_family, degree
from .graph import Bundle, Edge, Graph, GraphError, Path
from .ideal import AdmissiblePair, MonomialKind, SpanningMonomial, paths_ending_at
from .report import CheckSummary, IsoReport
from .spines import PorcupineGraph, SpineKind, build_porcupine, classify


class DepthInsufficient(LookupError):
    """A factorization needs a spine vertex beyond the truncation depth."""


class Phi:
    """phi for one truncated porcupine graph, with per-generator caching."""

    def __init__(self, porcupine: PorcupineGraph):
        self.porcupine = porcupine
        self.pair = porcupine.pair
        self.E = self.pair.graph
        self.P = porcupine.graph
        self._vcache: dict[str, Element] = {}
        self._ecache: dict[Edge, Element] = {}
        self._pcache: dict[Path, Element] = {}

    def _spine_image(self, p: Path) -> Element:
        # p p* for F1, p r(p)^H p* for F2
        E = self.E
        x = Element.path(E, p)
        if classify(self.pair, p) is SpineKind.F2:
            x = x * self.pair.gap(p.end)
        return x * Element.path(E, p).star()

    def vertex(self, v: str) -> Element:
        if v in self._vcache:
            return self._vcache[v]
        E = self.E
        if v in self.pair.H:
            x = Element.vertex(E, v)
        elif v in self.pair.S:
            x = self.pair.gap(v)
        elif v in self.porcupine.vertex_path:
            x = self._spine_image(self.porcupine.vertex_path[v])
        else:
            raise GraphError(f"{v!r} is not a vertex of the porcupine graph")
        self._vcache[v] = x
        return x

    def edge(self, g: Edge) -> Element:
        if g in self._ecache:
            return self._ecache[g]
        E = self.E
        if g.bundle in self.porcupine.retained:
            x = Element.edge(E, E.edge(g.bundle, g.index))
        elif g.bundle in self.porcupine.edge_path:
            p = self.porcupine.edge_path[g.bundle]
            e = Element.edge(E, p.edges[0])
            if len(p) == 1:
                x = e * self.pair.gap(p.end) if classify(self.pair, p) is SpineKind.F2 else e
            else:
                x = e * self._spine_image(p.suffix(1))
        else:
            raise GraphError(f"{g!r} is not an edge of the porcupine graph")
        self._ecache[g] = x
        return x

    def ghost(self, g: Edge) -> Element:
        return self.edge(g).star()

    def path(self, p: Path) -> Element:
        if p in self._pcache:
            return self._pcache[p]
        if not p.edges:
            x = self.vertex(p.start)
        else:
            x = self.edge(p.edges[0])
            for g in p.edges[1:]:
                x = x * self.edge(g)
        self._pcache[p] = x
        return x

    def monomial(self, m: Monomial) -> Element:
        return self.path(m.p) * self.path(m.q).star()

    def __call__(self, x: Element) -> Element:
        """Linear and multiplicative extension to elements over the porcupine graph."""
        if x.graph != self.P:
            raise GraphError("element is not over this porcupine graph")
        total = Element.zero(self.E)
        for m, c in x.terms.items():
            total = total + self.monomial(m) * c
        return total


class MutatedPhi(Phi):
    """phi with some generator images replaced; used to check the checks."""

    def __init__(self, porcupine, vertex_overrides=None, edge_overrides=None):
        super().__init__(porcupine)
        self._vcache.update(vertex_overrides or {})
        self._ecache.update(edge_overrides or {})


def phi_vertex(pair: AdmissiblePair, porcupine: PorcupineGraph, v: str) -> Element:
    return Phi(porcupine).vertex(v)


def phi_edge(pair: AdmissiblePair, porcupine: PorcupineGraph, g: Edge | str) -> Element:
    if isinstance(g, str):
        g = porcupine.graph.parse_path(g).edges[0]
    return Phi(porcupine).edge(g)


def phi_element(pair: AdmissiblePair, porcupine: PorcupineGraph, x: Element) -> Element:
    return Phi(porcupine)(x)


# -- surjectivity witnesses ----------------------------------------------------------


def _spine_chain(porc: PorcupineGraph, p: Path) -> list[Edge]:
    """``f^{p} f^{p_2} ... f^{p_n}`` where ``p_j`` drops the first ``j-1`` edges."""
    out = []
    for j in range(len(p)):
        s = p.suffix(j)
        if s not in porc.spines:
            raise DepthInsufficient(f"spine w^{s.label} is beyond depth {porc.depth} / index bound {porc.index_bound}")
        out.append(porc.spine_edge(s))
    return out


def _retained(porc: PorcupineGraph, edges) -> list[Edge]:
    P = porc.graph
    for e in edges:
        if e.bundle in P._bundle_index and P.bundle(e.bundle).infinite and e.index >= porc.index_bound:
            raise DepthInsufficient(f"edge {e.label} is beyond index bound {porc.index_bound}")
    return [P.edge(e.bundle, e.index) for e in edges]


def factorize_into_H(pair: AdmissiblePair, porc: PorcupineGraph, p: Path) -> Path:
    """A porcupine path ``m`` with ``phi(m) = p`` and ``|m| = |p|``, for ``r(p)`` in H."""
    if p.end not in pair.H:
        raise ValueError(f"range of {p} is not in H")
    if not p.edges:
        return Path.vertex(p.start)
    if p.start in pair.H:
        return Path.of(_retained(porc, p.edges))
    n = len(p)
    i = max(j for j in range(n) if p.edges[j].src not in pair.H)  # 0-based
    if p.edges[i].src not in pair.S:
        chain = _spine_chain(porc, p.prefix(i + 1))
        tail = _retained(porc, p.edges[i + 1:])
    elif i == 0:
        chain, tail = [], _retained(porc, p.edges)
    else:
        chain = _spine_chain(porc, p.prefix(i))
        tail = _retained(porc, p.edges[i:])
    return Path.of(chain + tail)


def factorize_into_S(pair: AdmissiblePair, porc: PorcupineGraph, p: Path) -> Path:
    """A porcupine path ``m`` with ``phi(m) = p r(p)^H`` and ``|m| = |p|``, for ``r(p)`` in S."""
    if p.end not in pair.S:
        raise ValueError(f"range of {p} is not in S")
    if not p.edges:
        raise ValueError("path into S must have positive length")
    return Path.of(_spine_chain(porc, p))


def surjectivity_witness(pair: AdmissiblePair, porc: PorcupineGraph, sm) -> Monomial:
    """Porcupine monomial ``m1 m2*`` whose image is the spanning monomial ``sm``."""
    if sm.kind is MonomialKind.INTO_H:
        return Monomial(factorize_into_H(pair, porc, sm.p), factorize_into_H(pair, porc, sm.q))

    def side(p):
        return Path.vertex(p.end) if not p.edges else factorize_into_S(pair, porc, p)

    return Monomial(side(sm.p), side(sm.q))


# -- verification ----------------------------------------------------------------------


class PathPairs:
    """Paths of length ``0..max_len`` grouped by range, for counting and
    sampling pairs ``(p, q)`` with ``r(p) = r(q)`` without listing them all."""

    def __init__(self, graph, targets, max_len: int, index_bound: int):
        self.by_end = paths_ending_at(graph, targets, max_len, index_bound)
        self.ends = [v for v, ps in self.by_end.items() if ps]
        self.weights = [len(self.by_end[v]) ** 2 for v in self.ends]
        self.red = graph.reducible_edges

    def __len__(self) -> int:
        return sum(self.weights)

    def is_normal(self, p: Path, q: Path) -> bool:
        return not (p.edges and q.edges and p.edges[-1] == q.edges[-1] and p.edges[-1] in self.red)

    def all(self):
        for v in self.ends:
            for p in self.by_end[v]:
                for q in self.by_end[v]:
                    yield p, q

    def sample(self, rng: random.Random, k: int, normal: bool = False) -> list[tuple[Path, Path]]:
        """``k`` pairs drawn uniformly (with replacement); ``normal`` rejects non-normal pairs."""
        out = []
        if not self.ends:
            return out
        while len(out) < k:
            v = rng.choices(self.ends, self.weights)[0]
            p, q = rng.choice(self.by_end[v]), rng.choice(self.by_end[v])
            if normal and not self.is_normal(p, q):
                continue
            out.append((p, q))
        return out


def normal_monomials(graph, max_len: int, index_bound: int) -> list[Monomial]:
    """All normal-form monomials ``p q*`` with ``|p|, |q| <= max_len``."""
    pp = PathPairs(graph, graph.vertices, max_len, index_bound)
    return [Monomial(p, q) for p, q in pp.all() if pp.is_normal(p, q)]


def injectivity_rank(phi: Phi, max_len: int = 2, limit: int | None = None,
                     rng: random.Random | None = None) -> tuple[int, int]:
    """(number of normal porcupine monomials, rank of their images) up to ``max_len``.

    With ``limit``, a random subset of that size is used; full rank of a
    subset is still evidence of independence.
    """
    pp = PathPairs(phi.P, phi.P.vertices, max_len, phi.porcupine.index_bound)
    if limit is not None and len(pp) > 4 * limit:
        # distinct normal pairs, drawn at random
        seen = dict.fromkeys(Monomial(p, q) for p, q in pp.sample(rng or random.Random(0), 2 * limit, normal=True))
        monos = list(seen)[:limit]
    else:
        monos = [Monomial(p, q) for p, q in pp.all() if pp.is_normal(p, q)]
        if limit is not None and len(monos) > limit:
            monos = (rng or random.Random(0)).sample(monos, limit)
    rows = [phi.monomial(m).terms for m in monos]
    return len(monos), linalg.rank(rows)


def verify_graded_star_iso(
    pair: AdmissiblePair,
    depth: int = 4,
    samples: int = 100,
    seed: int = 0,
    index_bound: int | None = None,
    phi: Phi | None = None,
    rank_len: int | None = 2,
    pair_limit: int = 2000,
    rank_limit: int = 1500,
) -> IsoReport:
    """Check that phi is a graded *-isomorphism onto I(H,S), up to ``depth``.

    Checks: Cuntz-Krieger relations for the images, degree preservation,
    star compatibility, nonvanishing on vertices, a witness in the image for
    every spanning monomial of I(H,S) within ``depth``, multiplicativity on
    random monomial pairs, and (if ``rank_len``) linear independence of the
    images of short normal monomials.

    Surjectivity is established per path: ``p`` (into H) or ``p r(p)^H``
    (into S) must be the image of a length-preserving porcupine path, for
    every path within ``depth``.  The spanning monomial ``p q*`` is then the
    image of ``m1 m2*``.  Those pair identities are also checked directly,
    exhaustively when there are at most ``pair_limit`` of them and on a
    seeded sample otherwise.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if phi is None:
        phi = Phi(build_porcupine(pair, depth, index_bound))
    porc = phi.porcupine
    P, E = phi.P, phi.E
    ib = porc.index_bound
    rng = random.Random(seed)
    report = IsoReport(depth=depth, index_bound=ib, samples=samples, seed=seed, complete=porc.complete)

    # (a) relations
    ck = check_ck_family(P, phi.vertex, phi.edge, phi.ghost, index_bound=ib)
    axioms = CheckSummary("axioms", checked=sum(ck.checked.values()))
    for f in ck.failures:
        axioms.fail(f"{f.axiom} at {f.generators}", f"difference {f.difference}")
    report.add(axioms)

    gens = [(v, Element.vertex(P, v), phi.vertex(v), 0) for v in P.vertices]
    gens += [(e.label, Element.edge(P, e), phi.edge(e), 1) for e in P.edges(ib)]
    gens += [(e.label + "'", Element.ghost(P, e), phi.ghost(e), -1) for e in P.edges(ib)]

    pool = PathPairs(P, P.vertices, depth, ib)
    picks = [Monomial(p, q) for p, q in pool.sample(rng, samples, normal=True)]

    # (b) degrees
    deg = CheckSummary("degrees")
    for name, _, img, d in gens:
        deg.count()
        if degree(img) != d:
            deg.fail(name, f"image {img} has degree {_deg_str(degree(img))}, expected {d}")
    for m in picks:
        deg.count()
        img = phi.monomial(m)
        if degree(img) != m.degree:
            deg.fail(m.text, f"image {img} has degree {_deg_str(degree(img))}, expected {m.degree}")
    report.add(deg)

    # (c) star compatibility: phi evaluated on the adjoint monomial vs adjoint of the image
    st = CheckSummary("star")
    for name, x, img, _ in gens:
        st.count()
        if phi(x.star()) != img.star():
            st.fail(name, f"phi({name}*) = {phi(x.star())} but phi({name})* = {img.star()}")
    for m in picks:
        st.count()
        lhs = phi(Element(P, {m.star(): 1}))
        rhs = phi.monomial(m).star()
        if lhs != rhs:
            st.fail(m.text, f"phi(m*) = {lhs} but phi(m)* = {rhs}")
    report.add(st)

    # (d) vertices map to nonzero elements
    nz = CheckSummary("vertex-nonvanishing")
    for v in P.vertices:
        nz.count()
        if not phi.vertex(v):
            nz.fail(v, "phi(v) = 0")
    report.add(nz)

    # (e) surjectivity onto the spanning family of I(H,S)
    su = CheckSummary("surjectivity")
    direct, witnessed = [], set()
    for kind, targets in ((MonomialKind.INTO_H, pair.H), (MonomialKind.GAP_AT_S, pair.S)):
        pp = PathPairs(E, targets, depth, ib)
        for v, paths in pp.by_end.items():
            ok = {p for p in paths if _path_witness(pair, porc, phi, kind, p, su) is not None}
            witnessed |= ok
            good = len(ok)
            # a spanning monomial is covered when both of its paths have witnesses
            su.count(len(paths) ** 2)
            su.uncovered += len(paths) ** 2 - good ** 2
        pairs = pp.all() if len(pp) <= pair_limit else pp.sample(rng, pair_limit)
        direct.extend(SpanningMonomial(kind, p, q) for p, q in pairs)
    for sm in direct:
        if sm.p not in witnessed or sm.q not in witnessed:
            continue  # already reported or skipped per path
        w = surjectivity_witness(pair, porc, sm)
        got = phi.monomial(w)
        want = sm.element(pair)
        if got != want:
            su.fail(str(sm), f"witness {w.text} maps to {got}, expected {want}")
    report.add(su)

    # (f) multiplicativity
    mu = CheckSummary("multiplicativity")
    for (p1, q1), (p2, q2) in zip(pool.sample(rng, samples, True), pool.sample(rng, samples, True)):
        a, b = Monomial(p1, q1), Monomial(p2, q2)
        mu.count()
        x, y = Element(P, {a: 1}), Element(P, {b: 1})
        lhs = phi(x * y)
        rhs = phi(x) * phi(y)
        if lhs != rhs:
            mu.fail(f"({a.text})({b.text})", f"phi(xy) = {lhs} but phi(x)phi(y) = {rhs}")
    report.add(mu)

    if rank_len:
        inj = CheckSummary("injectivity-rank")
        n, r = injectivity_rank(phi, min(rank_len, depth), rank_limit, rng)
        inj.count(n)
        if r != n:
            inj.fail(f"|p|,|q| <= {rank_len}", f"{n} monomials but image rank {r}")
        report.add(inj)
    return report


@dataclass(frozen=True)
class VerifyConfig:
    depth: int = 4
    samples: int = 100
    seed: int = 0
    index_bound: int | None = None
    rank_len: int | None = 2
    pair_limit: int = 2000
    rank_limit: int = 1500

    def run(self, pair: AdmissiblePair, phi: Phi | None = None) -> IsoReport:
        return verify_graded_star_iso(pair, phi=phi, **asdict(self))


def _path_witness(pair, porc, phi, kind, p: Path, su: CheckSummary) -> Path | None:
    """Factorize ``p`` and check its image; ``None`` if it failed or is out of range."""
    E = pair.graph
    try:
        if kind is MonomialKind.INTO_H:
            m = factorize_into_H(pair, porc, p)
            want = Element.path(E, p)
        elif p.edges:
            m = factorize_into_S(pair, porc, p)
            want = Element.path(E, p) * pair.gap(p.end)
        else:
            m = Path.vertex(p.end)
            want = pair.gap(p.end)
    except DepthInsufficient as exc:
        su.skip(p.label, str(exc))
        return None
    except GraphError as exc:
        su.fail(p.label, f"no porcupine path: {exc}")
        return None
    got = phi.path(m)
    if got != want:
        su.fail(p.label, f"factorization {m} maps to {got}, expected {want}")
        return None
    if len(m) != len(p):
        su.fail(p.label, f"factorization {m} has length {len(m)}, expected {len(p)}")
        return None
    return m


def _deg_str(d) -> str:
    return d.value if isinstance(d, Degree) else str(d)


# -- fault injection ---------------------------------------------------------------------


def drop_gap_projection(porc: PorcupineGraph) -> MutatedPhi:
    """Replace the image ``e r(e)^H`` of the first F2 spine edge by ``e``."""
    for name, p in porc.edge_path.items():
        if classify(porc.pair, p) is SpineKind.F2:
            g = porc.graph.edge(name)
            E = porc.pair.graph
            img = Element.edge(E, p.edges[0])
            if len(p) > 1:
                q = p.suffix(1)
                img = img * Element.path(E, q) * Element.path(E, q).star()
            return MutatedPhi(porc, edge_overrides={g: img})
    raise ValueError("no F2 spine edge to mutate")


def swap_edge_images(porc: PorcupineGraph) -> MutatedPhi:
    """Exchange the images of the first two spine edges."""
    names = list(porc.edge_path)
    if len(names) < 2:
        raise ValueError("need two spine edges")
    base = Phi(porc)
    a, b = porc.graph.edge(names[0]), porc.graph.edge(names[1])
    return MutatedPhi(porc, edge_overrides={a: base.edge(b), b: base.edge(a)})


def retarget_spine_edge(porc: PorcupineGraph) -> Phi:
    """Point the last spine edge of length >= 2 at the range of its path instead of ``w^q``."""
    long = [n for n, p in porc.edge_path.items() if len(p) >= 2]
    if not long:
        raise ValueError("no spine edge of length >= 2")
    name = long[-1]
    p = porc.edge_path[name]
    bundles = tuple(Bundle(b.name, b.src, p.end, b.count) if b.name == name else b for b in porc.graph.bundles)
    mutated = replace(porc, graph=Graph(porc.graph.vertices, bundles))
    return Phi(mutated)
