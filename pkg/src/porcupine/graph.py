"""Directed graphs with edge bundles, including infinite (omega) bundles.

A bundle is a named family of parallel edges ``src -> dst``.  Its
multiplicity is a positive integer or ``OMEGA`` (countably many edges).
Individual edges are addressed as ``(bundle, index)``.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

OMEGA = "inf"

# characters the element syntax uses as operators
_RESERVED = re.compile(r"[\s+\-*.'\[\]\"]")


class GraphError(ValueError):
    pass


class VertexKind(enum.Enum):
    REGULAR = "regular"
    SINK = "sink"
    INFINITE_EMITTER = "infinite-emitter"


@dataclass(frozen=True)
class Bundle:
    name: str
    src: str
    dst: str
    count: int | str = 1

    @property
    def infinite(self) -> bool:
        return self.count == OMEGA

    def indices(self, index_bound: int | None = None) -> range:
        if self.infinite:
            if index_bound is None:
                raise GraphError(f"bundle {self.name!r} is infinite; an index bound is required")
            return range(index_bound)
        return range(self.count)


@dataclass(frozen=True, slots=True)
class Edge:
    """A single edge.  Equality and hashing use ``(bundle, index)`` only."""

    bundle: str
    index: int
    src: str = field(compare=False)
    dst: str = field(compare=False)
    label: str = field(compare=False)
    order: tuple[int, int] = field(compare=False)

    def __repr__(self) -> str:
        return self.label


@dataclass(frozen=True, slots=True)
class Path:
    """A vertex (``edges == ()``) or a composable edge sequence."""

    start: str
    edges: tuple[Edge, ...]
    end: str

    @classmethod
    def vertex(cls, v: str) -> Path:
        return cls(v, (), v)

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> Path:
        edges = tuple(edges)
        if not edges:
            raise GraphError("a path of positive length needs at least one edge; use Path.vertex")
        for a, b in zip(edges, edges[1:]):
            if a.dst != b.src:
                raise GraphError(f"edges {a.label} and {b.label} are not composable")
        return cls(edges[0].src, edges, edges[-1].dst)

    def __len__(self) -> int:
        return len(self.edges)

    def __add__(self, other: Path) -> Path:
        if self.end != other.start:
            raise GraphError(f"cannot concatenate {self} and {other}")
        return Path(self.start, self.edges + other.edges, other.end)

    def suffix(self, i: int) -> Path:
        """Drop the first ``i`` edges."""
        if i == 0:
            return self
        if i >= len(self.edges):
            return Path.vertex(self.end)
        return Path(self.edges[i].src, self.edges[i:], self.end)

    def prefix(self, i: int) -> Path:
        """Keep the first ``i`` edges."""
        if i >= len(self.edges):
            return self
        if i == 0:
            return Path.vertex(self.start)
        return Path(self.start, self.edges[:i], self.edges[i - 1].dst)

    def sort_key(self) -> tuple:
        return (len(self.edges), tuple(e.order for e in self.edges), self.start)

    @property
    def label(self) -> str:
        if not self.edges:
            return self.start
        return "".join(e.label for e in self.edges)

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Path({self.label})"


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...] = ()
    bundles: tuple[Bundle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "bundles", tuple(self.bundles))
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex name")
        names = [b.name for b in self.bundles]
        if len(set(names)) != len(names):
            raise GraphError("duplicate bundle name")
        vs = set(self.vertices)
        for name in list(self.vertices) + names:
            if not name or _RESERVED.search(name):
                raise GraphError(f"invalid name {name!r}")
        for b in self.bundles:
            if b.src not in vs or b.dst not in vs:
                raise GraphError(f"bundle {b.name!r} has an undeclared endpoint")
            if b.count != OMEGA and (isinstance(b.count, bool) or not isinstance(b.count, int) or b.count < 1):
                raise GraphError(f"bundle {b.name!r}: multiplicity must be a positive integer or {OMEGA!r}")

    # -- lookup ----------------------------------------------------------

    @cached_property
    def _bundle_index(self) -> dict[str, tuple[int, Bundle]]:
        return {b.name: (i, b) for i, b in enumerate(self.bundles)}

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def _edge_cache(self) -> dict:
        return {}

    def __contains__(self, v: str) -> bool:
        return v in self._vertex_set

    def bundle(self, name: str) -> Bundle:
        try:
            return self._bundle_index[name][1]
        except KeyError:
            raise GraphError(f"unknown bundle {name!r}") from None

    def edge(self, bundle: str, index: int = 0) -> Edge:
        key = (bundle, index)
        cached = self._edge_cache.get(key)
        if cached is not None:
            return cached
        try:
            rank, b = self._bundle_index[bundle]
        except KeyError:
            raise GraphError(f"unknown bundle {bundle!r}") from None
        if index < 0 or (not b.infinite and index >= b.count):
            raise GraphError(f"edge index {index} out of range for bundle {bundle!r}")
        label = bundle if b.count == 1 else f"{bundle}[{index}]"
        e = Edge(bundle, index, b.src, b.dst, label, (rank, index))
        self._edge_cache[key] = e
        return e

    def edges(self, index_bound: int | None = None) -> Iterator[Edge]:
        """All edges in global order; omega bundles are cut at ``index_bound``."""
        for b in self.bundles:
            for i in b.indices(index_bound):
                yield self.edge(b.name, i)

    def path(self, *edges: Edge) -> Path:
        return Path.of(edges)

    def parse_path(self, text: str) -> Path:
        """Parse a vertex name or a concatenation of edge labels."""
        text = text.strip()
        if text in self:
            return Path.vertex(text)
        parses = list(self._split_edges(text, 0))
        if not parses:
            raise GraphError(f"cannot read {text!r} as a path")
        if len(parses) > 1:
            raise GraphError(f"ambiguous path {text!r}")
        return Path.of(parses[0])

    def _split_edges(self, text: str, pos: int) -> Iterator[tuple[Edge, ...]]:
        if pos == len(text):
            yield ()
            return
        for b in self.bundles:
            if not text.startswith(b.name, pos):
                continue
            end = pos + len(b.name)
            if b.count == 1:
                if end < len(text) and text[end] == "[":
                    continue
                heads = [(self.edge(b.name, 0), end)]
            else:
                m = re.match(r"\[(\d+)\]", text[end:])
                if not m:
                    continue
                idx = int(m.group(1))
                if not b.infinite and idx >= b.count:
                    continue
                heads = [(self.edge(b.name, idx), end + m.end())]
            for e, nxt in heads:
                for rest in self._split_edges(text, nxt):
                    if rest and rest[0].src != e.dst:
                        continue
                    yield (e,) + rest

    # -- structure ---------------------------------------------------------

    @cached_property
    def _out_bundles(self) -> dict[str, tuple[Bundle, ...]]:
        out: dict[str, list[Bundle]] = {v: [] for v in self.vertices}
        for b in self.bundles:
            out[b.src].append(b)
        return {v: tuple(bs) for v, bs in out.items()}

    @cached_property
    def _in_bundles(self) -> dict[str, tuple[Bundle, ...]]:
        inc: dict[str, list[Bundle]] = {v: [] for v in self.vertices}
        for b in self.bundles:
            inc[b.dst].append(b)
        return {v: tuple(bs) for v, bs in inc.items()}

    def out_bundles(self, v: str) -> tuple[Bundle, ...]:
        self._check_vertex(v)
        return self._out_bundles[v]

    def in_bundles(self, v: str) -> tuple[Bundle, ...]:
        self._check_vertex(v)
        return self._in_bundles[v]

    def _check_vertex(self, v: str) -> None:
        if v not in self._vertex_set:
            raise GraphError(f"unknown vertex {v!r}")

    def vertex_kind(self, v: str) -> VertexKind:
        out = self.out_bundles(v)
        if not out:
            return VertexKind.SINK
        if any(b.infinite for b in out):
            return VertexKind.INFINITE_EMITTER
        return VertexKind.REGULAR

    def is_regular(self, v: str) -> bool:
        return self.vertex_kind(v) is VertexKind.REGULAR

    @cached_property
    def _regular_out_edges(self) -> dict[str, tuple[Edge, ...]]:
        res = {}
        for v in self.vertices:
            if self.vertex_kind(v) is VertexKind.REGULAR:
                res[v] = tuple(self.edge(b.name, i) for b in self._out_bundles[v] for i in range(b.count))
        return res

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        """The edges emitted by a regular vertex, in global order."""
        self._check_vertex(v)
        try:
            return self._regular_out_edges[v]
        except KeyError:
            raise GraphError(f"vertex {v!r} is not regular") from None

    @cached_property
    def reducible_edges(self) -> frozenset[Edge]:
        """Order-maximal edge at each regular vertex; ``ee*`` is rewritten by CK2."""
        return frozenset(es[-1] for es in self._regular_out_edges.values())

    def paths_into(self, targets: Iterable[str], max_len: int, index_bound: int) -> list[Path]:
        """Paths ``p`` with ``1 <= |p| <= max_len`` and ``r(p)`` in ``targets``.

        Omega bundles contribute indices ``< index_bound`` only.  Order: by
        length, then lexicographically by (bundle order, index).
        """
        targets = set(targets)
        for t in targets:
            self._check_vertex(t)
        layer = []
        for t in self.vertices:
            if t in targets:
                for b in self._in_bundles[t]:
                    for i in b.indices(index_bound):
                        layer.append(Path.of((self.edge(b.name, i),)))
        out = []
        for _ in range(max_len):
            if not layer:
                break
            out.extend(layer)
            nxt = []
            for p in layer:
                for b in self._in_bundles[p.start]:
                    for i in b.indices(index_bound):
                        e = self.edge(b.name, i)
                        nxt.append(Path(e.src, (e,) + p.edges, p.end))
            layer = nxt
        out.sort(key=Path.sort_key)
        return out

    def paths_from(self, v: str, max_len: int, index_bound: int) -> list[Path]:
        """Paths starting at ``v`` of length ``0..max_len``."""
        self._check_vertex(v)
        out = [Path.vertex(v)]
        layer = out[:]
        for _ in range(max_len):
            nxt = []
            for p in layer:
                for b in self._out_bundles[p.end]:
                    for i in b.indices(index_bound):
                        e = self.edge(b.name, i)
                        nxt.append(Path(p.start, p.edges + (e,), e.dst))
            out.extend(nxt)
            layer = nxt
        return out

    # -- serialization -----------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "bundles": [{"name": b.name, "src": b.src, "dst": b.dst, "count": b.count} for b in self.bundles],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_doc(), **kw)


def parse_graph(doc: dict | str) -> Graph:
    """Build a validated Graph from a JSON document (or its text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    vertices = doc.get("vertices", [])
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError("'vertices' must be a list of strings")
    bundles = []
    for raw in doc.get("bundles", []):
        try:
            name, src, dst = raw["name"], raw["src"], raw["dst"]
        except (KeyError, TypeError):
            raise GraphError(f"malformed bundle {raw!r}") from None
        count = raw.get("count", 1)
        if isinstance(count, str) and count.lower() in ("inf", "omega", "ω"):
            count = OMEGA
        bundles.append(Bundle(str(name), str(src), str(dst), count))
    return Graph(tuple(vertices), tuple(bundles))


def load_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, labels: dict[str, str] | None = None) -> str:
    """Render as a DOT digraph.  Omega bundles become a single edge marked ×∞."""
    labels = labels or {}
    lines = ["digraph {"]
    for v in g.vertices:
        if v in labels:
            lines.append(f"  {_q(v)} [label={_q(labels[v])}];")
        else:
            lines.append(f"  {_q(v)};")
    for b in g.bundles:
        name = labels.get(b.name, b.name)
        if b.infinite:
            lines.append(f"  {_q(b.src)} -> {_q(b.dst)} [label={_q(name + ' ×∞')}];")
        elif b.count == 1:
            lines.append(f"  {_q(b.src)} -> {_q(b.dst)} [label={_q(name)}];")
        else:
            for i in range(b.count):
                lines.append(f"  {_q(b.src)} -> {_q(b.dst)} [label={_q(f'{name}[{i}]')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
