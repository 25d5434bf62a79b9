"""Exact rank of sparse rational row vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


def rank(rows: Iterable[Mapping[Hashable, Fraction | int]]) -> int:
    """Rank of the rows, each given as a sparse ``{column: value}`` map."""
    # pivot column -> (insertion order, row scaled to 1 at the pivot); a stored
    # row has no pivot columns of earlier rows, so eliminating in insertion
    # order terminates
    pivots: dict[Hashable, tuple[int, dict]] = {}
    for row in rows:
        v = {k: Fraction(c) for k, c in row.items() if c}
        while v:
            hits = [k for k in v if k in pivots]
            if not hits:
                col = next(iter(v))
                c = v[col]
                pivots[col] = (len(pivots), {k: x / c for k, x in v.items()})
                break
            hit = min(hits, key=lambda k: pivots[k][0])
            c = v[hit]
            for k, x in pivots[hit][1].items():
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return len(pivots)
