"""Incremental sparse row echelon forms.

Rows are dicts ``column -> value``.  Each stored pivot row is scaled so its
smallest column (the pivot) carries a 1; the remaining columns of a reduced
vector are the non-pivot ("normal") columns, which index a basis of the
quotient by the span of the rows.
"""

from __future__ import annotations

import heapq
from typing import Any, Hashable, Mapping


class SparseEchelon:
    """Echelon form over a field whose elements are Python objects
    (``Fraction``, ``RatFunc``, ``ModP``, ...)."""

    def __init__(self) -> None:
        self.pivots: dict[Hashable, dict[Hashable, Any]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping[Hashable, Any]) -> dict[Hashable, Any]:
        v = {c: x for c, x in vec.items() if x}
        pivots = self.pivots
        heap = [c for c in v if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            for cc, x in pivots[c].items():
                old = v.get(cc)
                nv = -a * x if old is None else old - a * x
                if nv:
                    v[cc] = nv
                    if old is None and cc in pivots:
                        heapq.heappush(heap, cc)
                else:
                    v.pop(cc, None)
        return v

    def add(self, vec: Mapping[Hashable, Any]) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = 1 / v[c]
        self.pivots[c] = {cc: x * inv for cc, x in v.items()}
        return True


class SparseEchelonModP:
    """The same over GF(p) with plain ints (the hot path for large ranks)."""

    def __init__(self, p: int) -> None:
        self.p = p
        self.pivots: dict[Hashable, dict[Hashable, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping[Hashable, int]) -> dict[Hashable, int]:
        p = self.p
        v = {c: x % p for c, x in vec.items() if x % p}
        pivots = self.pivots
        heap = [c for c in v if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a:
                continue
            for cc, x in pivots[c].items():
                old = v.get(cc)
                nv = (-a * x if old is None else old - a * x) % p
                if nv:
                    v[cc] = nv
                    if old is None and cc in pivots:
                        heapq.heappush(heap, cc)
                else:
                    v.pop(cc, None)
        return v

    def add(self, vec: Mapping[Hashable, int]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = pow(v[c], -1, self.p)
        self.pivots[c] = {cc: x * inv % self.p for cc, x in v.items()}
        return True
