"""Exact multilinear maps between tensor products of V, W and the unit.

A :class:`TensorMap` is stored as a dense matrix whose rows are indexed by the
codomain basis and whose columns are indexed by the domain basis.  Basis
tensors are ordered row-major, so ``x_i (x) y_a`` in ``V (x) W`` sits at flat
index ``3*i + a`` (0-based).  Unit factors have dimension 1 and are kept in
the signature so that composites can be written exactly as they read.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .exactmath.scalars import format_scalar

V, W, UNIT = "V", "W", "1"
DIMS = {V: 3, W: 3, UNIT: 1}

Signature = tuple


class SignatureError(ValueError):
    pass


def signature(labels: Iterable[str] | str) -> Signature:
    if isinstance(labels, str):
        labels = (labels,)
    sig = tuple(labels)
    for lab in sig:
        if lab not in DIMS:
            raise SignatureError(f"unknown factor {lab!r}")
    return sig


def dim(sig: Signature) -> int:
    n = 1
    for lab in sig:
        n *= DIMS[lab]
    return n


def strip_units(sig: Signature) -> Signature:
    return tuple(lab for lab in sig if lab != UNIT)


def multi_indices(sig: Signature) -> list[tuple[int, ...]]:
    """All index tuples of ``sig`` in flat (row-major) order."""
    return list(itertools.product(*(range(DIMS[lab]) for lab in sig)))


def flat_index(sig: Signature, idx: Sequence[int]) -> int:
    k = 0
    for lab, i in zip(sig, idx):
        k = k * DIMS[lab] + i
    return k


class TensorMap:
    """A linear map ``domain -> codomain`` with exact entries."""

    __slots__ = ("domain", "codomain", "rows")

    def __init__(self, domain, codomain, rows: Sequence[Sequence[Any]]):
        self.domain = signature(domain)
        self.codomain = signature(codomain)
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != dim(self.codomain) or any(len(r) != dim(self.domain) for r in self.rows):
            raise SignatureError(
                f"entry array does not fit {self.domain} -> {self.codomain}"
            )

    # ---- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, domain, codomain, zero: Any = Fraction(0)) -> "TensorMap":
        n, m = dim(signature(domain)), dim(signature(codomain))
        return cls(domain, codomain, [[zero] * n for _ in range(m)])

    @classmethod
    def identity(cls, sig, one: Any = Fraction(1)) -> "TensorMap":
        sig = signature(sig)
        n = dim(sig)
        zero = one - one
        return cls(sig, sig, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_images(cls, domain, codomain, images: dict, zero: Any = Fraction(0)) -> "TensorMap":
        """Build from ``{domain index tuple: {codomain index tuple: coeff}}``."""
        domain, codomain = signature(domain), signature(codomain)
        rows = [[zero] * dim(domain) for _ in range(dim(codomain))]
        for src, image in images.items():
            j = flat_index(domain, src)
            for dst, coeff in image.items():
                i = flat_index(codomain, dst)
                rows[i][j] = rows[i][j] + coeff
        return cls(domain, codomain, rows)

    # ---- access ---------------------------------------------------------
    def entry(self, cod_idx: Sequence[int], dom_idx: Sequence[int]) -> Any:
        return self.rows[flat_index(self.codomain, cod_idx)][flat_index(self.domain, dom_idx)]

    def image(self, dom_idx: Sequence[int]) -> dict:
        """Nonzero coefficients of the image of one basis tensor."""
        j = flat_index(self.domain, dom_idx)
        return {c: self.rows[i][j] for i, c in enumerate(multi_indices(self.codomain)) if self.rows[i][j]}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), dim(self.domain)

    def entries(self) -> list[Any]:
        return [x for r in self.rows for x in r]

    # ---- algebra --------------------------------------------------------
    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TensorMap):
            return NotImplemented
        return (self.domain, self.codomain) == (other.domain, other.codomain) and self.rows == other.rows

    __hash__ = None  # type: ignore[assignment]

    def same_as(self, other: "TensorMap") -> bool:
        """Equality after identifying ``X (x) 1`` with ``X``."""
        return (strip_units(self.domain) == strip_units(other.domain)
                and strip_units(self.codomain) == strip_units(other.codomain)
                and self.rows == other.rows)

    def first_difference(self, other: "TensorMap"):
        for i, (r, s) in enumerate(zip(self.rows, other.rows)):
            for j, (x, y) in enumerate(zip(r, s)):
                if x != y:
                    return i, j, x, y
        return None

    def __add__(self, other: "TensorMap") -> "TensorMap":
        if strip_units(self.domain) != strip_units(other.domain) or strip_units(self.codomain) != strip_units(other.codomain):
            raise SignatureError("cannot add maps with different signatures")
        return TensorMap(self.domain, self.codomain,
                         [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "TensorMap":
        return self.scale(-1)

    def __sub__(self, other: "TensorMap") -> "TensorMap":
        return self + (-other)

    def scale(self, c: Any) -> "TensorMap":
        return TensorMap(self.domain, self.codomain, [[c * x for x in r] for r in self.rows])

    def __rmul__(self, c: Any) -> "TensorMap":
        return self.scale(c)

    def __matmul__(self, other: "TensorMap") -> "TensorMap":
        return compose(self, other)

    def map_entries(self, fn) -> "TensorMap":
        return TensorMap(self.domain, self.codomain, [[fn(x) for x in r] for r in self.rows])

    def relabel(self, domain=None, codomain=None) -> "TensorMap":
        """Same matrix, new signatures of equal dimension."""
        domain = signature(domain) if domain is not None else self.domain
        codomain = signature(codomain) if codomain is not None else self.codomain
        return TensorMap(domain, codomain, self.rows)

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain),
            "codomain": list(self.codomain),
            "entries": [format_scalar(x) for x in self.entries()],
        }

    def __repr__(self) -> str:
        return f"TensorMap({'(x)'.join(self.domain)} -> {'(x)'.join(self.codomain)})"


def compose(f: TensorMap, g: TensorMap) -> TensorMap:
    """``f o g`` (apply ``g`` first)."""
    if g.codomain != f.domain:
        raise SignatureError(f"cannot compose: {g.codomain} != {f.domain}")
    cols = list(zip(*g.rows)) if g.rows else []
    out = []
    for r in f.rows:
        nz = [(k, a) for k, a in enumerate(r) if a]
        row = []
        for col in cols:
            acc = 0
            for k, a in nz:
                b = col[k]
                if b:
                    acc = acc + a * b
            row.append(acc if not isinstance(acc, int) else Fraction(acc))
        out.append(row)
    return TensorMap(g.domain, f.codomain, out)


def compose_all(*maps: TensorMap) -> TensorMap:
    """``compose_all(f, g, h) = f o g o h``."""
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return out


def tensor(f: TensorMap, g: TensorMap) -> TensorMap:
    """Kronecker product ``f (x) g`` with concatenated signatures."""
    rows = []
    for rf in f.rows:
        for rg in g.rows:
            rows.append([a * b for a in rf for b in rg])
    return TensorMap(f.domain + g.domain, f.codomain + g.codomain, rows)


def identity(sig, one: Any = Fraction(1)) -> TensorMap:
    return TensorMap.identity(sig, one)


def scalar_multiple_of_identity(f: TensorMap):
    """Return ``k`` if ``f = k * id`` exactly, else None."""
    if strip_units(f.domain) != strip_units(f.codomain):
        raise SignatureError("scalar test needs equal domain and codomain")
    k = f.rows[0][0]
    for i, r in enumerate(f.rows):
        for j, x in enumerate(r):
            if x != (k if i == j else 0):
                return None
    return k


def kron_matrices(mats: Sequence[Sequence[Sequence[Any]]]) -> list[list[Any]]:
    out: list[list[Any]] = [[Fraction(1)]]
    for m in mats:
        out = [[a * b for a in ra for b in rb] for ra in out for rb in m]
    return out
