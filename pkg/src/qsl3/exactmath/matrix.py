"""Exact dense matrices: fraction-free determinants, RREF, rank and kernel,
and Sylvester resultants.

Entries are exact field elements or :class:`MultiPoly` (determinants only).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Sequence

from .multipoly import MultiPoly


class ExactMatrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Any]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int, one: Any = Fraction(1), zero: Any = Fraction(0)) -> "ExactMatrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int, zero: Any = Fraction(0)) -> "ExactMatrix":
        return cls([[zero] * n for _ in range(m)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Any:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ExactMatrix) or other.shape != self.shape:
            return NotImplemented if not isinstance(other, ExactMatrix) else False
        return all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None  # type: ignore[assignment]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(zip(*self.rows)) if self.rows else ExactMatrix([])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return ExactMatrix(out)

    def map(self, fn) -> "ExactMatrix":
        return ExactMatrix([[fn(x) for x in r] for r in self.rows])

    def __repr__(self) -> str:
        return "ExactMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"

    # ---- elimination --------------------------------------------------
    def det(self) -> Any:
        return det_fraction_free(self)

    def rref(self) -> tuple[list[list[Any]], list[int]]:
        return rref(self.rows)

    def rank(self) -> int:
        return len(self.rref()[1])

    def rank_and_kernel(self) -> tuple[int, list[list[Any]]]:
        return rank_and_kernel(self)

    def inverse(self) -> "ExactMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("non-square matrix has no inverse")
        one = _one_like(self.rows)
        zero = one - one
        aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return ExactMatrix([r[n:] for r in red[:n]])


def _one_like(rows: Sequence[Sequence[Any]]) -> Any:
    for r in rows:
        for x in r:
            if x and not isinstance(x, int):
                return x / x
    return Fraction(1)


def _exact_div(a: Any, b: Any) -> Any:
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        if not isinstance(a, MultiPoly):
            a = MultiPoly.const(a, b.variables)
        if not isinstance(b, MultiPoly):
            return a / b
        return a.exact_div(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q
    return a / b


def det_fraction_free(m: ExactMatrix | Sequence[Sequence[Any]]) -> Any:
    """Bareiss elimination: every division is exact, so polynomial entries
    stay polynomial and rational entries never leave their field."""
    rows = [list(r) for r in (m.rows if isinstance(m, ExactMatrix) else m)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev: Any = 1
    for k in range(n - 1):
        if not rows[k][k]:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return rows[0][0] * 0
        pivot = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            lead = ri[k]
            for j in range(k + 1, n):
                num = ri[j] * pivot - lead * rk[j]
                ri[j] = _exact_div(num, prev) if prev != 1 else num
            ri[k] = lead * 0
        prev = pivot
    d = rows[n - 1][n - 1]
    return -d if sign < 0 else d


def det_cofactor(m: Sequence[Sequence[Any]]) -> Any:
    """Laplace expansion along the first row (test oracle; small n only)."""
    rows = [list(r) for r in m]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total: Any = 0
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def rref(rows: Sequence[Sequence[Any]]) -> tuple[list[list[Any]], list[int]]:
    """Reduced row echelon form over a field; returns (nonzero rows, pivots)."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c] if not isinstance(a[r][c], int) else Fraction(1, a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank_and_kernel(m: ExactMatrix | Sequence[Sequence[Any]]) -> tuple[int, list[list[Any]]]:
    """Exact rank and a kernel basis, itself in reduced echelon form."""
    rows = m.rows if isinstance(m, ExactMatrix) else m
    ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows)
    one = _one_like(rows)
    zero = one - one
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    if basis:
        basis, _ = rref(basis)
    return len(pivots), basis


# --------------------------------------------------------------------------
# resultants


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> list[list[MultiPoly]]:
    """Rows: deg q shifted copies of p, then deg p shifted copies of q,
    coefficients listed from the top power of ``var`` down."""
    if var not in p.variables and var not in q.variables:
        raise ValueError(f"{var} is not among the variables")
    p, q = p._align(q)
    if var not in p.variables:
        raise ValueError(f"{var} is not among the variables")
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    pc = p.coefficients(var)
    qc = q.coefficients(var)
    m, n = len(pc) - 1, len(qc) - 1
    if m < 1 or n < 1:
        raise ValueError(f"both polynomials need positive degree in {var}")
    zero = MultiPoly(pc[0].variables)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(pc)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(qc)):
            row[i + k] = c
        rows.append(row)
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant in ``var``: a polynomial in the other variables."""
    r = det_fraction_free(sylvester_matrix(p, q, var))
    if not isinstance(r, MultiPoly):
        r = MultiPoly.const(r, [v for v in p._align(q)[0].variables if v != var])
    return r
