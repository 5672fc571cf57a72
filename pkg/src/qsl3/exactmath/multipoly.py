"""Sparse multivariate polynomials with exact coefficients.

A :class:`MultiPoly` is an ordered tuple of variable names plus a dict from
exponent tuples to nonzero coefficients.  Coefficients are rationals by
default but any exact field element works (the flag-variety checks use
``RatFunc`` coefficients).

Canonical order is graded lexicographic on the variable list, highest term
first.  Text form: ``3/2*x^2*y - z + 1``; :func:`parse` inverts ``str``.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .scalars import QJ, ModP, RatFunc, Rational, join_signed_terms

_BITS = 24
_MASK = (1 << _BITS) - 1


class NotDivisible(ArithmeticError):
    pass


def _is_poly(x: Any) -> bool:
    return isinstance(x, MultiPoly)


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Any] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.variables}")
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    # ---- construction -------------------------------------------------
    @classmethod
    def const(cls, c: Any, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    @classmethod
    def symbols(cls, *names: str) -> tuple["MultiPoly", ...]:
        return tuple(cls.var(n, names) for n in names)

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into a variable list containing every variable in use."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for v, k in zip(self.variables, e):
                if k:
                    if v not in pos:
                        raise ValueError(f"variable {v} in use but not in {variables}")
                    ne[pos[v]] = k
            out[tuple(ne)] = c
        return MultiPoly(variables, out)

    def _align(self, other: Any) -> tuple["MultiPoly", "MultiPoly"]:
        if not _is_poly(other):
            other = MultiPoly.const(other, self.variables)
        if other.variables == self.variables:
            return self, other
        names = list(self.variables) + [v for v in other.variables if v not in self.variables]
        return self.with_variables(names), other.with_variables(names)

    # ---- arithmetic ---------------------------------------------------
    def __add__(self, other: Any) -> "MultiPoly":
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(a.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> "MultiPoly":
        return self + (-other)

    def __rsub__(self, other: Any) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "MultiPoly":
        if not _is_poly(other):
            if not other:
                return MultiPoly(self.variables)
            return MultiPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        a, b = self._align(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        n = len(a.variables)
        bt = [(_pack(e), c) for e, c in b.terms.items()]
        acc: dict[int, Any] = {}
        get = acc.get
        for e1, c1 in a.terms.items():
            k1 = _pack(e1)
            for k2, c2 in bt:
                k = k1 + k2
                v = get(k)
                acc[k] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(a.variables, {_unpack(k, n): c for k, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.const(Fraction(1), self.variables)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other: Any) -> "MultiPoly":
        if _is_poly(other):
            return self.exact_div(other)
        return MultiPoly(self.variables, {e: c / other for e, c in self.terms.items()})

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient ``self / other``; raises :class:`NotDivisible` on a remainder."""
        a, b = self._align(other)
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        n = len(a.variables)
        if len(b.terms) == 1:
            (eb, cb), = b.terms.items()
            out = {}
            for e, c in a.terms.items():
                q = tuple(x - y for x, y in zip(e, eb))
                if min(q, default=0) < 0:
                    raise NotDivisible(f"{other} does not divide {self}")
                out[q] = c / cb
            return MultiPoly(a.variables, out)
        rem = {_pack(e): c for e, c in a.terms.items()}
        div = sorted(((_pack(e), c) for e, c in b.terms.items()), reverse=True)
        lead_k, lead_c = div[0]
        lead_e = _unpack(lead_k, n)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quo = {}
        while heap:
            k = -heapq.heappop(heap)
            c = rem.pop(k, None)
            if c is None or not c:
                continue
            while heap and -heap[0] == k:
                heapq.heappop(heap)
            qe = tuple(x - y for x, y in zip(_unpack(k, n), lead_e))
            if min(qe, default=0) < 0:
                raise NotDivisible(f"{other} does not divide {self}")
            qc = c / lead_c
            qk = k - lead_k
            quo[qe] = qc
            for dk, dc in div[1:]:
                kk = qk + dk
                v = rem.get(kk)
                if v is None:
                    rem[kk] = -qc * dc
                    heapq.heappush(heap, -kk)
                else:
                    rem[kk] = v - qc * dc
        return MultiPoly(a.variables, quo)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other: Any) -> bool:
        if not _is_poly(other):
            if isinstance(other, (int, Fraction, RatFunc, ModP, QJ)):
                other = MultiPoly.const(other, self.variables)
            else:
                return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        items = []
        for e, c in self.terms.items():
            items.append((tuple((v, k) for v, k in zip(self.variables, e) if k), c))
        return hash(frozenset(items))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # ---- structure ----------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, Any]]:
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def leading_term(self) -> tuple[tuple, Any]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self, variables: Iterable[str] | None = None) -> bool:
        idx = range(len(self.variables)) if variables is None else [self.variables.index(v) for v in variables]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Any:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def drop_variable(self, var: str) -> "MultiPoly":
        """Same polynomial on the variable list without ``var`` (must not occur)."""
        if var in self.used_variables():
            raise ValueError(f"{var} occurs in {self}")
        return self.with_variables([v for v in self.variables if v != var])

    def coefficients(self, var: str) -> list["MultiPoly"]:
        """Coefficients in ``var`` (index = power), on the remaining variables."""
        if var not in self.variables:
            raise ValueError(f"{var} is not among {self.variables}")
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        deg = max(buckets, default=-1)
        return [MultiPoly(rest, buckets.get(k, {})) for k in range(deg + 1)]

    def monomial_content(self) -> tuple:
        """Exponent vector of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self.terms))

    def subs(self, values: Mapping[str, Any]) -> "MultiPoly":
        """Substitute scalars or polynomials for some variables."""
        keep = [v for v in self.variables if v not in values]
        out = MultiPoly(keep)
        cache: dict[tuple[str, int], Any] = {}
        for e, c in self.terms.items():
            term: Any = MultiPoly(keep, {tuple(k for v, k in zip(self.variables, e) if v not in values): c})
            for v, k in zip(self.variables, e):
                if k and v in values:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = values[v] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        missing = [v for v in self.used_variables() if v not in values]
        if missing:
            raise ValueError(f"no value for {missing}")
        total: Any = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.variables, e):
                if k:
                    term = term * values[v] ** k
            total = total + term
        return total

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.variables, {e: fn(c) for e, c in self.terms.items()})

    # ---- text ---------------------------------------------------------
    def monomial_str(self, e: tuple) -> str:
        parts = []
        for v, k in zip(self.variables, e):
            if k == 1:
                parts.append(v)
            elif k:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        rational = all(isinstance(c, Rational) for c in self.terms.values())
        for e, c in self.sorted_terms():
            mono = self.monomial_str(e)
            if rational:
                parts.append((c, mono))
            else:
                body = f"({c})" + (f"*{mono}" if mono else "")
                parts.append((Fraction(1), body))
        return join_signed_terms(parts) if rational else " + ".join(b for _, b in parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.variables}, {self})"


def _pack(e: tuple) -> int:
    k = sum(e)
    for x in e:
        k = (k << _BITS) | x
    return k


def _unpack(k: int, n: int) -> tuple:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = k & _MASK
        k >>= _BITS
    return tuple(out)


_NAME = r"[A-Za-z_][A-Za-z0-9_]*'*"
_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR_RE = re.compile(rf"^(?:(\d+(?:/\d+)?)|({_NAME})(?:\^(\d+))?)$")


def parse(text: str, variables: Sequence[str] | None = None) -> MultiPoly:
    """Parse the canonical text form (rational coefficients only)."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    raw_terms = []
    pos = 0
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        raw_terms.append((sign, m.group(2).strip()))
    if pos != len(s):
        raise ValueError(f"cannot parse {text!r}")
    parsed = []
    names: list[str] = list(variables) if variables is not None else []
    for sign, body in raw_terms:
        coeff = Fraction(sign)
        powers: dict[str, int] = {}
        for factor in body.split("*"):
            fm = _FACTOR_RE.match(factor.strip())
            if not fm:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            if fm.group(1):
                coeff *= Fraction(fm.group(1))
            else:
                name = fm.group(2)
                if name not in names:
                    if variables is not None:
                        raise ValueError(f"unknown variable {name!r}")
                    names.append(name)
                powers[name] = powers.get(name, 0) + int(fm.group(3) or 1)
        parsed.append((coeff, powers))
    out = MultiPoly(names)
    for coeff, powers in parsed:
        e = tuple(powers.get(v, 0) for v in names)
        out = out + MultiPoly(names, {e: coeff})
    return out
