"""Exact scalar fields.

Four coefficient fields are used throughout the package:

* ``QQ``    -- rationals, carried as :class:`fractions.Fraction`;
* ``QQ(t)`` -- rational functions in one parameter ``t`` (:class:`RatFunc`);
* ``GF(p)`` -- prime fields (:class:`ModP`);
* ``QQ(j)`` -- the Eisenstein field, ``j^2 + j + 1 = 0`` (:class:`QJ`).

Integers and Fractions mix freely with every other field (they are the
prime subfield).  Any other mixed-mode arithmetic raises ``TypeError``;
the only coercions are :func:`specialize` (QQ(t) -> QQ) and
:meth:`PrimeField.convert` (QQ -> GF(p)).
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Any, Iterable

from . import upoly

Rational = (int, Fraction)


# --------------------------------------------------------------------------
# rational functions in t


def _as_fraction_poly(c: Any) -> tuple:
    c = Fraction(c)
    return (c,) if c else ()


class RatFunc:
    """Element of QQ(t): a reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable = (), den: Iterable = (Fraction(1),), _reduced: bool = False):
        num = upoly.trim(Fraction(c) for c in num)
        den = upoly.trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = (Fraction(1),)
            else:
                g = upoly.gcd(num, den)
                if len(g) > 1:
                    num = upoly.divmod_(num, g)[0]
                    den = upoly.divmod_(den, g)[0]
                lead = den[-1]
                if lead != 1:
                    num = upoly.scale(num, 1 / lead)
                    den = upoly.scale(den, 1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def t(cls) -> "RatFunc":
        return cls((0, 1), (1,), _reduced=True)

    @classmethod
    def const(cls, c: Any) -> "RatFunc":
        return cls(_as_fraction_poly(c), (Fraction(1),), _reduced=True)

    def _coerce(self, other: Any) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Rational):
            return RatFunc.const(other)
        return None

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0] if self.num else Fraction(0)

    def __add__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(upoly.add(self.num, o.num), self.den)
        num = upoly.add(upoly.mul(self.num, o.den), upoly.mul(o.num, self.den))
        return RatFunc(num, upoly.mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(upoly.neg(self.num), self.den, _reduced=True)

    def __sub__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc()
        if o.is_constant():
            return RatFunc(upoly.scale(self.num, o.constant_value()), self.den, _reduced=True)
        if self.is_constant():
            return RatFunc(upoly.scale(o.num, self.constant_value()), o.den, _reduced=True)
        return RatFunc(upoly.mul(self.num, o.num), upoly.mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in QQ(t)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __call__(self, value: Any) -> Any:
        return specialize(self, value)

    def __str__(self) -> str:
        num = format_upoly(self.num, "t")
        if self.den == (1,):
            return num
        den = format_upoly(self.den, "t")
        if len([c for c in self.num if c]) > 1 or "/" in num:
            num = f"({num})"
        if len([c for c in self.den if c]) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def format_upoly(p: tuple, var: str) -> str:
    if not p:
        return "0"
    parts = []
    for e in range(len(p) - 1, -1, -1):
        c = p[e]
        if c == 0:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        parts.append((c, mono))
    return join_signed_terms(parts)


def join_signed_terms(parts: list[tuple[Any, str]]) -> str:
    """Join ``(coefficient, monomial)`` pairs as ``c*m + c*m - ...``."""
    out = []
    for k, (c, mono) in enumerate(parts):
        neg = c < 0
        a = -c if neg else c
        if mono and a == 1:
            body = mono
        elif mono:
            body = f"{a}*{mono}"
        else:
            body = str(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def specialize(x: Any, value: Any) -> Any:
    """QQ(t) -> QQ: substitute a rational for ``t`` (identity on rationals)."""
    if isinstance(x, Rational):
        return Fraction(x)
    if not isinstance(x, RatFunc):
        raise TypeError(f"cannot specialize {type(x).__name__}")
    value = Fraction(value)
    den = upoly.evaluate(x.den, value)
    if den == 0:
        raise ZeroDivisionError(f"{x} has a pole at t={value}")
    return Fraction(upoly.evaluate(x.num, value)) / den


# --------------------------------------------------------------------------
# prime fields


class ModP:
    """Element of GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _coerce(self, other: Any) -> "ModP | None":
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixed prime fields GF({self.p}) and GF({other.p})")
            return other
        if isinstance(other, int):
            return ModP(other, self.p)
        if isinstance(other, Fraction):
            return PrimeField(self.p).convert(other)
        return None

    def __add__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v + o.v, self.p)

    __radd__ = __add__

    def __neg__(self) -> "ModP":
        return ModP(-self.v, self.p)

    def __sub__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v - o.v, self.p)

    def __rsub__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(o.v - self.v, self.p)

    def __mul__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ModP(self.v * o.v, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.p})")
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "ModP":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "ModP":
        return ModP(pow(self.v, n, self.p), self.p)

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.v == o.v

    def __hash__(self) -> int:
        return hash((self.v, self.p))

    def __bool__(self) -> bool:
        return self.v != 0

    def __str__(self) -> str:
        return str(self.v)

    def __repr__(self) -> str:
        return f"ModP({self.v}, {self.p})"


# --------------------------------------------------------------------------
# QQ(j), j a primitive cube root of unity


class QJ:
    """Element ``a + b*j`` of QQ(j) with ``j^2 = -1 - j``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Any = 0, b: Any = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def j(cls) -> "QJ":
        return cls(0, 1)

    def _coerce(self, other: Any) -> "QJ | None":
        if isinstance(other, QJ):
            return other
        if isinstance(other, Rational):
            return QJ(other)
        return None

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QJ(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "QJ":
        return QJ(-self.a, -self.b)

    def __sub__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QJ(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        bd = self.b * o.b
        return QJ(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "QJ":
        return QJ(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "QJ":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in QQ(j)")
        c = self.conjugate()
        return QJ(c.a / n, c.b / n)

    def __truediv__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "QJ":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "QJ":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QJ(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        jpart = "j" if abs(self.b) == 1 else f"{abs(self.b)}*j"
        if self.a == 0:
            return jpart if self.b > 0 else f"-{jpart}"
        return f"{self.a}{'+' if self.b > 0 else '-'}{jpart}"

    def __repr__(self) -> str:
        return f"QJ({self})"


# --------------------------------------------------------------------------
# field descriptors


class Field:
    name = "?"
    zero: Any
    one: Any

    def convert(self, x: Any) -> Any:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class RationalField(Field):
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x: Any) -> Fraction:
        if isinstance(x, Rational):
            return Fraction(x)
        if isinstance(x, RatFunc) and x.is_constant():
            return x.constant_value()
        if isinstance(x, QJ) and x.is_rational():
            return x.a
        raise TypeError(f"{x!r} is not a rational")


class RationalFunctionField(Field):
    name = "QQ(t)"
    zero = RatFunc()
    one = RatFunc.const(1)

    def convert(self, x: Any) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Rational):
            return RatFunc.const(x)
        raise TypeError(f"{x!r} is not in QQ(t)")


class EisensteinField(Field):
    name = "QQ(j)"
    zero = QJ(0)
    one = QJ(1)

    def convert(self, x: Any) -> QJ:
        if isinstance(x, QJ):
            return x
        if isinstance(x, Rational):
            return QJ(x)
        raise TypeError(f"{x!r} is not in QQ(j)")


class PrimeField(Field):
    def __init__(self, p: int):
        self.p = p
        self.name = f"GF({p})"
        self.zero = ModP(0, p)
        self.one = ModP(1, p)

    def convert(self, x: Any) -> ModP:
        if isinstance(x, ModP):
            if x.p != self.p:
                raise ValueError(f"mixed prime fields GF({self.p}) and GF({x.p})")
            return x
        if isinstance(x, int):
            return ModP(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has a denominator divisible by {self.p}")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise TypeError(f"{x!r} cannot be reduced mod {self.p}")

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


QQ = RationalField()
QQt = RationalFunctionField()
QQj = EisensteinField()


def field_of(values: Iterable[Any]) -> Field:
    """Smallest field of this module containing all ``values``."""
    found: Field = QQ
    for v in values:
        if isinstance(v, Rational):
            continue
        if isinstance(v, RatFunc):
            f: Field = QQt
        elif isinstance(v, QJ):
            f = QQj
        elif isinstance(v, ModP):
            f = PrimeField(v.p)
        else:
            raise TypeError(f"not an exact scalar: {v!r}")
        if found is QQ:
            found = f
        elif found != f and not (found is f):
            raise TypeError(f"mixed coefficient fields {found} and {f}")
    return found


def to_mod_p(x: Any, p: int) -> int:
    """QQ -> GF(p) as a plain int in ``[0, p)``."""
    if isinstance(x, int):
        return x % p
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"{x} has a denominator divisible by {p}")
        return x.numerator * pow(x.denominator, -1, p) % p
    if isinstance(x, ModP):
        if x.p != p:
            raise ValueError(f"mixed prime fields GF({x.p}) and GF({p})")
        return x.v
    raise TypeError(f"{x!r} cannot be reduced mod {p}; specialize t first")


# --------------------------------------------------------------------------
# primes

# 2^61 - 1 and the next prime below it.
DEFAULT_PRIMES = (2305843009213693951, 2305843009213693921)
# Below 2^31 so that products fit in int64 (vectorized elimination).
WORD_PRIMES = (2147483647, 2147483629)
WORD_PRIME_LIMIT = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prev_prime(n: int) -> int:
    n -= 1
    while not is_prime(n):
        n -= 1
    return n


def _env_primes() -> list[int]:
    raw = os.environ.get("QSL3_PRIMES", "").strip()
    if not raw:
        return []
    out = [int(x) for x in re.split(r"[,\s]+", raw) if x]
    for p in out:
        if not is_prime(p):
            raise ValueError(f"QSL3_PRIMES entry {p} is not prime")
    return out


def configured_primes() -> tuple[int, ...]:
    """Primes for pure-Python prime-field runs (QSL3_PRIMES overrides)."""
    env = _env_primes()
    return tuple(env) if len(env) >= 2 else DEFAULT_PRIMES


def word_primes() -> tuple[int, ...]:
    """Primes below 2^31 for the numpy-backed elimination."""
    env = [p for p in _env_primes() if p < WORD_PRIME_LIMIT]
    return tuple(env) if len(env) >= 2 else WORD_PRIMES


# --------------------------------------------------------------------------
# text forms

def parse_scalar(text: str) -> Any:
    """Parse ``7/3``, ``-2``, ``symbolic``/``t`` (QQ(t)) or ``1/2-3*j`` (QQ(j))."""
    s = text.strip().replace(" ", "")
    if s in ("symbolic", "t"):
        return RatFunc.t()
    if "." in s or "e" in s.lower():
        raise ValueError(f"not a rational literal: {text!r}")
    if not s.endswith("j"):
        return Fraction(s)
    body = s[:-1].rstrip("*")
    k = max(body.rfind("+"), body.rfind("-"))
    if k > 0:
        a_str, b_str = body[:k], body[k:]
    else:
        a_str, b_str = "", body
    a = Fraction(a_str) if a_str else Fraction(0)
    if b_str in ("", "+"):
        b = Fraction(1)
    elif b_str == "-":
        b = Fraction(-1)
    else:
        b = Fraction(b_str)
    return QJ(a, b)


def format_scalar(x: Any) -> str:
    return str(x)
