"""Dense univariate polynomials over an exact field.

A polynomial is a tuple of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is the empty tuple.  Coefficients may be
any exact field element that supports ``+ - * /`` and comparison with 0
(``Fraction``, ``RatFunc``, ``ModP``, ``QJ``).
"""

from __future__ import annotations

from typing import Any, Sequence

UPoly = tuple


def trim(coeffs: Sequence[Any]) -> UPoly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(p: UPoly) -> int:
    """Degree of ``p``; the zero polynomial has degree -1."""
    return len(p) - 1


def add(p: UPoly, q: UPoly) -> UPoly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return trim(out)


def neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def sub(p: UPoly, q: UPoly) -> UPoly:
    return add(p, neg(q))


def scale(p: UPoly, c: Any) -> UPoly:
    if c == 0:
        return ()
    return tuple(x * c for x in p)


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [lead * 0] * max(len(p) - dq, 0)
    for k in range(len(p) - dq - 1, -1, -1):
        c = rem[k + dq] / lead
        quo[k] = c
        if c != 0:
            for i, b in enumerate(q):
                rem[k + i] = rem[k + i] - c * b
    return trim(quo), trim(rem[:dq])


def monic(p: UPoly) -> UPoly:
    if not p:
        return p
    lead = p[-1]
    return tuple(c / lead for c in p)


def gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd (Euclid); gcd(0, 0) = 0."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def evaluate(p: UPoly, x: Any) -> Any:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: UPoly) -> UPoly:
    return trim(c * i for i, c in enumerate(p) if i)
