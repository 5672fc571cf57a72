from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from qsl3.bqd import make_case_ih
from qsl3.tensors import (
    SignatureError,
    TensorMap,
    compose,
    dim,
    identity,
    scalar_multiple_of_identity,
    signature,
    tensor,
)

entry = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


def matrix(n, m):
    return st.lists(st.lists(entry, min_size=m, max_size=m), min_size=n, max_size=n)


def as_sympy(f: TensorMap):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in f.rows])


def test_signature_dimensions():
    assert dim(signature(("V", "W"))) == 9
    assert dim(signature(("1", "V"))) == 3
    f = TensorMap.zero(("V", "V"), ("W",))
    assert f.shape == (3, 9)


def test_identity_composition():
    idv = identity("V")
    assert compose(idv, idv) == idv


def test_identity_tensor_identity():
    assert tensor(identity("V"), identity("W")) == identity(("V", "W"))


def test_tensor_signatures():
    b = make_case_ih(Fraction(2))
    f = tensor(b.c, identity("V"))
    assert f.domain == ("1", "V")
    assert f.codomain == ("V", "W", "V")
    g = tensor(identity("V"), TensorMap.zero(("V", "V"), ("W",)))
    assert dim(g.domain) == 27


def test_cup_cap_identity_for_case_ih():
    b = make_case_ih(Fraction(2))
    idv = identity("V")
    zig = compose(tensor(b.D, idv), tensor(idv, b.d))
    assert scalar_multiple_of_identity(zig) == 1
    assert compose(b.A, b.a) == identity("W")


def test_scalar_multiple_of_identity():
    assert scalar_multiple_of_identity(identity("V")) == 1
    b = make_case_ih(Fraction(2))
    assert scalar_multiple_of_identity(compose(b.D, b.c)) == 3
    assert scalar_multiple_of_identity(compose(b.a, b.A)) is None


def test_composition_signature_mismatch():
    with pytest.raises(SignatureError):
        compose(identity("V"), identity("W"))


@given(matrix(3, 3), matrix(3, 3), matrix(3, 3))
def test_compose_is_associative(x, y, z):
    f, g, h = (TensorMap("V", "V", m) for m in (x, y, z))
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)
    assert as_sympy(compose(f, g)) == as_sympy(f) * as_sympy(g)


@given(matrix(3, 3), matrix(3, 3), matrix(3, 3), matrix(3, 3))
def test_tensor_is_functorial(x, y, z, w):
    f, f2 = TensorMap("V", "V", x), TensorMap("V", "V", y)
    g, g2 = TensorMap("W", "W", z), TensorMap("W", "W", w)
    assert compose(tensor(f, g), tensor(f2, g2)) == tensor(compose(f, f2), compose(g, g2))


@given(matrix(3, 9))
def test_identity_is_neutral(x):
    f = TensorMap(("V", "W"), "V", x)
    assert compose(f, identity(("V", "W"))) == f == compose(identity("V"), f)
