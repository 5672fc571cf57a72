from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import SAMPLE_TS
from qsl3.bqd import (
    CaseIhParams,
    InvalidParameter,
    apply_equivalence,
    case_ie_params,
    check_coherence,
    cyclic_maps,
    is_type_one,
    make_bqd_from_params,
    make_case_ie,
    make_case_ih,
    q_matrix,
    quantum_determinants,
    read_cyclic_params,
    swap_bqd,
    type_one,
)
from qsl3.exactmath.multipoly import MultiPoly
from qsl3.exactmath.scalars import RatFunc
from qsl3.tensors import TensorMap, scalar_multiple_of_identity


# ------------------------------------------------------------------ oracle

def oracle_tensors(params):
    """a^{jk}_b and A^g_{ij} written out from the cyclic formulas."""
    al, be, ga, alp, bep, gap = (sympy.nsimplify(str(x)) for x in params)
    a = {}
    A = {}
    for k in range(3):
        k1, k2 = (k + 1) % 3, (k + 2) % 3
        a[(k1, k2, k)] = al
        a[(k2, k1, k)] = be
        a[(k, k, k)] = ga
        A[(k, k1, k2)] = alp
        A[(k, k2, k1)] = bep
        A[(k, k, k)] = gap
    return (lambda j, k, b: a.get((j, k, b), 0)), (lambda g, i, j: A.get((g, i, j), 0))


def oracle_cubic_condition(params) -> bool:
    """(1 (x) A)(a (x) 1)(A (x) 1)(1 (x) a) = (1/4)(1 + cD) on V (x) W, in indices."""
    a, A = oracle_tensors(params)
    R = range(3)
    for i in R:
        for b in R:
            for l in R:
                for d in R:
                    lhs = sum(a(j, k, b) * A(g, i, j) * a(l, m, g) * A(d, m, k)
                              for j in R for k in R for g in R for m in R)
                    rhs = sympy.Rational(1, 4) * ((i == l) * (b == d) + (i == b) * (l == d))
                    if sympy.simplify(lhs - rhs) != 0:
                        return False
    return True


# ------------------------------------------------------------------ constructors

def test_case_ih_a_at_two():
    b = make_case_ih(Fraction(2))
    assert b.a.image((0,)) == {(2, 1): 1, (0, 0): -2}
    assert b.a.image((1,)) == {(0, 2): 1, (1, 1): -2}
    assert b.a.image((2,)) == {(1, 0): 1, (2, 2): -2}


def test_case_ie_A_at_two():
    b = make_case_ie(Fraction(2))
    assert b.A.image((0, 0)) == {}
    assert b.A.image((0, 1)) == {(2,): Fraction(1, 2)}


@pytest.mark.parametrize("bad", [Fraction(1), Fraction(0)])
def test_forbidden_t(bad):
    with pytest.raises(InvalidParameter):
        make_case_ih(bad)
    with pytest.raises(InvalidParameter):
        make_case_ie(bad)


def test_float_t_rejected():
    with pytest.raises(InvalidParameter):
        make_case_ih(2.0)


def test_integer_t_stays_exact():
    b = make_case_ih(2)
    assert all(isinstance(x, Fraction) for x in b.A.entries())


def test_params_validation():
    with pytest.raises(InvalidParameter):
        CaseIhParams(Fraction(0), Fraction(1), Fraction(0), Fraction(0), Fraction(1), Fraction(0)).validate()
    with pytest.raises(InvalidParameter):
        CaseIhParams(Fraction(0), Fraction(1), Fraction(-1), Fraction(0), Fraction(1), Fraction(0)).validate()
    CaseIhParams.normalized(Fraction(2)).validate()


# ------------------------------------------------------------------ coherence

@pytest.mark.parametrize("t", SAMPLE_TS)
def test_coherence_case_ih(t):
    report = check_coherence(make_case_ih(t))
    assert report.passed
    assert report.count == (12, 12)


@pytest.mark.parametrize("t", SAMPLE_TS)
def test_coherence_case_ie(t):
    b = make_case_ie(t)
    assert check_coherence(b).passed
    assert b.kappa == 3 and b.rho == Fraction(1, 4) and b.omega == 1


def test_coherence_symbolic_t():
    t = RatFunc.t()
    assert check_coherence(make_case_ih(t)).passed
    assert check_coherence(make_case_ie(t)).passed


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-5, 3)])
def test_cubic_condition_matches_index_oracle(t):
    for params in (CaseIhParams.normalized(t), case_ie_params(t)):
        assert oracle_cubic_condition(params.as_tuple())
        assert check_coherence(make_bqd_from_params(params)).get("f", "").passed


def test_index_oracle_rejects_wrong_scale():
    params = CaseIhParams.normalized(Fraction(2)).as_tuple()
    doubled = params[:3] + tuple(2 * x for x in params[3:])
    assert not oracle_cubic_condition(doubled)


def test_scaled_A_breaks_normalization():
    b = make_case_ih(Fraction(2)).scaled("A", 2)
    report = check_coherence(b)
    res = report.get("b", "left")
    assert not res.passed
    assert res.witness["lhs"] == "2" and res.witness["rhs"] == "1"


def test_random_type_one_fails_cubic_condition():
    rng = random.Random(5)
    a = TensorMap(("W",), ("V", "V"), [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(9)])
    A = TensorMap(("V", "V"), ("W",), [[Fraction(rng.randint(-3, 3)) for _ in range(9)] for _ in range(3)])
    report = check_coherence(type_one(a, A))
    assert not report.get("f", "").passed
    assert report.get("f", "").witness is not None


# ------------------------------------------------------------------ Q matrix

@pytest.mark.parametrize("t", [Fraction(3), Fraction(2), RatFunc.t()])
def test_q_matrix_is_identity(t):
    b = make_case_ih(t)
    assert is_type_one(b)
    assert scalar_multiple_of_identity(q_matrix(b)) == 1


def test_q_matrix_with_rescaled_c():
    b = make_case_ih(Fraction(2)).scaled("c", 2)
    assert scalar_multiple_of_identity(q_matrix(b, check=False)) == 2


# ------------------------------------------------------------------ quantum determinants

@pytest.mark.parametrize("t", [Fraction(2), Fraction(-1), Fraction(7, 3)])
def test_symmetric_part_is_hesse_cubic(t):
    qd = quantum_determinants(make_case_ih(t))
    x1, x2, x3 = MultiPoly.symbols("x1", "x2", "x3")
    expected = (x1 ** 3 + x2 ** 3 + x3 ** 3) * (-t) + 3 * x1 * x2 * x3
    assert qd.s.with_variables(("x1", "x2", "x3")) == expected


def test_determinants_agree_for_symbolic_t():
    qd = quantum_determinants(make_case_ih(RatFunc.t()))
    assert not qd.s.is_zero() and not qd.S.is_zero()


def test_antisymmetric_a_has_zero_symmetric_part():
    half = Fraction(1, 2)
    b = make_bqd_from_params(CaseIhParams(Fraction(1), Fraction(-1), Fraction(0), half, -half, Fraction(0)))
    assert quantum_determinants(b).s.is_zero()


# ------------------------------------------------------------------ equivalences

def test_identity_equivalence():
    b = make_case_ih(Fraction(2))
    same = apply_equivalence(b, g=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], rescale=[1] * 8)
    assert all(getattr(same, n) == getattr(b, n) for n in "AaBbCcDd")


def test_swap_stays_coherent():
    orig = make_case_ih(Fraction(2))
    b = swap_bqd(orig)
    assert b.A.domain == ("V", "V") and b.A.rows == orig.B.rows
    assert b.a.rows == orig.b.rows
    assert check_coherence(b).passed


invertible = st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=3, max_size=3).filter(
    lambda m: sympy.Matrix(m).det() != 0)


@given(invertible, st.sampled_from(SAMPLE_TS[:6]), st.booleans())
def test_equivalence_preserves_coherence(g, t, swap):
    b = make_case_ih(t)
    moved = apply_equivalence(b, g=[[Fraction(x) for x in r] for r in g], swap=swap)
    assert check_coherence(moved).passed


@given(st.sampled_from([Fraction(2), Fraction(-3), Fraction(1, 2)]))
def test_rescale_pair_preserves_coherence(f):
    b = make_case_ih(Fraction(2))
    moved = apply_equivalence(b, rescale=[f, 1 / f, 1 / f, f, 1, 1, 1, 1])
    assert check_coherence(moved).passed


def test_read_cyclic_params_round_trip():
    p = CaseIhParams.normalized(Fraction(5, 3))
    assert read_cyclic_params(make_bqd_from_params(p)) == p


def test_cyclic_maps_shapes():
    a, A = cyclic_maps(*CaseIhParams.normalized(Fraction(2)).as_tuple())
    assert a.shape == (9, 3) and A.shape == (3, 9)
