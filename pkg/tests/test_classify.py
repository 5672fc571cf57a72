from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from qsl3.bqd import CaseIhParams, apply_equivalence, make_bqd_from_params, make_case_ih, read_cyclic_params
from qsl3.classify import (
    InvalidDatum,
    VARS,
    bracket_polynomial,
    case4_basis,
    final_resultant_check,
    normalize,
    p_system,
    q_resultants,
    rhs_target,
)
from qsl3.classify import _to_qj
from qsl3.exactmath.matrix import ExactMatrix
from qsl3.exactmath.multipoly import MultiPoly
from qsl3.exactmath.scalars import QJ

AL, BE, GA, ALP, BEP, GAP = sympy.symbols("alpha beta gamma alpha_p beta_p gamma_p")
SYMS = dict(zip(VARS, (AL, BE, GA, ALP, BEP, GAP)))


def to_sympy(p: MultiPoly):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(p.variables, e):
            term *= SYMS[v] ** k
        expr += term
    return sympy.expand(expr)


def oracle_p_system():
    P0 = (AL * ALP + BE * BEP + GA * GAP) ** 2 - 4 * (AL * ALP * BE * BEP + AL * ALP * GA * GAP + BE * BEP * GA * GAP)
    P1 = AL ** 2 * BEP * GAP + BE ** 2 * ALP * GAP + GA ** 2 * ALP * BEP
    P2 = ALP ** 2 * BE * GA + BEP ** 2 * AL * GA + GAP ** 2 * AL * BE
    return sympy.expand(P0), P1, P2


@pytest.fixture(scope="module")
def qs():
    return q_resultants()


@pytest.fixture(scope="module")
def trace():
    return final_resultant_check()


# ------------------------------------------------------------------ P system

def test_p_system_symbolic_matches_oracle():
    ours = p_system()
    for p, want in zip(ours, oracle_p_system()):
        assert sympy.expand(to_sympy(p) - want) == 0
    assert len(ours[0].terms) == 6


def test_p_system_with_alpha_zero():
    P0, P1, P2 = (to_sympy(p).subs(AL, 0) for p in p_system())
    assert sympy.expand(P1 - ALP * (BE ** 2 * GAP + GA ** 2 * BEP)) == 0
    assert sympy.expand(P2 - ALP ** 2 * BE * GA) == 0


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-3, 5)])
def test_p_system_vanishes_on_normalized_datum(t):
    assert p_system(CaseIhParams.normalized(t)) == (0, 0, 0)


# ------------------------------------------------------------------ Q resultants

def test_q_resultants_match_sympy(qs):
    Q1, Q2 = qs
    P0, P1, P2 = oracle_p_system()
    assert sympy.expand(to_sympy(Q1) - sympy.resultant(P0, P1, ALP)) == 0
    assert sympy.expand(to_sympy(Q2) - sympy.resultant(P1, P2, ALP)) == 0


def test_q2_leading_term(qs):
    Q2 = to_sympy(qs[1])
    lead = sympy.Poly(Q2, BEP).LC()
    assert sympy.expand(lead - AL * GA ** 5) == 0
    assert sympy.Poly(Q2, BEP).degree() == 4


def test_q1_middle_coefficient(qs):
    Q1 = sympy.Poly(to_sympy(qs[0]), BEP, GAP)
    want = AL ** 6 + BE ** 6 + GA ** 6 + 2 * AL ** 3 * BE ** 3 + 2 * AL ** 3 * GA ** 3 - 4 * BE ** 3 * GA ** 3
    assert sympy.expand(Q1.coeff_monomial(BEP ** 2 * GAP ** 2) - want) == 0


def test_q_resultants_bihomogeneous(qs):
    for Q in qs:
        assert Q.is_homogeneous(("beta_p", "gamma_p"))
        assert all(e[VARS.index("beta_p")] + e[VARS.index("gamma_p")] == 4 for e in Q.terms)


# ------------------------------------------------------------------ final resultant

def test_final_resultant_matches_sympy(qs, trace):
    Q1, Q2 = (to_sympy(q) for q in qs)
    want = sympy.resultant(Q1, Q2, BEP)
    assert sympy.expand(to_sympy(trace.final_resultant) - want) == 0


def test_bracket_divides_final_resultant(trace):
    assert trace.bracket_divides
    assert trace.q_expansions_match
    assert trace.cofactor is not None


def test_cofactor_is_the_bracket_itself(trace):
    # Res = gamma'^16 (alpha beta gamma)^10 * bracket^2: the bracket appears squared.
    assert trace.cofactor == trace.bracket
    assert not trace.cofactor_is_monomial
    assert sympy.factor(to_sympy(trace.final_resultant)) == sympy.factor(
        to_sympy(rhs_target()) * to_sympy(bracket_polynomial()))


def test_specialization_alpha1_beta2_gamma3(trace):
    point = {"alpha": Fraction(1), "beta": Fraction(2), "gamma": Fraction(3), "gamma_p": Fraction(1)}
    lhs = trace.final_resultant.evaluate(point)
    rhs = trace.rhs_target.evaluate(point)
    assert lhs == rhs * trace.cofactor.evaluate(point)
    assert rhs == 6 ** 10 * (36 ** 3 - 18 ** 3)


def test_rhs_vanishes_at_alpha_zero(trace):
    assert trace.rhs_target.subs({"alpha": Fraction(0)}).is_zero()


@pytest.mark.parametrize("zeta_power", [0, 1, 2])
def test_bracket_vanishes_on_cube_root_planes(zeta_power):
    # alpha^3+beta^3+gamma^3 = 3 zeta alpha beta gamma exactly on the planes zeta*gamma + j alpha + j^2 beta = 0
    j = QJ.j()
    zeta = j ** zeta_power
    al, be = QJ(2), QJ(5)
    ga = -(j * al + j * j * be) / zeta
    br = (al ** 3 + be ** 3 + ga ** 3) ** 3 - (3 * al * be * ga) ** 3
    assert br == 0


def test_bracket_nonzero_off_planes():
    assert bracket_polynomial().evaluate({"alpha": 1, "beta": 2, "gamma": 3, "gamma_p": 1}) != 0


# ------------------------------------------------------------------ normalization

def test_normalize_already_normal():
    w = normalize(CaseIhParams.normalized(Fraction(7, 3)))
    assert w.steps == [] and w.case_path == [1]
    assert w.essential_t == Fraction(7, 3)


def test_normalize_beta_zero_takes_one_transposition():
    p = CaseIhParams(Fraction(1), Fraction(0), Fraction(-2), Fraction(1, 2), Fraction(0), Fraction(-1, 4))
    w = normalize(p)
    assert [s["kind"] for s in w.steps] == ["permutation"]
    assert w.case_path == [2, 1]
    assert w.essential_t == 2
    assert w.replay(p) == w.result


def case4_instance(t, zeta, j):
    b = _to_qj(make_case_ih(t))
    g = ExactMatrix(case4_basis(zeta, j)).inverse().rows
    return read_cyclic_params(apply_equivalence(b, g=g))


@pytest.mark.parametrize("zeta_power,j_power", [(0, 1), (1, 2), (2, 1)])
def test_normalize_case4_round_trip(zeta_power, j_power):
    j = QJ.j()
    p = case4_instance(Fraction(2), j ** zeta_power, j ** j_power)
    assert p.alpha != 0
    w = normalize(p)
    assert w.case_path[0] == 4
    assert w.essential_t == 2
    assert w.result.alpha == 0 and w.result.alpha_p == 0 and w.result.beta == 1


@given(st.sampled_from([Fraction(2), Fraction(-1, 2), Fraction(5, 3)]),
       st.sampled_from([Fraction(3), Fraction(-1, 7), Fraction(2, 5)]),
       st.booleans())
def test_t_is_invariant_under_equivalences(t, scale, transpose):
    b = make_bqd_from_params(CaseIhParams.normalized(t))
    if transpose:
        b = apply_equivalence(b, g=[[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    b = apply_equivalence(b, rescale=[scale, 1 / scale, 1 / scale, scale, 1, 1, 1, 1])
    w = normalize(read_cyclic_params(b))
    assert w.essential_t == t
    r = w.result
    assert -r.gamma / r.beta == -r.beta_p / r.gamma_p


def test_invalid_datum_rejected():
    with pytest.raises(InvalidDatum):
        normalize(CaseIhParams(Fraction(0), Fraction(1), Fraction(-2), Fraction(0), Fraction(1), Fraction(0)))
