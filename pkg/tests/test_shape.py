from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from qsl3.bqd import make_case_ie, make_case_ih, swap_bqd
from qsl3.exactmath.scalars import RatFunc
from qsl3.shape import (
    QuadraticPresentation,
    SHAPE_DEGREES,
    SHAPE_GENERATORS,
    SizeCapExceeded,
    dimension_table,
    expected_dimension,
    graded_dimension,
    graded_dimension_mod_primes,
    quantum_three_space,
    relation,
    shape_presentation,
    total_degree_dims,
    word_count,
)
from qsl3.twist import IE_RENAMING

FIVE_TS = [Fraction(2), Fraction(-1), Fraction(7, 3), Fraction(-5, 2), Fraction(3, 4)]


def oracle_dimension(p: QuadraticPresentation, deg) -> int:
    """Words of multidegree deg minus the rank of the ideal component, via sympy."""
    n = p.n
    words = [w for length in [sum(deg)] for w in itertools.product(range(n), repeat=length)
             if tuple(map(sum, zip(*(p.degrees[g] for g in w)))) == tuple(deg)]
    col = {w: i for i, w in enumerate(words)}
    rows = []
    L = sum(deg)
    for r in p.relation_dicts():
        for pos in range(L - 1):
            for pre in itertools.product(range(n), repeat=pos):
                for post in itertools.product(range(n), repeat=L - 2 - pos):
                    row = [0] * len(words)
                    hit = False
                    for (u, v), c in r.items():
                        w = pre + (u, v) + post
                        if w in col:
                            row[col[w]] = sympy.Rational(c.numerator, c.denominator)
                            hit = True
                    if hit:
                        rows.append(row)
    if not rows:
        return len(words)
    return len(words) - sympy.Matrix(rows).rank()


# ------------------------------------------------------------------ presentations

def test_case_ih_degree_two_x_stratum():
    t = Fraction(5, 2)
    p = shape_presentation(make_case_ih(t))
    g = SHAPE_GENERATORS
    want = [relation(g, {"x3 x2": 1, "x1 x1": -t}),
            relation(g, {"x1 x3": 1, "x2 x2": -t}),
            relation(g, {"x2 x1": 1, "x3 x3": -t})]
    xx = QuadraticPresentation.from_relations(g, SHAPE_DEGREES, want)
    assert QuadraticPresentation.from_relations(g, SHAPE_DEGREES, p.strata()[(2, 0)]) == xx


@pytest.mark.parametrize("t", [Fraction(2), RatFunc.t()])
def test_case_ih_stratum_dimensions(t):
    p = shape_presentation(make_case_ih(t))
    assert p.stratum_dims() == {(2, 0): 3, (1, 1): 10, (0, 2): 3}
    assert p.relation_count == 16


def test_mixed_stratum_contains_the_pairing_relation():
    p = shape_presentation(make_case_ih(Fraction(2)))
    g = SHAPE_GENERATORS
    pairing = relation(g, {"x1 y1": 1, "x2 y2": 1, "x3 y3": 1})
    with_pairing = QuadraticPresentation.from_relations(g, SHAPE_DEGREES, p.relation_dicts() + [pairing])
    assert with_pairing == p


def test_case_ie_renamed_shape():
    t = Fraction(2)
    p = shape_presentation(make_case_ie(t)).rename(IE_RENAMING)
    assert p.stratum_dims() == {(2, 0): 3, (1, 1): 10, (0, 2): 3}
    g = SHAPE_GENERATORS
    # x-relations of the degenerate family: lambda x_i x_{i+1} + mu x_{i+1} x_i with lambda = 1, mu = -t
    want = [relation(g, {"x2 x3": 1, "x3 x2": -t}),
            relation(g, {"x3 x1": 1, "x1 x3": -t}),
            relation(g, {"x1 x2": 1, "x2 x1": -t})]
    xx = QuadraticPresentation.from_relations(g, SHAPE_DEGREES, want)
    assert QuadraticPresentation.from_relations(g, SHAPE_DEGREES, p.strata()[(2, 0)]) == xx


def test_rename_rejects_non_permutation():
    p = shape_presentation(make_case_ih(Fraction(2)))
    with pytest.raises(ValueError):
        p.rename({"y1": "y2"})
    with pytest.raises(ValueError):
        p.rename({"x1": "y1", "y1": "x1"})


# ------------------------------------------------------------------ dimensions

def test_expected_dimension_values():
    assert expected_dimension((0, 0)) == 1
    assert expected_dimension((2, 1)) == 15
    assert expected_dimension((4, 0)) == 15
    assert expected_dimension((2, 2)) == 27


def test_small_dimensions():
    p = shape_presentation(make_case_ih(Fraction(2)))
    assert graded_dimension(p, (1, 0)) == 3
    assert graded_dimension(p, (1, 1)) == 8
    assert graded_dimension(p, (2, 2)) == 27
    assert word_count(p, (2, 2)) == 486


@pytest.mark.parametrize("deg", [(2, 1), (1, 2), (3, 0), (1, 1)])
def test_dimension_matches_sympy_oracle(deg):
    p = shape_presentation(make_case_ih(Fraction(-5, 3)))
    assert graded_dimension(p, deg) == oracle_dimension(p, deg)


@pytest.mark.parametrize("deg", [(2, 2), (3, 1), (1, 3), (4, 0)])
def test_quotient_engine_matches_word_method(deg):
    p = shape_presentation(make_case_ih(Fraction(7, 3)))
    assert graded_dimension(p, deg, method="quotient") == graded_dimension(p, deg, method="words")


@pytest.mark.parametrize("family", [make_case_ih, make_case_ie])
@pytest.mark.parametrize("t", FIVE_TS)
def test_dimensions_over_q(family, t):
    table = dimension_table(shape_presentation(family(t)), 4)
    assert table.passed


@pytest.mark.parametrize("family", [make_case_ih, make_case_ie])
def test_dimensions_over_rational_functions(family):
    assert dimension_table(shape_presentation(family(RatFunc.t())), 3).passed


@pytest.mark.parametrize("family", [make_case_ih, make_case_ie])
@pytest.mark.parametrize("t", FIVE_TS)
def test_dimensions_over_two_prime_fields(family, t):
    table = dimension_table(shape_presentation(family(t)), 6, prime=True)
    assert table.passed
    assert table.mode == "GF(p) x2"


def test_two_prime_fields_agree():
    p = shape_presentation(make_case_ih(Fraction(2)))
    res = graded_dimension_mod_primes(p, (3, 2))
    assert res["agree"] and res["dimension"] == expected_dimension((3, 2))
    assert len(set(res["per_prime"].values())) == 1


def test_total_degree_dimensions():
    p = shape_presentation(make_case_ih(Fraction(2)))
    assert total_degree_dims(p, 5) == [1, 6, 20, 50, 105, 196]


def test_size_cap():
    p = shape_presentation(make_case_ih(Fraction(2)))
    with pytest.raises(SizeCapExceeded):
        graded_dimension(p, (3, 3), cap=100)


@given(st.integers(0, 3), st.integers(0, 3), st.sampled_from(FIVE_TS))
def test_dimension_symmetric_under_swap(k, l, t):
    b = make_case_ih(t)
    p = shape_presentation(b)
    q = shape_presentation(swap_bqd(b))
    assert graded_dimension(p, (k, l)) == graded_dimension(q, (l, k))


# ------------------------------------------------------------------ three-spaces

def test_three_space_relations():
    t = Fraction(2)
    p = quantum_three_space(make_case_ih(t))
    g = ("x1", "x2", "x3")
    want = [relation(g, {"x3 x2": 1, "x1 x1": -t}),
            relation(g, {"x1 x3": 1, "x2 x2": -t}),
            relation(g, {"x2 x1": 1, "x3 x3": -t})]
    assert p == QuadraticPresentation.from_relations(g, ((1,),) * 3, want)
    assert p.relation_count == 3


@pytest.mark.parametrize("side", ["V", "W"])
def test_three_space_hilbert_series(side):
    p = quantum_three_space(make_case_ih(Fraction(2)), side)
    assert [graded_dimension(p, (n,)) for n in range(6)] == [(n + 1) * (n + 2) // 2 for n in range(6)]
