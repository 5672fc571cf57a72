from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLE_TS
from qsl3.bqd import make_case_ie, make_case_ih
from qsl3.exactmath.scalars import RatFunc
from qsl3.shape import (
    SHAPE_DEGREES,
    SHAPE_GENERATORS,
    QuadraticPresentation,
    dimension_table,
    graded_dimension,
    relation,
    shape_presentation,
)
from qsl3.twist import (
    TwistingSystem,
    identity_tau,
    permutation_matrix,
    renamed_case_ie_shape,
    standard_tau,
    twist_presentation,
    v2_inverse,
    v_map,
    verify_untwist,
    verify_untwist_is_case_ie,
)


def test_standard_tau_cycles():
    ts = standard_tau()
    assert ts.tau((3, 0)) == identity_tau().tau1
    assert ts.tau((1, 1)) == identity_tau().tau1
    assert ts.tau((0, 3)) == identity_tau().tau1


def test_standard_tau_images():
    ts = standard_tau()
    # tau1 sends x1 -> x3, x2 -> x1, x3 -> x2 (column j holds the image of generator j)
    images = [next(i for i in range(6) if ts.tau1[i][j]) for j in range(6)]
    assert images == [2, 0, 1, 5, 3, 4]


def test_noncommuting_pair_rejected():
    a = permutation_matrix([1, 0, 2, 3, 4, 5])
    b = permutation_matrix([0, 2, 1, 3, 4, 5])
    with pytest.raises(ValueError):
        TwistingSystem(a, b, SHAPE_DEGREES)


def test_degree_mixing_rejected():
    a = permutation_matrix([3, 1, 2, 0, 4, 5])
    with pytest.raises(ValueError):
        TwistingSystem(a, a, SHAPE_DEGREES)


def test_identity_twist_is_trivial():
    p = shape_presentation(make_case_ih(Fraction(2)))
    assert twist_presentation(p, identity_tau()) == p


def test_single_relation_twist():
    t = Fraction(2)
    g = SHAPE_GENERATORS
    p = QuadraticPresentation.from_relations(g, SHAPE_DEGREES, [relation(g, {"x3 x1": 1, "x1 x3": -t})])
    twisted = twist_presentation(p, standard_tau())
    want = QuadraticPresentation.from_relations(g, SHAPE_DEGREES, [relation(g, {"x3 x2": 1, "x1 x1": -t})])
    assert twisted == want


def test_v2_inverse_on_a_word():
    p = shape_presentation(make_case_ih(Fraction(2)))
    ts = standard_tau()
    # v^{-1}(x1 x1) = x1 tau1^{-1}(x1) = x1 x2
    assert v2_inverse({(0, 0): 1}, p, ts) == {(0, 1): 1}


def test_v_map_small_degrees():
    ts = standard_tau()
    assert v_map(1, ts).is_identity()
    assert v_map(3, identity_tau()).is_identity()
    with pytest.raises(ValueError):
        v_map(0, ts)


def test_v_map_degree_two_agrees_with_presentation_map():
    ts = standard_tau()
    p = shape_presentation(make_case_ih(Fraction(3)))
    vinv = v_map(2, ts, inverse=True)
    for r in p.relation_dicts():
        assert vinv.apply(r) == v2_inverse(r, p, ts)


def test_v_map_inverse_pair():
    ts = standard_tau()
    v = v_map(3, ts)
    vinv = v_map(3, ts, inverse=True)
    for w in [(0, 3, 1), (4, 4, 2), (5, 0, 3)]:
        assert vinv.apply(v.apply({w: 1})) == {w: 1}


@pytest.mark.parametrize("t", [Fraction(2), RatFunc.t()])
def test_untwist_identifies_the_two_shape_algebras(t):
    assert verify_untwist_is_case_ie(t)
    verdict = verify_untwist(t)
    assert verdict.round_trip
    assert verdict.twisted_dims == verdict.target_dims


def test_untwist_fails_without_renaming():
    assert not verify_untwist(Fraction(2), rename=False).passed


@pytest.mark.parametrize("t", SAMPLE_TS[:8])
def test_untwist_at_sampled_t(t):
    assert verify_untwist_is_case_ie(t)


@given(st.sampled_from(SAMPLE_TS), st.sampled_from([make_case_ih, make_case_ie]))
def test_twist_round_trip(t, family):
    ts = standard_tau()
    p = shape_presentation(family(t))
    assert twist_presentation(twist_presentation(p, ts), ts.inverse()) == p


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-3, 4)])
def test_twist_preserves_graded_dimensions(t):
    p = renamed_case_ie_shape(t)
    q = twist_presentation(p, standard_tau())
    for n in range(5):
        for k in range(n + 1):
            assert graded_dimension(p, (k, n - k)) == graded_dimension(q, (k, n - k))
    assert dimension_table(q, 4).passed


def test_v_map_conjugates_degree_three_ideal():
    """v^{-1} carries R (x) V + V (x) R of the original onto that of the twist."""
    ts = standard_tau()
    p = renamed_case_ie_shape(Fraction(2))
    q = twist_presentation(p, ts)
    vinv = v_map(3, ts, inverse=True)

    def shifted(pres):
        out = []
        for r in pres.relation_dicts():
            for g in range(6):
                out.append({(u, v, g): c for (u, v), c in r.items()})
                out.append({(g, u, v): c for (u, v), c in r.items()})
        return out

    from qsl3.exactmath.sparse import SparseEchelon

    target = SparseEchelon()
    for r in shifted(q):
        target.add(r)
    image = SparseEchelon()
    for r in shifted(p):
        img = vinv.apply(r)
        image.add(img)
        assert target.reduce(img) == {}
    assert image.rank == target.rank
