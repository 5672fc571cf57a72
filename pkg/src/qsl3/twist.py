"""Twisting multigraded quadratic presentations by commuting automorphisms.

For a twisting system ``tau_(k,l) = tau1^k tau2^l`` the twisted product is
``x * y = x tau_{deg x}(y)``.  On degree-two words this is the map
``v(w1 w2) = w1 tau_{deg w1}(w2)``, and the twisted algebra is presented by
``v^{-1}(R)``.  In tensor degree ``k``, ``v`` applies
``tau_{deg w1 + ... + deg w_{i-1}}`` to the ``i``-th letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from .bqd import make_case_ie, make_case_ih
from .exactmath.matrix import ExactMatrix
from .shape import QuadraticPresentation, SHAPE_GENERATORS, shape_presentation, words_of_degree

Matrix = tuple  # tuple of row tuples


def _mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in r) for r in rows)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return (ExactMatrix(a) @ ExactMatrix(b)).rows


def _identity(n: int) -> Matrix:
    return _mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def permutation_matrix(images: Sequence[int]) -> Matrix:
    """Matrix of the linear map sending generator ``j`` to generator ``images[j]``."""
    n = len(images)
    rows = [[0] * n for _ in range(n)]
    for j, i in enumerate(images):
        rows[i][j] = 1
    return _mat(rows)


@dataclass(frozen=True)
class TwistingSystem:
    """Two commuting automorphisms of the generator space; column ``j`` of a
    matrix holds the image of generator ``j``."""

    tau1: Matrix
    tau2: Matrix
    degrees: tuple

    def __post_init__(self):
        if _matmul(self.tau1, self.tau2) != _matmul(self.tau2, self.tau1):
            raise ValueError("tau1 and tau2 must commute")
        for tau in (self.tau1, self.tau2):
            for i, row in enumerate(tau):
                for j, x in enumerate(row):
                    if x and self.degrees[i] != self.degrees[j]:
                        raise ValueError("a twisting automorphism must preserve generator degrees")

    @property
    def n(self) -> int:
        return len(self.tau1)

    def tau(self, deg: Sequence[int]) -> Matrix:
        k, l = deg
        out = _identity(self.n)
        for _ in range(k):
            out = _matmul(self.tau1, out)
        for _ in range(l):
            out = _matmul(self.tau2, out)
        return out

    def tau_inverse(self, deg: Sequence[int]) -> Matrix:
        return ExactMatrix(self.tau(deg)).inverse().rows

    def inverse(self) -> "TwistingSystem":
        inv1 = ExactMatrix(self.tau1).inverse().rows
        inv2 = ExactMatrix(self.tau2).inverse().rows
        return TwistingSystem(inv1, inv2, self.degrees)

    def is_identity(self) -> bool:
        return self.tau1 == _identity(self.n) and self.tau2 == _identity(self.n)


def standard_tau() -> TwistingSystem:
    """tau1: x1,x2,x3,y1,y2,y3 -> x3,x1,x2,y3,y1,y2 and tau2: -> x2,x3,x1,y2,y3,y1."""
    tau1 = permutation_matrix([2, 0, 1, 5, 3, 4])
    tau2 = permutation_matrix([1, 2, 0, 4, 5, 3])
    return TwistingSystem(tau1, tau2, ((1, 0),) * 3 + ((0, 1),) * 3)


def identity_tau(n: int = 6, degrees: Optional[tuple] = None) -> TwistingSystem:
    degrees = degrees or ((1, 0),) * 3 + ((0, 1),) * 3
    return TwistingSystem(_identity(n), _identity(n), degrees)


def _apply(m: Matrix, g: int) -> dict:
    """Image of generator ``g`` as ``{generator: coeff}``."""
    return {i: m[i][g] for i in range(len(m)) if m[i][g]}


def _check_grading(p: QuadraticPresentation, ts: TwistingSystem) -> None:
    if tuple(p.degrees) != tuple(ts.degrees):
        raise ValueError("twisting system does not match the presentation's grading")


def v2_inverse(rel: Mapping, p: QuadraticPresentation, ts: TwistingSystem) -> dict:
    """``v^{-1}`` on a degree-two element: ``w1 w2 -> w1 tau_{deg w1}^{-1}(w2)``."""
    out: dict = {}
    cache: dict = {}
    for (u, w), c in rel.items():
        d = p.degrees[u]
        if d not in cache:
            cache[d] = ts.tau_inverse(d)
        for i, m in _apply(cache[d], w).items():
            out[(u, i)] = out.get((u, i), 0) + c * m
    return {k: x for k, x in out.items() if x}


def twist_presentation(p: QuadraticPresentation, ts: TwistingSystem) -> QuadraticPresentation:
    """The presentation of the twisted algebra, relations ``v^{-1}(R)``."""
    _check_grading(p, ts)
    rels = [v2_inverse(r, p, ts) for r in p.relation_dicts()]
    return QuadraticPresentation.from_relations(p.generators, p.degrees, rels, label=f"twist[{p.label}]")


@dataclass(frozen=True)
class TwistMapV:
    k: int
    images: dict  # word -> {word: coeff}

    def apply(self, vec: Mapping) -> dict:
        out: dict = {}
        for w, c in vec.items():
            for w2, m in self.images[w].items():
                out[w2] = out.get(w2, 0) + c * m
        return {k: x for k, x in out.items() if x}

    def is_identity(self) -> bool:
        return all(img == {w: 1} for w, img in self.images.items())


def _word_image(word: tuple, ts: TwistingSystem, degrees: Sequence[tuple], inverse: bool) -> dict:
    acc = {(): Fraction(1)}
    deg = (0, 0)
    for g in word:
        m = ts.tau_inverse(deg) if inverse else ts.tau(deg)
        img = _apply(m, g)
        acc = {w + (i,): c * x for w, c in acc.items() for i, x in img.items()}
        deg = (deg[0] + degrees[g][0], deg[1] + degrees[g][1])
    return acc


def v_map(k: int, ts: TwistingSystem, inverse: bool = False) -> TwistMapV:
    """``v`` (or ``v^{-1}``) on all ``n^k`` words of length ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    import itertools

    images = {}
    for w in itertools.product(range(ts.n), repeat=k):
        images[w] = _word_image(w, ts, ts.degrees, inverse)
    return TwistMapV(k, images)


# --------------------------------------------------------------------------
# the identification of the two shape algebras

# Renaming that turns the Case I.e shape relations into the twisted-back
# relation set: y2 -> y1, y3 -> y2, y1 -> y3.
IE_RENAMING = {"y2": "y1", "y3": "y2", "y1": "y3"}


def renamed_case_ie_shape(t: Any) -> QuadraticPresentation:
    return shape_presentation(make_case_ie(t)).rename(IE_RENAMING)


@dataclass
class TwistVerdict:
    t: Any
    passed: bool
    twisted_dims: dict
    target_dims: dict
    round_trip: bool

    def to_json(self) -> dict:
        fmt = lambda d: {f"{k[0]},{k[1]}": str(v) for k, v in d.items()}
        return {"pass": self.passed, "t": str(self.t), "twisted_strata": fmt(self.twisted_dims),
                "target_strata": fmt(self.target_dims), "round_trip": self.round_trip}


def verify_untwist(t: Any, rename: bool = True) -> TwistVerdict:
    ts = standard_tau()
    base = renamed_case_ie_shape(t) if rename else shape_presentation(make_case_ie(t))
    twisted = twist_presentation(base, ts)
    target = shape_presentation(make_case_ih(t))
    back = twist_presentation(twisted, ts.inverse())
    return TwistVerdict(t, twisted.same_span(target), twisted.stratum_dims(), target.stratum_dims(),
                        back.same_span(base))


def verify_untwist_is_case_ie(t: Any) -> bool:
    """True iff the standard twist of the renamed Case I.e shape relations
    spans the Case I.h shape relations."""
    return verify_untwist(t).passed
