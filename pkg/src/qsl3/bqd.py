"""Basic quantum SL(3) data: the eight structure maps, the two concrete
families used here, and the coherence checker.

Conventions.  ``x_1, x_2, x_3`` is a basis of V and ``y_1, y_2, y_3`` of W
(0-based in code).  Coefficients follow the upper/lower index notation:

* ``A(x_i x_j) = A^a_{ij} y_a``          ``a(y_a) = a^{ij}_a x_i x_j``
* ``B(y_a y_b) = B^i_{ab} x_i``          ``b(x_i) = b^{ab}_i y_a y_b``
* ``C(y_a x_i) = C_{ai}``                ``c(1) = c^{ia} x_i y_a``
* ``D(x_i y_a) = D_{ia}``                ``d(1) = d^{ai} y_a x_i``
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional, Sequence

from .exactmath.matrix import ExactMatrix
from .exactmath.multipoly import MultiPoly
from .exactmath.scalars import RatFunc, format_scalar
from .tensors import (
    UNIT,
    V,
    W,
    TensorMap,
    compose_all,
    identity,
    kron_matrices,
    multi_indices,
    scalar_multiple_of_identity,
    tensor,
)

MAP_NAMES = ("A", "a", "B", "b", "C", "c", "D", "d")

SIGNATURES = {
    "A": ((V, V), (W,)),
    "a": ((W,), (V, V)),
    "B": ((W, W), (V,)),
    "b": ((V,), (W, W)),
    "C": ((W, V), (UNIT,)),
    "c": ((UNIT,), (V, W)),
    "D": ((V, W), (UNIT,)),
    "d": ((UNIT,), (W, V)),
}

# Swapping V and W exchanges these maps.
SWAP_PARTNER = {"A": "B", "a": "b", "B": "A", "b": "a", "C": "D", "c": "d", "D": "C", "d": "c"}


class InvalidParameter(ValueError):
    pass


@dataclass(frozen=True)
class BQD:
    A: TensorMap
    a: TensorMap
    B: TensorMap
    b: TensorMap
    C: TensorMap
    c: TensorMap
    D: TensorMap
    d: TensorMap
    omega: Any = Fraction(1)
    q: Any = Fraction(1)
    label: str = ""

    def __post_init__(self):
        for name in MAP_NAMES:
            m = getattr(self, name)
            dom, cod = SIGNATURES[name]
            if m.domain != dom or m.codomain != cod:
                raise ValueError(f"map {name} has signature {m.domain}->{m.codomain}, expected {dom}->{cod}")

    @property
    def kappa(self) -> Any:
        q = self.q
        return 1 / (q * q) + 1 + q * q

    @property
    def rho(self) -> Any:
        s = self.q + 1 / self.q
        return 1 / (s * s)

    def maps(self) -> dict[str, TensorMap]:
        return {name: getattr(self, name) for name in MAP_NAMES}

    def with_maps(self, **maps: TensorMap) -> "BQD":
        return replace(self, **maps)

    def scaled(self, name: str, factor: Any) -> "BQD":
        return replace(self, **{name: getattr(self, name).scale(factor)})


# --------------------------------------------------------------------------
# Type I data


def canonical_pairings(one: Any = Fraction(1)) -> dict[str, TensorMap]:
    """C, c, D, d for W = V* with dual bases."""
    zero = one - one
    delta = lambda i, j: one if i == j else zero
    C = TensorMap((W, V), (UNIT,), [[delta(a, i) for a in range(3) for i in range(3)]])
    D = TensorMap((V, W), (UNIT,), [[delta(i, a) for i in range(3) for a in range(3)]])
    c = TensorMap((UNIT,), (V, W), [[delta(i, a)] for i in range(3) for a in range(3)])
    d = TensorMap((UNIT,), (W, V), [[delta(a, i)] for a in range(3) for i in range(3)])
    return {"C": C, "c": c, "D": D, "d": d}


def type_one(a: TensorMap, A: TensorMap, q: Any = Fraction(1), label: str = "") -> BQD:
    """Complete ``a, A`` to a Type I datum.

    ``B`` and ``b`` are written down by index formula from ``a`` and ``A``
    (``B^j_{ab} = a^{aj}_b`` and ``b^{gb}_i = A^g_{ib}``); the coherence
    checker then confirms that these agree with the composites they must
    equal.
    """
    one = _one_of(a.entries() + A.entries())
    zero = one - one
    B_rows = [[zero] * 9 for _ in range(3)]
    for j in range(3):
        for al in range(3):
            for be in range(3):
                B_rows[j][3 * al + be] = a.entry((al, j), (be,))
    b_rows = [[zero] * 3 for _ in range(9)]
    for g in range(3):
        for be in range(3):
            for i in range(3):
                b_rows[3 * g + be][i] = A.entry((g,), (i, be))
    B = TensorMap((W, W), (V,), B_rows)
    b = TensorMap((V,), (W, W), b_rows)
    pair = canonical_pairings(one)
    return BQD(A=A, a=a, B=B, b=b, omega=Fraction(1), q=q, label=label, **pair)


def _one_of(values) -> Any:
    for x in values:
        if isinstance(x, RatFunc):
            return RatFunc.const(1)
        if x and not isinstance(x, (int, Fraction)):
            return x / x
    return Fraction(1)


@dataclass(frozen=True)
class CaseIhParams:
    alpha: Any
    beta: Any
    gamma: Any
    alpha_p: Any
    beta_p: Any
    gamma_p: Any

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.alpha_p, self.beta_p, self.gamma_p)

    def as_dict(self) -> dict[str, Any]:
        return dict(zip(("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p"), self.as_tuple()))

    def pairing(self) -> Any:
        """alpha*alpha' + beta*beta' + gamma*gamma' (must be 1)."""
        return self.alpha * self.alpha_p + self.beta * self.beta_p + self.gamma * self.gamma_p

    def validate(self) -> None:
        if self.gamma == 0:
            raise InvalidParameter("gamma must be nonzero")
        if (self.alpha + self.beta) ** 3 + self.gamma ** 3 == 0:
            raise InvalidParameter("(alpha+beta)^3 + gamma^3 must be nonzero")
        if self.pairing() != 1:
            raise InvalidParameter("alpha*alpha' + beta*beta' + gamma*gamma' must equal 1")

    @classmethod
    def normalized(cls, t: Any) -> "CaseIhParams":
        """alpha = alpha' = 0, beta = 1, gamma = -t, beta' = 1/2, gamma' = -1/(2t)."""
        t = check_t(t)
        zero = t - t
        return cls(zero, zero + 1, -t, zero, zero + Fraction(1, 2), -1 / (2 * t))

    def to_json(self) -> dict:
        return {k: format_scalar(v) for k, v in self.as_dict().items()}


def check_t(t: Any) -> Any:
    """Validate ``t`` and return it with Python ints promoted to Fraction."""
    if isinstance(t, bool) or isinstance(t, float):
        raise InvalidParameter("t must be exact (int, Fraction or rational function)")
    if isinstance(t, int):
        t = Fraction(t)
    if t == 0:
        raise InvalidParameter("t must be nonzero")
    if t ** 3 == 1:
        raise InvalidParameter("t^3 must differ from 1")
    return t


def cyclic_maps(alpha, beta, gamma, alpha_p, beta_p, gamma_p) -> tuple[TensorMap, TensorMap]:
    """The maps ``a: W -> V(x)V`` and ``A: V(x)V -> W`` with cyclic symmetry.

    ``a(y_1) = alpha x_2x_3 + beta x_3x_2 + gamma x_1x_1`` and cyclically;
    ``A(x_1x_1) = gamma' y_1``, ``A(x_1x_2) = alpha' y_3``,
    ``A(x_2x_1) = beta' y_3`` and cyclically.
    """
    zero = (alpha - alpha) + (alpha_p - alpha_p) + (gamma - gamma)
    images_a: dict = {}
    images_A: dict = {}
    for k in range(3):
        k1, k2 = (k + 1) % 3, (k + 2) % 3
        images_a[(k,)] = {(k1, k2): alpha, (k2, k1): beta, (k, k): gamma}
        images_A[(k1, k2)] = {(k,): alpha_p}
        images_A[(k2, k1)] = {(k,): beta_p}
        images_A[(k, k)] = {(k,): gamma_p}
    a = TensorMap.from_images((W,), (V, V), images_a, zero=zero)
    A = TensorMap.from_images((V, V), (W,), images_A, zero=zero)
    return a, A


def make_bqd_from_params(params: CaseIhParams, label: str = "") -> BQD:
    a, A = cyclic_maps(*params.as_tuple())
    return type_one(a, A, q=Fraction(1), label=label)


def make_case_ih(t: Any) -> BQD:
    """Case I.h in normal form: alpha = alpha' = 0, beta = 1, gamma = -t."""
    params = CaseIhParams.normalized(t)
    return make_bqd_from_params(params, label=f"ih(t={format_scalar(t)})")


def case_ie_params(t: Any) -> CaseIhParams:
    """lambda = 1, mu = -t, lambda' = 1/2, mu' = -1/(2t), in the cyclic layout
    of :func:`cyclic_maps` with the gamma slots empty."""
    t = check_t(t)
    zero = t - t
    return CaseIhParams(zero + 1, -t, zero, zero + Fraction(1, 2), -1 / (2 * t), zero)


def make_case_ie(t: Any) -> BQD:
    a, A = cyclic_maps(*case_ie_params(t).as_tuple())
    return type_one(a, A, q=Fraction(1), label=f"ie(t={format_scalar(t)})")


# --------------------------------------------------------------------------
# coherence


@dataclass
class ConditionResult:
    id: str
    side: str
    passed: bool
    witness: Optional[dict] = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"id": self.id, "side": self.side, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class CoherenceReport:
    results: list[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def count(self) -> tuple[int, int]:
        return sum(r.passed for r in self.results), len(self.results)

    def get(self, cid: str, side: str) -> ConditionResult:
        for r in self.results:
            if r.id == cid and r.side == side:
                return r
        raise KeyError((cid, side))

    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict:
        ok, total = self.count
        return {"pass": self.passed, "passed": ok, "total": total,
                "conditions": [r.to_json() for r in self.results]}


def _compare(cid: str, side: str, lhs: TensorMap, rhs: TensorMap, note: str = "") -> ConditionResult:
    if lhs.same_as(rhs):
        return ConditionResult(cid, side, True, note=note)
    diff = lhs.first_difference(rhs)
    witness = None
    if diff is not None:
        i, j, x, y = diff
        witness = {"row": i, "col": j, "lhs": format_scalar(x), "rhs": format_scalar(y)}
    return ConditionResult(cid, side, False, witness, note)


def coherence_sides(b: BQD) -> list[tuple[str, str, TensorMap, TensorMap]]:
    """The twelve equations as (id, side, lhs, rhs) pairs of maps."""
    one = _one_of(b.a.entries() + b.A.entries())
    I_V, I_W = identity(V, one), identity(W, one)
    A, a, B, bb, C, c, D, d = (b.A, b.a, b.B, b.b, b.C, b.c, b.D, b.d)
    w = b.omega
    kappa_unit = TensorMap((UNIT,), (UNIT,), [[b.kappa * one]])
    return [
        ("a", "left", compose_all(tensor(I_V, C), tensor(c, I_V)), I_V),
        ("a", "right", compose_all(tensor(D, I_V), tensor(I_V, d)), I_V),
        ("b", "left", compose_all(A, a), I_W),
        ("b", "right", compose_all(B, bb), I_V),
        ("c", "left", compose_all(C, tensor(A, I_V)), compose_all(D, tensor(I_V, A)).scale(w)),
        ("c", "right", compose_all(tensor(I_V, a), c), compose_all(tensor(a, I_V), d).scale(w)),
        ("d", "left", compose_all(tensor(C, I_V), tensor(I_W, a)).scale(w), B),
        ("d", "right", compose_all(tensor(A, I_W), tensor(I_V, c)), bb),
        ("e", "left", compose_all(D, c), kappa_unit),
        ("e", "right", compose_all(C, d), kappa_unit),
        ("f", "", compose_all(tensor(I_V, A), tensor(a, I_V), tensor(A, I_V), tensor(I_V, a)),
         (identity((V, W), one) + compose_all(c, D)).scale(b.rho)),
        ("g", "", compose_all(tensor(A, I_V), tensor(I_V, a), tensor(I_V, A), tensor(a, I_V)),
         (identity((W, V), one) + compose_all(d, C)).scale(b.rho)),
    ]


def check_coherence(b: BQD) -> CoherenceReport:
    """Evaluate all twelve compatibility equations entrywise."""
    canonical = is_type_one(b)
    report = CoherenceReport()
    for cid, side, lhs, rhs in coherence_sides(b):
        note = ""
        if canonical and cid in ("a", "e"):
            note = "automatic for Type I; verified anyway"
        report.results.append(_compare(cid, side, lhs, rhs, note))
    return report


def is_type_one(b: BQD) -> bool:
    one = _one_of(b.a.entries() + b.A.entries())
    pair = canonical_pairings(one)
    return b.omega == 1 and all(getattr(b, k) == pair[k] for k in pair)


# --------------------------------------------------------------------------
# Q matrix and quantum determinants


class IncoherentBQD(ValueError):
    pass


def q_matrix(b: BQD, check: bool = True) -> TensorMap:
    """``Q^i_j = c^{ia} D_{ja}`` as a map V -> V.

    With ``check`` the claimed inverse ``d^{ai} C_{aj}`` is formed as well
    and ``Q Q^{-1} = 1`` is verified.
    """
    Q = _contract_q(b)
    if check:
        P = q_inverse_claimed(b)
        one = _one_of(b.a.entries())
        if not compose_all(Q, P).same_as(identity(V, one)):
            raise IncoherentBQD("Q times its claimed inverse is not the identity")
    return Q


def _contract_q(b: BQD) -> TensorMap:
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = 0
            for al in range(3):
                acc = acc + b.c.entry((i, al), (0,)) * b.D.entry((0,), (j, al))
            row.append(acc)
        rows.append(row)
    return TensorMap((V,), (V,), rows)


def q_inverse_claimed(b: BQD) -> TensorMap:
    """``(Q^{-1})^i_j = d^{ai} C_{aj}``."""
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = 0
            for al in range(3):
                acc = acc + b.d.entry((al, i), (0,)) * b.C.entry((0,), (al, j))
            row.append(acc)
        rows.append(row)
    return TensorMap((V,), (V,), rows)


CUBIC_X = ("x1", "x2", "x3")
CUBIC_Y = ("y1", "y2", "y3")


def _cubic_from_vector(vec: Sequence[Any], variables: Sequence[str]) -> MultiPoly:
    terms: dict = {}
    for (i, j, k), coeff in zip(multi_indices((V, V, V)), vec):
        if not coeff:
            continue
        e = [0, 0, 0]
        e[i] += 1
        e[j] += 1
        e[k] += 1
        e = tuple(e)
        terms[e] = terms.get(e, 0) + coeff
    return MultiPoly(variables, terms)


@dataclass
class QuantumDeterminants:
    e: TensorMap
    E: TensorMap
    s: MultiPoly
    S: MultiPoly


def quantum_determinants(b: BQD) -> QuantumDeterminants:
    """``e = (1(x)a)c = omega (a(x)1)d`` and ``E = C(A(x)1) = omega D(1(x)A)``.

    Their totally symmetric parts are returned as cubics ``s`` (in x) and
    ``S`` (in y); the antisymmetric parts vanish on passing to commuting
    variables.
    """
    one = _one_of(b.a.entries() + b.A.entries())
    I_V = identity(V, one)
    e1 = compose_all(tensor(I_V, b.a), b.c)
    e2 = compose_all(tensor(b.a, I_V), b.d).scale(b.omega)
    if not e1.same_as(e2):
        raise IncoherentBQD("the two expressions for e disagree")
    E1 = compose_all(b.C, tensor(b.A, I_V))
    E2 = compose_all(b.D, tensor(I_V, b.A)).scale(b.omega)
    if not E1.same_as(E2):
        raise IncoherentBQD("the two expressions for E disagree")
    s = _cubic_from_vector([r[0] for r in e1.rows], CUBIC_X)
    S = _cubic_from_vector(list(E1.rows[0]), CUBIC_Y)
    return QuantumDeterminants(e1, E1, s, S)


# --------------------------------------------------------------------------
# equivalences


def _inverse_rows(g: Sequence[Sequence[Any]]) -> list[list[Any]]:
    return [list(r) for r in ExactMatrix(g).inverse().rows]


def _transform(m: TensorMap, change: dict[str, list[list[Any]]], inverse: dict[str, list[list[Any]]]) -> TensorMap:
    """New matrix ``P_cod^{-1} M P_dom`` for per-factor basis changes."""
    P_dom = kron_matrices([change[lab] for lab in m.domain])
    P_cod_inv = kron_matrices([inverse[lab] for lab in m.codomain])
    M = ExactMatrix(m.rows)
    out = ExactMatrix(P_cod_inv) @ M @ ExactMatrix(P_dom)
    return TensorMap(m.domain, m.codomain, out.rows)


def swap_bqd(b: BQD) -> BQD:
    """Interchange V and W (and A<->B, a<->b, C<->D, c<->d)."""
    swap_lab = {V: W, W: V, UNIT: UNIT}
    maps = {}
    for name in MAP_NAMES:
        src = getattr(b, SWAP_PARTNER[name])
        maps[name] = TensorMap(tuple(swap_lab[x] for x in src.domain),
                               tuple(swap_lab[x] for x in src.codomain), src.rows)
    return BQD(**maps, omega=b.omega, q=b.q, label=b.label + "+swap" if b.label else "swap")


def apply_equivalence(b: BQD, g: Optional[Sequence[Sequence[Any]]] = None,
                      rescale: Optional[Sequence[Any]] = None, swap: bool = False,
                      g_w: Optional[Sequence[Sequence[Any]]] = None) -> BQD:
    """Swap (optional), then base change, then rescale the eight maps.

    ``g`` lists the new basis of V in old coordinates (column ``i`` holds
    ``x'_i``).  W gets the dual basis unless ``g_w`` is given.  ``rescale``
    multiplies (A, a, B, b, C, c, D, d) in that order.
    """
    if swap:
        b = swap_bqd(b)
    if g is not None:
        g = [list(r) for r in g]
        try:
            g_inv = _inverse_rows(g)
        except ZeroDivisionError:
            raise ValueError("singular base change") from None
        if g_w is None:
            h = [list(r) for r in zip(*g_inv)]  # (g^{-1})^T
        else:
            h = [list(r) for r in g_w]
        h_inv = _inverse_rows(h)
        change = {V: g, W: h, UNIT: [[Fraction(1)]]}
        inverse = {V: g_inv, W: h_inv, UNIT: [[Fraction(1)]]}
        b = replace(b, **{name: _transform(getattr(b, name), change, inverse) for name in MAP_NAMES})
    if rescale is not None:
        if len(rescale) != 8:
            raise ValueError("rescale needs eight factors (A, a, B, b, C, c, D, d)")
        if any(f == 0 for f in rescale):
            raise ValueError("rescaling factors must be nonzero")
        b = replace(b, **{name: getattr(b, name).scale(f) for name, f in zip(MAP_NAMES, rescale)})
    return b


def read_cyclic_params(b: BQD) -> CaseIhParams:
    """Read (alpha, beta, gamma, alpha', beta', gamma') off maps in the
    cyclic layout (inverse of :func:`cyclic_maps`); raises if the maps do
    not have that shape."""
    a, A = b.a, b.A
    alpha = a.entry((1, 2), (0,))
    beta = a.entry((2, 1), (0,))
    gamma = a.entry((0, 0), (0,))
    alpha_p = A.entry((2,), (0, 1))
    beta_p = A.entry((2,), (1, 0))
    gamma_p = A.entry((0,), (0, 0))
    a2, A2 = cyclic_maps(alpha, beta, gamma, alpha_p, beta_p, gamma_p)
    if not (a2 == a and A2 == A):
        raise ValueError("maps are not in the cyclic normal layout")
    return CaseIhParams(alpha, beta, gamma, alpha_p, beta_p, gamma_p)
