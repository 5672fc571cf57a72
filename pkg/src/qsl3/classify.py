"""Elimination for the cyclic family and its normal form.

The coherence conditions (f) and (g) for the cyclic maps ``a, A`` reduce to
three polynomial equations ``P0 = P1 = P2 = 0`` in
``alpha, beta, gamma, alpha', beta', gamma'``.  Eliminating ``alpha'`` and
then ``beta'`` with Sylvester resultants leaves a polynomial in
``alpha, beta, gamma, gamma'`` alone; :func:`final_resultant_check`
compares it with the expected closed form.

:func:`normalize` brings any valid parameter set to ``alpha = alpha' = 0``,
``beta = 1`` by explicit base changes and a rescaling, and records the
steps so they can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .bqd import (
    BQD,
    CaseIhParams,
    apply_equivalence,
    make_bqd_from_params,
    read_cyclic_params,
)
from .exactmath.matrix import det_fraction_free, resultant
from .exactmath.multipoly import MultiPoly, NotDivisible, parse
from .exactmath.scalars import QJ, format_scalar

VARS = ("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p")

# Expected expansions of the two 3x3 resultants and of the final identity.
EXPECTED_Q1 = (
    "beta^2*gamma^4*beta_p^4 + 2*(alpha^3+beta^3-gamma^3)*beta*gamma^2*beta_p^3*gamma_p"
    " + (alpha^6+beta^6+gamma^6+2*alpha^3*beta^3+2*alpha^3*gamma^3-4*beta^3*gamma^3)*beta_p^2*gamma_p^2"
    " + 2*(alpha^3+gamma^3-beta^3)*beta^2*gamma*beta_p*gamma_p^3 + beta^4*gamma^2*gamma_p^4"
)
EXPECTED_Q2 = (
    "alpha*gamma^5*beta_p^4 + 2*alpha*beta^2*gamma^3*beta_p^3*gamma_p"
    " + (alpha^3+beta^3+gamma^3)*alpha*beta*gamma*beta_p^2*gamma_p^2"
    " + 2*alpha*beta^3*gamma^2*beta_p*gamma_p^3 + alpha*beta^5*gamma_p^4"
)


class ExpansionMismatch(AssertionError):
    pass


class InvalidDatum(ValueError):
    pass


def symbols() -> tuple[MultiPoly, ...]:
    return MultiPoly.symbols(*VARS)


def expand(text: str) -> MultiPoly:
    """Expand a sum of products of parenthesized polynomials in :data:`VARS`."""
    total = MultiPoly(VARS)
    for term in _split_top(text, "+-"):
        sign, body = term
        prod = MultiPoly.const(Fraction(1), VARS)
        for factor in _split_factors(body):
            prod = prod * (expand(factor[1:-1]) if factor.startswith("(") else parse(factor, VARS))
        total = total + prod if sign > 0 else total - prod
    return total


def _split_top(text: str, ops: str) -> list[tuple[int, str]]:
    s = text.replace(" ", "")
    out, depth, cur, sign = [], 0, "", 1
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in ops and cur:
            out.append((sign, cur))
            cur, sign = "", (1 if ch == "+" else -1)
            continue
        if depth == 0 and ch in ops and not cur:
            sign = sign * (1 if ch == "+" else -1)
            continue
        cur += ch
    if cur:
        out.append((sign, cur))
    return out


def _split_factors(body: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
            continue
        cur += ch
    out.append(cur)
    return [f for f in out if f]


# --------------------------------------------------------------------------
# the polynomial system


def p_system(params: Optional[CaseIhParams] = None) -> tuple[Any, Any, Any]:
    """``(P0, P1, P2)``; polynomials when ``params`` is None (or holds
    polynomials), scalars when ``params`` is numeric."""
    if params is None:
        al, be, ga, alp, bep, gap = symbols()
    else:
        al, be, ga, alp, bep, gap = params.as_tuple()
    P0 = (al * al * alp * alp + be * be * bep * bep + ga * ga * gap * gap
          - 2 * al * alp * be * bep - 2 * al * alp * ga * gap - 2 * be * bep * ga * gap)
    P1 = al * al * bep * gap + be * be * alp * gap + ga * ga * alp * bep
    P2 = alp * alp * be * ga + bep * bep * al * ga + gap * gap * al * be
    return P0, P1, P2


def displayed_q_matrices() -> tuple[list[list[MultiPoly]], list[list[MultiPoly]]]:
    """The two 3x3 Sylvester matrices in alpha', written out by hand."""
    al, be, ga, alp, bep, gap = symbols()
    z = MultiPoly(VARS)
    lin = be * be * gap + ga * ga * bep
    m1 = [
        [al * al, -2 * al * (be * bep + ga * gap), (be * bep - ga * gap) ** 2],
        [lin, al * al * bep * gap, z],
        [z, lin, al * al * bep * gap],
    ]
    m2 = [
        [lin, al * al * bep * gap, z],
        [z, lin, al * al * bep * gap],
        [be * ga, z, al * (bep * bep * ga + gap * gap * be)],
    ]
    return m1, m2


def q_resultants(check: bool = True) -> tuple[MultiPoly, MultiPoly]:
    """``Q1 = Res_{alpha'}(P0, P1)`` and ``Q2 = Res_{alpha'}(P1, P2)``.

    With ``check`` both are compared term by term with the expected
    expansions and with the hand-written 3x3 determinants.
    """
    P0, P1, P2 = p_system()
    Q1 = resultant(P0, P1, "alpha_p").with_variables(VARS)
    Q2 = resultant(P1, P2, "alpha_p").with_variables(VARS)
    if check:
        m1, m2 = displayed_q_matrices()
        for name, Q, text, m in (("Q1", Q1, EXPECTED_Q1, m1), ("Q2", Q2, EXPECTED_Q2, m2)):
            if Q != expand(text):
                raise ExpansionMismatch(f"{name} differs from its expected expansion")
            if Q != det_fraction_free(m):
                raise ExpansionMismatch(f"{name} differs from its 3x3 determinant")
    return Q1, Q2


# --------------------------------------------------------------------------
# final resultant


@dataclass
class EliminationTrace:
    P0: MultiPoly
    P1: MultiPoly
    P2: MultiPoly
    Q1: MultiPoly
    Q2: MultiPoly
    final_resultant: MultiPoly
    rhs_target: MultiPoly
    bracket: MultiPoly
    cofactor: Optional[MultiPoly]
    bracket_divides: bool
    cofactor_is_monomial: bool
    q_expansions_match: bool

    @property
    def passed(self) -> bool:
        return self.q_expansions_match and self.cofactor is not None and self.cofactor_is_monomial

    def cofactor_over_bracket(self) -> Optional[MultiPoly]:
        """The cofactor divided by the bracket, if that division is exact."""
        if self.cofactor is None:
            return None
        try:
            return self.cofactor.exact_div(self.bracket)
        except NotDivisible:
            return None

    def to_json(self) -> dict:
        cob = self.cofactor_over_bracket()
        return {
            "pass": self.passed,
            "Q1": str(self.Q1),
            "Q2": str(self.Q2),
            "q_expansions_match": self.q_expansions_match,
            "final_resultant_terms": len(self.final_resultant.terms),
            "final_resultant_total_degree": str(self.final_resultant.total_degree()),
            "rhs_target": str(self.rhs_target),
            "rhs_divides": self.cofactor is not None,
            "bracket_divides": self.bracket_divides,
            "cofactor": None if self.cofactor is None else str(self.cofactor),
            "cofactor_is_monomial": self.cofactor_is_monomial,
            "cofactor_equals_bracket": cob is not None and cob.is_constant() and cob.constant_value() == 1,
        }


def bracket_polynomial(variables=("alpha", "beta", "gamma", "gamma_p")) -> MultiPoly:
    """``(alpha^3+beta^3+gamma^3)^3 - (3 alpha beta gamma)^3``."""
    al, be, ga = (MultiPoly.var(v, variables) for v in ("alpha", "beta", "gamma"))
    return (al ** 3 + be ** 3 + ga ** 3) ** 3 - (3 * al * be * ga) ** 3


def rhs_target(variables=("alpha", "beta", "gamma", "gamma_p")) -> MultiPoly:
    al, be, ga, gap = (MultiPoly.var(v, variables) for v in ("alpha", "beta", "gamma", "gamma_p"))
    return gap ** 16 * (al * be * ga) ** 10 * bracket_polynomial(variables)


def final_resultant_check() -> EliminationTrace:
    """Compute ``Res_{beta'}(Q1, Q2)`` from the 8x8 Sylvester matrix and
    divide it by the expected right-hand side."""
    P0, P1, P2 = p_system()
    try:
        Q1, Q2 = q_resultants(check=True)
        ok = True
    except ExpansionMismatch:
        Q1, Q2 = q_resultants(check=False)
        ok = False
    R = resultant(Q1, Q2, "beta_p")
    rvars = tuple(v for v in VARS if v not in ("alpha_p", "beta_p"))
    R = R.with_variables(rvars)
    rhs = rhs_target(rvars)
    br = bracket_polynomial(rvars)
    try:
        cof = R.exact_div(rhs)
    except NotDivisible:
        cof = None
    return EliminationTrace(
        P0=P0, P1=P1, P2=P2, Q1=Q1, Q2=Q2,
        final_resultant=R, rhs_target=rhs, bracket=br,
        cofactor=cof,
        bracket_divides=br.divides(R),
        cofactor_is_monomial=cof is not None and cof.is_monomial(),
        q_expansions_match=ok,
    )


# --------------------------------------------------------------------------
# normalization


@dataclass
class NormalizationWitness:
    steps: list[dict]
    result: CaseIhParams
    essential_t: Any
    case_path: list[int] = field(default_factory=list)

    def replay(self, params: CaseIhParams) -> CaseIhParams:
        b = make_bqd_from_params(params)
        for step in self.steps:
            b = apply_step(b, step)
        return read_cyclic_params(b)

    def to_json(self) -> dict:
        return {
            "cases": self.case_path,
            "steps": [_step_json(s) for s in self.steps],
            "result": self.result.to_json(),
            "essential_t": format_scalar(self.essential_t),
        }


def _step_json(step: dict) -> dict:
    out = {}
    for k, v in step.items():
        if isinstance(v, (list, tuple)):
            out[k] = [[format_scalar(x) for x in r] if isinstance(r, (list, tuple)) else format_scalar(r) for r in v]
        elif isinstance(v, str):
            out[k] = v
        else:
            out[k] = format_scalar(v)
    return out


TRANSPOSE_23 = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]


def case4_basis(zeta: Any, j: Any) -> list[list[Any]]:
    """Columns are the new basis vectors ``x'_1 = zeta x_1 + x_2 + x_3``,
    ``x'_2 = zeta x_1 + j x_2 + j^2 x_3``, ``x'_3 = zeta x_1 + j^2 x_2 + j x_3``."""
    one = zeta / zeta
    return [[zeta, zeta, zeta], [one, j, j * j], [one, j * j, j]]


def apply_step(b: BQD, step: dict) -> BQD:
    kind = step["kind"]
    if kind == "permutation":
        return apply_equivalence(b, g=step["matrix"])
    if kind == "case4_basis_change":
        b = _to_qj(b)
        return apply_equivalence(b, g=case4_basis(step["zeta"], step["j"]))
    if kind == "rescale":
        f = step["factor"]
        one = f / f
        return apply_equivalence(b, rescale=[f, 1 / f, 1 / f, f, one, one, one, one])
    raise ValueError(f"unknown step {kind!r}")


def _to_qj(b: BQD) -> BQD:
    conv = lambda x: x if isinstance(x, QJ) else QJ(x)
    from dataclasses import replace
    from .bqd import MAP_NAMES
    return replace(b, **{n: getattr(b, n).map_entries(conv) for n in MAP_NAMES})


def _is_zero(x: Any) -> bool:
    return x == 0


def validate_datum(params: CaseIhParams) -> None:
    if params.gamma == 0:
        raise InvalidDatum("gamma must be nonzero")
    if (params.alpha + params.beta) ** 3 + params.gamma ** 3 == 0:
        raise InvalidDatum("s would not be elliptic: (alpha+beta)^3 + gamma^3 = 0")
    if params.pairing() != 1:
        raise InvalidDatum("alpha*alpha' + beta*beta' + gamma*gamma' != 1")
    P = p_system(params)
    if any(not _is_zero(x) for x in P):
        raise InvalidDatum("P0, P1, P2 do not all vanish")


def cube_root_candidates() -> list[QJ]:
    j = QJ.j()
    return [QJ(1), j, j * j]


def normalize(params: CaseIhParams) -> NormalizationWitness:
    """Reduce a valid parameter set to ``alpha = alpha' = 0``, ``beta = 1``."""
    validate_datum(params)
    b = make_bqd_from_params(params)
    steps: list[dict] = []
    path: list[int] = []
    cur = params
    for _ in range(4):
        al, be, ga, alp, bep, gap = cur.as_tuple()
        if _is_zero(al) and _is_zero(alp):
            path.append(1)
            break
        if _is_zero(al) or _is_zero(alp):
            raise InvalidDatum("exactly one of alpha, alpha' vanishes")
        if _is_zero(be) or _is_zero(bep):
            path.append(2)
            step = {"kind": "permutation", "matrix": TRANSPOSE_23}
        elif _is_zero(gap):
            # P1 then forces alpha' = 0 or beta' = 0, handled above.
            raise InvalidDatum("gamma' = 0 with alpha', beta' nonzero violates P1")
        else:
            path.append(4)
            step = _case4_step(cur)
        steps.append(step)
        b = apply_step(b, step)
        cur = read_cyclic_params(b)
    else:
        raise InvalidDatum("normalization did not terminate")
    be = cur.beta
    if be != 1:
        step = {"kind": "rescale", "factor": 1 / be}
        steps.append(step)
        b = apply_step(b, step)
        cur = read_cyclic_params(b)
    t1 = -cur.gamma / cur.beta
    t2 = -cur.beta_p / cur.gamma_p
    if t1 != t2:
        raise InvalidDatum(f"the two formulas for t disagree: {t1} vs {t2}")
    return NormalizationWitness(steps=steps, result=cur, essential_t=_simplify(t1), case_path=path)


def _simplify(x: Any) -> Any:
    if isinstance(x, QJ) and x.is_rational():
        return x.a
    return x


def _case4_step(p: CaseIhParams) -> dict:
    al, be, ga = (QJ(x) if not isinstance(x, QJ) else x for x in (p.alpha, p.beta, p.gamma))
    zeta = (al ** 3 + be ** 3 + ga ** 3) / (3 * al * be * ga)
    roots = cube_root_candidates()
    if zeta not in roots:
        raise InvalidDatum("alpha^3+beta^3+gamma^3 is not 3*zeta*alpha*beta*gamma for a cube root of unity")
    j = QJ.j()
    for jj in (j, j * j):
        if zeta * ga + jj * al + jj * jj * be == 0:
            return {"kind": "case4_basis_change", "zeta": zeta, "j": jj}
    raise InvalidDatum("no linear factor zeta*gamma + j*alpha + j^2*beta vanishes")
