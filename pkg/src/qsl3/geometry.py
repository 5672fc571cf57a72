"""Flag-variety components, plane cubics and the smoothness test.

The flag variety of the Case I.h shape algebra is a union of nine lines in
``P^2 x P^2*``; each component is given by a generic point whose two rows
(``x``-coordinates and ``y``-coordinates) are linear or constant in a pair
``(lam : mu)``.  The automorphisms ``sigma_i = tau_i sigma_i°`` act by
rescaling ``mu`` on each component (``sigma_i°``) followed by a cyclic
permutation of coordinates (``tau_i``).  :func:`verify_gamma_relations`
substitutes ``(p, sigma_1 p, sigma_2 p)`` into the shape relations, each
with its right-hand factor taken at ``sigma_1 p`` when the left factor is an
``x`` and at ``sigma_2 p`` when it is a ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional, Sequence

from .bqd import CaseIhParams, make_case_ih
from .exactmath.matrix import rank_and_kernel
from .exactmath import upoly
from .exactmath.multipoly import MultiPoly
from .exactmath.scalars import RatFunc, format_scalar
from .shape import shape_presentation

PARAMS = ("lam", "mu")
CUBIC_VARS = ("x1", "x2", "x3")


# --------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class FlagComponent:
    """A component with generic point ``rows`` (two rows of three entries,
    each ``(c_lam, c_mu, c_const)`` meaning ``c_lam*lam + c_mu*mu + c_const``).

    ``sigma1_mu_factor`` and ``sigma2_mu_factor`` are the factors by which
    ``sigma_1°`` and ``sigma_2°`` multiply ``mu``; they are symbolic tokens
    ``"t"``, ``"t^2"``, ``"1/t"`` resolved against a value of ``t``.
    """

    id: int
    rows: tuple
    sigma1_mu_factor: str
    sigma2_mu_factor: str
    interior: bool
    tau1_target: int = 0
    tau2_target: int = 0
    sigma1_target: int = 0
    sigma2_target: int = 0

    def point(self, t: Any) -> tuple[list[MultiPoly], list[MultiPoly]]:
        return tuple(  # type: ignore[return-value]
            [_linear_form(entry, t) for entry in row] for row in self.rows
        )

    def row_kinds(self) -> tuple[str, str]:
        return tuple("const" if all(e[0] == 0 and e[1] == 0 for e in row) else "linear" for row in self.rows)  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "point": [[_entry_text(e) for e in row] for row in self.rows],
            "sigma1_mu_factor": self.sigma1_mu_factor,
            "sigma2_mu_factor": self.sigma2_mu_factor,
            "interior": self.interior,
            "tau1_target": self.tau1_target,
            "tau2_target": self.tau2_target,
            "sigma1_target": self.sigma1_target,
            "sigma2_target": self.sigma2_target,
        }


def _entry_text(e) -> str:
    lam, mu, const = e
    parts = []
    for c, name in ((lam, "lam"), (mu, "mu"), (const, "")):
        if c == 0:
            continue
        cs = str(c)
        if name:
            parts.append(name if cs == "1" else f"-{name}" if cs == "-1" else f"{cs}*{name}")
        else:
            parts.append(cs)
    return " + ".join(parts) if parts else "0"


def _resolve(token: Any, t: Any) -> Any:
    if not isinstance(token, str):
        return token
    if isinstance(t, int):
        t = Fraction(t)
    table = {"1": t ** 0, "t": t, "t^2": t * t, "1/t": 1 / t, "t^-1": 1 / t, "t^-2": 1 / (t * t)}
    if token not in table:
        raise ValueError(f"unknown factor token {token!r}")
    return table[token]


def _linear_form(entry, t: Any) -> MultiPoly:
    lam, mu, const = (_resolve(c, t) if isinstance(c, str) else Fraction(c) for c in entry)
    L, M = MultiPoly.var("lam", PARAMS), MultiPoly.var("mu", PARAMS)
    return L * lam + M * mu + MultiPoly.const(const, PARAMS)


# Entries: (lam coefficient, mu coefficient, constant); "t" marks a factor t.
_L = (1, 0, 0)
_M = (0, 1, 0)
_1 = (0, 0, 1)
_0 = (0, 0, 0)
_mM = (0, -1, 0)
_tL = ("t", 0, 0)

FIGURE = (
    # id, top row, bottom row, sigma1 factor, sigma2 factor, interior
    (1, (_L, _M, _0), (_0, _1, _0), "t", "t^2", False),
    (2, (_1, _0, _0), (_L, _M, _0), "t^2", "t", False),
    (3, (_M, _0, _L), (_1, _0, _0), "t", "t^2", False),
    (4, (_0, _0, _1), (_M, _0, _L), "t^2", "t", False),
    (5, (_0, _L, _M), (_0, _0, _1), "t", "t^2", False),
    (6, (_0, _1, _0), (_0, _L, _M), "t^2", "t", False),
    (7, (_L, _M, _0), (_tL, _0, _mM), "t", "1/t", True),
    (8, (_M, _0, _L), (_0, _mM, _tL), "t", "1/t", True),
    (9, (_0, _L, _M), (_mM, _tL, _0), "t", "1/t", True),
)


def _raw_components() -> list[FlagComponent]:
    return [FlagComponent(i, (top, bottom), f1, f2, interior) for i, top, bottom, f1, f2, interior in FIGURE]


# tau_i as coordinate permutations of a point: new[k] = old[perm[k]].
TAU_COORDS = {1: (2, 0, 1), 2: (1, 2, 0)}


def tau_point(i: int, point, inverse: bool = False):
    perm = TAU_COORDS[i]
    if inverse:
        inv = [0, 0, 0]
        for k, src in enumerate(perm):
            inv[src] = k
        perm = tuple(inv)
    return tuple([row[perm[k]] for k in range(3)] for row in point)


def sigma_circ(comp: FlagComponent, i: int, t: Any, factors: Optional[dict] = None):
    """``sigma_i°`` on the generic point: ``mu -> factor * mu``."""
    token = (factors or {}).get((comp.id, i), comp.sigma1_mu_factor if i == 1 else comp.sigma2_mu_factor)
    f = _resolve(token, t)
    x, y = comp.point(t)
    sub = {"mu": MultiPoly.var("mu", PARAMS) * f}
    return ([e.subs(sub) for e in x], [e.subs(sub) for e in y])


def sigma(comp: FlagComponent, i: int, t: Any, factors: Optional[dict] = None, tau_inverse: bool = False):
    """``sigma_i = tau_i sigma_i°``."""
    return tau_point(i, sigma_circ(comp, i, t, factors), inverse=tau_inverse)


# --------------------------------------------------------------------------
# component membership


def _row_data(row, t: Any):
    """Resolved (lam, mu, constant) coefficient vectors of one row."""
    cols = [[_resolve(c, t) if isinstance(c, str) else c for c in entry] for entry in row]
    return [c[0] for c in cols], [c[1] for c in cols], [c[2] for c in cols]


def membership_residuals(comp: FlagComponent, point, t: Any) -> list:
    """Polynomials that vanish identically iff ``point`` (rows of forms in
    lam, mu) lies on ``comp`` for all (lam : mu)."""
    res = []
    recover = []
    for gen, row in zip(comp.rows, point):
        P, M, K = _row_data(gen, t)
        if all(c == 0 for c in P) and all(c == 0 for c in M):
            # constant row K: row must be proportional to K
            for a in range(3):
                for b in range(a + 1, 3):
                    res.append(row[a] * K[b] - row[b] * K[a])
            recover.append(None)
        else:
            # row must lie in span(P, M): det[row; P; M] = 0
            n = [P[1] * M[2] - P[2] * M[1], P[2] * M[0] - P[0] * M[2], P[0] * M[1] - P[1] * M[0]]
            res.append(row[0] * n[0] + row[1] * n[1] + row[2] * n[2])
            recover.append(_recovery(P, M, row))
    if recover[0] is not None and recover[1] is not None:
        (l1, m1), (l2, m2) = recover
        res.append(l1 * m2 - m1 * l2)
    return res


def _recovery(P, M, row):
    """(lam, mu) as linear expressions in ``row`` for ``row = lam*P + mu*M``."""
    for a in range(3):
        for b in range(a + 1, 3):
            det = P[a] * M[b] - P[b] * M[a]
            if det != 0:
                lam = (row[a] * M[b] - row[b] * M[a]) / det
                mu = (row[b] * P[a] - row[a] * P[b]) / det
                return lam, mu
    raise ValueError("degenerate component row")


def lies_on(comp: FlagComponent, point, t: Any) -> bool:
    return all(r.is_zero() for r in membership_residuals(comp, point, t))


def _find_target(comps, point, t) -> int:
    hits = [c.id for c in comps if lies_on(c, point, t)]
    return hits[0] if len(hits) == 1 else 0


def flag_components(t: Any = None) -> list[FlagComponent]:
    """The nine components with their automorphism data.

    The tau and sigma targets are found by locating the image of each
    generic point among the nine components (at symbolic ``t`` unless a
    value is supplied).
    """
    if t is None:
        t = RatFunc.t()
    elif isinstance(t, int):
        t = Fraction(t)
    comps = _raw_components()
    out = []
    for c in comps:
        pt = c.point(t)
        out.append(replace(
            c,
            tau1_target=_find_target(comps, tau_point(1, pt), t),
            tau2_target=_find_target(comps, tau_point(2, pt), t),
            sigma1_target=_find_target(comps, sigma(c, 1, t), t),
            sigma2_target=_find_target(comps, sigma(c, 2, t), t),
        ))
    return out


# --------------------------------------------------------------------------
# the relations on Gamma


@dataclass
class GammaReport:
    t: Any
    entries: list = field(default_factory=list)  # (component id, relation text, passed)
    decomposition_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.decomposition_ok and all(ok for _, _, ok in self.entries)

    def failures(self) -> list:
        return [(c, r) for c, r, ok in self.entries if not ok]

    def to_json(self) -> dict:
        return {
            "t": format_scalar(self.t),
            "pass": self.passed,
            "checked": len(self.entries),
            "failures": [{"component": c, "relation": r} for c, r in self.failures()],
            "sigma_equals_tau_sigma_circ": self.decomposition_ok,
        }


def _coord(point, g: int):
    return point[0][g] if g < 3 else point[1][g - 3]


def modified_parts(rel: dict, p, s1, s2) -> tuple[MultiPoly, MultiPoly]:
    """The two halves of a modified relation: terms whose left factor is an
    ``x`` (right factor taken at ``sigma_1 p``) and terms whose left factor
    is a ``y`` (right factor taken at ``sigma_2 p``)."""
    parts = [MultiPoly(PARAMS), MultiPoly(PARAMS)]
    for (u, v), c in rel.items():
        k = 0 if u < 3 else 1
        right = s1 if k == 0 else s2
        parts[k] = parts[k] + _coord(p, u) * _coord(right, v) * c
    return parts[0], parts[1]


def evaluate_modified(rel: dict, p, s1, s2) -> MultiPoly:
    """Plain substitution of ``(p, sigma_1 p, sigma_2 p)`` into a modified relation."""
    a, b = modified_parts(rel, p, s1, s2)
    return a + b


def verify_gamma_relations(t: Any = None, factors: Optional[dict] = None, tau_inverse: bool = False) -> GammaReport:
    """Every (component, relation) pair must hold identically in (lam, mu).

    Points of ``P^2 x P^2*`` are projective in each factor.  A relation
    whose terms all start with ``x`` (or all with ``y``) is homogeneous in
    the relevant factor and must vanish outright.  A mixed relation reads
    ``A + B = 0`` with ``A`` linear in the ``y``-coordinates of
    ``sigma_1 p`` and ``B`` linear in the ``x``-coordinates of
    ``sigma_2 p``; these two coordinate vectors carry independent scales,
    so the requirement is a single nonzero ratio ``c`` with ``c A + B = 0``
    for all mixed relations on the component.

    ``factors`` overrides mu-factors: ``{(component id, i): token}``.
    """
    if t is None:
        t = RatFunc.t()
    elif isinstance(t, int):
        t = Fraction(t)
    pres = shape_presentation(make_case_ih(t))
    comps = _raw_components()
    report = GammaReport(t)
    for c in comps:
        p = c.point(t)
        s1 = sigma(c, 1, t, factors, tau_inverse)
        s2 = sigma(c, 2, t, factors, tau_inverse)
        mixed = []
        for rel, text in zip(pres.relation_dicts(), pres.relation_strings()):
            a, b = modified_parts(rel, p, s1, s2)
            kinds = {u < 3 for u, _ in rel}
            if len(kinds) == 1:
                report.entries.append((c.id, text, (a + b).is_zero()))
            else:
                mixed.append((text, a, b))
        ref = next(((a, b) for _, a, b in mixed if not (a.is_zero() and b.is_zero())), None)
        for text, a, b in mixed:
            if ref is None:
                ok = True
            else:
                a0, b0 = ref
                ok = (a * b0 - a0 * b).is_zero() and not (a0.is_zero() or b0.is_zero())
            report.entries.append((c.id, text, ok))
        # sigma_i must carry the component into X
        if not (_find_target(comps, s1, t) and _find_target(comps, s2, t)):
            report.decomposition_ok = False
    return report


# --------------------------------------------------------------------------
# fixed points


def _minors(row_a, row_b) -> list[MultiPoly]:
    return [row_a[i] * row_b[j] - row_a[j] * row_b[i] for i in range(3) for j in range(i + 1, 3)]


def sigma_fixed_points(t: Any = None, factors: Optional[dict] = None, trivial_circ: bool = False) -> list[dict]:
    """Points ``p`` with ``sigma_1 p = p = sigma_2 p``.

    On each component the condition is the vanishing of all 2x2 minors of
    ``[p; sigma_i p]`` (per row), a family of binary forms in (lam : mu);
    common roots are read off from their gcd.  ``trivial_circ`` replaces
    every ``sigma_i°`` by the identity.
    """
    if t is None:
        t = RatFunc.t()
    elif isinstance(t, int):
        t = Fraction(t)
    if trivial_circ:
        factors = {(c.id, i): "1" for c in _raw_components() for i in (1, 2)}
    found = []
    for c in _raw_components():
        p = c.point(t)
        forms = []
        for i in (1, 2):
            s = sigma(c, i, t, factors)
            for r in range(2):
                forms.extend(_minors(p[r], s[r]))
        for root in common_projective_roots(forms):
            lam, mu = root
            if all(any(e.evaluate({"lam": lam, "mu": mu}) != 0 for e in row) for row in p):
                found.append({"component": c.id, "lam": format_scalar(lam), "mu": format_scalar(mu)})
        residual = _gcd_in_mu(forms)
        if upoly.degree(residual) > 1:
            found.append({"component": c.id, "gcd": " + ".join(f"({format_scalar(a)})*mu^{i}" for i, a in enumerate(residual))})
    return found


def _gcd_in_mu(forms) -> tuple:
    """gcd of the forms dehomogenized at lam = 1, as a polynomial in mu."""
    g: tuple = ()
    for f in forms:
        if f.is_zero():
            continue
        d = f.subs({"lam": Fraction(1)}).with_variables(("mu",))
        coeffs = [d.terms.get((k,), Fraction(0)) for k in range(d.total_degree() + 1)]
        g = upoly.gcd(g, upoly.trim(Fraction(c) if isinstance(c, int) else c for c in coeffs))
    return g


def common_projective_roots(forms) -> list[tuple]:
    """Common zeros (lam : mu) of binary forms that are defined over the
    coefficient field: the point (0 : 1) and the roots of linear factors
    of the gcd at lam = 1."""
    forms = [f for f in forms if not f.is_zero()]
    roots = []
    one = Fraction(1)
    if all(f.evaluate({"lam": 0, "mu": one}) == 0 for f in forms):
        roots.append((Fraction(0), one))
    g = _gcd_in_mu(forms) if forms else ()
    if forms and upoly.degree(g) == 1:
        roots.append((one, -g[0] / g[1]))
    elif not forms:
        raise ValueError("every point is a common root")
    return roots


# --------------------------------------------------------------------------
# plane cubics


class DegenerateCubic(ValueError):
    pass


@dataclass(frozen=True)
class PlaneCubic:
    poly: MultiPoly

    def __post_init__(self):
        p = self.poly
        if not p.is_zero() and (not p.is_homogeneous() or p.total_degree() != 3):
            raise ValueError("a plane cubic must be homogeneous of degree 3")

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def hesse_form(self) -> Optional[tuple[Any, Any]]:
        """``(A, B)`` if the cubic is ``A(x^3+y^3+z^3) - 3B xyz``, else None."""
        p = self.poly.with_variables(CUBIC_VARS)
        A = p.terms.get((3, 0, 0), 0)
        if p.terms.get((0, 3, 0), 0) != A or p.terms.get((0, 0, 3), 0) != A:
            return None
        allowed = {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}
        if any(e not in allowed for e in p.terms):
            return None
        B = -p.terms.get((1, 1, 1), 0) / 3
        return A, B

    def equals_up_to_scalar(self, other: "PlaneCubic") -> bool:
        a = self.poly.with_variables(CUBIC_VARS)
        b = other.poly.with_variables(CUBIC_VARS)
        if a.is_zero() or b.is_zero():
            return a.is_zero() and b.is_zero()
        if set(a.terms) != set(b.terms):
            return False
        e0 = next(iter(a.terms))
        ratio = a.terms[e0] / b.terms[e0]
        return all(a.terms[e] == ratio * b.terms[e] for e in a.terms)

    def __str__(self) -> str:
        return str(self.poly)


def _cubic_vars() -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    return MultiPoly.symbols(*CUBIC_VARS)


def fermat_sum() -> MultiPoly:
    x, y, z = _cubic_vars()
    return x ** 3 + y ** 3 + z ** 3


def triangle() -> PlaneCubic:
    x, y, z = _cubic_vars()
    return PlaneCubic(x * y * z)


def as_curve(params: CaseIhParams) -> PlaneCubic:
    """``gamma(x1^3+x2^3+x3^3) - 3(alpha+beta) x1x2x3``, as displayed for the
    three-space."""
    x, y, z = _cubic_vars()
    return PlaneCubic(fermat_sum() * params.gamma - x * y * z * (3 * (params.alpha + params.beta)))


def atv_curve(params: CaseIhParams) -> PlaneCubic:
    """``alpha beta gamma (x1^3+x2^3+x3^3) - (alpha^3+beta^3+gamma^3) x1x2x3``."""
    al, be, ga = params.alpha, params.beta, params.gamma
    x, y, z = _cubic_vars()
    return PlaneCubic(fermat_sum() * (al * be * ga) - x * y * z * (al ** 3 + be ** 3 + ga ** 3))


def _partials(p: MultiPoly) -> list[MultiPoly]:
    out = []
    for k, v in enumerate(CUBIC_VARS):
        terms = {}
        for e, c in p.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                terms[tuple(e2)] = terms.get(tuple(e2), 0) + c * e[k]
        out.append(MultiPoly(CUBIC_VARS, terms))
    return out


def _monomials(deg: int) -> list[tuple]:
    return [(a, b, deg - a - b) for a in range(deg, -1, -1) for b in range(deg - a, -1, -1)]


def macaulay_matrix(c: PlaneCubic) -> list[list[Any]]:
    """Rows: each partial derivative times each quadratic monomial, in the
    15 quartic monomials."""
    p = c.poly.with_variables(CUBIC_VARS)
    cols = {e: i for i, e in enumerate(_monomials(4))}
    zero = _zero_of(p)
    rows = []
    for d in _partials(p):
        for m in _monomials(2):
            row = [zero] * 15
            for e, coeff in d.terms.items():
                row[cols[tuple(a + b for a, b in zip(e, m))]] = coeff
            rows.append(row)
    return rows


def _zero_of(p: MultiPoly) -> Any:
    for c in p.terms.values():
        return c - c
    return Fraction(0)


def is_elliptic(c: PlaneCubic, fast_path: bool = True) -> bool:
    """Smoothness of a plane cubic.

    Hesse-form cubics ``A(x^3+y^3+z^3) - 3B xyz`` are smooth iff
    ``A(A^3 - B^3) != 0``.  In general, three ternary quadrics (the
    partials) have no common projective zero iff they generate every
    quartic, i.e. iff the 18x15 matrix of :func:`macaulay_matrix` has
    rank 15.
    """
    if c.is_zero:
        raise DegenerateCubic("the zero cubic is not a curve")
    if fast_path:
        hf = c.hesse_form()
        if hf is not None:
            A, B = hf
            return A * (A ** 3 - B ** 3) != 0
    rank, _ = rank_and_kernel(macaulay_matrix(c))
    return rank == 15


@dataclass
class CurveReport:
    params: CaseIhParams
    s: PlaneCubic
    as_displayed: PlaneCubic
    atv: PlaneCubic
    s_elliptic: bool
    as_displayed_elliptic: bool
    atv_elliptic: bool
    atv_is_triangle: bool
    family: str = "ih"

    @property
    def passed(self) -> bool:
        if self.family == "ie":
            return self.atv_is_triangle
        return self.s_elliptic and not self.atv_elliptic and self.atv_is_triangle

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "family": self.family,
            "params": self.params.to_json(),
            "s": str(self.s),
            "s_elliptic": self.s_elliptic,
            "as_curve": str(self.as_displayed),
            "as_curve_elliptic": self.as_displayed_elliptic,
            "atv_curve": str(self.atv),
            "atv_elliptic": self.atv_elliptic,
            "atv_is_triangle": self.atv_is_triangle,
            "curves_coincide": self.s.equals_up_to_scalar(self.atv),
        }


def curve_report(t: Any, family: str = "ih") -> CurveReport:
    """Cubics attached to the normalized datum at ``t``."""
    from .bqd import case_ie_params, make_bqd_from_params, quantum_determinants

    params = CaseIhParams.normalized(t) if family == "ih" else case_ie_params(t)
    qd = quantum_determinants(make_bqd_from_params(params))
    s = PlaneCubic(qd.s.with_variables(CUBIC_VARS))
    atv = atv_curve(params)
    asc = as_curve(params) if params.gamma != 0 else s
    return CurveReport(
        params=params,
        s=s,
        as_displayed=asc,
        atv=atv,
        s_elliptic=is_elliptic(s) if not s.is_zero else False,
        as_displayed_elliptic=is_elliptic(asc) if not asc.is_zero else False,
        atv_elliptic=is_elliptic(atv) if not atv.is_zero else False,
        atv_is_triangle=atv.equals_up_to_scalar(triangle()),
        family=family,
    )
