"""The (9+9)-generator presentation attached to a BQD and its Hopf tables.

Free-algebra elements are dicts ``{word: coeff}`` where a word is a tuple
of generator names (``"t12"`` is ``t^1_2``, ``"u31"`` is ``u^3_1``; indices
1-based in names) and the empty word is the unit.  Nothing is reduced
modulo the relations: every identity here is checked coefficientwise in the
free algebra after contracting the structure tensors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .bqd import BQD, q_inverse_claimed, q_matrix, swap_bqd
from .exactmath.matrix import ExactMatrix, rank_and_kernel
from .exactmath.scalars import format_scalar

R3 = range(3)
FAMILIES = ("A", "a", "B", "b", "C", "c", "D", "d")
FAMILY_COUNTS = {"A": 27, "a": 27, "B": 27, "b": 27, "C": 9, "c": 9, "D": 9, "d": 9}


def t(i: int, j: int) -> str:
    return f"t{i + 1}{j + 1}"


def u(a: int, b: int) -> str:
    return f"u{a + 1}{b + 1}"


GENERATORS = tuple(t(i, j) for i in R3 for j in R3) + tuple(u(a, b) for a in R3 for b in R3)


def _add(out: dict, word: tuple, c: Any) -> None:
    if not c:
        return
    v = out.get(word, 0) + c
    if v:
        out[word] = v
    else:
        out.pop(word, None)


def element_to_string(el: dict) -> str:
    """Canonical text: terms ordered by word length then lexicographically."""
    if not el:
        return "0"
    parts = []
    for w in sorted(el, key=lambda w: (len(w), w)):
        c = el[w]
        cs = format_scalar(c)
        if not w:
            parts.append(cs)
        elif cs == "1":
            parts.append("*".join(w))
        elif cs == "-1":
            parts.append("-" + "*".join(w))
        else:
            if any(ch in cs.lstrip("-") for ch in "+-*^ t"):
                cs = f"({cs})"
            parts.append(f"{cs}*" + "*".join(w))
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


@dataclass
class HopfRelation:
    family: str
    indices: tuple
    element: dict

    def __str__(self) -> str:
        return element_to_string(self.element)


@dataclass
class HopfPresentation:
    generators: tuple
    relations: list
    coproduct: dict
    counit: dict
    antipode: dict
    label: str = ""

    def family_counts(self) -> dict:
        out = {f: 0 for f in FAMILIES}
        for r in self.relations:
            out[r.family] += 1
        return out

    def relation(self, family: str, indices: tuple) -> HopfRelation:
        for r in self.relations:
            if r.family == family and r.indices == tuple(indices):
                return r
        raise KeyError((family, indices))

    def span_dimension(self) -> int:
        rank, _ = rank_and_kernel(_relation_matrix([r.element for r in self.relations]))
        return rank

    def relations_text(self) -> str:
        lines = []
        for r in self.relations:
            idx = ",".join(str(i + 1) for i in r.indices)
            lines.append(f"{r.family}[{idx}]: {r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "generators": list(self.generators),
            "family_counts": {k: str(v) for k, v in self.family_counts().items()},
            "relation_count": str(len(self.relations)),
            "span_dimension": str(self.span_dimension()),
        }


def _relation_matrix(elements: list) -> list:
    words = sorted({w for el in elements for w in el}, key=lambda w: (len(w), w))
    col = {w: i for i, w in enumerate(words)}
    rows = []
    for el in elements:
        row = [Fraction(0)] * len(words)
        for w, c in el.items():
            row[col[w]] = c
        rows.append(row)
    return rows


def _tensors(b: BQD):
    A = lambda al, i, j: b.A.entry((al,), (i, j))
    a = lambda k, l, be: b.a.entry((k, l), (be,))
    B = lambda i, al, be: b.B.entry((i,), (al, be))
    bb = lambda al, be, j: b.b.entry((al, be), (j,))
    C = lambda al, i: b.C.entry((0,), (al, i))
    c = lambda j, be: b.c.entry((j, be), (0,))
    D = lambda i, al: b.D.entry((0,), (i, al))
    d = lambda be, j: b.d.entry((be, j), (0,))
    return A, a, B, bb, C, c, D, d


def _relations(b: BQD) -> list[HopfRelation]:
    A, a, B, bb, C, c, D, d = _tensors(b)
    rels = []
    # A^al_ij t^i_k t^j_l = u^al_be A^be_kl
    for al in R3:
        for k in R3:
            for l in R3:
                el: dict = {}
                for i in R3:
                    for j in R3:
                        _add(el, (t(i, k), t(j, l)), A(al, i, j))
                for be in R3:
                    _add(el, (u(al, be),), -A(be, k, l))
                rels.append(HopfRelation("A", (al, k, l), el))
    # t^i_k t^j_l a^kl_be = a^ij_al u^al_be
    for i in R3:
        for j in R3:
            for be in R3:
                el = {}
                for k in R3:
                    for l in R3:
                        _add(el, (t(i, k), t(j, l)), a(k, l, be))
                for al in R3:
                    _add(el, (u(al, be),), -a(i, j, al))
                rels.append(HopfRelation("a", (i, j, be), el))
    # B^i_ab u^a_g u^b_d = t^i_j B^j_gd
    for i in R3:
        for g in R3:
            for dl in R3:
                el = {}
                for al in R3:
                    for be in R3:
                        _add(el, (u(al, g), u(be, dl)), B(i, al, be))
                for j in R3:
                    _add(el, (t(i, j),), -B(j, g, dl))
                rels.append(HopfRelation("B", (i, g, dl), el))
    # u^a_g u^b_d b^gd_j = b^ab_i t^i_j
    for al in R3:
        for be in R3:
            for j in R3:
                el = {}
                for g in R3:
                    for dl in R3:
                        _add(el, (u(al, g), u(be, dl)), bb(g, dl, j))
                for i in R3:
                    _add(el, (t(i, j),), -bb(al, be, i))
                rels.append(HopfRelation("b", (al, be, j), el))
    # C_ai u^a_b t^i_j = C_bj
    for be in R3:
        for j in R3:
            el = {}
            for al in R3:
                for i in R3:
                    _add(el, (u(al, be), t(i, j)), C(al, i))
            _add(el, (), -C(be, j))
            rels.append(HopfRelation("C", (be, j), el))
    # t^i_j u^a_b c^jb = c^ia
    for i in R3:
        for al in R3:
            el = {}
            for j in R3:
                for be in R3:
                    _add(el, (t(i, j), u(al, be)), c(j, be))
            _add(el, (), -c(i, al))
            rels.append(HopfRelation("c", (i, al), el))
    # D_ia t^i_j u^a_b = D_jb
    for j in R3:
        for be in R3:
            el = {}
            for i in R3:
                for al in R3:
                    _add(el, (t(i, j), u(al, be)), D(i, al))
            _add(el, (), -D(j, be))
            rels.append(HopfRelation("D", (j, be), el))
    # u^a_b t^i_j d^bj = d^ai
    for al in R3:
        for i in R3:
            el = {}
            for be in R3:
                for j in R3:
                    _add(el, (u(al, be), t(i, j)), d(be, j))
            _add(el, (), -d(al, i))
            rels.append(HopfRelation("d", (al, i), el))
    return rels


def _antipode_table(b: BQD) -> dict:
    """``S(t^i_j) = c^{ib} u^a_b C_{aj}``, ``S(u^a_b) = d^{aj} t^i_j D_{ib}``
    as ``{generator: {generator: coeff}}``."""
    A, a, B, bb, C, c, D, d = _tensors(b)
    table = {}
    for i in R3:
        for j in R3:
            img: dict = {}
            for al in R3:
                for be in R3:
                    _add(img, u(al, be), c(i, be) * C(al, j))
            table[t(i, j)] = img
    for al in R3:
        for be in R3:
            img = {}
            for i in R3:
                for j in R3:
                    _add(img, t(i, j), d(al, j) * D(i, be))
            table[u(al, be)] = img
    return table


def hopf_presentation(b: BQD) -> HopfPresentation:
    coproduct = {}
    counit = {}
    for i in R3:
        for j in R3:
            coproduct[t(i, j)] = [(t(i, k), t(k, j)) for k in R3]
            counit[t(i, j)] = Fraction(1 if i == j else 0)
            coproduct[u(i, j)] = [(u(i, k), u(k, j)) for k in R3]
            counit[u(i, j)] = Fraction(1 if i == j else 0)
    return HopfPresentation(GENERATORS, _relations(b), coproduct, counit, _antipode_table(b), label=b.label)


def apply_linear(table: dict, el: dict) -> dict:
    out: dict = {}
    for g, c in el.items():
        for h, m in table[g].items():
            _add(out, h, c * m)
    return out


def antipode_squared(b: BQD) -> dict:
    """``S^2`` on every generator, formally from the antipode table."""
    table = _antipode_table(b)
    return {g: apply_linear(table, table[g]) for g in GENERATORS}


@dataclass
class AntipodeReport:
    passed: bool
    fixes_generators: bool
    q_inverse_verified: bool
    mismatches: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "s2_fixes_generators": self.fixes_generators,
            "q_times_claimed_inverse_is_identity": self.q_inverse_verified,
            "mismatches": self.mismatches,
        }


def antipode_square_report(b: BQD) -> AntipodeReport:
    """Compare ``S^2(t^i_j)`` with ``Q^i_k t^k_l (Q^{-1})^l_j`` where
    ``Q^i_j = c^{ia} D_{ja}`` and ``(Q^{-1})^l_j = d^{al} C_{aj}``."""
    s2 = antipode_squared(b)
    Q = q_matrix(b, check=False)
    P = q_inverse_claimed(b)
    mismatches = []
    for i in R3:
        for j in R3:
            want: dict = {}
            for k in R3:
                for l in R3:
                    _add(want, t(k, l), Q.entry((i,), (k,)) * P.entry((l,), (j,)))
            if s2[t(i, j)] != want:
                mismatches.append(t(i, j))
    fixes = all(s2[g] == {g: 1} for g in GENERATORS)
    qp = ExactMatrix(Q.rows) @ ExactMatrix(P.rows)
    q_ok = all(qp.rows[i][j] == (1 if i == j else 0) for i in R3 for j in R3)
    return AntipodeReport(not mismatches, fixes, q_ok, mismatches)


def antipode_square_identity(b: BQD) -> bool:
    return antipode_square_report(b).passed


SWAP_GENERATORS = {g: ("u" + g[1:] if g[0] == "t" else "t" + g[1:]) for g in GENERATORS}


def rename_element(el: dict, mapping: dict) -> dict:
    return {tuple(mapping[g] for g in w): c for w, c in el.items()}


def same_span(els1: Iterable[dict], els2: Iterable[dict]) -> bool:
    els1, els2 = list(els1), list(els2)
    r1, _ = rank_and_kernel(_relation_matrix(els1))
    r2, _ = rank_and_kernel(_relation_matrix(els2))
    r12, _ = rank_and_kernel(_relation_matrix(els1 + els2))
    return r1 == r2 == r12


def swap_stable(b: BQD) -> bool:
    """The relations of the swapped datum, with ``t <-> u``, span the same
    space as the original relations."""
    mine = [r.element for r in hopf_presentation(b).relations]
    theirs = [rename_element(r.element, SWAP_GENERATORS) for r in hopf_presentation(swap_bqd(b)).relations]
    return same_span(mine, theirs)
