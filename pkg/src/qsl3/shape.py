"""Graded quadratic presentations, shape algebras and their dimensions.

A :class:`QuadraticPresentation` has generators with multidegrees (tuples of
naturals) and a space of quadratic relations, stored per multidegree as a
reduced row echelon basis over the 36 (in general ``n^2``) degree-two words.
Words are ordered lexicographically by generator index.

Graded dimensions are computed in two ways:

* ``method="quotient"`` (default) builds ``A_d`` from ``A_{d-e}`` one
  generator at a time: ``A_d = (sum_g A_{d-deg g} g) / (A_{d-2} R)``.  Only
  normal words of the quotient are ever stored, so degree six is cheap.
* ``method="words"`` row-reduces all insertions ``u r v`` in the full word
  space of the requested multidegree (the textbook definition, used as a
  cross-check in small degrees).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Mapping, Optional, Sequence

from .bqd import BQD
from .exactmath.matrix import rref
from .exactmath.scalars import RatFunc, format_scalar, prev_prime, to_mod_p, word_primes
from .exactmath.sparse import SparseEchelon, SparseEchelonModP
from .tensors import flat_index

SHAPE_GENERATORS = ("x1", "x2", "x3", "y1", "y2", "y3")
SHAPE_DEGREES = ((1, 0), (1, 0), (1, 0), (0, 1), (0, 1), (0, 1))

DEFAULT_WORD_CAP = 20000


class SizeCapExceeded(RuntimeError):
    pass


def _add_deg(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub_deg(a: Sequence[int], b: Sequence[int]) -> Optional[tuple]:
    out = tuple(x - y for x, y in zip(a, b))
    return out if all(x >= 0 for x in out) else None


Relation = dict  # {(u, v): coeff} with u, v generator indices


@dataclass(frozen=True)
class QuadraticPresentation:
    generators: tuple
    degrees: tuple
    relations: tuple  # reduced basis vectors as tuples of ((u, v), coeff)
    label: str = ""

    # ---- construction ---------------------------------------------------
    @classmethod
    def from_relations(cls, generators: Sequence[str], degrees: Sequence[Sequence[int]],
                       relations: Iterable[Mapping], label: str = "") -> "QuadraticPresentation":
        gens = tuple(generators)
        degs = tuple(tuple(d) for d in degrees)
        if len(gens) != len(degs):
            raise ValueError("one degree per generator")
        rels = [{k: v for k, v in r.items() if v} for r in relations]
        for r in rels:
            if len({_add_deg(degs[u], degs[v]) for (u, v) in r}) > 1:
                raise ValueError("relation is not homogeneous")
        return cls(gens, degs, _canonical_span(len(gens), degs, rels), label)

    @property
    def n(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def relation_dicts(self) -> list[dict]:
        return [dict(r) for r in self.relations]

    def strata(self) -> dict[tuple, list[dict]]:
        out: dict[tuple, list[dict]] = {}
        for r in self.relation_dicts():
            (u, v), _ = next(iter(r.items()))
            out.setdefault(_add_deg(self.degrees[u], self.degrees[v]), []).append(r)
        return out

    def stratum_dims(self) -> dict[tuple, int]:
        return {d: len(rs) for d, rs in sorted(self.strata().items(), reverse=True)}

    @property
    def relation_count(self) -> int:
        return len(self.relations)

    def same_span(self, other: "QuadraticPresentation") -> bool:
        return self.generators == other.generators and self.degrees == other.degrees and self.relations == other.relations

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, QuadraticPresentation):
            return NotImplemented
        return self.same_span(other)

    def __hash__(self) -> int:
        return hash((self.generators, self.degrees, len(self.relations)))

    def rename(self, mapping: Mapping[str, str]) -> "QuadraticPresentation":
        """Rename generators (``mapping`` old -> new); the generator list keeps
        its order, so relations are rewritten in the new names."""
        new_name = {g: mapping.get(g, g) for g in self.generators}
        if sorted(new_name.values()) != sorted(self.generators):
            raise ValueError("renaming must permute the generator names")
        pos = {g: self.generators.index(new_name[g]) for g in self.generators}
        for g in self.generators:
            if self.degrees[pos[g]] != self.degrees[self.generators.index(g)]:
                raise ValueError("renaming must preserve degrees")
        perm = [pos[g] for g in self.generators]
        rels = [{(perm[u], perm[v]): c for (u, v), c in r.items()} for r in self.relation_dicts()]
        return QuadraticPresentation.from_relations(self.generators, self.degrees, rels, self.label)

    def map_coefficients(self, fn) -> "QuadraticPresentation":
        rels = [{k: fn(c) for k, c in r.items()} for r in self.relation_dicts()]
        return QuadraticPresentation.from_relations(self.generators, self.degrees, rels, self.label)

    # ---- text -----------------------------------------------------------
    def relation_strings(self) -> list[str]:
        return [relation_to_string(r, self.generators) for r in self.relation_dicts()]

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "degrees": [list(d) for d in self.degrees],
            "relations": self.relation_strings(),
        }


def relation_to_string(r: Mapping, generators: Sequence[str]) -> str:
    parts = []
    for (u, v), c in sorted(r.items()):
        word = f"{generators[u]}*{generators[v]}"
        cs = format_scalar(c)
        if cs == "1":
            parts.append(("+", word))
        elif cs == "-1":
            parts.append(("-", word))
        elif cs.startswith("-") and "+" not in cs[1:] and "-" not in cs[1:]:
            parts.append(("-", f"{cs[1:]}*{word}"))
        else:
            parts.append(("+", f"({cs})*{word}" if any(ch in cs[1:] for ch in "+-/") else f"{cs}*{word}"))
    text = ""
    for k, (s, body) in enumerate(parts):
        if k == 0:
            text = body if s == "+" else "-" + body
        else:
            text += f" {s} {body}"
    return text or "0"


def _canonical_span(n: int, degrees: Sequence[tuple], rels: Sequence[Mapping]) -> tuple:
    """Reduced echelon basis per multidegree, pivots at the smallest word."""
    by_deg: dict[tuple, list] = {}
    for r in rels:
        if not r:
            continue
        (u, v) = next(iter(r))
        by_deg.setdefault(_add_deg(degrees[u], degrees[v]), []).append(r)
    out = []
    for d in sorted(by_deg):
        words = sorted({w for r in by_deg[d] for w in r} |
                       {(u, v) for u in range(n) for v in range(n) if _add_deg(degrees[u], degrees[v]) == d})
        col = {w: i for i, w in enumerate(words)}
        zero = _zero_like(by_deg[d])
        mat = []
        for r in by_deg[d]:
            row = [zero] * len(words)
            for w, c in r.items():
                row[col[w]] = row[col[w]] + c
            mat.append(row)
        red, _ = rref(mat)
        for row in red:
            out.append(tuple((words[i], c) for i, c in enumerate(row) if c))
    return tuple(out)


def _zero_like(rels) -> Any:
    for r in rels:
        for c in r.values():
            return c - c
    return Fraction(0)


def relation(generators: Sequence[str], terms: Mapping[str, Any]) -> dict:
    """``relation(gens, {"x3 x2": 1, "x1 x1": -t})`` -> relation dict."""
    out: dict = {}
    for word, c in terms.items():
        a, b = word.split()
        key = (generators.index(a), generators.index(b))
        out[key] = out.get(key, 0) + c
    return out


# --------------------------------------------------------------------------
# presentations attached to a BQD


def shape_presentation(b: BQD) -> QuadraticPresentation:
    """Relations ``a^{ij}_a x_i x_j``, ``b^{ab}_i y_a y_b``, ``c^{ia} x_i y_a``
    and ``y_a x_i + (q + 1/q) a^{jk}_a A^b_{ki} x_j y_b``."""
    X = lambda i: i
    Y = lambda a: 3 + a
    rels: list[dict] = []
    for al in range(3):
        rels.append({(X(i), X(j)): b.a.entry((i, j), (al,)) for i in range(3) for j in range(3)})
    for i in range(3):
        rels.append({(Y(al), Y(be)): b.b.entry((al, be), (i,)) for al in range(3) for be in range(3)})
    rels.append({(X(i), Y(al)): b.c.entry((i, al), (0,)) for i in range(3) for al in range(3)})
    qq = b.q + 1 / b.q
    for al in range(3):
        for i in range(3):
            r: dict = {(Y(al), X(i)): b.a.entry((0, 0), (0,)) * 0 + 1}
            for jj in range(3):
                for be in range(3):
                    coeff = 0
                    for k in range(3):
                        coeff = coeff + b.a.entry((jj, k), (al,)) * b.A.entry((be,), (k, i))
                    if coeff:
                        key = (X(jj), Y(be))
                        r[key] = r.get(key, 0) + qq * coeff
            rels.append(r)
    return QuadraticPresentation.from_relations(SHAPE_GENERATORS, SHAPE_DEGREES, rels, label=f"shape[{b.label}]")


def quantum_three_space(b: BQD, side: str = "V") -> QuadraticPresentation:
    """``T(V)/(Im a)`` (side ``V``) or ``T(W)/(Im b)`` (side ``W``)."""
    if side == "V":
        gens = ("x1", "x2", "x3")
        rels = [{(i, j): b.a.entry((i, j), (al,)) for i in range(3) for j in range(3)} for al in range(3)]
    elif side == "W":
        gens = ("y1", "y2", "y3")
        rels = [{(al, be): b.b.entry((al, be), (i,)) for al in range(3) for be in range(3)} for i in range(3)]
    else:
        raise ValueError("side must be 'V' or 'W'")
    return QuadraticPresentation.from_relations(gens, ((1,),) * 3, rels, label=f"three-space {side}[{b.label}]")


def expected_dimension(deg: Sequence[int]) -> int:
    k, l = deg
    return (k + 1) * (l + 1) * (k + l + 2) // 2


# --------------------------------------------------------------------------
# graded dimensions


def word_count(p: QuadraticPresentation, deg: Sequence[int]) -> int:
    """Number of words of multidegree ``deg``."""
    deg = tuple(deg)
    groups: dict[tuple, int] = {}
    for d in p.degrees:
        groups[d] = groups.get(d, 0) + 1
    # count sequences: multinomial over generator-degree classes
    keys = list(groups)
    total = 0

    def rec(i: int, remaining: tuple, letters: int, acc: int):
        nonlocal total
        if i == len(keys):
            if all(x == 0 for x in remaining):
                total += acc
            return
        d = keys[i]
        m = 0
        while True:
            rem = tuple(r - m * x for r, x in zip(remaining, d))
            if any(x < 0 for x in rem):
                break
            rec(i + 1, rem, letters + m, acc * comb(letters + m, m) * groups[d] ** m)
            m += 1
            if all(x == 0 for x in d):
                break

    rec(0, deg, 0, 1)
    return total


def _coeff_converter(p: QuadraticPresentation, prime: Optional[int]):
    if prime is None:
        return lambda c: c
    return lambda c: to_mod_p(c, prime)


class GradedQuotient:
    """Incremental normal-word bases of ``A_d`` for all ``d`` below a bound."""

    def __init__(self, p: QuadraticPresentation, prime: Optional[int] = None):
        self.p = p
        self.prime = prime
        conv = _coeff_converter(p, prime)
        self.rels = []
        for r in p.relation_dicts():
            items = [((u, v), conv(c)) for (u, v), c in r.items()]
            items = [(w, c) for w, c in items if c]
            if items:
                (u, v) = items[0][0]
                self.rels.append((_add_deg(p.degrees[u], p.degrees[v]), items))
        zero_deg = tuple(0 for _ in p.degrees[0])
        self.zero_deg = zero_deg
        # level data: basis columns (g, i) and echelon
        self.levels: dict[tuple, dict] = {zero_deg: {"basis": [None], "index": {None: 0}, "ech": None}}
        self._mul_cache: dict = {}

    def _new_echelon(self):
        return SparseEchelon() if self.prime is None else SparseEchelonModP(self.prime)

    _SHIFT = 1 << 32

    def level(self, d: tuple) -> dict:
        d = tuple(d)
        if d in self.levels:
            return self.levels[d]
        if any(x < 0 for x in d):
            raise ValueError("negative degree")
        p = self.p
        for g, dg in enumerate(p.degrees):
            prev = _sub_deg(d, dg)
            if prev is not None:
                self.level(prev)
        ech = self._new_echelon()
        S = self._SHIFT
        for rdeg, items in self.rels:
            base = _sub_deg(d, rdeg)
            if base is None:
                continue
            nb = len(self.level(base)["basis"])
            for bi in range(nb):
                vec: dict = {}
                for (u, v), c in items:
                    dv = _sub_deg(d, p.degrees[v])
                    for idx, m in self.mul(dv, bi, u).items():
                        key = v * S + idx
                        vec[key] = vec.get(key, 0) + c * m
                ech.add(vec)
        cols = []
        for g, dg in enumerate(p.degrees):
            prev = _sub_deg(d, dg)
            if prev is None:
                continue
            for i in range(len(self.levels[prev]["basis"])):
                key = g * S + i
                if key not in ech.pivots:
                    cols.append(key)
        data = {"basis": cols, "index": {k: n for n, k in enumerate(cols)}, "ech": ech}
        self.levels[d] = data
        return data

    def mul(self, d: tuple, bi: int, g: int) -> dict:
        """Normal form in ``A_d`` of (basis element ``bi`` of ``A_{d - deg g}``) * ``g``."""
        key = (d, bi, g)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        lv = self.level(d)
        one = 1 if self.prime is not None else Fraction(1)
        col = g * self._SHIFT + bi
        if lv["ech"] is None:
            raise ValueError("degree zero has no products")
        red = lv["ech"].reduce({col: one})
        out = {lv["index"][k]: c for k, c in red.items()}
        self._mul_cache[key] = out
        return out

    def dim(self, d: Sequence[int]) -> int:
        return len(self.level(tuple(d))["basis"])


def _check_cap(p: QuadraticPresentation, deg: Sequence[int], cap: Optional[int]) -> None:
    if cap is not None:
        n = word_count(p, deg)
        if n > cap:
            raise SizeCapExceeded(f"{n} words in degree {tuple(deg)} exceeds the cap {cap}")


def graded_dimension(p: QuadraticPresentation, deg: Sequence[int], method: str = "quotient",
                     prime: Optional[int] = None, cap: Optional[int] = DEFAULT_WORD_CAP,
                     engine: Optional[GradedQuotient] = None) -> int:
    """Dimension of the multidegree-``deg`` component of ``T(A_1)/(R)``.

    Exact over the coefficient field of ``p`` unless ``prime`` is given.
    """
    deg = tuple(deg)
    _check_cap(p, deg, cap)
    if method == "quotient":
        eng = engine if engine is not None else GradedQuotient(p, prime)
        return eng.dim(deg)
    if method == "words":
        return _dimension_by_words(p, deg, prime)
    raise ValueError(f"unknown method {method!r}")


def words_of_degree(p: QuadraticPresentation, deg: Sequence[int]) -> list[tuple]:
    deg = tuple(deg)
    out: list[tuple] = []

    def rec(prefix: tuple, remaining: tuple):
        if all(x == 0 for x in remaining):
            out.append(prefix)
            return
        for g, dg in enumerate(p.degrees):
            rem = _sub_deg(remaining, dg)
            if rem is not None and any(dg):
                rec(prefix + (g,), rem)

    rec((), deg)
    return out


def _dimension_by_words(p: QuadraticPresentation, deg: tuple, prime: Optional[int]) -> int:
    words = words_of_degree(p, deg)
    index = {w: i for i, w in enumerate(words)}
    conv = _coeff_converter(p, prime)
    ech = SparseEchelon() if prime is None else SparseEchelonModP(prime)
    rels = [[(w, conv(c)) for w, c in r.items()] for r in p.relation_dicts()]
    rels = [[(w, c) for w, c in r if c] for r in rels]
    rels = [r for r in rels if r]
    for w in words:
        L = len(w)
        for pos in range(L - 1):
            # the insertion site covers letters pos, pos+1 of w
            for r in rels:
                if (w[pos], w[pos + 1]) != r[0][0]:
                    continue
                vec = {}
                for (u, v), c in r:
                    key = index[w[:pos] + (u, v) + w[pos + 2:]]
                    vec[key] = vec.get(key, 0) + c
                ech.add(vec)
    return len(words) - ech.rank


def graded_dimension_mod_primes(p: QuadraticPresentation, deg: Sequence[int],
                                primes: Optional[Sequence[int]] = None,
                                cap: Optional[int] = DEFAULT_WORD_CAP,
                                engines: Optional[dict] = None) -> dict:
    """Dimension over two prime fields with unlucky-prime reconciliation.

    Reduction mod p can only enlarge a graded component, so when the two
    primes disagree the smaller value is tested against fresh primes until
    two of them agree on the minimum.
    """
    primes = list(primes or word_primes())
    results = {}
    for q in primes[:2]:
        eng = engines.get(q) if engines is not None else None
        results[q] = graded_dimension(p, deg, prime=q, cap=cap, engine=eng)
    tried = list(results)
    fresh = min(tried)
    while len(set(results.values())) > 1 or len(results) < 2:
        lo = min(results.values())
        if list(results.values()).count(lo) >= 2:
            break
        fresh = prev_prime(fresh)
        results[fresh] = graded_dimension(p, deg, prime=fresh, cap=cap)
        if len(results) > 8:
            break
    lo = min(results.values())
    return {"dimension": lo, "per_prime": results, "reconciled": len(results) > 2,
            "agree": list(results.values()).count(lo) >= 2}


@dataclass
class DimensionTable:
    rows: dict = field(default_factory=dict)  # (k, l) -> (computed, expected)
    mode: str = "QQ"

    @property
    def passed(self) -> bool:
        return all(c == e for c, e in self.rows.values())

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "pass": self.passed,
            "table": [{"k": str(k), "l": str(l), "computed": str(c), "expected": str(e)}
                      for (k, l), (c, e) in sorted(self.rows.items())],
        }

    def to_text(self) -> str:
        lines = [f"{'(k,l)':>8} {'dim':>6} {'d(k,l)':>7}  ok"]
        for (k, l), (c, e) in sorted(self.rows.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            lines.append(f"{f'({k},{l})':>8} {c:>6} {e:>7}  {'yes' if c == e else 'NO'}")
        return "\n".join(lines)


def dimension_table(p: QuadraticPresentation, max_total: int, prime: Optional[int] = None,
                    cap: Optional[int] = DEFAULT_WORD_CAP) -> DimensionTable:
    """All ``(k, l)`` with ``k + l <= max_total``; with ``prime`` the second
    configured prime is run too (see :func:`graded_dimension_mod_primes`)."""
    table = DimensionTable(mode="QQ" if prime is None else "GF(p) x2")
    if prime is None:
        eng = GradedQuotient(p)
        for n in range(max_total + 1):
            for k in range(n + 1):
                deg = (k, n - k)
                table.rows[deg] = (graded_dimension(p, deg, cap=cap, engine=eng), expected_dimension(deg))
        return table
    primes = list(word_primes())
    engines = {q: GradedQuotient(p, q) for q in primes[:2]}
    for n in range(max_total + 1):
        for k in range(n + 1):
            deg = (k, n - k)
            res = graded_dimension_mod_primes(p, deg, primes, cap=cap, engines=engines)
            table.rows[deg] = (res["dimension"], expected_dimension(deg))
    return table


def total_degree_dims(p: QuadraticPresentation, N: int, prime: Optional[int] = None,
                      cap: Optional[int] = DEFAULT_WORD_CAP) -> list[int]:
    """Dimensions of the total-degree components 0..N (any number of grading
    components; the total degree of a multidegree is the sum of its entries)."""
    eng = GradedQuotient(p, prime)
    m = len(p.degrees[0])
    out = []
    for n in range(N + 1):
        tot = 0
        for deg in _compositions(n, m):
            if _reachable(p, deg):
                _check_cap(p, deg, cap)
                tot += eng.dim(deg)
        out.append(tot)
    return out


def _compositions(n: int, m: int):
    if m == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, m - 1):
            yield (k,) + rest


def _reachable(p: QuadraticPresentation, deg: tuple) -> bool:
    return word_count(p, deg) > 0
