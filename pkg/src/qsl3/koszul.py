"""Distributivity of relation-subspace lattices and the quadratic dual.

In tensor degree ``k`` the subspaces ``R_i = A1^(i-1) R A1^(k-i-1)`` of the
``n^k``-dimensional word space generate a lattice under ``+`` and ``∩``.
The algebra is Koszul iff every such lattice is distributive; here the
lattice is built explicitly up to a cap and tested triple by triple.

Word space coordinates split into blocks (connected components of the
supports of the generating basis vectors).  Every generator is a direct sum
of its block parts, so sums and intersections are computed blockwise and
the lattice is distributive iff each block lattice is.  Block linear algebra
runs over a prime field (numpy ``int64`` with primes below ``2**31``) or
exactly over the rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .exactmath.matrix import rref as exact_rref
from .exactmath.scalars import RatFunc, to_mod_p, word_primes
from .shape import QuadraticPresentation, total_degree_dims
from .twist import TwistingSystem, twist_presentation, v_map

DEFAULT_CAP = 2000


class NonQuadratic(ValueError):
    pass


# --------------------------------------------------------------------------
# linear algebra backends (row spaces in reduced echelon form)


class ModPBackend:
    """Row spaces over GF(p); matrices are ``int64`` arrays in RREF."""

    def __init__(self, p: int):
        if p >= 2 ** 31:
            raise ValueError("numpy backend needs p < 2**31 so products fit in int64")
        self.p = p
        self.name = f"GF({p})"

    def convert(self, c: Any) -> int:
        return to_mod_p(c, self.p)

    def matrix(self, rows: list[list[int]], n: int) -> np.ndarray:
        if not rows:
            return np.zeros((0, n), dtype=np.int64)
        return np.array(rows, dtype=np.int64) % self.p

    def rref(self, M: np.ndarray) -> np.ndarray:
        p = self.p
        M = M.copy() % p
        rows, cols = M.shape
        r = 0
        c0 = 0
        while r < rows and c0 < cols:
            live = np.flatnonzero(M[r:, c0:].any(axis=0))
            if live.size == 0:
                break
            c = c0 + int(live[0])
            piv = r + int(np.flatnonzero(M[r:, c])[0])
            if piv != r:
                M[[r, piv]] = M[[piv, r]]
            inv = pow(int(M[r, c]), p - 2, p)
            M[r] = (M[r] * inv) % p
            others = np.flatnonzero(M[:, c])
            others = others[others != r]
            if others.size:
                f = M[others, c].reshape(-1, 1)
                M[others] = (M[others] - f * M[r]) % p
            r += 1
            c0 = c + 1
        return M[:r]

    def zero(self, n: int) -> np.ndarray:
        return np.zeros((0, n), dtype=np.int64)

    def full(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def key(self, M: np.ndarray) -> bytes:
        return M.shape[0].to_bytes(4, "little") + M.tobytes()

    def dim(self, M: np.ndarray) -> int:
        return int(M.shape[0])

    def join(self, U: np.ndarray, W: np.ndarray) -> np.ndarray:
        n = U.shape[1]
        if U.shape[0] == 0 or W.shape[0] == n:
            return W
        if W.shape[0] == 0 or U.shape[0] == n:
            return U
        return self.rref(np.vstack([U, W]))

    def meet(self, U: np.ndarray, W: np.ndarray) -> np.ndarray:
        """Zassenhaus: RREF of [[U, U], [W, 0]]; rows with zero left half
        span the intersection."""
        n = U.shape[1]
        if U.shape[0] == 0 or W.shape[0] == n:
            return U
        if W.shape[0] == 0 or U.shape[0] == n:
            return W
        top = np.hstack([U, U])
        bottom = np.hstack([W, np.zeros_like(W)])
        R = self.rref(np.vstack([top, bottom]))
        rest = R[~R[:, :n].any(axis=1)][:, n:]
        return self.rref(rest)

    def rows(self, M: np.ndarray) -> list[dict]:
        return [{int(j): int(M[i, j]) for j in np.nonzero(M[i])[0]} for i in range(M.shape[0])]

    def from_rows(self, rows: list[dict], n: int) -> np.ndarray:
        M = np.zeros((len(rows), n), dtype=np.int64)
        for i, r in enumerate(rows):
            for j, c in r.items():
                M[i, j] = c % self.p
        return M


class RationalBackend:
    """Row spaces over QQ; matrices are tuples of Fraction row tuples."""

    name = "QQ"

    def convert(self, c: Any) -> Fraction:
        if isinstance(c, RatFunc):
            raise TypeError("specialize t before building lattices")
        return Fraction(c)

    def matrix(self, rows, n: int):
        return tuple(tuple(Fraction(x) for x in r) for r in rows)

    def rref(self, M):
        if not M:
            return ()
        red, _ = exact_rref([list(r) for r in M])
        return tuple(tuple(r) for r in red)

    def zero(self, n: int):
        return ()

    def full(self, n: int):
        return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))

    def key(self, M):
        return M

    def dim(self, M) -> int:
        return len(M)

    def join(self, U, W):
        return self.rref(tuple(U) + tuple(W))

    def meet(self, U, W):
        if not U or not W:
            return ()
        n = len(U[0])
        zero = (Fraction(0),) * n
        R = self.rref(tuple(u + u for u in U) + tuple(w + zero for w in W))
        rest = tuple(r[n:] for r in R if not any(r[:n]))
        return self.rref(rest)

    def rows(self, M) -> list[dict]:
        return [{j: c for j, c in enumerate(r) if c} for r in M]

    def from_rows(self, rows: list[dict], n: int):
        return tuple(tuple(r.get(j, Fraction(0)) for j in range(n)) for r in rows)


# --------------------------------------------------------------------------
# generating subspaces


def word_index(word: Sequence[int], n: int) -> int:
    i = 0
    for g in word:
        i = i * n + g
    return i


def index_word(i: int, n: int, k: int) -> tuple:
    out = []
    for _ in range(k):
        i, r = divmod(i, n)
        out.append(r)
    return tuple(reversed(out))


def generator_vectors(p: QuadraticPresentation, k: int, i: int) -> list[dict]:
    """Spanning vectors of ``R_i`` (``1 <= i <= k-1``) as ``{word index: coeff}``."""
    n = p.n
    out = []
    for r in p.relation_dicts():
        for pre in itertools.product(range(n), repeat=i - 1):
            for suf in itertools.product(range(n), repeat=k - i - 1):
                vec = {}
                for (a, b), c in r.items():
                    vec[word_index(pre + (a, b) + suf, n)] = c
                out.append(vec)
    return out


def _blocks(n_total: int, vectors: list[list[dict]]) -> list[list[int]]:
    parent = list(range(n_total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for vecs in vectors:
        for v in vecs:
            keys = list(v)
            r0 = find(keys[0])
            for k in keys[1:]:
                rk = find(k)
                if rk != r0:
                    parent[rk] = r0
    groups: dict = {}
    for x in range(n_total):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values(), key=lambda g: g[0])


# --------------------------------------------------------------------------
# lattices


class BlockLattice:
    """Closure of a few subspaces of one coordinate block under + and ∩."""

    def __init__(self, backend, n: int):
        self.backend = backend
        self.n = n
        self.members: list = []
        self.keys: dict = {}
        self.join_t: dict = {}
        self.meet_t: dict = {}

    def add(self, M) -> int:
        k = self.backend.key(M)
        if k not in self.keys:
            self.keys[k] = len(self.members)
            self.members.append(M)
        return self.keys[k]

    def join(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if (i, j) not in self.join_t:
            self.join_t[(i, j)] = self.add(self.backend.join(self.members[i], self.members[j]))
        return self.join_t[(i, j)]

    def meet(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if (i, j) not in self.meet_t:
            self.meet_t[(i, j)] = self.add(self.backend.meet(self.members[i], self.members[j]))
        return self.meet_t[(i, j)]

    def close(self, cap: int) -> bool:
        done = 0
        while done < len(self.members):
            j = done
            for i in range(j + 1):
                self.join(i, j)
                self.meet(i, j)
                if len(self.members) > cap:
                    return False
            done += 1
        return True

    def dims(self) -> list[int]:
        return [self.backend.dim(M) for M in self.members]


def _triple_failure(n: int, join: Callable, meet: Callable) -> Optional[tuple]:
    for x in range(n):
        for y in range(n):
            for z in range(y, n):
                if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)):
                    return (x, y, z)
    return None


@dataclass
class SubspaceLattice:
    """The lattice generated by ``R_1, ..., R_{k-1}`` inside ``A1^k``.

    ``closure`` holds global members as tuples of block-member indices;
    ``generators`` indexes the generating subspaces in ``closure``.
    """

    k: int
    ambient_dim: int
    backend: Any
    blocks: list
    block_lattices: list
    closure: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    zero_index: int = 0
    full_index: int = 0
    closed: bool = False
    cap: int = DEFAULT_CAP
    join_t: dict = field(default_factory=dict)
    meet_t: dict = field(default_factory=dict)

    def member_dim(self, m: int) -> int:
        return sum(bl.backend.dim(bl.members[i]) for bl, i in zip(self.block_lattices, self.closure[m]))

    def dims(self) -> list[int]:
        return [self.member_dim(m) for m in range(len(self.closure))]

    def member_rows(self, m: int) -> list[dict]:
        """Reduced basis of a member in global coordinates (the union of the
        block echelon forms is the global reduced echelon form)."""
        out = []
        for block, bl, i in zip(self.blocks, self.block_lattices, self.closure[m]):
            for r in bl.backend.rows(bl.members[i]):
                out.append({block[j]: c for j, c in r.items()})
        out.sort(key=lambda r: min(r))
        return out

    def member_key(self, m: int) -> tuple:
        return tuple(tuple(sorted(r.items())) for r in self.member_rows(m))

    def join(self, a: int, b: int) -> int:
        return self._op(a, b, self.join_t, "join")

    def meet(self, a: int, b: int) -> int:
        return self._op(a, b, self.meet_t, "meet")

    def _op(self, a, b, table, name) -> int:
        if a > b:
            a, b = b, a
        if (a, b) not in table:
            tup = tuple(getattr(bl, name)(x, y) for bl, x, y in zip(self.block_lattices, self.closure[a], self.closure[b]))
            table[(a, b)] = self._add(tup)
        return table[(a, b)]

    def _add(self, tup: tuple) -> int:
        if not hasattr(self, "_index"):
            self._index = {}
        if tup not in self._index:
            self._index[tup] = len(self.closure)
            self.closure.append(tup)
        return self._index[tup]


@dataclass
class DistributivityVerdict:
    k: int
    status: str  # "Distributive" | "NotDistributive" | "Inconclusive"
    field: str
    lattice_size: int
    member_dims: list
    block_count: int
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == "Distributive"

    def to_json(self) -> dict:
        return {
            "k": str(self.k),
            "verdict": self.status,
            "field": self.field,
            "lattice_size": str(self.lattice_size),
            "member_dims": [str(d) for d in sorted(self.member_dims)],
            "blocks": str(self.block_count),
            "witness": self.witness,
        }


def _check_quadratic(p: QuadraticPresentation) -> None:
    for r in p.relation_dicts():
        for w in r:
            if len(w) != 2:
                raise NonQuadratic("relations must be quadratic")


_LATTICE_CACHE: dict = {}


def build_lattice(p: QuadraticPresentation, k: int, backend, cap: int = DEFAULT_CAP) -> SubspaceLattice:
    """Lattice generated by ``R_1, ..., R_{k-1}`` (memoized per presentation,
    degree, field and cap)."""
    key = (p.generators, p.degrees, p.relations, k, backend.name, cap)
    if key not in _LATTICE_CACHE:
        _LATTICE_CACHE[key] = _build_lattice(p, k, backend, cap)
    return _LATTICE_CACHE[key]


def clear_cache() -> None:
    _LATTICE_CACHE.clear()


def _build_lattice(p: QuadraticPresentation, k: int, backend, cap: int) -> SubspaceLattice:
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_quadratic(p)
    n = p.n
    total = n ** k
    gens = [generator_vectors(p, k, i) for i in range(1, k)]
    conv = [[{j: backend.convert(c) for j, c in v.items()} for v in g] for g in gens]
    conv = [[{j: c for j, c in v.items() if c} for v in g] for g in conv]
    conv = [[v for v in g if v] for g in conv]
    blocks = _blocks(total, conv)
    pos = {}
    for b, block in enumerate(blocks):
        for j, x in enumerate(block):
            pos[x] = (b, j)
    lattices = [BlockLattice(backend, len(block)) for block in blocks]
    zero_t = tuple(bl.add(backend.zero(bl.n)) for bl in lattices)
    full_t = tuple(bl.add(backend.full(bl.n)) for bl in lattices)
    gen_t = []
    for g in conv:
        parts: list[list[dict]] = [[] for _ in blocks]
        for v in g:
            b = pos[next(iter(v))][0]
            parts[b].append({pos[x][1]: c for x, c in v.items()})
        tup = []
        for bl, rows in zip(lattices, parts):
            M = backend.rref(backend.from_rows(rows, bl.n)) if rows else backend.zero(bl.n)
            tup.append(bl.add(M))
        gen_t.append(tuple(tup))
    lat = SubspaceLattice(k, total, backend, blocks, lattices, cap=cap)
    lat.zero_index = lat._add(zero_t)
    lat.full_index = lat._add(full_t)
    lat.generators = [lat._add(t) for t in gen_t]
    # close each block, then the global sublattice of the product
    ok = all(bl.close(cap) for bl in lattices)
    if ok:
        done = 0
        while done < len(lat.closure):
            j = done
            for i in range(j + 1):
                lat.join(i, j)
                lat.meet(i, j)
                if len(lat.closure) > cap:
                    ok = False
                    break
            if not ok:
                break
            done += 1
    lat.closed = ok
    return lat


def distributivity_check(p: QuadraticPresentation, k: int, cap: int = DEFAULT_CAP, prime: Optional[int] = None,
                         exact: bool = False) -> DistributivityVerdict:
    """Closure of the generating subspaces plus the triple test.

    Runs over GF(prime) (default: the first configured word-size prime) or
    over QQ with ``exact=True``.
    """
    backend = RationalBackend() if exact else ModPBackend(prime or word_primes()[0])
    lat = build_lattice(p, k, backend, cap)
    if not lat.closed:
        return DistributivityVerdict(k, "Inconclusive", backend.name, len(lat.closure), [], len(lat.blocks),
                                     {"reason": f"closure exceeded cap {cap}"})
    for b, bl in enumerate(lat.block_lattices):
        bad = _triple_failure(len(bl.members), bl.join, bl.meet)
        if bad is not None:
            x, y, z = bad
            dims = bl.dims()
            return DistributivityVerdict(k, "NotDistributive", backend.name, len(lat.closure), lat.dims(),
                                         len(lat.blocks),
                                         {"block": str(b), "dims": [str(dims[x]), str(dims[y]), str(dims[z])]})
    bad = _triple_failure(len(lat.closure), lat.join, lat.meet)
    if bad is not None:
        dims = lat.dims()
        return DistributivityVerdict(k, "NotDistributive", backend.name, len(lat.closure), dims, len(lat.blocks),
                                     {"dims": [str(dims[i]) for i in bad]})
    return DistributivityVerdict(k, "Distributive", backend.name, len(lat.closure), lat.dims(), len(lat.blocks))


def distributivity_two_primes(p: QuadraticPresentation, k: int, cap: int = DEFAULT_CAP,
                              primes: Optional[Sequence[int]] = None) -> dict:
    """Verdicts over two prime fields; they must agree to count."""
    primes = list(primes or word_primes())[:2]
    verdicts = [distributivity_check(p, k, cap, prime=q) for q in primes]
    statuses = {v.status for v in verdicts}
    status = verdicts[0].status if len(statuses) == 1 else "Inconclusive"
    return {"k": k, "status": status, "verdicts": verdicts}


# --------------------------------------------------------------------------
# twist transport


def transport_check(p: QuadraticPresentation, ts: TwistingSystem, k: int, prime: Optional[int] = None,
                    cap: int = DEFAULT_CAP) -> dict:
    """``v^{-1}`` carries the lattice of ``R`` onto the lattice of ``v^{-1}(R)``
    bijectively with equal member dimensions."""
    backend = ModPBackend(prime or word_primes()[0])
    base = build_lattice(p, k, backend, cap)
    twisted = build_lattice(twist_presentation(p, ts), k, backend, cap)
    if not (base.closed and twisted.closed):
        return {"k": k, "pass": False, "reason": "closure exceeded cap"}
    vinv = v_map(k, ts, inverse=True)
    n = p.n
    target = {twisted.member_key(m): twisted.member_dim(m) for m in range(len(twisted.closure))}
    images = set()
    ok = True
    for m in range(len(base.closure)):
        rows = []
        for r in base.member_rows(m):
            img: dict = {}
            for j, c in r.items():
                for w2, x in vinv.images[index_word(j, n, k)].items():
                    jj = word_index(w2, n)
                    img[jj] = (img.get(jj, 0) + c * backend.convert(x)) % backend.p
            rows.append({j: c for j, c in img.items() if c})
        key = _global_key(backend, rows, n ** k, twisted.blocks)
        images.add(key)
        if target.get(key) != base.member_dim(m):
            ok = False
    bijective = len(images) == len(base.closure) == len(twisted.closure)
    return {"k": k, "pass": ok and bijective, "members": len(base.closure),
            "twisted_members": len(twisted.closure)}


def _global_key(backend, rows: list[dict], total: int, blocks: list[list[int]]) -> tuple:
    """Canonical reduced basis of a span that splits along ``blocks``."""
    pos = {}
    for b, block in enumerate(blocks):
        for j, x in enumerate(block):
            pos[x] = (b, j)
    parts: list[list[dict]] = [[] for _ in blocks]
    for r in rows:
        bs = {pos[x][0] for x in r}
        if len(bs) != 1:
            # not block-split: fall back to one dense reduction on the union
            return ("unsplit", len(rows))
        b = bs.pop()
        parts[b].append({pos[x][1]: c for x, c in r.items()})
    out = []
    for block, part in zip(blocks, parts):
        if not part:
            continue
        M = backend.rref(backend.from_rows(part, len(block)))
        for r in backend.rows(M):
            out.append({block[j]: c for j, c in r.items()})
    out.sort(key=lambda r: min(r))
    return tuple(tuple(sorted(r.items())) for r in out)


# --------------------------------------------------------------------------
# quadratic dual and the Hilbert series test


def quadratic_dual(p: QuadraticPresentation) -> QuadraticPresentation:
    """Relations ``R^⊥`` for the pairing ``<g_i* g_j*, g_k g_l> = δ_ik δ_jl``;
    dual generators keep the original names."""
    _check_quadratic(p)
    n = p.n
    by_deg: dict = {}
    for u in range(n):
        for v in range(n):
            d = tuple(a + b for a, b in zip(p.degrees[u], p.degrees[v]))
            by_deg.setdefault(d, []).append((u, v))
    strata = p.strata()
    zero = Fraction(0)
    for r in p.relation_dicts():
        for c in r.values():
            zero = c - c
            break
        break
    one = zero + 1
    dual = []
    for d, words in sorted(by_deg.items()):
        rels = strata.get(d, [])
        if not rels:
            dual.extend({w: one} for w in words)
            continue
        col = {w: i for i, w in enumerate(words)}
        mat = [[zero] * len(words) for _ in rels]
        for row, r in zip(mat, rels):
            for w, c in r.items():
                row[col[w]] = c
        red, pivots = exact_rref(mat)
        free = [j for j in range(len(words)) if j not in pivots]
        for f in free:
            vec = {words[f]: one}
            for row, pc in zip(red, pivots):
                if row[f]:
                    vec[words[pc]] = -row[f]
            dual.append(vec)
    return QuadraticPresentation.from_relations(p.generators, p.degrees, dual, label=f"dual[{p.label}]")


@dataclass
class SeriesReport:
    passed: bool
    dims: list
    dual_dims: list
    alternating_sums: list

    def to_json(self) -> dict:
        return {"pass": self.passed, "dims": [str(x) for x in self.dims],
                "dual_dims": [str(x) for x in self.dual_dims],
                "alternating_sums": [str(x) for x in self.alternating_sums]}


def dual_series_report(p: QuadraticPresentation, N: int, prime: Optional[int] = None) -> SeriesReport:
    dims = total_degree_dims(p, N, prime=prime)
    ddims = total_degree_dims(quadratic_dual(p), N, prime=prime)
    sums = [sum((-1) ** i * dims[i] * ddims[n - i] for i in range(n + 1)) for n in range(1, N + 1)]
    return SeriesReport(all(s == 0 for s in sums), dims, ddims, sums)


def dual_series_test(p: QuadraticPresentation, N: int, prime: Optional[int] = None) -> bool:
    """``sum_i (-1)^i dim A_i dim A!_{n-i} = 0`` for ``1 <= n <= N``."""
    return dual_series_report(p, N, prime).passed
