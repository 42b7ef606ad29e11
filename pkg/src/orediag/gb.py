"""Left Groebner bases of submodules of R*^q with cofactor tracking.

Module elements are handled internally as dictionaries keyed by
``(pos, b, alpha)`` (position, power of the Ore variable, base exponent).
The order is position-over-term: a larger position wins, then the power of
the Ore variable, then the base exponents (graded reverse lex by default).

Cofactors come from the extended matrix ``[Id | M]``: the identity block sits
in positions ``0..s-1`` and the input block in the dominant positions
``s..s+q-1``, so a basis element whose leading position is in the identity
block is a syzygy.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import IterationCapExceeded, NonReducedBasis, SpecError
from .ore import AlgebraSpec, OrePoly

Mono = Tuple[int, int, tuple]


class ModuleOrder:
    """Position-over-term order eliminating the Ore variable.

    ``tiebreak`` is ``"grevlex"`` (first listed variable largest) or ``"lex"``.
    """

    def __init__(self, rank: int, tiebreak: str = "grevlex"):
        if tiebreak not in ("grevlex", "lex"):
            raise SpecError(f"unknown tie-break '{tiebreak}'")
        self.rank = rank
        self.tiebreak = tiebreak
        if tiebreak == "grevlex":
            self.heap_key = _heap_key_grevlex
            self.key = _key_grevlex
        else:
            self.heap_key = _heap_key_lex
            self.key = _key_lex

    def term_key(self, k):
        """Sort key of a scalar monomial ``(b, alpha)``."""
        return self.key((0,) + tuple(k))

    def with_rank(self, rank):
        return ModuleOrder(rank, self.tiebreak)

    def compare(self, m1: Mono, m2: Mono) -> int:
        if m1[0] >= self.rank or m2[0] >= self.rank or len(m1[2]) != len(m2[2]):
            raise SpecError("module monomials do not match the order's rank")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def __repr__(self):
        return f"ModuleOrder(rank={self.rank}, {self.tiebreak})"


def _key_grevlex(m):
    pos, b, a = m
    return (pos, b, sum(a)) + tuple(-e for e in reversed(a))


def _heap_key_grevlex(m):
    pos, b, a = m
    return (-pos, -b, -sum(a)) + tuple(reversed(a))


def _key_lex(m):
    pos, b, a = m
    return (pos, b) + tuple(a)


def _heap_key_lex(m):
    pos, b, a = m
    return (-pos, -b) + tuple(-e for e in a)


# ---------------------------------------------------------------------------
# vector kernels


def vec_from_polys(polys: Sequence[OrePoly], offset: int = 0) -> dict:
    out = {}
    for j, p in enumerate(polys):
        for (b, a), c in p.terms.items():
            out[(j + offset, b, a)] = c
    return out


def vec_to_polys(v: dict, spec: AlgebraSpec, lo: int, hi: int) -> List[OrePoly]:
    parts: List[dict] = [{} for _ in range(hi - lo)]
    for (pos, b, a), c in v.items():
        if lo <= pos < hi:
            parts[pos - lo][(b, a)] = c
    return [OrePoly._raw(t, spec) for t in parts]


def vec_apply_d(spec: AlgebraSpec, v: dict) -> dict:
    """``d * v`` componentwise."""
    out: dict = {}
    sid, dzero = spec.sigma_is_identity, spec.delta_is_zero
    get = out.get
    for (pos, b, a), c in v.items():
        if sid:
            k = (pos, b + 1, a)
            w = get(k)
            if w is None:
                out[k] = c
            else:
                w = w + c
                if w:
                    out[k] = w
                else:
                    del out[k]
        else:
            for a2, c2 in spec.sigma_mono(a).items():
                k = (pos, b + 1, a2)
                w = get(k)
                w = c * c2 if w is None else w + c * c2
                if w:
                    out[k] = w
                else:
                    del out[k]
        if not dzero:
            for a2, c2 in spec.delta_mono(a).items():
                k = (pos, b, a2)
                w = get(k)
                w = c * c2 if w is None else w + c * c2
                if w:
                    out[k] = w
                else:
                    del out[k]
    return out


def vec_lm(v: dict, order: ModuleOrder) -> Mono:
    return max(v, key=order.key)


class _Elem:
    """Basis element with a cache of ``d^k * g``."""

    __slots__ = ("v", "lm", "lc", "pows", "spec")

    def __init__(self, v, order, spec):
        self.v = v
        self.lm = vec_lm(v, order)
        self.lc = v[self.lm]
        self.pows = [v]
        self.spec = spec

    def dpow(self, k):
        pows = self.pows
        while len(pows) <= k:
            pows.append(vec_apply_d(self.spec, pows[-1]))
        return pows[k]


def _divides(lm_g: Mono, m: Mono) -> bool:
    return lm_g[0] == m[0] and lm_g[1] <= m[1] and all(x <= y for x, y in zip(lm_g[2], m[2]))


class _Reducer:
    """Division by a growing list of basis elements."""

    def __init__(self, spec, order):
        self.spec = spec
        self.order = order
        self.elems: List[_Elem] = []
        self.by_pos: Dict[int, List[int]] = {}

    def add(self, v) -> int:
        e = _Elem(v, self.order, self.spec)
        self.elems.append(e)
        idx = len(self.elems) - 1
        self.by_pos.setdefault(e.lm[0], []).append(idx)
        return idx

    def divisor(self, m, skip=None) -> Optional[int]:
        for idx in self.by_pos.get(m[0], ()):
            if idx != skip and _divides(self.elems[idx].lm, m):
                return idx
        return None

    def multiple(self, idx, m):
        """``(terms of d^k g, lc, shift)`` with leading monomial ``m``."""
        g = self.elems[idx]
        k = m[1] - g.lm[1]
        gamma = tuple(x - y for x, y in zip(m[2], g.lm[2]))
        p = g.dpow(k)
        return p, p[(g.lm[0], m[1], g.lm[2])], gamma

    def reduce(self, f: dict, skip=None, track=None, full=True) -> dict:
        """Normal form of ``f``; always reduces the largest reducible monomial first.

        ``track`` (a dict ``idx -> {(k, gamma): c}``) receives the multipliers.
        """
        f = dict(f)
        hk = self.order.heap_key
        heap = [(hk(m), m) for m in f]
        heapq.heapify(heap)
        done: dict = {}
        seen = set(f)
        while heap:
            _, m = heapq.heappop(heap)
            seen.discard(m)
            c = f.get(m)
            if c is None:
                continue
            idx = self.divisor(m, skip)
            if idx is None:
                done[m] = f.pop(m)
                if not full:
                    done.update(f)
                    return done
                continue
            p, lcp, gamma = self.multiple(idx, m)
            scale = -c / lcp
            if track is not None:
                slot = track.setdefault(idx, {})
                key = (m[1] - self.elems[idx].lm[1], gamma)
                w = slot.get(key)
                w = -scale if w is None else w - scale
                if w:
                    slot[key] = w
                else:
                    del slot[key]
            shift = any(gamma)
            get = f.get
            for (pos, b, a), cc in p.items():
                if shift:
                    a = tuple(x + y for x, y in zip(a, gamma))
                key = (pos, b, a)
                w = get(key)
                if w is None:
                    f[key] = cc * scale
                    if key not in seen:
                        seen.add(key)
                        heapq.heappush(heap, (hk(key), key))
                else:
                    w = w + cc * scale
                    if w:
                        f[key] = w
                    else:
                        del f[key]
            f.pop(m, None)
        return done


# ---------------------------------------------------------------------------
# public API


def _check_rows(rows):
    rows = [list(r) for r in rows]
    if not rows:
        raise SpecError("no rows given")
    q = len(rows[0])
    if any(len(r) != q for r in rows):
        raise SpecError("inconsistent ranks among rows")
    spec = rows[0][0].spec
    return rows, q, spec


def left_reduce(f: Sequence[OrePoly], G: Sequence[Sequence[OrePoly]], order: ModuleOrder = None):
    """Left normal form of ``f`` modulo ``G`` and the cofactor row.

    Returns ``(r, c)`` with ``r = f - sum c_k * G_k`` fully reduced.
    """
    spec = f[0].spec
    q = len(f)
    order = order or ModuleOrder(q)
    red = _Reducer(spec, order)
    for g in G:
        if len(g) != q:
            raise SpecError("inconsistent ranks")
        v = vec_from_polys(g)
        if not v:
            raise SpecError("zero divisor element")
        red.add(v)
    track: dict = {}
    r = red.reduce(vec_from_polys(f), track=track)
    cof = []
    for idx in range(len(G)):
        terms = {(k, gamma): c for (k, gamma), c in track.get(idx, {}).items()}
        cof.append(OrePoly._raw(terms, spec))
    return vec_to_polys(r, spec, 0, q), cof


@dataclass
class GBResult:
    """Reduced basis of the row module of ``M`` with cofactors and syzygies.

    ``gb[k] = sum_j cofactors[k][j] * rows[j]`` and ``syz * rows = 0``.
    ``extended`` keeps the full reduced basis of ``[Id | M]`` (ascending).
    """

    gb: List[List[OrePoly]]
    cofactors: List[List[OrePoly]]
    syzygies: List[List[OrePoly]]
    spec: AlgebraSpec
    order: ModuleOrder
    s: int
    q: int
    extended: List[dict] = field(repr=False, default_factory=list)
    zero_rows: List[int] = field(default_factory=list)
    pairs: int = 0

    def leading_positions(self):
        return [vec_lm(v, self.ext_order)[0] - self.s for v in self.extended if
                vec_lm(v, self.ext_order)[0] >= self.s]

    @property
    def ext_order(self):
        return self.order.with_rank(self.s + self.q)


def buchberger(vectors: List[dict], spec: AlgebraSpec, order: ModuleOrder, max_pairs=None):
    """Reduced left Groebner basis (list of dicts, ascending, monic) and pair count."""
    red = _Reducer(spec, order)
    one = spec.field.one
    pending: set = set()
    queue: list = []  # (key of lcm, pair); selection by smallest lcm, then index

    def lcm(i, j):
        a, b = red.elems[i].lm, red.elems[j].lm
        return (a[0], max(a[1], b[1]), tuple(max(x, y) for x, y in zip(a[2], b[2])))

    def add(v):
        idx = red.add(v)
        for j in range(idx):
            if red.elems[j].lm[0] == red.elems[idx].lm[0]:
                pending.add((j, idx))
                heapq.heappush(queue, (order.key(lcm(j, idx)), (j, idx)))
        return idx

    for v in vectors:
        if v:
            r = red.reduce(v)
            if r:
                lmr = vec_lm(r, order)
                r = {k: c / r[lmr] for k, c in r.items()}
                add(r)
    count = 0
    while queue:
        _, (i, j) = heapq.heappop(queue)
        pending.discard((i, j))
        L = lcm(i, j)
        if _chain_skip(i, j, L, red, pending):
            continue
        count += 1
        if max_pairs is not None and count > max_pairs:
            raise IterationCapExceeded(max_pairs, "Groebner basis pair processing")
        pi, lci, gi = red.multiple(i, L)
        pj, lcj, gj = red.multiple(j, L)
        s: dict = {}
        _acc(s, pi, one / lci, gi)
        _acc(s, pj, -one / lcj, gj)
        if not s:
            continue
        r = red.reduce(s)
        if r:
            lmr = vec_lm(r, order)
            inv = one / r[lmr]
            add({k: c * inv for k, c in r.items()})
    return _reduced(red, spec, order), count


def _chain_skip(i, j, L, red, pending):
    for k, e in enumerate(red.elems):
        if k in (i, j) or e.lm[0] != L[0]:
            continue
        if _divides(e.lm, L):
            a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                return True
    return False


def _acc(acc, p, scale, gamma):
    shift = any(gamma)
    for (pos, b, a), c in p.items():
        if shift:
            a = tuple(x + y for x, y in zip(a, gamma))
        k = (pos, b, a)
        w = acc.get(k)
        w = c * scale if w is None else w + c * scale
        if w:
            acc[k] = w
        else:
            del acc[k]


def _reduced(red: _Reducer, spec, order):
    elems = red.elems
    keep = []
    for i, e in enumerate(elems):
        dominated = False
        for j, h in enumerate(elems):
            if j == i:
                continue
            if _divides(h.lm, e.lm) and (h.lm != e.lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    final = _Reducer(spec, order)
    for i in keep:
        final.add(elems[i].v)
    out = []
    one = spec.field.one
    for n in range(len(keep)):
        r = final.reduce(final.elems[n].v, skip=n)
        lmr = vec_lm(r, order)
        inv = one / r[lmr]
        out.append({k: c * inv for k, c in r.items()})
    out.sort(key=lambda v: order.key(vec_lm(v, order)))
    return out


def groebner_extended(rows: Sequence[Sequence[OrePoly]], order: ModuleOrder = None,
                      max_pairs=None) -> GBResult:
    """Reduced Groebner basis of the left module spanned by ``rows``, with cofactors."""
    rows, q, spec = _check_rows(rows)
    s = len(rows)
    order = order or ModuleOrder(q)
    ext = order.with_rank(s + q)
    zero_rows = [i for i, r in enumerate(rows) if all(not e for e in r)]
    vectors = []
    for i, r in enumerate(rows):
        v = vec_from_polys(r, offset=s)
        v[(i, 0, (0,) * spec.nvars)] = spec.field.one
        vectors.append(v)
    basis, count = buchberger(vectors, spec, ext, max_pairs)
    gb, cof, syz = [], [], []
    for v in basis:
        lm = vec_lm(v, ext)
        if lm[0] >= s:
            gb.append(vec_to_polys(v, spec, s, s + q))
            cof.append(vec_to_polys(v, spec, 0, s))
        else:
            syz.append(vec_to_polys(v, spec, 0, s))
    return GBResult(gb, cof, syz, spec, order, s, q, basis, zero_rows, count)


def select_gstar(gbr: GBResult):
    """Order-minimal basis element per occupied leading position.

    Returns ``(rows, cofactor_rows, positions)`` where rows with a leading
    position in the input block come first (ascending position), followed by
    the syzygy rows (zero in the input block); ``positions`` holds the
    leading position of each selected row in the extended matrix.
    """
    ext = gbr.ext_order
    best: Dict[int, Tuple[tuple, dict]] = {}
    lms = []
    for v in gbr.extended:
        lm = vec_lm(v, ext)
        lms.append(lm)
        key = ext.key(lm)
        if lm[0] not in best or key < best[lm[0]][0]:
            best[lm[0]] = (key, v)
    for a, m1 in enumerate(lms):
        for b, v in enumerate(gbr.extended):
            if a != b and any(_divides(m1, m) for m in v):
                raise NonReducedBasis("basis element's leading monomial divides a monomial of another")
    s, q, spec = gbr.s, gbr.q, gbr.spec
    order_pos = sorted(p for p in best if p >= s) + sorted(p for p in best if p < s)
    rows, cofs = [], []
    for p in order_pos:
        v = best[p][1]
        rows.append(vec_to_polys(v, spec, s, s + q))
        cofs.append(vec_to_polys(v, spec, 0, s))
    return rows, cofs, order_pos
