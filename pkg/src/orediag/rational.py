"""The localized ring K(x)[d; sigma, delta] in one base variable.

Used as an independent baseline: Euclidean division on either side, right
gcd / least common left multiple, and a diagonalization that replaces the
Groebner step by Euclidean elimination over the principal ideal domain.
Univariate polynomial arithmetic is delegated to python-flint.
"""

from __future__ import annotations

import time
from typing import Sequence

import flint
from gmpy2 import mpq

from .coeff import BasePoly
from .diagonalize import DiagResult, RunStats, _mechanism
from .errors import IterationCapExceeded, OreError, SpecError, VerificationError, ZeroDenominator
from .matrix import OreFraction, OreMatrix
from .ore import AlgebraSpec, OrePoly

# ---------------------------------------------------------------------------
# univariate polynomials (flint backend)

_mod_ctx: dict = {}


def _ctx(field):
    """Constructor for univariate polynomials over ``field``."""
    p = getattr(field, "characteristic", 0)
    if not p:
        return _qq_poly
    c = _mod_ctx.get(p)
    if c is None:
        if p < 2 ** 63:
            c = _mod_ctx[p] = lambda cs, p=p: flint.nmod_poly([int(x) for x in cs], p)
        else:
            ctx = flint.fmpz_mod_poly_ctx(p)
            c = _mod_ctx[p] = lambda cs, ctx=ctx: ctx([int(x) for x in cs])
    return c


def _qq_poly(cs):
    return flint.fmpq_poly([flint.fmpq(int(c.numerator), int(c.denominator)) for c in cs])


def _poly(cs, field):
    if isinstance(cs, _POLY_TYPES):
        return cs
    if field.characteristic:
        cs = [c.v if hasattr(c, "v") else int(c) % field.characteristic for c in cs]
    else:
        cs = [field(c) for c in cs]
    return _ctx(field)(cs)


def _dense(p, field):
    """Coefficients of ``p`` as field elements, lowest degree first."""
    if field.characteristic:
        return [field(int(c)) for c in p.coeffs()]
    return [mpq(int(c.p), int(c.q)) for c in p.coeffs()]


def _lc(p):
    return p[p.degree()]


_POLY_TYPES = (flint.fmpq_poly, flint.nmod_poly, flint.fmpz_mod_poly)


# ---------------------------------------------------------------------------
# rational functions


def _normalize(num, den, field, reduce=True):
    """Cancel the gcd and make ``den`` monic."""
    if num.is_zero():
        return num, _ctx(field)([field.one])
    if reduce and den.degree() > 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
    lc = _lc(den)
    if lc != 1:
        inv = 1 / lc
        num, den = num * inv, den * inv
    return num, den


class RatFunc:
    """Reduced quotient ``num/den`` of univariate polynomials, ``den`` monic."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den=None, field=None, reduce=True):
        if field is None:
            field = _field_of(num, den)
        self.field = field
        num = _poly(num, field)
        den = _poly(den, field) if den is not None else _ctx(field)([field.one])
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        self.num, self.den = _normalize(num, den, field, reduce)

    @classmethod
    def const(cls, c, field):
        return cls([field(c)], None, field)

    @classmethod
    def from_base(cls, p: BasePoly):
        if p.nvars != 1:
            raise SpecError("rational functions need exactly one base variable")
        dense = [p.field.zero] * (p.degree(0) + 1) if p.terms else []
        for (k,), c in p.terms.items():
            dense[k] = c
        return cls(dense, None, p.field)

    def to_base_pair(self):
        f = self.field
        num = BasePoly({(k,): c for k, c in enumerate(_dense(self.num, f)) if c}, 1, f)
        den = BasePoly({(k,): c for k, c in enumerate(_dense(self.den, f)) if c}, 1, f)
        return num, den

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self):
        return self.den.degree() == 0

    def _new(self, num, den, reduce=True):
        r = RatFunc.__new__(RatFunc)
        r.field = self.field
        r.num, r.den = _normalize(num, den, self.field, reduce)
        return r

    def __add__(self, o):
        if self.den == o.den:
            return self._new(self.num + o.num, self.den)
        return self._new(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self):
        return self._new(-self.num, self.den, reduce=False)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if self.num.is_zero() or o.num.is_zero():
            return self._new(self.num * 0, self.den, reduce=False)
        if self.is_poly() and o.is_poly():
            return self._new(self.num * o.num, self.den, reduce=False)
        return self._new(self.num * o.num, self.den * o.den)

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self._new(self.den, self.num, reduce=False)

    def __truediv__(self, o):
        return self * o.inverse()

    def __eq__(self, o):
        return isinstance(o, RatFunc) and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def bits(self):
        f = self.field
        return max((f.bits(c) for c in _dense(self.num, f) + _dense(self.den, f)), default=0)

    def to_string(self, name="x"):
        num, den = self.to_base_pair()
        n = num.to_string([name])
        if self.is_poly():
            return n
        return f"({n})/({den.to_string([name])})"

    __repr__ = to_string


def _field_of(num, den):
    from .coeff import QQ, ModP, PrimeField
    for c in list(num or []) + list(den or []):
        if isinstance(c, ModP):
            return PrimeField(c.p)
    return QQ



# ---------------------------------------------------------------------------
# sigma and delta on rational functions


class _RatRing:
    """sigma, sigma^-1 and delta on K(x) for a one-variable algebra."""

    def __init__(self, spec: AlgebraSpec):
        if spec.nvars != 1:
            raise SpecError("the rational strategy needs exactly one base variable")
        self.spec = spec
        f = self.field = spec.field
        self.u, self.v = spec.endo.u[0], spec.endo.v[0]
        P = _ctx(f)
        self.dx = _poly(RatFunc.from_base(spec.deriv.images[0]).num, f) if spec.deriv.images[0] else None
        self.id = self.u == 1 and not self.v
        self.sx = P([self.v, self.u])
        ui = f.one / self.u
        self.sx_inv = P([-self.v * ui, ui])
        self.one = RatFunc([f.one], None, f)
        self.zero = RatFunc([], None, f)

    def sigma_poly(self, p):
        return p if self.id else p(self.sx)

    def sigma(self, r: RatFunc) -> RatFunc:
        if self.id:
            return r
        return r._new(r.num(self.sx), r.den(self.sx))

    def sigma_inv(self, r: RatFunc) -> RatFunc:
        if self.id:
            return r
        return r._new(r.num(self.sx_inv), r.den(self.sx_inv))

    def delta_poly(self, p):
        """delta on a polynomial via delta(x^k) = sigma(x) delta(x^(k-1)) + delta(x) x^(k-1)."""
        if self.dx is None or p.is_zero():
            return p * 0
        P = _ctx(self.field)
        out = p * 0
        dk = p * 0  # delta(x^k)
        xk = P([self.field.one])  # x^(k-1) while building
        x = P([self.field.zero, self.field.one])
        for k in range(1, p.degree() + 1):
            dk = self.sx * dk + self.dx * xk
            xk = xk * x
            c = p[k]
            if c:
                out = out + dk * c
        return out

    def delta(self, r: RatFunc) -> RatFunc:
        if self.dx is None or not r:
            return self.zero
        if r.is_poly():
            return r._new(self.delta_poly(r.num), r.den, reduce=False)
        p, q = r.num, r.den
        top = self.delta_poly(p) * q - self.delta_poly(q) * p
        return r._new(top, self.sigma_poly(q) * q)


def rat_sigma_delta(spec: AlgebraSpec, r: RatFunc):
    """``(sigma(r), delta(r))`` for a rational function in the single base variable."""
    ring = _RatRing(spec)
    return ring.sigma(r), ring.delta(r)


_rings: dict = {}


def _ring(spec) -> _RatRing:
    r = _rings.get(spec)
    if r is None:
        r = _rings[spec] = _RatRing(spec)
    return r


# ---------------------------------------------------------------------------
# operators with rational coefficients


class RatOrePoly:
    """``sum coeffs[i] * d^i`` with coefficients in K(x) (on the left)."""

    __slots__ = ("coeffs", "spec")

    def __init__(self, coeffs: Sequence[RatFunc], spec: AlgebraSpec):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.coeffs = c
        self.spec = spec

    @classmethod
    def from_ore(cls, f, spec=None):
        """From an :class:`OrePoly` or :class:`OreFraction` in a one-variable algebra."""
        if isinstance(f, OreFraction):
            inv = RatFunc.from_base(f.den).inverse()
            return cls([inv * c for c in cls.from_ore(f.num).coeffs], f.spec)
        spec = spec or f.spec
        if spec.nvars != 1:
            raise SpecError("the rational strategy needs exactly one base variable")
        deg = f.degree()
        if deg < 0:
            return cls([], spec)
        return cls([RatFunc.from_base(f.coefficient(b)) for b in range(deg + 1)], spec)

    @classmethod
    def const(cls, r: RatFunc, spec):
        return cls([r], spec)

    @classmethod
    def one(cls, spec):
        return cls([_ring(spec).one], spec)

    @classmethod
    def zero(cls, spec):
        return cls([], spec)

    @classmethod
    def x_power(cls, i, spec):
        f = spec.field
        return cls([RatFunc([f.zero] * i + [f.one], None, f)], spec)

    @classmethod
    def d_power(cls, i, spec):
        r = _ring(spec)
        return cls([r.zero] * i + [r.one], spec)

    def to_ore(self):
        """``OreFraction`` (or ``OrePoly`` when no denominator is needed)."""
        spec = self.spec
        f = spec.field
        den = _ctx(f)([f.one])
        for c in self.coeffs:
            if c.den.degree() > 0:
                den = den * c.den // den.gcd(c.den)
        terms = {}
        for b, c in enumerate(self.coeffs):
            scaled = c.num * (den // c.den)
            for k, v in enumerate(_dense(scaled, f)):
                if v:
                    terms[(b, (k,))] = v
        num = OrePoly._raw(terms, spec)
        if den.degree() == 0:
            return num * (f.one / _dense(den, f)[0])
        return OreFraction(BasePoly({(k,): c for k, c in enumerate(_dense(den, f)) if c}, 1, f), num)

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def lc(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def is_unit(self):
        return len(self.coeffs) == 1

    def __add__(self, o):
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return RatOrePoly(out, self.spec)

    def __neg__(self):
        return RatOrePoly([-c for c in self.coeffs], self.spec)

    def __sub__(self, o):
        return self + (-o)

    def left_scale(self, r: RatFunc):
        return RatOrePoly([r * c for c in self.coeffs], self.spec)

    def apply_d(self):
        """``d * self``."""
        ring = _ring(self.spec)
        c = self.coeffs
        if not c:
            return self
        out = [ring.zero] * (len(c) + 1)
        for i, a in enumerate(c):
            out[i + 1] = out[i + 1] + ring.sigma(a)
            if ring.dx is not None:
                out[i] = out[i] + ring.delta(a)
        return RatOrePoly(out, self.spec)

    def __mul__(self, o):
        if not isinstance(o, RatOrePoly):
            raise TypeError("multiply by a RatOrePoly")
        if not self.coeffs or not o.coeffs:
            return RatOrePoly([], self.spec)
        acc = RatOrePoly([], self.spec)
        p = o
        for i, c in enumerate(self.coeffs):
            if i:
                p = p.apply_d()
            if c:
                acc = acc + p.left_scale(c)
        return acc

    def __eq__(self, o):
        return isinstance(o, RatOrePoly) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def monic(self):
        return self.left_scale(self.lc().inverse())

    def bits(self):
        return max((c.bits() for c in self.coeffs), default=0)

    def nterms(self):
        return sum(sum(1 for a in c.num.coeffs() if a) for c in self.coeffs)

    def to_string(self):
        if not self.coeffs:
            return "0"
        name, op = self.spec.var_names[0], self.spec.op_name
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (op if i == 1 else f"{op}^{i}")
            cs = c.to_string(name)
            if not mono:
                parts.append(f"({cs})" if "+" in cs[1:] or "-" in cs[1:] else cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return "+".join(parts).replace("+-", "-")

    __repr__ = to_string


# ---------------------------------------------------------------------------
# Euclidean division, gcd and lclm


def right_divide(b: RatOrePoly, a: RatOrePoly):
    """``(q, r)`` with ``b = q*a + r`` and ``deg r < deg a``."""
    if not a:
        raise ZeroDivisionError("right division by zero")
    spec = a.spec
    ring = _ring(spec)
    n = a.degree()
    q = [ring.zero] * max(b.degree() - n + 1, 0) if b else []
    r = b
    lca = a.lc()
    sig_pows = {0: lca}
    while r and r.degree() >= n:
        k = r.degree() - n
        s = sig_pows.get(k)
        if s is None:
            s = lca
            for _ in range(k):
                s = ring.sigma(s)
            sig_pows[k] = s
        c = r.lc() / s
        q[k] = q[k] + c
        term = RatOrePoly([ring.zero] * k + [c], spec)
        r = r - term * a
        if r and r.degree() >= n + k:
            raise OreError("division failed to lower the degree")
    return RatOrePoly(q, spec), r


def left_divide(b: RatOrePoly, a: RatOrePoly):
    """``(q, r)`` with ``b = a*q + r`` and ``deg r < deg a``."""
    if not a:
        raise ZeroDivisionError("left division by zero")
    spec = a.spec
    ring = _ring(spec)
    n = a.degree()
    q = RatOrePoly([], spec)
    r = b
    inv_lca = a.lc().inverse()
    while r and r.degree() >= n:
        k = r.degree() - n
        c = inv_lca * r.lc()
        for _ in range(n):
            c = ring.sigma_inv(c)
        term = RatOrePoly([ring.zero] * k + [c], spec)
        q = q + term
        r = r - a * term
    return q, r


def gcd_lclm(a: RatOrePoly, b: RatOrePoly):
    """Extended right Euclid.

    Returns ``(g, s, t, l, u, w)`` with ``g = s*a + t*b`` the monic right gcd
    and ``l = u*a = w*b`` the monic least common left multiple.
    """
    spec = (a if a.spec else b).spec
    if not a and not b:
        raise ZeroDivisionError("gcd of two zero operators")
    one, zero = RatOrePoly.one(spec), RatOrePoly.zero(spec)
    r0, r1 = a, b
    s0, s1, t0, t1 = one, zero, zero, one
    while r1:
        q, r2 = right_divide(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = r0.lc().inverse()
    g, s, t = r0.left_scale(inv), s0.left_scale(inv), t0.left_scale(inv)
    # s1*a + t1*b = 0 is the terminating row: s1*a is a common left multiple
    if not a or not b:
        l, u, w = zero, zero, zero
    else:
        l = s1 * a
        linv = l.lc().inverse()
        l, u, w = l.left_scale(linv), s1.left_scale(linv), (-t1).left_scale(linv)
    return g, s, t, l, u, w


def lclm(polys: Sequence[RatOrePoly]) -> RatOrePoly:
    """Monic least common left multiple of nonzero operators."""
    out = None
    for p in polys:
        if not p:
            raise ZeroDivisionError("lclm with a zero operator")
        out = p.monic() if out is None else gcd_lclm(out, p)[3]
    return out


# ---------------------------------------------------------------------------
# matrices


def rat_matrix(M: OreMatrix):
    return [[RatOrePoly.from_ore(e) for e in r] for r in M.rows]


def rat_matmul(A, B):
    spec = (A[0][0]).spec
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0])):
            acc = RatOrePoly.zero(spec)
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def rat_identity(n, spec):
    return [[RatOrePoly.one(spec) if i == j else RatOrePoly.zero(spec) for j in range(n)] for i in range(n)]


def rat_to_ore(rows, spec) -> OreMatrix:
    return OreMatrix([[RatOrePoly(e.coeffs, spec).to_ore() for e in r] for r in rows], spec)


def _rat_involution(spec, rows):
    """Entrywise involution on K(x)[d] (extended to fractions) and transpose."""
    inv = spec.involution
    tx = inv.x_images[0]
    # images are x -> c*x (+ const) with theta(d) = e*d (+ base); only the built-in kinds are used
    if tx.degree() != 0 or inv.d_image.degree() != 1:
        raise SpecError("rational side swap supports involutions fixing the degree in d")
    a = tx.coefficient(0)
    lin = RatFunc.from_base(a).num
    td = RatOrePoly.from_ore(inv.d_image, spec)

    def th_coeff(r: RatFunc):
        return r._new(r.num(lin), r.den(lin))

    def th(f: RatOrePoly):
        acc = RatOrePoly.zero(spec)
        pw = RatOrePoly.one(spec)
        for i, c in enumerate(f.coeffs):
            if i:
                pw = pw * td
            if c:
                acc = acc + pw * RatOrePoly([th_coeff(c)], spec)
        return acc

    p, q = len(rows), len(rows[0])
    return [[th(rows[i][j]) for i in range(p)] for j in range(q)]


def _rat_to_opposite(f: RatOrePoly, op: AlgebraSpec) -> RatOrePoly:
    acc = RatOrePoly.zero(op)
    for i, c in enumerate(f.coeffs):
        if c:
            acc = acc + RatOrePoly.d_power(i, op) * RatOrePoly([c], op)
    return acc


def rat_side_swap(spec, rows, mechanism):
    if mechanism == "involution":
        return spec, _rat_involution(spec, rows)
    op = spec.opposite()
    p, q = len(rows), len(rows[0])
    return op, [[_rat_to_opposite(rows[i][j], op) for i in range(p)] for j in range(q)]


def _combine(vec, cof, q, other_vec, other_cof):
    """``row - q*other`` on a (vector, cofactor) pair."""
    nv = [x - q * y if y else x for x, y in zip(vec, other_vec)]
    nc = [x - q * y if y else x for x, y in zip(cof, other_cof)]
    return nv, nc


def echelon(rows, spec):
    """Reduced lower-triangular basis of the row module over K(x)[d].

    Returns ``(pivots, syzygies)``: ``pivots`` is a list of
    ``(position, row, cofactor)`` in ascending position, monic at the
    position, with entries at other pivots' positions reduced; ``syzygies``
    are cofactor rows of the zero combinations.
    """
    s = len(rows)
    t = len(rows[0])
    active = [(list(r), [RatOrePoly.one(spec) if i == k else RatOrePoly.zero(spec) for i in range(s)])
              for k, r in enumerate(rows)]
    pivots = []
    for j in range(t - 1, -1, -1):
        while True:
            nz = [k for k, (v, _) in enumerate(active) if v[j]]
            if len(nz) <= 1:
                break
            pk = min(nz, key=lambda k: (active[k][0][j].degree(), k))
            pv, pc = active[pk]
            for k in nz:
                if k == pk:
                    continue
                v, c = active[k]
                qq, _ = right_divide(v[j], pv[j])
                active[k] = _combine(v, c, qq, pv, pc)
        if not nz:
            continue
        v, c = active.pop(nz[0])
        inv = v[j].lc().inverse()
        pivots.append((j, [e.left_scale(inv) for e in v], [e.left_scale(inv) for e in c]))
    # reduce entries at pivot positions of lower-positioned rows, largest pivot first
    pivots.sort(key=lambda x: x[0])
    for a in range(len(pivots) - 1, -1, -1):
        ja, va, ca = pivots[a]
        for b in range(a + 1, len(pivots)):
            jb, vb, cb = pivots[b]
            if vb[ja]:
                qq, _ = right_divide(vb[ja], va[ja])
                if qq:
                    nv, nc = _combine(vb, cb, qq, va, ca)
                    pivots[b] = (jb, nv, nc)
    syz = [c for v, c in active]
    return pivots, syz


def diagonalize_rational(M, max_iter: int = 100, sideswap: str = "auto",
                         verify: bool = True) -> DiagResult:
    """Diagonal form over K(x)[d] by Euclidean elimination and side swaps.

    ``M`` is an :class:`OreMatrix` or a list of rows of :class:`RatOrePoly`.
    ``U``, ``V``, ``D`` in the result are lists of rows of :class:`RatOrePoly`.
    """
    start = time.perf_counter()
    if isinstance(M, OreMatrix):
        spec, M0 = M.spec, rat_matrix(M)
    else:
        M0 = [list(r) for r in M]
        spec = M0[0][0].spec
    if spec.nvars != 1:
        raise SpecError("the rational strategy needs exactly one base variable")
    mech = _mechanism(spec, sideswap)
    p, q = len(M0), len(M0[0])
    U, V = rat_identity(p, spec), rat_identity(q, spec)
    cur_spec, cur = spec, M0
    stats = RunStats("rational")
    i = 0
    while True:
        i += 1
        if i > max_iter:
            raise IterationCapExceeded(max_iter)
        pivots, syz = echelon(cur, cur_spec)
        rows = [v for _, v, _ in pivots] + [[RatOrePoly.zero(cur_spec)] * len(cur[0]) for _ in syz]
        cofs = [c for _, _, c in pivots] + syz
        _record(stats, i, len(pivots) + len(syz), [rows, cofs])
        if i % 2:
            U = rat_matmul(cofs, U)
        else:
            V = rat_matmul(V, _retag(rat_side_swap(cur_spec, cofs, mech)[1], spec))
        cur_spec, cur = rat_side_swap(cur_spec, rows, mech)
        if i % 2 == 0 and all(not e for a, r in enumerate(cur) for b, e in enumerate(r) if a != b):
            break
    cur = _retag(cur, spec)
    # monic diagonal; the left scalar goes into the matching row of U
    for k in range(min(p, q)):
        e = cur[k][k]
        if e and e.lc() != _ring(spec).one:
            inv = e.lc().inverse()
            cur[k][k] = e.left_scale(inv)
            U[k] = [u.left_scale(inv) for u in U[k]]
    stats.wall_time = time.perf_counter() - start
    res = DiagResult(U, V, cur, rat_identity(p, spec), M0, i, mech, stats)
    if verify and rat_matmul(rat_matmul(U, M0), V) != cur:
        raise VerificationError("U*M*V = D over the rational functions")
    return res


def _retag(rows, spec):
    return [[RatOrePoly(e.coeffs, spec) for e in r] for r in rows]


def _record(stats, index, size, matrices):
    deg, terms, bits = -1, 0, 0
    for rows in matrices:
        for r in rows:
            for e in r:
                if e:
                    deg = max(deg, e.degree())
                    terms = max(terms, e.nterms())
                    bits = max(bits, e.bits())
    stats.iterations.append({"iteration": index, "gb_size": size, "max_degree": deg,
                             "max_terms": terms, "max_coeff_bits": bits})


def rational_degrees(res: DiagResult):
    D = res.D
    return [D[k][k].degree() for k in range(min(len(D), len(D[0]))) if D[k][k]]


def rat_is_unimodular(rows) -> bool:
    """Invertibility over K(x)[d]: the diagonal form has only nonzero entries of degree 0."""
    if len(rows) != len(rows[0]):
        return False
    res = diagonalize_rational(rows)
    return all(e and e.degree() == 0 for e in (res.D[k][k] for k in range(len(rows))))
