"""The skew polynomial ring K[x_1..x_n][d; sigma, delta].

Elements are kept in normal form ``sum c * x^a * d^b`` (base variables left of
the Ore variable).  The commutation rule ``d*p = sigma(p)*d + delta(p)`` is the
only rewriting step: left multiplication by ``d^k`` is ``k`` applications of it,
and a general product ``f*g`` is assembled from ``d^b * g`` for each power ``b``
occurring in ``f``.
"""

from __future__ import annotations

import math
import threading
from typing import Dict, Sequence, Tuple

from .coeff import (QQ, BasePoly, DerivSpec, EndoSpec, check_compatible,
                    grevlex_key, lex_key)
from .errors import NoInvolution, SpecError, SpecMismatch, ZeroPolynomialError

NEG_INF = -math.inf

PRESETS = ("weyl", "shift", "difference", "qweyl", "qdifference", "commutative", "custom")


# ---------------------------------------------------------------------------
# term-dictionary kernels; keys are (b, alpha)


def apply_d(spec: "AlgebraSpec", terms: dict) -> dict:
    """Normal form of ``d * f`` for a term dictionary ``f``."""
    out: dict = {}
    sid, dzero = spec.sigma_is_identity, spec.delta_is_zero
    get = out.get
    for (b, a), c in terms.items():
        if sid:
            k = (b + 1, a)
            v = get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        else:
            for a2, c2 in spec.sigma_mono(a).items():
                k = (b + 1, a2)
                v = get(k)
                v = c * c2 if v is None else v + c * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
        if not dzero:
            for a2, c2 in spec.delta_mono(a).items():
                k = (b, a2)
                v = get(k)
                v = c * c2 if v is None else v + c * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def add_shifted(acc: dict, terms: dict, scale, alpha) -> None:
    """``acc += scale * x^alpha * terms`` for (b, a)-keyed dictionaries."""
    zero_shift = not any(alpha)
    get = acc.get
    for (b, a), c in terms.items():
        if not zero_shift:
            a = tuple(i + j for i, j in zip(a, alpha))
        k = (b, a)
        v = get(k)
        v = c * scale if v is None else v + c * scale
        if v:
            acc[k] = v
        else:
            del acc[k]


def mul_terms(spec: "AlgebraSpec", f: dict, g: dict) -> dict:
    if not f or not g:
        return {}
    top = max(b for b, _ in f)
    powers = [g]
    for _ in range(top):
        powers.append(apply_d(spec, powers[-1]))
    out: dict = {}
    for (b, a), c in f.items():
        add_shifted(out, powers[b], c, a)
    return out


# ---------------------------------------------------------------------------
# algebra description


class AlgebraSpec:
    """Description of ``R* = K[x_1..x_n][d; sigma, delta]``.

    ``sigma`` is affine diagonal (``x_i -> u_i x_i + v_i``) and ``delta`` is
    given by polynomial images of the base variables.  Instances are
    immutable; lazily filled monomial caches are shared between threads.
    """

    def __init__(self, var_names: Sequence[str], op_name: str, endo: EndoSpec, deriv: DerivSpec,
                 field=QQ, preset: str = "custom", q=None, involution: "InvolutionSpec" = None,
                 simple: bool = False, validate: bool = True):
        self.var_names = tuple(var_names)
        self.op_name = op_name
        self.endo = endo
        self.deriv = deriv
        self.field = field
        self.preset = preset
        self.q = q
        self.simple = simple
        self.nvars = len(self.var_names)
        if len(set(self.var_names + (op_name,))) != self.nvars + 1:
            raise SpecError("variable names must be distinct")
        if endo.nvars != self.nvars or deriv.nvars != self.nvars:
            raise SpecError("sigma/delta images do not match the variable list")
        self.sigma_is_identity = endo.is_identity()
        self.delta_is_zero = deriv.is_zero()
        self._opposite = None
        self._lock = threading.Lock()
        self._dcache: dict = {}
        self.involution = None
        if validate:
            validate_algebra_spec(self)
        if involution is not None:
            involution = involution(self) if callable(involution) else involution
            involution.validate()
            self.involution = involution

    def sigma_mono(self, a):
        return self.endo.mono(a)

    def delta_mono(self, a):
        r = self._dcache.get(a)
        if r is None:
            r = self._dcache[a] = self.deriv.mono(self.endo, a)
        return r

    # identity ----------------------------------------------------------

    def _ident(self):
        return (self.field, self.var_names, self.op_name, self.endo.u, self.endo.v,
                self.deriv.images)

    def __eq__(self, other):
        return isinstance(other, AlgebraSpec) and (self is other or self._ident() == other._ident())

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        tag = self.preset if self.q is None else f"{self.preset}({self.q})"
        return f"AlgebraSpec({tag}, vars={self.var_names}, op={self.op_name}, field={self.field})"

    def relations(self) -> Dict[str, str]:
        """``d*x_i`` in normal form, per variable name."""
        d = self.d()
        return {n: str(d * self.x(i)) for i, n in enumerate(self.var_names)}

    # constructors ------------------------------------------------------

    @classmethod
    def preset_algebra(cls, name: str, variables: Sequence[str] = None, op: str = None,
                       active: str = None, q=None, field=QQ) -> "AlgebraSpec":
        """Build one of the standard algebras.

        ``variables`` lists the base variables; only ``active`` (default: the
        last one) takes part in the commutation rule, the others are
        parameters with ``sigma = id`` and ``delta = 0``.
        """
        name = name.lower()
        defaults = {"weyl": ("x", "d"), "shift": ("t", "S"), "difference": ("x", "Delta"),
                    "qweyl": ("x", "d"), "qdifference": ("x", "d"), "commutative": ("x", "d")}
        if name not in defaults:
            raise SpecError(f"unknown preset '{name}'")
        variables = tuple(variables) if variables else (defaults[name][0],)
        op = op or defaults[name][1]
        n = len(variables)
        if active is None:
            k = n - 1
        elif active in variables:
            k = variables.index(active)
        else:
            raise SpecError(f"active variable '{active}' is not among {variables}")
        one, zero = field.one, field.zero
        u = [one] * n
        v = [zero] * n
        dimg = [BasePoly.constant(0, n, field) for _ in range(n)]
        xk = BasePoly.var(k, n, field)
        if name in ("qweyl", "qdifference"):
            if q is None:
                raise SpecError(f"preset '{name}' needs a value for q")
            q = field(q)
            if not q:
                raise SpecError("q must be nonzero")
        if name == "weyl":
            dimg[k] = BasePoly.constant(1, n, field)
        elif name == "shift":
            v[k] = one
        elif name == "difference":
            v[k] = one
            dimg[k] = BasePoly.constant(1, n, field)
        elif name == "qweyl":
            u[k] = q
            dimg[k] = BasePoly.constant(1, n, field)
        elif name == "qdifference":
            u[k] = q
            dimg[k] = xk * (q - 1)
        involution = None
        if name == "weyl":
            involution = _builtin_involution("weyl", k)
        elif name == "shift":
            involution = _builtin_involution("shift", k)
        elif name == "commutative":
            involution = _builtin_involution("identity", k)
        simple = name == "weyl" and field.characteristic == 0
        return cls(variables, op, EndoSpec(tuple(u), tuple(v), field), DerivSpec(tuple(dimg)),
                   field=field, preset=name, q=q, involution=involution, simple=simple)

    @classmethod
    def custom(cls, variables: Sequence[str], op: str, sigma: dict, delta: dict,
               field=QQ) -> "AlgebraSpec":
        """Algebra from explicit images.

        ``sigma`` maps a variable name to ``(u, v)`` or to a base polynomial
        of the form ``u*x + v``; missing entries mean ``sigma(x) = x``.
        ``delta`` maps names to base polynomials; missing entries are zero.
        """
        variables = tuple(variables)
        n = len(variables)
        u, v, dimg = [], [], []
        for i, name in enumerate(variables):
            img = sigma.get(name)
            if img is None:
                ui, vi = field.one, field.zero
            elif isinstance(img, BasePoly):
                ui, vi = _affine_parts(img, i, name)
            else:
                ui, vi = field(img[0]), field(img[1])
            u.append(ui)
            v.append(vi)
            d = delta.get(name)
            if d is None:
                d = BasePoly.constant(0, n, field)
            elif not isinstance(d, BasePoly):
                d = BasePoly.constant(d, n, field)
            if d.nvars != n:
                raise SpecError(f"delta({name}) has the wrong number of variables")
            dimg.append(d)
        return cls(variables, op, EndoSpec(tuple(u), tuple(v), field), DerivSpec(tuple(dimg)),
                   field=field, preset="custom")

    # opposite ------------------------------------------------------------

    def opposite(self) -> "AlgebraSpec":
        """The opposite algebra: ``sigma_op = sigma^-1``, ``delta_op = -delta o sigma^-1``."""
        with self._lock:
            if self._opposite is None:
                inv = self.endo.inverse()
                dimg = tuple(p * (-(self.field.one / ui)) for p, ui in zip(self.deriv.images, self.endo.u))
                op = AlgebraSpec(self.var_names, self.op_name, inv, DerivSpec(dimg), field=self.field,
                                 preset="custom", validate=True)
                op.preset = f"{self.preset}-op" if not self.preset.endswith("-op") else self.preset
                op._opposite = self
                self._opposite = op
            return self._opposite

    # element constructors ------------------------------------------------

    def zero(self) -> "OrePoly":
        return OrePoly._raw({}, self)

    def one(self) -> "OrePoly":
        return self.const(1)

    def const(self, c) -> "OrePoly":
        c = self.field(c)
        return OrePoly._raw({(0, (0,) * self.nvars): c} if c else {}, self)

    def x(self, i) -> "OrePoly":
        if isinstance(i, str):
            i = self.var_names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return OrePoly._raw({(0, tuple(e)): self.field.one}, self)

    def d(self, k: int = 1) -> "OrePoly":
        return OrePoly._raw({(k, (0,) * self.nvars): self.field.one}, self)

    def monomial(self, alpha, b, c=1) -> "OrePoly":
        c = self.field(c)
        return OrePoly._raw({(b, tuple(alpha)): c} if c else {}, self)

    def from_base(self, p: BasePoly) -> "OrePoly":
        if p.nvars != self.nvars:
            raise SpecError("base polynomial has the wrong number of variables")
        return OrePoly._raw({(0, a): c for a, c in p.terms.items()}, self)

    def base(self, terms) -> BasePoly:
        return BasePoly(terms, self.nvars, self.field)


def _affine_parts(img: BasePoly, i: int, name: str):
    n = img.nvars
    f = img.field
    e = [0] * n
    e[i] = 1
    allowed = {tuple(e), (0,) * n}
    if any(a not in allowed for a in img.terms):
        raise SpecError(f"sigma({name}) must be affine in {name} alone")
    return img.terms.get(tuple(e), f.zero), img.terms.get((0,) * n, f.zero)


def validate_algebra_spec(spec: AlgebraSpec) -> AlgebraSpec:
    """Check invertibility of sigma and compatibility of the delta images."""
    spec.endo.validate(spec.var_names)
    check_compatible(spec.endo, spec.deriv, spec.var_names)
    return spec


# ---------------------------------------------------------------------------
# elements


class OrePoly:
    """Element of ``R*`` in normal form; ``terms`` maps ``(b, alpha)`` to a scalar."""

    __slots__ = ("terms", "spec")

    def __init__(self, terms: dict, spec: AlgebraSpec):
        self.terms = {(int(b), tuple(a)): spec.field(c) for (b, a), c in terms.items() if c}
        self.spec = spec

    @classmethod
    def _raw(cls, terms, spec):
        p = cls.__new__(cls)
        p.terms, p.spec = terms, spec
        return p

    def _same(self, other):
        if isinstance(other, OrePoly):
            if other.spec is not self.spec and other.spec != self.spec:
                raise SpecMismatch("operands live in different algebras")
            return other
        return self.spec.const(other)

    def __add__(self, other):
        other = self._same(other)
        t = dict(self.terms)
        add_shifted(t, other.terms, self.spec.field.one, ())
        return OrePoly._raw(t, self.spec)

    __radd__ = __add__

    def __neg__(self):
        return OrePoly._raw({k: -c for k, c in self.terms.items()}, self.spec)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if isinstance(other, OrePoly):
            return ore_mul(self, other)
        c = self.spec.field(other)
        if not c:
            return self.spec.zero()
        return OrePoly._raw({k: v * c for k, v in self.terms.items()}, self.spec)

    def __rmul__(self, other):
        # scalars are central
        return self.__mul__(other)

    def __pow__(self, e: int):
        out = self.spec.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, OrePoly):
            return self.terms == other.terms and self.spec == other.spec
        if not self.terms:
            return other == 0
        return self.degree() == 0 and len(self.terms) == 1 and not any(next(iter(self.terms))[1]) \
            and next(iter(self.terms.values())) == other

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Degree in the Ore variable (base variables have weight 0); -inf for 0."""
        if not self.terms:
            return NEG_INF
        return max(b for b, _ in self.terms)

    def is_base(self):
        return all(b == 0 for b, _ in self.terms)

    def is_scalar(self):
        return all(b == 0 and not any(a) for b, a in self.terms)

    def coefficient(self, b: int) -> BasePoly:
        """The base-polynomial coefficient of ``d^b``."""
        return BasePoly._raw({a: c for (k, a), c in self.terms.items() if k == b},
                             self.spec.nvars, self.spec.field)

    def sorted_terms(self, key=None):
        key = key or term_key_grevlex
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def lm(self, key=None):
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading monomial")
        return max(self.terms, key=key or term_key_grevlex)

    def lc(self, key=None):
        return self.terms[self.lm(key)]

    def monic(self, key=None):
        return self * (self.spec.field.one / self.lc(key))

    def to_string(self, key=None) -> str:
        from .printing import format_terms
        items = [(b, a, c) for (b, a), c in self.sorted_terms(key)]
        return format_terms(items, self.spec.var_names, self.spec.op_name, self.spec.field)

    __str__ = to_string

    def __repr__(self):
        return f"OrePoly({self.to_string()})"


def term_key_grevlex(k):
    return (k[0], grevlex_key(k[1]))


def term_key_lex(k):
    return (k[0], lex_key(k[1]))


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """Product ``f*g`` renormalized to base-left normal form."""
    if f.spec is not g.spec and f.spec != g.spec:
        raise SpecMismatch("operands live in different algebras")
    return OrePoly._raw(mul_terms(f.spec, f.terms, g.terms), f.spec)


def leading_data(f: OrePoly, order=None) -> Tuple[Tuple[int, tuple], object, int]:
    """``(lm, lc, degree)`` of a nonzero element under the d-elimination order.

    ``lm`` is returned as ``(b, alpha)``; ``order`` may be a
    :class:`~orediag.gb.ModuleOrder` or ``None`` for graded reverse lex.
    """
    if not f.terms:
        raise ZeroPolynomialError("zero polynomial has no leading data")
    key = order.term_key if order is not None else term_key_grevlex
    lm = f.lm(key)
    return lm, f.terms[lm], lm[0]


# ---------------------------------------------------------------------------
# involutions


class InvolutionSpec:
    """K-linear anti-automorphism given by images of the generators."""

    def __init__(self, spec: AlgebraSpec, x_images: Sequence[OrePoly], d_image: OrePoly):
        self.spec = spec
        self.x_images = tuple(x_images)
        self.d_image = d_image
        self._dpow = [spec.one()]
        self._xcache: dict = {}
        self._lock = threading.Lock()

    def _d_power(self, b):
        with self._lock:
            while len(self._dpow) <= b:
                self._dpow.append(self._dpow[-1] * self.d_image)
            return self._dpow[b]

    def _x_power(self, alpha):
        r = self._xcache.get(alpha)
        if r is None:
            r = self.spec.one()
            for img, e in zip(self.x_images, alpha):
                for _ in range(e):
                    r = r * img
            self._xcache[alpha] = r
        return r

    def apply(self, f: OrePoly) -> OrePoly:
        """theta(c x^a d^b) = c theta(d)^b theta(x)^a."""
        out: dict = {}
        by_b: dict = {}
        for (b, a), c in f.terms.items():
            by_b.setdefault(b, {})
            add_shifted(by_b[b], self._x_power(a).terms, c, ())
        for b, base in by_b.items():
            add_shifted(out, ore_mul(self._d_power(b), OrePoly._raw(base, self.spec)).terms,
                        self.spec.field.one, ())
        return OrePoly._raw(out, self.spec)

    def __call__(self, f):
        return self.apply(f)

    def validate(self):
        spec = self.spec
        n = spec.nvars
        imgs = self.x_images
        for i in range(n):
            for j in range(i + 1, n):
                if imgs[i] * imgs[j] != imgs[j] * imgs[i]:
                    raise SpecError("involution images of base variables do not commute")
        td = self.d_image
        for i in range(n):
            sig = spec.from_base(spec.endo.image(i))
            dlt = spec.from_base(spec.deriv.images[i])
            if imgs[i] * td != td * self.apply(sig) + self.apply(dlt):
                raise SpecError(f"involution does not respect the relation for {spec.var_names[i]}")
            if self.apply(imgs[i]) != spec.x(i):
                raise SpecError("involution is not of order two")
        if self.apply(td) != spec.d():
            raise SpecError("involution is not of order two")


def _builtin_involution(kind, k):
    def build(spec):
        xs = [spec.x(i) for i in range(spec.nvars)]
        d = spec.d()
        if kind == "weyl":
            d = -d
        elif kind == "shift":
            xs[k] = -xs[k]
        return InvolutionSpec(spec, xs, d)
    return build


# ---------------------------------------------------------------------------
# side swapping on matrices (lists of rows)


def apply_involution(spec: AlgebraSpec, rows):
    """Entrywise involution followed by transposition."""
    inv = spec.involution
    if inv is None:
        raise NoInvolution(f"algebra {spec!r} has no involution")
    p = len(rows)
    q = len(rows[0]) if p else 0
    return [[inv.apply(rows[i][j]) for i in range(p)] for j in range(q)]


def to_opposite(f: OrePoly, target: AlgebraSpec) -> OrePoly:
    """Re-read ``f`` in the opposite algebra ``target``.

    Each normal-form word ``x^a d^b`` of ``f`` is the opposite product
    ``d^b * x^a``, which is renormalized with ``target``'s commutation rule.
    """
    by_b: dict = {}
    for (b, a), c in f.terms.items():
        by_b.setdefault(b, {})[(0, a)] = c
    out: dict = {}
    for b, base in by_b.items():
        t = base
        for _ in range(b):
            t = apply_d(target, t)
        add_shifted(out, t, target.field.one, ())
    return OrePoly._raw(out, target)


def opposite_transport(spec: AlgebraSpec, rows):
    """Move a matrix into the opposite algebra, transposed.

    Returns ``(spec_op, rows_op)``.  Applying it twice returns the input.
    """
    validate_algebra_spec(spec)
    op = spec.opposite()
    p = len(rows)
    q = len(rows[0]) if p else 0
    return op, [[to_opposite(rows[i][j], op) for i in range(p)] for j in range(q)]
