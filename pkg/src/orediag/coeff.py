"""Exact scalars and the commutative base ring K[x_1..x_n].

Scalars are ``gmpy2.mpq`` for the rationals and :class:`ModP` residues for a
prime field.  Base polynomials are sparse dictionaries mapping exponent tuples
to nonzero scalars, wrapped by :class:`BasePoly`.  The affine endomorphism
``sigma`` and the ``sigma``-derivation ``delta`` of an Ore extension act on
these polynomials through :class:`EndoSpec` and :class:`DerivSpec`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Sequence, Tuple

from gmpy2 import mpq

from .errors import IncompatibleDerivation, NonInvertibleSigma, SpecError, ZeroDenominator

Exponent = Tuple[int, ...]


# ---------------------------------------------------------------------------
# fields


class RationalField:
    """The field of rational numbers; elements are reduced ``mpq`` values."""

    characteristic = 0
    name = "QQ"

    def __call__(self, value):
        if isinstance(value, ModP):
            raise TypeError("cannot coerce a residue into QQ")
        return mpq(value)

    @property
    def zero(self):
        return mpq(0)

    @property
    def one(self):
        return mpq(1)

    def pair(self, c):
        """Return ``(numerator, denominator)`` as Python ints."""
        return int(c.numerator), int(c.denominator)

    def bits(self, c):
        return max(int(c.numerator).bit_length(), int(c.denominator).bit_length())

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class ModP:
    """Residue class modulo a prime, kept in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def __int__(self):
        return self.v

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise TypeError("residues modulo different primes")
            return other.v
        if isinstance(other, int):
            return other
        n, d = int(mpq(other).numerator), int(mpq(other).denominator)
        return n * pow(d, -1, self.p)

    def __add__(self, other):
        return ModP(self.v + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return ModP(self.v - self._coerce(other), self.p)

    def __rsub__(self, other):
        return ModP(self._coerce(other) - self.v, self.p)

    def __mul__(self, other):
        return ModP(self.v * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = self._coerce(other) % self.p
        if d == 0:
            raise ZeroDivisionError("division by zero residue")
        return ModP(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return ModP(self._coerce(other), self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pow__(self, e):
        if e < 0:
            return ModP(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        try:
            return self.v == self._coerce(other) % self.p
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class PrimeField:
    """The prime field F_p."""

    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise SpecError(f"{p} is not a prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, value):
        if isinstance(value, ModP):
            if value.p != self.p:
                raise TypeError("residue of another field")
            return value
        if isinstance(value, int):
            return ModP(value, self.p)
        q = mpq(value)
        return ModP(int(q.numerator), self.p) / int(q.denominator)

    @property
    def zero(self):
        return ModP(0, self.p)

    @property
    def one(self):
        return ModP(1, self.p)

    def pair(self, c):
        return c.v, 1

    def bits(self, c):
        return c.v.bit_length()

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str):
    """Field descriptor from a string such as ``QQ``, ``GF(2)`` or ``F7``."""
    t = text.strip().upper().replace(" ", "")
    if t in ("QQ", "Q"):
        return QQ
    for prefix in ("GF(", "GF", "F", "Z/", "Z"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return PrimeField(int(digits))
    raise SpecError(f"unknown field '{text}'")


# ---------------------------------------------------------------------------
# term dictionaries (internal helpers shared with the Ore layer)


def add_into(acc: dict, terms: dict, scale=None, shift: Exponent | None = None) -> None:
    """``acc += scale * x^shift * terms`` in place, dropping cancelled keys."""
    for a, c in terms.items():
        if shift is not None:
            a = tuple(i + j for i, j in zip(a, shift))
        if scale is not None:
            c = c * scale
        v = acc.get(a)
        if v is None:
            acc[a] = c
        else:
            v = v + c
            if v:
                acc[a] = v
            else:
                del acc[a]


def mul_terms(p: dict, q: dict) -> dict:
    out: dict = {}
    if len(p) > len(q):
        p, q = q, p
    for a, c in p.items():
        add_into(out, q, c, a)
    return out


def grevlex_key(a: Exponent):
    # first-listed variable is the largest
    return (sum(a), tuple(-e for e in reversed(a)))


def lex_key(a: Exponent):
    return a


# ---------------------------------------------------------------------------
# base polynomials


class BasePoly:
    """Element of the commutative ring K[x_1..x_n].

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero scalars.
    Instances are treated as immutable.
    """

    __slots__ = ("terms", "nvars", "field")

    def __init__(self, terms: Dict[Exponent, object], nvars: int, field=QQ):
        self.terms = {a: c for a, c in terms.items() if c}
        self.nvars = nvars
        self.field = field
        for a in self.terms:
            if len(a) != nvars:
                raise ValueError(f"exponent {a} has wrong length for {nvars} variables")

    @classmethod
    def _raw(cls, terms, nvars, field):
        p = cls.__new__(cls)
        p.terms, p.nvars, p.field = terms, nvars, field
        return p

    @classmethod
    def constant(cls, c, nvars, field=QQ):
        c = field(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars, field)

    @classmethod
    def var(cls, i, nvars, field=QQ):
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): field.one}, nvars, field)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, field=QQ):
        """Univariate polynomial from low-to-high coefficients."""
        return cls({(k,): field(c) for k, c in enumerate(coeffs) if c}, 1, field)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(a) for a in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def degree(self, i=0):
        if not self.terms:
            return -1
        return max(a[i] for a in self.terms)

    def leading(self, key=grevlex_key):
        a = max(self.terms, key=key)
        return a, self.terms[a]

    def _check(self, other):
        if not isinstance(other, BasePoly):
            other = BasePoly.constant(other, self.nvars, self.field)
        if other.nvars != self.nvars or other.field != self.field:
            raise ValueError("base polynomials over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        add_into(t, other.terms)
        return BasePoly._raw(t, self.nvars, self.field)

    __radd__ = __add__

    def __neg__(self):
        return BasePoly._raw({a: -c for a, c in self.terms.items()}, self.nvars, self.field)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, BasePoly):
            other = self._check(other)
            return BasePoly._raw(mul_terms(self.terms, other.terms), self.nvars, self.field)
        c = self.field(other)
        if not c:
            return BasePoly._raw({}, self.nvars, self.field)
        return BasePoly._raw({a: v * c for a, v in self.terms.items()}, self.nvars, self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = BasePoly.constant(1, self.nvars, self.field)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, BasePoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return self.is_constant() and self.constant_value() == other

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def evaluate(self, values: Sequence):
        """Substitute field values (or base polynomials) for every variable."""
        out = None
        for a, c in self.terms.items():
            term = c
            for v, e in zip(values, a):
                if e:
                    term = term * (v ** e)
            out = term if out is None else out + term
        return self.field.zero if out is None else out

    def to_string(self, names: Sequence[str]) -> str:
        from .printing import format_terms
        order = sorted(self.terms, key=grevlex_key, reverse=True)
        return format_terms([(None, a, self.terms[a]) for a in order], names, None, self.field)

    def __repr__(self):
        names = ["x"] if self.nvars == 1 else [f"x{i + 1}" for i in range(self.nvars)]
        return self.to_string(names)


def divide_exact(p: BasePoly, d: BasePoly):
    """Return ``p / d`` if ``d`` divides ``p`` in K[x], else ``None``.

    Uses the multivariate division algorithm by a single divisor, whose
    remainder vanishes exactly when ``d`` divides ``p``.
    """
    if d.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    lead, lc = d.leading()
    rest = dict(p.terms)
    quot: dict = {}
    neg_d = {a: -c for a, c in d.terms.items()}
    while rest:
        a = max(rest, key=grevlex_key)
        if any(x < y for x, y in zip(a, lead)):
            return None
        shift = tuple(x - y for x, y in zip(a, lead))
        c = rest[a] / lc
        quot[shift] = c
        add_into(rest, neg_d, c, shift)
    return BasePoly._raw(quot, p.nvars, p.field)


# univariate helpers on BasePoly with nvars == 1

def _udense(p: BasePoly):
    n = p.degree(0)
    out = [p.field.zero] * (n + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def udivmod(a: BasePoly, b: BasePoly):
    if a.nvars != 1:
        raise ValueError("univariate operation on a multivariate polynomial")
    if b.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    r = _udense(a)
    bd = _udense(b)
    db = len(bd) - 1
    inv = a.field.one / bd[-1]
    q = [a.field.zero] * max(len(r) - db, 1)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c * inv
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = r[k - db + j] - c * bd[j]
    f = a.field
    return BasePoly.from_coeffs(q, f), BasePoly.from_coeffs(r[:db] if db else [], f)


def ugcd(a: BasePoly, b: BasePoly) -> BasePoly:
    """Monic gcd of univariate polynomials (Euclid)."""
    while not b.is_zero():
        a, b = b, udivmod(a, b)[1]
    if a.is_zero():
        return a
    return a * (a.field.one / a.leading()[1])


def ulcm(a: BasePoly, b: BasePoly) -> BasePoly:
    g = ugcd(a, b)
    q = divide_exact(a * b, g)
    return q * (q.field.one / q.leading()[1])


def common_denominator(dens: Iterable[BasePoly], use_gcd: bool = True) -> BasePoly:
    """A nonzero polynomial divisible by every denominator.

    The strategy is the product of the distinct denominators; for a single
    variable (and ``use_gcd``) the exact least common multiple is returned.
    """
    dens = list(dens)
    if not dens:
        raise ValueError("no denominators")
    for d in dens:
        if d.is_zero():
            raise ZeroDenominator("zero denominator")
    nv, f = dens[0].nvars, dens[0].field
    if nv == 1 and use_gcd:
        out = BasePoly.constant(1, 1, f)
        for d in dens:
            out = ulcm(out, d)
        return out
    out = BasePoly.constant(1, nv, f)
    seen = set()
    for d in dens:
        if d.is_constant():
            continue
        lead = d.leading()[1]
        d = d * (f.one / lead)
        if d in seen:
            continue
        seen.add(d)
        out = out * d
    return out


# ---------------------------------------------------------------------------
# sigma and delta


@dataclass(frozen=True)
class EndoSpec:
    """Affine diagonal endomorphism ``x_i -> u_i*x_i + v_i``."""

    u: Tuple
    v: Tuple
    field: object = QQ
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def nvars(self):
        return len(self.u)

    def validate(self, names=None):
        for i, ui in enumerate(self.u):
            if not ui:
                raise NonInvertibleSigma(names[i] if names else i)

    def is_identity(self):
        return all(ui == 1 for ui in self.u) and not any(self.v)

    def image(self, i) -> BasePoly:
        e = [0] * self.nvars
        e[i] = 1
        t = {tuple(e): self.u[i]}
        if self.v[i]:
            t[(0,) * self.nvars] = self.v[i]
        return BasePoly._raw(t, self.nvars, self.field)

    def mono(self, a: Exponent) -> dict:
        """sigma(x^a) as a term dictionary (cached)."""
        r = self._cache.get(a)
        if r is not None:
            return r
        n = self.nvars
        if not any(a):
            r = {a: self.field.one}
        else:
            i = max(k for k in range(n) if a[k])
            prev = list(a)
            prev[i] -= 1
            r = mul_terms(self.mono(tuple(prev)), self.image(i).terms)
        self._cache[a] = r
        return r

    def inverse(self) -> "EndoSpec":
        one = self.field.one
        return EndoSpec(tuple(one / ui for ui in self.u),
                        tuple(-vi / ui for ui, vi in zip(self.u, self.v)), self.field)


@dataclass(frozen=True)
class DerivSpec:
    """Images ``delta(x_i)`` of a sigma-derivation, one base polynomial each."""

    images: Tuple[BasePoly, ...]
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def nvars(self):
        return len(self.images)

    def is_zero(self):
        return all(p.is_zero() for p in self.images)

    def mono(self, endo: EndoSpec, a: Exponent) -> dict:
        """delta(x^a) via delta(x_i m) = sigma(x_i) delta(m) + delta(x_i) m (cached)."""
        key = (endo, a)
        r = self._cache.get(key)
        if r is not None:
            return r
        n = len(a)
        if not any(a):
            r = {}
        else:
            i = max(k for k in range(n) if a[k])
            prev = list(a)
            prev[i] -= 1
            prev = tuple(prev)
            r = mul_terms(endo.image(i).terms, self.mono(endo, prev))
            add_into(r, mul_terms(self.images[i].terms, {prev: endo.field.one}))
        self._cache[key] = r
        return r


def check_compatible(endo: EndoSpec, deriv: DerivSpec, names=None) -> None:
    """Raise :class:`IncompatibleDerivation` unless the images extend to a sigma-derivation."""
    if endo.nvars != deriv.nvars:
        raise SpecError("sigma and delta are given for different numbers of variables")
    n = endo.nvars
    x = [BasePoly.var(i, n, endo.field) for i in range(n)]
    moved = [endo.image(i) - x[i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if deriv.images[i] * moved[j] != deriv.images[j] * moved[i]:
                raise IncompatibleDerivation(names[i] if names else i, names[j] if names else j)


def apply_endomorphism(spec: EndoSpec, p: BasePoly) -> BasePoly:
    if p.nvars != spec.nvars:
        raise SpecError(f"polynomial has {p.nvars} variables, sigma is given for {spec.nvars}")
    out: dict = {}
    for a, c in p.terms.items():
        add_into(out, spec.mono(a), c)
    return BasePoly._raw(out, p.nvars, p.field)


def apply_derivation(endo: EndoSpec, deriv: DerivSpec, p: BasePoly) -> BasePoly:
    if p.nvars != endo.nvars or deriv.nvars != endo.nvars:
        raise SpecError("variable count mismatch between polynomial and sigma/delta")
    check_compatible(endo, deriv)
    out: dict = {}
    for a, c in p.terms.items():
        add_into(out, deriv.mono(endo, a), c)
    return BasePoly._raw(out, p.nvars, p.field)
