"""Matrices over R* and left fractions ``s^-1 * a`` with base-polynomial ``s``."""

from __future__ import annotations

from typing import List, Sequence

from .coeff import BasePoly
from .errors import SpecError, SpecMismatch, ZeroDenominator
from .ore import AlgebraSpec, OrePoly, add_shifted


class OreFraction:
    """Left fraction ``den^-1 * num`` with ``den`` a nonzero base polynomial."""

    __slots__ = ("den", "num")

    def __init__(self, den: BasePoly, num: OrePoly):
        if den.is_zero():
            raise ZeroDenominator("fraction with zero denominator")
        self.den = den
        self.num = num

    @property
    def spec(self):
        return self.num.spec

    def is_polynomial(self):
        return self.den.is_constant()

    def to_poly(self) -> OrePoly:
        if not self.den.is_constant():
            raise ValueError("fraction has a nonconstant denominator")
        return self.num * (self.spec.field.one / self.den.constant_value())

    def __eq__(self, other):
        # s^-1 a = t^-1 b  iff  t*a = s*b, since base polynomials commute
        spec = self.spec
        if isinstance(other, OrePoly):
            return self.num == spec.from_base(self.den) * other
        if not isinstance(other, OreFraction):
            return NotImplemented
        return spec.from_base(other.den) * self.num == spec.from_base(self.den) * other.num

    def __hash__(self):
        return hash(("frac", str(self)))

    def __bool__(self):
        return bool(self.num)

    def degree(self):
        return self.num.degree()

    def to_string(self):
        if self.den.is_constant():
            return str(self.to_poly())
        return f"1/({self.den.to_string(self.spec.var_names)})*({self.num})"

    __str__ = to_string

    def __repr__(self):
        return f"OreFraction({self})"


def _entry_str(e):
    return str(e)


class OreMatrix:
    """Rectangular matrix whose entries are :class:`OrePoly` or :class:`OreFraction`."""

    def __init__(self, rows: Sequence[Sequence], spec: AlgebraSpec):
        self.rows: List[list] = [list(r) for r in rows]
        self.spec = spec
        if not self.rows or not self.rows[0]:
            raise SpecError("matrix must have positive dimensions")
        q = len(self.rows[0])
        for r in self.rows:
            if len(r) != q:
                raise SpecError("ragged matrix rows")
            for e in r:
                if e.spec is not spec and e.spec != spec:
                    raise SpecMismatch("matrix entries from different algebras")

    # construction ----------------------------------------------------------

    @classmethod
    def identity(cls, n, spec):
        return cls([[spec.one() if i == j else spec.zero() for j in range(n)] for i in range(n)], spec)

    @classmethod
    def zeros(cls, p, q, spec):
        return cls([[spec.zero() for _ in range(q)] for _ in range(p)], spec)

    @classmethod
    def diag(cls, entries, spec, shape=None):
        p, q = shape or (len(entries), len(entries))
        m = cls.zeros(p, q, spec)
        for i, e in enumerate(entries):
            m.rows[i][i] = e
        return m

    @classmethod
    def from_strings(cls, rows, spec):
        from .parse import parse_expression
        return cls([[parse_expression(s, spec) for s in r] for r in rows], spec)

    # shape -----------------------------------------------------------------

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def has_fractions(self):
        return any(isinstance(e, OreFraction) and not e.is_polynomial() for r in self.rows for e in r)

    def polynomial(self) -> "OreMatrix":
        """Same matrix with constant-denominator fractions turned into polynomials."""
        return OreMatrix([[e.to_poly() if isinstance(e, OreFraction) else e for e in r] for r in self.rows],
                         self.spec)

    def transpose(self):
        p, q = self.shape
        return OreMatrix([[self.rows[i][j] for i in range(p)] for j in range(q)], self.spec)

    def is_diagonal(self):
        return all(not e for i, r in enumerate(self.rows) for j, e in enumerate(r) if i != j)

    def diagonal(self):
        p, q = self.shape
        return [self.rows[i][i] for i in range(min(p, q))]

    def map(self, fn):
        return OreMatrix([[fn(e) for e in r] for r in self.rows], self.spec)

    # arithmetic --------------------------------------------------------------

    def __mul__(self, other: "OreMatrix") -> "OreMatrix":
        if self.has_fractions() or other.has_fractions():
            raise ValueError("matrix product needs polynomial entries")
        a, b = self.polynomial(), other.polynomial()
        p, q = a.shape
        q2, r = b.shape
        if q != q2:
            raise ValueError(f"shape mismatch {a.shape} * {b.shape}")
        spec = self.spec
        one = spec.field.one
        out = []
        for i in range(p):
            row = []
            for j in range(r):
                acc: dict = {}
                for k in range(q):
                    x, y = a.rows[i][k], b.rows[k][j]
                    if x.terms and y.terms:
                        add_shifted(acc, (x * y).terms, one, ())
                row.append(OrePoly._raw(acc, spec))
            out.append(row)
        return OreMatrix(out, spec)

    def __eq__(self, other):
        if not isinstance(other, OreMatrix) or self.shape != other.shape:
            return False
        return all(x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __sub__(self, other):
        return OreMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.spec)

    # display -----------------------------------------------------------------

    def to_strings(self):
        return [[_entry_str(e) for e in r] for r in self.rows]

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"

    __repr__ = __str__
