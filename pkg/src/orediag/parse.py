"""Parser for operator expressions and matrices.

Grammar (explicit ``*``, left-associative binary operators)::

    matrix := '[' row (',' row)* ']'
    row    := '[' expr (',' expr)* ']'
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' nat)?
    atom   := integer | name | '(' expr ')'

Products are normalized with the commutation rule, so ``d*x`` is accepted.
Denominators must be nonzero base polynomials, and only a factor free of
the Ore variable may be divided or carry a fraction to its right: ``1/x*d``
is the left fraction ``x^-1 * d`` while ``d/x`` and ``1/d`` are rejected.
"""

from __future__ import annotations

import re
from typing import List, Union

from .coeff import BasePoly, divide_exact, ulcm
from .errors import ParseError
from .matrix import OreFraction, OreMatrix
from .ore import AlgebraSpec, OrePoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Frac:
    """Left fraction ``den^-1 * num`` used during parsing."""

    __slots__ = ("den", "num")

    def __init__(self, den: BasePoly, num: OrePoly):
        self.den = den
        self.num = num


class _Parser:
    def __init__(self, text: str, spec: AlgebraSpec, allow_op: bool = True):
        self.text = text
        self.spec = spec
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_op = allow_op
        self.one = spec.base({(0,) * spec.nvars: spec.field.one})
        self.names = {name: k for k, name in enumerate(spec.var_names)}

    # token helpers -----------------------------------------------------------

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym):
        kind, val, pos = self.take()
        if kind != "op" or val != sym:
            raise ParseError(f"expected '{sym}', found {self._show(kind, val)}", pos)

    @staticmethod
    def _show(kind, val):
        return "end of input" if kind == "end" else repr(str(val))

    def at(self, sym):
        kind, val, _ = self.peek()
        return kind == "op" and val == sym

    # fraction arithmetic -------------------------------------------------------

    def poly(self, p: OrePoly) -> _Frac:
        return _Frac(self.one, p)

    def add(self, a: _Frac, b: _Frac) -> _Frac:
        if a.den == b.den:
            return _Frac(a.den, a.num + b.num)
        spec = self.spec
        if spec.nvars == 1:
            l = ulcm(a.den, b.den)
        else:
            l = a.den * b.den
        sa, sb = divide_exact(l, a.den), divide_exact(l, b.den)
        return _Frac(l, spec.from_base(sa) * a.num + spec.from_base(sb) * b.num)

    def mul(self, a: _Frac, b: _Frac, pos) -> _Frac:
        if b.den.is_constant():
            return _Frac(a.den, a.num * (b.num * (self.spec.field.one / b.den.constant_value())))
        if not a.num.is_base():
            raise ParseError("a fraction cannot stand to the right of an operator; "
                             "write it as a left factor such as 1/(p)*expr", pos)
        return _Frac(a.den * b.den, a.num * b.num)

    def div(self, a: _Frac, b: _Frac, pos) -> _Frac:
        if not b.num.is_base():
            raise ParseError(f"Ore variable '{self.spec.op_name}' in a denominator", pos)
        if not b.num:
            raise ParseError("division by zero", pos)
        bb = self.spec_base(b.num)
        if bb.is_constant():
            c = self.spec.field.one / bb.constant_value()
            return _Frac(a.den, a.num * c * self.spec.from_base(b.den))
        if not a.num.is_base():
            raise ParseError("only expressions free of the Ore variable can be divided; "
                             "write the fraction as a left factor such as 1/(p)*expr", pos)
        return _Frac(a.den * bb, a.num * self.spec.from_base(b.den))

    def spec_base(self, p: OrePoly) -> BasePoly:
        return p.coefficient(0)

    # grammar ---------------------------------------------------------------------

    def expr(self) -> _Frac:
        acc = self.term()
        while self.at("+") or self.at("-"):
            _, sym, _ = self.take()
            t = self.term()
            if sym == "-":
                t = _Frac(t.den, -t.num)
            acc = self.add(acc, t)
        return acc

    def term(self) -> _Frac:
        acc = self.factor()
        while self.at("*") or self.at("/"):
            _, sym, pos = self.take()
            f = self.factor()
            acc = self.mul(acc, f, pos) if sym == "*" else self.div(acc, f, pos)
        return acc

    def factor(self) -> _Frac:
        if self.at("-"):
            self.take()
            f = self.factor()
            return _Frac(f.den, -f.num)
        if self.at("+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> _Frac:
        base = self.atom()
        if self.at("^"):
            _, _, pos = self.take()
            kind, val, epos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", epos)
            out = self.poly(self.spec.one())
            for _ in range(val):
                out = self.mul(out, base, pos)
            return out
        return base

    def atom(self) -> _Frac:
        kind, val, pos = self.take()
        spec = self.spec
        if kind == "int":
            return self.poly(spec.const(val))
        if kind == "name":
            if val in self.names:
                return self.poly(spec.x(self.names[val]))
            if val == spec.op_name:
                if not self.allow_op:
                    raise ParseError(f"Ore variable '{val}' not allowed here", pos)
                return self.poly(spec.d())
            raise ParseError(f"unknown variable '{val}'", pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {self._show(kind, val)}", pos)

    def finish(self, value: _Frac) -> Union[OrePoly, OreFraction]:
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {self._show(kind, val)}", pos)
        return to_entry(value.den, value.num)


def to_entry(den: BasePoly, num: OrePoly) -> Union[OrePoly, OreFraction]:
    """Simplest form of ``den^-1 * num``: a polynomial when ``den`` divides every coefficient."""
    f = num.spec.field
    if den.is_constant():
        return num * (f.one / den.constant_value())
    if not num:
        return num
    spec = num.spec
    terms = {}
    for (b, a), c in num.terms.items():
        terms.setdefault(b, {})[a] = c
    quot = {}
    for b, t in terms.items():
        q = divide_exact(BasePoly(t, spec.nvars, f), den)
        if q is None:
            break
        quot[b] = q
    else:
        return OrePoly._raw({(b, a): c for b, q in quot.items() for a, c in q.terms.items()}, spec)
    lc = den.leading()[1]
    inv = f.one / lc
    return OreFraction(den * inv, num * inv)


def parse_expression(text: str, spec: AlgebraSpec) -> Union[OrePoly, OreFraction]:
    """Normal form of a single expression (an :class:`OreFraction` if a denominator remains)."""
    p = _Parser(text, spec)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    return p.finish(p.expr())


def parse_base_poly(text: str, spec: AlgebraSpec) -> BasePoly:
    """Polynomial in the base variables only."""
    p = _Parser(text, spec, allow_op=False)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    v = p.finish(p.expr())
    if isinstance(v, OreFraction):
        raise ParseError("expected a polynomial, found a fraction", 0)
    return v.coefficient(0)


def parse_matrix(text: str, spec: AlgebraSpec) -> OreMatrix:
    """Matrix in bracket notation, e.g. ``[[d^2-1, d+1], [d^2+1, d-x]]``."""
    p = _Parser(text, spec)
    p.expect("[")
    rows: List[list] = []
    while True:
        _, _, rpos = p.peek()
        p.expect("[")
        row = []
        while True:
            if p.at("]") or p.at(","):
                raise ParseError("empty matrix entry", p.peek()[2])
            v = p.expr()
            row.append(to_entry(v.den, v.num))
            if p.at(","):
                p.take()
                continue
            p.expect("]")
            break
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"row has {len(row)} entries, expected {len(rows[0])}", rpos)
        rows.append(row)
        if p.at(","):
            p.take()
            continue
        p.expect("]")
        break
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {p._show(kind, val)}", pos)
    return OreMatrix(rows, spec)


def parse_rows(rows, spec: AlgebraSpec) -> OreMatrix:
    """Matrix from a list of rows of expression strings (or numbers)."""
    if not rows or not isinstance(rows, list) or not all(isinstance(r, list) and r for r in rows):
        raise ParseError("matrix must be a nonempty list of nonempty rows")
    q = len(rows[0])
    out = []
    for k, r in enumerate(rows):
        if len(r) != q:
            raise ParseError(f"row {k + 1} has {len(r)} entries, expected {q}")
        out.append([parse_expression(str(e), spec) for e in r])
    return OreMatrix(out, spec)
