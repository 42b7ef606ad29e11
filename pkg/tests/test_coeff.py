from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orediag import QQ, BasePoly, PrimeField, preset_algebra
from orediag.coeff import (EndoSpec, DerivSpec, ModP, apply_derivation, apply_endomorphism,
                           common_denominator, divide_exact, parse_field, ulcm)
from orediag.errors import SpecError, ZeroDenominator


def up(*cs, field=QQ):
    return BasePoly.from_coeffs([field(c) for c in cs], field)


def specs(name, **kw):
    A = preset_algebra(name, **kw)
    return A.endo, A.deriv


small = st.integers(-6, 6)
polys = st.lists(small, min_size=1, max_size=5).map(lambda cs: up(*cs))
nonzero_q = st.tuples(small, st.integers(1, 7)).filter(lambda t: t[0]).map(lambda t: QQ(Fraction(*t)))


# scalars ------------------------------------------------------------------------

def test_rationals_reduced():
    c = QQ(Fraction(6, -4))
    assert QQ.pair(c) == (-3, 2)


def test_residues_in_range():
    F = PrimeField(7)
    assert F(-1).v == 6
    assert (F(3) / F(5)) * F(5) == F(3)
    with pytest.raises(ZeroDivisionError):
        F(1) / F(7)


def test_parse_field():
    assert parse_field("QQ") == QQ
    assert parse_field("GF(5)") == PrimeField(5)
    with pytest.raises(SpecError):
        parse_field("GF(6)")


@given(st.tuples(nonzero_q, nonzero_q, nonzero_q))
def test_field_axioms_qq(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * (QQ.one / a) == QQ.one
    n, d = QQ.pair(a * b / c)
    assert d > 0 and Fraction(n, d).denominator == d


@given(st.tuples(st.integers(1, 12), st.integers(0, 12), st.integers(0, 12)))
def test_field_axioms_gf13(t):
    F = PrimeField(13)
    a, b, c = (F(v) for v in t)
    assert a * (b + c) == a * b + a * c
    assert a * (F.one / a) == F.one
    assert all(0 <= x.v < 13 for x in (a + b, a * c, a - c))


# endomorphism and derivation ----------------------------------------------------

def test_endomorphism_examples():
    e, _ = specs("commutative")
    assert apply_endomorphism(e, up(1, 0, 1)) == up(1, 0, 1)
    e, _ = specs("shift")
    assert apply_endomorphism(e, up(0, 0, 1)) == up(1, 2, 1)
    e, _ = specs("qweyl", q=2)
    assert apply_endomorphism(e, up(0, 0, 0, 1)) == up(0, 0, 0, 8)


def test_derivation_examples():
    assert apply_derivation(*specs("weyl"), up(0, 0, 0, 1)) == up(0, 0, 3)
    assert apply_derivation(*specs("difference"), up(0, 0, 1)) == up(1, 2)
    assert apply_derivation(*specs("qweyl", q=2), up(0, 0, 1)) == up(0, 3)


def test_variable_count_mismatch():
    e, d = specs("weyl")
    p = BasePoly({(1, 1): QQ(1)}, 2)
    with pytest.raises(SpecError):
        apply_endomorphism(e, p)
    with pytest.raises(SpecError):
        apply_derivation(e, d, p)


@pytest.mark.parametrize("name", ["weyl", "shift", "difference", "qweyl", "qdifference"])
@settings(max_examples=30, deadline=None)
@given(p=polys, q=polys)
def test_sigma_multiplicative_and_skew_leibniz(name, p, q):
    e, d = specs(name, q=3 if name.startswith("q") else None)
    assert apply_endomorphism(e, p * q) == apply_endomorphism(e, p) * apply_endomorphism(e, q)
    assert apply_endomorphism(e, p + q) == apply_endomorphism(e, p) + apply_endomorphism(e, q)
    lhs = apply_derivation(e, d, p * q)
    rhs = apply_endomorphism(e, p) * apply_derivation(e, d, q) + apply_derivation(e, d, p) * q
    assert lhs == rhs


def test_bivariate_skew_leibniz():
    A = preset_algebra("weyl", variables=["y", "x"], active="x")
    p = BasePoly({(2, 1): QQ(3), (0, 2): QQ(-1)}, 2)
    q = BasePoly({(1, 1): QQ(1), (0, 0): QQ(2)}, 2)
    e, d = A.endo, A.deriv
    assert apply_derivation(e, d, p * q) == (apply_endomorphism(e, p) * apply_derivation(e, d, q)
                                             + apply_derivation(e, d, p) * q)


def test_endo_inverse():
    e = EndoSpec((QQ(2),), (QQ(1),))
    p = up(1, -2, 5)
    assert apply_endomorphism(e.inverse(), apply_endomorphism(e, p)) == p


def test_derivspec_rank():
    e = EndoSpec((QQ(1),), (QQ(0),))
    d = DerivSpec((up(1), up(1)))
    with pytest.raises(SpecError):
        apply_derivation(e, d, up(1))


# common denominators -------------------------------------------------------------

def test_common_denominator_examples():
    assert common_denominator([up(1)]) == up(1)
    x = up(0, 1)
    assert common_denominator([x, x - up(1)]) == up(0, -1, 1)
    assert common_denominator([x, up(0, 1, 1)]) == up(0, 1, 1)
    # product strategy repeats nothing but does not minimize
    assert common_denominator([x, up(0, 1, 1)], use_gcd=False) == up(0, 0, 1, 1)


def test_common_denominator_multivariate_product():
    x = BasePoly.var(0, 2)
    y = BasePoly.var(1, 2)
    assert common_denominator([x, y, x * QQ(3)]) == x * y


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        common_denominator([up(0)])


@given(st.lists(polys.filter(lambda p: not p.is_zero()), min_size=1, max_size=4), st.booleans())
def test_common_denominator_divisible(dens, mode):
    c = common_denominator(dens, use_gcd=mode)
    assert not c.is_zero()
    assert all(divide_exact(c, d) is not None for d in dens)


@given(polys.filter(lambda p: not p.is_zero()), polys.filter(lambda p: not p.is_zero()))
def test_ulcm_divides_product(a, b):
    m = ulcm(a, b)
    assert divide_exact(m, a) is not None and divide_exact(m, b) is not None
    assert divide_exact(a * b, m) is not None


def test_modp_mixed_prime_error():
    with pytest.raises(TypeError):
        ModP(1, 5) + ModP(1, 7)
