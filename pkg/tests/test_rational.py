import pytest
from hypothesis import given, settings, strategies as st

from orediag import (QQ, RatFunc, RatOrePoly, diagonalize, diagonalize_rational, gcd_lclm, lclm, left_divide,
                     parse_expression, parse_matrix, preset_algebra, right_divide)
from orediag.errors import SpecError, ZeroDenominator
from orediag.rational import (echelon, rat_identity, rat_is_unimodular, rat_matmul, rat_matrix, rat_sigma_delta,
                              rational_degrees)

W = preset_algebra("weyl")
S = preset_algebra("shift")
EX2 = "[[d^2-1, d+1],[d^2+1, d-x]]"


def R(text, A=W):
    return RatOrePoly.from_ore(parse_expression(text, A), A)


def rf(num, den=None):
    return RatFunc([QQ(c) for c in num], None if den is None else [QQ(c) for c in den], QQ)


def rat_ops(A, max_deg=3):
    coeff = st.tuples(st.lists(st.integers(-4, 4), min_size=1, max_size=3),
                      st.lists(st.integers(-3, 3), min_size=1, max_size=2).filter(any))
    return st.lists(coeff, min_size=1, max_size=max_deg + 1).map(
        lambda cs: RatOrePoly([rf(n, d) for n, d in cs], A))


nonzero = rat_ops(W).filter(bool)


# coefficient field ------------------------------------------------------------------------

def test_ratfunc_reduced_and_monic_den():
    r = rf([0, 2, 2], [0, 0, 4])  # (2x+2x^2)/(4x^2) = (x+1)/(2x)
    assert r == rf([1, 1], [0, 2])
    assert r.to_base_pair()[1].leading()[1] == 1
    with pytest.raises(ZeroDenominator):
        rf([1], [0])


def test_sigma_delta_examples():
    inv_x = rf([1], [0, 1])
    s, d = rat_sigma_delta(W, inv_x)
    assert s == inv_x and d == rf([-1], [0, 0, 1])
    s, _ = rat_sigma_delta(S, inv_x)
    assert s == rf([1], [1, 1])


def test_sigma_delta_quotient_rule_matches_multiplication():
    # d * (p/q) = sigma(p/q) d + delta(p/q) in the operator ring
    r = rf([1, 2], [3, 0, 1])
    for A in (W, S, preset_algebra("difference"), preset_algebra("qweyl", q=3)):
        s, dl = rat_sigma_delta(A, r)
        lhs = RatOrePoly.d_power(1, A) * RatOrePoly([r], A)
        assert lhs == RatOrePoly([dl, s], A)


def test_needs_one_variable():
    A = preset_algebra("weyl", variables=["y", "x"])
    with pytest.raises(SpecError):
        RatOrePoly.from_ore(parse_expression("x*d", A))


# division ------------------------------------------------------------------------------------

def test_right_divide_examples():
    q, r = right_divide(R("x*d+1"), R("d"))
    assert q == R("x") and r == R("1")
    q, r = right_divide(R("d^2"), R("x*d"))
    assert r == RatOrePoly.zero(W)
    assert q == RatOrePoly([rf([-1], [0, 0, 1]), rf([1], [0, 1])], W)
    assert q * R("x*d") == R("d^2")
    q, r = right_divide(R("d"), R("d"))
    assert q == R("1") and not r
    with pytest.raises(ZeroDivisionError):
        right_divide(R("d"), RatOrePoly.zero(W))


@pytest.mark.parametrize("A", [W, S], ids=["weyl", "shift"])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_division_identities(A, data):
    b = data.draw(rat_ops(A, 4))
    a = data.draw(rat_ops(A, 2).filter(bool))
    q, r = right_divide(b, a)
    assert b == q * a + r and r.degree() < a.degree()
    q2, r2 = left_divide(b, a)
    assert b == a * q2 + r2 and r2.degree() < a.degree()


# gcd and lclm --------------------------------------------------------------------------------------

def test_gcd_lclm_examples():
    g, s, t, l, u, w = gcd_lclm(R("d"), R("d"))
    assert g == R("d") and l == R("d")
    g, *_ = gcd_lclm(R("d^2-1"), R("d-1"))
    assert g == R("d-1")
    assert not right_divide(R("d^2-1"), g)[1]
    g, s, t, l, u, w = gcd_lclm(R("d"), R("d-1"))
    assert g == R("1") and l.degree() == 2
    assert not right_divide(l, R("d"))[1] and not right_divide(l, R("d-1"))[1]
    with pytest.raises(ZeroDivisionError):
        gcd_lclm(RatOrePoly.zero(W), RatOrePoly.zero(W))


@pytest.mark.parametrize("A", [W, S], ids=["weyl", "shift"])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_bezout_and_lclm(A, data):
    a = data.draw(rat_ops(A, 3).filter(bool))
    b = data.draw(rat_ops(A, 3).filter(bool))
    g, s, t, l, u, w = gcd_lclm(a, b)
    assert g == s * a + t * b
    assert not right_divide(a, g)[1] and not right_divide(b, g)[1]
    assert l == u * a == w * b
    # degree count for the Euclidean scheme over a division ring of coefficients
    assert l.degree() == a.degree() + b.degree() - g.degree()


def test_lclm_many():
    ops = [R("d"), R("d-1"), R("x*d+1")]
    m = lclm(ops)
    assert all(not right_divide(m, p)[1] for p in ops)
    assert m.lc() == rf([1])


# diagonalization ------------------------------------------------------------------------------------

def test_running_example_rational():
    A = parse_matrix(EX2, W)
    res = diagonalize_rational(A)
    assert sorted(rational_degrees(res)) == [0, 2]
    assert rat_matmul(rat_matmul(res.U, res.M), res.V) == res.D
    assert all(res.D[k][k].lc() == rf([1]) for k in range(2))


def test_row_modules_agree_across_strategies():
    A = parse_matrix(EX2, W)
    poly = diagonalize(A)
    rat = diagonalize_rational(A)
    M0 = rat_matrix(A)
    UpM = rat_matmul(rat_matrix(poly.U), M0)
    UrM = rat_matmul(rat.U, M0)

    def hermite(rows):
        pivots, syz = echelon(rows, W)
        assert not syz
        return [v for _, v, _ in pivots]
    # U is invertible over K(x)[d], so U*M spans the row module of M
    assert hermite(M0) == hermite(UpM) == hermite(UrM)
    assert sum(poly.degrees()) == sum(rational_degrees(rat))


def test_identity_and_diagonal_input():
    I = rat_identity(2, W)
    res = diagonalize_rational(I)
    assert res.U == I and res.V == I and res.D == I
    D = [[R("d"), RatOrePoly.zero(W)], [RatOrePoly.zero(W), R("d")]]
    assert diagonalize_rational(D).D == D


def test_shift_running_example_rational():
    A = parse_matrix("[[S^2-1, S+1],[S^2+1, S-t]]", S)
    res = diagonalize_rational(A)
    assert sorted(rational_degrees(res)) == [0, 2]


def test_rational_opposite_mechanism():
    A = parse_matrix("[[d^2+x, d],[x*d, d+1]]", preset_algebra("qweyl", q=2))
    res = diagonalize_rational(A)
    assert res.sideswap == "opposite"
    assert rat_matmul(rat_matmul(res.U, res.M), res.V) == res.D


def test_rank_deficient_rational():
    A = parse_matrix("[[d, 1],[x*d, x]]", W)
    res = diagonalize_rational(A)
    assert rational_degrees(res) == [0]
    assert rat_matmul(rat_matmul(res.U, res.M), res.V) == res.D


def test_swell_statistics_recorded():
    res = diagonalize_rational(parse_matrix(EX2, W))
    assert [it["iteration"] for it in res.stats.iterations] == list(range(1, res.iterations + 1))
    assert all(it["max_coeff_bits"] > 0 for it in res.stats.iterations)


def test_rat_is_unimodular():
    poly = diagonalize(parse_matrix(EX2, W))
    assert rat_is_unimodular(rat_matrix(poly.U))
    assert not rat_is_unimodular(rat_matrix(parse_matrix("[[d, 0],[0, 1]]", W)))
