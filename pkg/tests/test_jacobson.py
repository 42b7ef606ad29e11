import random

import pytest

from orediag import (NoExponentFound, NotSimpleDomain, OreMatrix, PrimeField, RatOrePoly, cyclic_vector_probe,
                     find_shift_exponent, parse_expression, parse_matrix, preset_algebra, right_divide,
                     strengthen_diagonal)
from orediag.errors import SpecError
from orediag.jacobson import probe_annihilates, random_probe
from orediag.rational import rat_is_unimodular, rat_matmul

import weyl_sympy

W = preset_algebra("weyl")


def R(text, A=W):
    return RatOrePoly.from_ore(parse_expression(text, A), A)


def diag(*entries, A=W):
    n = len(entries)
    z = RatOrePoly.zero(A)
    return [[entries[i] if i == j else z for j in range(n)] for i in range(n)]


def random_weyl_op(rng, deg):
    while True:
        f = R("0")
        for k in range(deg + 1):
            c = R(f"({rng.randint(-3, 3)}*x+{rng.randint(-3, 3)})")
            f = f + c * R(f"d^{k}")
        if f.degree() == deg:
            return f


# shift exponent ----------------------------------------------------------------------------

def test_shift_exponent_d_d():
    i, a, b = find_shift_exponent(R("d"), R("d"))
    assert (i, a, b) == (1, R("x"), R("1"))


def test_shift_exponent_d2_d():
    m1, m2 = R("d^2"), R("d")
    i, a, b = find_shift_exponent(m1, m2)
    # every smaller exponent leaves remainder zero, the chosen one does not
    xi = R(f"x^{i}")
    for k in range(i):
        assert not right_divide(m1 * R(f"x^{k}"), m2)[1]
    assert b and b.degree() < m2.degree()
    assert m1 * xi == a * m2 + b
    assert i == 2


def test_shift_exponent_guards():
    with pytest.raises(ValueError):
        find_shift_exponent(R("x*d+1"), R("1"))
    with pytest.raises(ValueError):
        find_shift_exponent(R("d"), R("d^2"))


def test_shift_exponent_shift_algebra_fails():
    S = preset_algebra("shift")
    with pytest.raises(NoExponentFound):
        find_shift_exponent(R("S", S), R("S", S), require_weyl=False)


# strengthening ------------------------------------------------------------------------------

def _check(res, D):
    assert rat_matmul(rat_matmul(res.U, D), res.V) == res.D
    assert rat_matmul(rat_matmul(res.pre_U, D), res.V) == res.pre_D
    assert all(e == R("1") for e in res.diagonal()[:-1])
    assert res.m.degree() == sum(res.input_degrees)
    assert res.degree_certificate


def test_diag_d_d():
    D = diag(R("d"), R("d"))
    res = strengthen_diagonal(D, certify=True)
    _check(res, D)
    assert res.m.degree() == 2


def test_already_normal():
    m = R("x*d^2+1")
    D = diag(R("1"), m)
    res = strengthen_diagonal(D)
    assert res.D == diag(R("1"), m.monic())
    assert res.V == diag(R("1"), R("1"))


def test_polynomial_matrix_input():
    D = parse_matrix("[[d^2+x, 0],[0, x*d+1]]", W)
    res = strengthen_diagonal(D, certify=True)
    assert [e.degree() for e in res.diagonal()] == [0, 3]


def test_trace_degrees_decrease():
    D = diag(R("d^2+x"), R("x*d+1"), R("d"))
    res = strengthen_diagonal(D)
    _check(res, D)
    for t in res.trace:
        assert min(t.after) < t.before[1]
        assert t.remainder_degree < t.before[1]


def test_random_diagonals_certified():
    rng = random.Random(41)
    for _ in range(6):
        D = diag(random_weyl_op(rng, rng.randint(1, 2)), random_weyl_op(rng, rng.randint(1, 2)))
        res = strengthen_diagonal(D)
        _check(res, D)
        assert rat_is_unimodular(res.U) and rat_is_unimodular(res.V)


@pytest.mark.parametrize("name", ["shift", "difference", "qweyl", "qdifference", "commutative"])
def test_not_simple_presets(name):
    A = preset_algebra(name, q=2 if name.startswith("q") else None)
    D = diag(R("d" if A.op_name == "d" else A.op_name, A), R(A.op_name, A), A=A)
    with pytest.raises(NotSimpleDomain) as ei:
        strengthen_diagonal(D)
    assert name in str(ei.value)


def test_not_simple_custom_and_positive_characteristic():
    for A in (preset_algebra("weyl", field=PrimeField(3)), W.opposite()):
        with pytest.raises(NotSimpleDomain):
            strengthen_diagonal(diag(R("d", A), R("d", A), A=A))


def test_shift_diag_ss_message():
    S = preset_algebra("shift")
    with pytest.raises(NotSimpleDomain, match=r"Diag\(s, s\)"):
        strengthen_diagonal(diag(R("S", S), R("S", S), A=S))


def test_best_effort_reports():
    S = preset_algebra("shift")
    D = diag(R("S", S), R("S", S), A=S)
    res = strengthen_diagonal(D, best_effort=True)
    assert not res.complete and res.notes
    assert rat_matmul(rat_matmul(res.U, D), res.V) == res.D


def test_input_guards():
    with pytest.raises(SpecError):
        strengthen_diagonal([[R("d"), R("1")], [RatOrePoly.zero(W), R("d")]])
    with pytest.raises(SpecError):
        strengthen_diagonal(diag(R("d"), RatOrePoly.zero(W)))
    A = preset_algebra("weyl", variables=["y", "x"])
    with pytest.raises(SpecError):
        strengthen_diagonal(OreMatrix.diag([A.d(), A.d()], A))


# cyclic vector probe -------------------------------------------------------------------------------

def test_probe_examples():
    D = diag(R("d"), R("d"))
    good = cyclic_vector_probe(D, probe=[R("1"), R("x")])
    assert good.c == R("d^2") and good.passed and not good.retry
    bad = cyclic_vector_probe(D, probe=[R("1"), R("1")])
    assert bad.c == R("d") and not bad.passed and bad.retry
    for res, want in ((good, 2), (bad, 1)):
        assert weyl_sympy.annihilator_degree(res.probe, [R("d"), R("d")], 2) == want
        assert weyl_sympy.annihilates(res.c, res.probe, [R("d"), R("d")])


def test_probe_single_entry():
    m = R("x*d^2+d+1")
    res = cyclic_vector_probe(diag(m), probe=[R("1")])
    assert res.c == m.monic() and res.passed


def test_probe_seeded_deterministic():
    D = diag(R("d^2+x"), R("d"))
    a, b = cyclic_vector_probe(D, seed=5), cyclic_vector_probe(D, seed=5)
    assert a.c == b.c and a.probe == b.probe
    assert all(p.degree() < m.degree() for p, m in zip(a.probe, [R("d^2+x"), R("d")]))


def test_random_probe_coefficients_bounded():
    probe = random_probe([R("d^2"), R("d")], random.Random(1), bound=10)
    for p in probe:
        for c in p.coeffs:
            num, den = c.to_base_pair()
            assert den.is_constant() and all(abs(int(v)) <= 10 for v in num.terms.values())


def test_probe_against_ansatz_random():
    rng = random.Random(77)
    for seed in range(4):
        entries = [random_weyl_op(rng, rng.randint(1, 2)) for _ in range(2)]
        res = cyclic_vector_probe(diag(*entries), seed=seed)
        assert probe_annihilates(res, diag(*entries))
        assert weyl_sympy.annihilates(res.c, res.probe, entries)
        want = weyl_sympy.annihilator_degree(res.probe, entries, sum(e.degree() for e in entries))
        assert res.c.degree() == want


def test_probe_not_simple():
    S = preset_algebra("shift")
    with pytest.raises(NotSimpleDomain):
        cyclic_vector_probe(diag(R("S", S), R("S", S), A=S))
