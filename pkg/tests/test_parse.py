import pytest
from hypothesis import given, settings, strategies as st

from orediag import OreFraction, OreMatrix, OrePoly, ParseError, parse_base_poly, parse_expression, parse_matrix, \
    preset_algebra
from orediag.parse import parse_rows

from oracles import CORPUS, random_ore, seeded

W = preset_algebra("weyl")
S = preset_algebra("shift")


def test_commutator_is_one():
    assert parse_expression("d*x - x*d", W) == W.one()


def test_running_example_matrix():
    M = parse_matrix("[[d^2-1, d+1],[d^2+1, d-x]]", W)
    assert M.shape == (2, 2)
    assert M.rows[1][1] == W.d() - W.x(0)
    assert M.rows[0][0] == W.d() * W.d() - W.one()


def test_operator_on_left_is_normalized():
    assert parse_expression("d*x^2", W) == parse_expression("x^2*d+2*x", W)
    assert parse_expression("S*t", S) == parse_expression("t*S+S", S)


def test_rational_constants():
    p = parse_expression("1/2*d + 3/4", W)
    assert p == parse_expression("(2*d+3)/4", W)
    assert not isinstance(p, OreFraction)


def test_fraction_entries():
    f = parse_expression("1/(x+1)*d", W)
    assert isinstance(f, OreFraction)
    assert f.den == parse_base_poly("x+1", W)
    assert parse_expression("(x^2+x)/x", W) == parse_expression("x+1", W)


def test_error_ore_variable_in_denominator():
    with pytest.raises(ParseError) as ei:
        parse_matrix("[[1/d]]", W)
    assert ei.value.pos == 3  # the offending division
    assert "denominator" in str(ei.value)


@pytest.mark.parametrize("text, pos", [
    ("[[d, 1],[x]]", 8),
    ("[[d, ]]", 5),
    ("[[d x]]", 4),
    ("[[d^x]]", 4),
    ("[[z*d]]", 2),
    ("[[d/x]]", 3),
    ("[[1/0]]", 3),
])
def test_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as ei:
        parse_matrix(text, W)
    assert ei.value.pos == pos


@pytest.mark.parametrize("text", ["", "[]", "[[]]", "[[d]", "[[d]],", "d"])
def test_malformed_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix(text, W)


def test_empty_expression():
    with pytest.raises(ParseError):
        parse_expression("   ", W)


def test_parse_rows():
    M = parse_rows([["d", 1], ["x", "d-x"]], W)
    assert M == parse_matrix("[[d, 1],[x, d-x]]", W)
    with pytest.raises(ParseError):
        parse_rows([["d"], ["x", "1"]], W)
    with pytest.raises(ParseError):
        parse_rows([], W)


def test_base_poly_rejects_operator():
    with pytest.raises(ParseError):
        parse_base_poly("x*d", W)


# round trips ---------------------------------------------------------------------------------

@pytest.mark.parametrize("spec, text", CORPUS, ids=[f"m{k}" for k in range(len(CORPUS))])
def test_corpus_round_trip(spec, text):
    M = parse_matrix(text, spec)
    again = parse_matrix("[" + ", ".join("[" + ", ".join(r) + "]" for r in M.to_strings()) + "]", spec)
    assert again == M
    for row in M.rows:
        for e in row:
            assert parse_expression(e.to_string(), spec) == e


@pytest.mark.parametrize("name", ["weyl", "shift", "difference", "qweyl"])
@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_print_parse_identity(name, seed):
    spec = preset_algebra(name, variables=["x", "y"] if name == "weyl" else None,
                          q=3 if name == "qweyl" else None)
    p = random_ore(spec, seeded(seed), max_deg=3, max_xdeg=3, max_terms=5, bound=9)
    assert parse_expression(p.to_string(), spec) == p
    if p:
        v = spec.var_names[0]
        e = parse_expression(f"1/({v}+2)*({p.to_string()})", spec)
        if isinstance(e, OreFraction):
            assert e.num == p and e.den == parse_base_poly(f"{v}+2", spec)
        else:
            assert parse_expression(f"{v}+2", spec) * e == p


def test_matrix_printing_is_deterministic():
    M = parse_matrix(CORPUS[0][1], W)
    assert str(M) == str(parse_matrix(CORPUS[0][1], W))
    assert isinstance(M, OreMatrix) and isinstance(M.rows[0][0], OrePoly)
