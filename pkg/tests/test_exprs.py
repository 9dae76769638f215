import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssalg import Element, QQ, ZZ, elem_mul, elem_star
from ssalg.exprs import ExprError, format_element, parse_expr, parse_germ

from conftest import build_ex41, random_triple

_EX41 = build_ex41()


def test_parse_single_projection(ex41):
    assert parse_expr("p(u,1)", ex41, ZZ) == Element.p(ex41, ZZ, "u", 1)
    assert parse_expr("p(u,-1)", ex41, ZZ) == Element.p(ex41, ZZ, "u", -1)


def test_parse_combination(ex43):
    text = "p(u,0)+2*p(u,1)+p(u,2)-p(u,3)-2*p(u,4)-p(u,5)"
    want = Element.zero(ex43, ZZ)
    for m, c in {0: 1, 1: 2, 2: 1, 3: -1, 4: -2, 5: -1}.items():
        want = want + Element.p(ex43, ZZ, "u", m).scale(c)
    assert parse_expr(text, ex43, ZZ) == want


def test_parse_products_and_adj(ex41):
    got = parse_expr("s(e,1)*adj(s(e,0))", ex41, ZZ)
    want = elem_mul(Element.s(ex41, ZZ, "e", 1), elem_star(Element.s(ex41, ZZ, "e", 0)))
    assert got == want
    assert parse_expr("(p(u,0))", ex41, ZZ) == Element.p(ex41, ZZ, "u", 0)


def test_parse_path_literals(ex41):
    got = parse_expr("s(e.f,0)", ex41, ZZ)
    (t, c), = got.canonical_items()
    assert t.alpha.edges == ("e", "f") and c == 1
    # a vertex id as path literal gives the projection
    assert parse_expr("s(u,2)", ex41, ZZ) == Element.p(ex41, ZZ, "u", 2)


def test_parse_errors(ex41):
    with pytest.raises(ExprError):
        parse_expr("p(zz,0)", ex41, ZZ)
    with pytest.raises(ExprError) as err:
        parse_expr("s(f.e,0)", ex41, ZZ)  # s(f)=v but r(e)=u
    assert "compose" in str(err.value)
    with pytest.raises(ExprError):
        parse_expr("p(u,0)+", ex41, ZZ)
    with pytest.raises(ExprError):
        parse_expr("q(u,0)", ex41, ZZ)
    with pytest.raises(ExprError):
        parse_expr("p(u,a)", ex41, ZZ)  # integer group


def test_parse_finite_group_elements(c2_swap):
    a = parse_expr("p(u,a)", c2_swap, ZZ)
    assert a == Element.p(c2_swap, ZZ, "u", "a")
    with pytest.raises(ExprError):
        parse_expr("p(u,-a)", c2_swap, ZZ)


def test_rational_coefficients(ex41):
    got = parse_expr("1/2*p(u,0)+3/2*p(v,0)", ex41, QQ)
    want = Element.p(ex41, QQ, "u", 0).scale(Fraction(1, 2)) + Element.p(
        ex41, QQ, "v", 0
    ).scale(Fraction(3, 2))
    assert got == want


def test_round_trip_random_elements(ex41, ex43, c2_swap):
    rng = random.Random(89)
    for act in (ex41, ex43, c2_swap):
        for _ in range(40):
            terms = {
                random_triple(rng, act, max_len=3): rng.choice([-3, -1, 1, 2])
                for _ in range(rng.randint(1, 4))
            }
            elem = Element(act, ZZ, terms)
            assert parse_expr(format_element(elem), act, ZZ) == elem


def test_round_trip_rational(ex41):
    elem = Element.p(ex41, QQ, "u", 2).scale(Fraction(-3, 7)) + Element.s(
        ex41, QQ, "e", -1
    ).scale(Fraction(5, 2))
    assert parse_expr(format_element(elem), ex41, QQ) == elem


@settings(max_examples=60, deadline=None)
@given(
    coeffs=st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=5),
    twists=st.lists(st.integers(min_value=-4, max_value=4), min_size=5, max_size=5),
)
def test_round_trip_diagonal_combinations(coeffs, twists):
    act = _EX41
    elem = Element.zero(act, ZZ)
    for c, m in zip(coeffs, twists):
        elem = elem + Element.p(act, ZZ, "u", m).scale(c)
    assert parse_expr(format_element(elem), act, ZZ) == elem


def test_parse_germ(ex41):
    germ = parse_germ("germ (u,0,u) : (e)^inf", ex41)
    assert germ.triple.g == 0
    assert germ.x.cycle.edges == ("e",)
    germ2 = parse_germ("germ (e,1,u) : f.(g)^inf", ex41)
    assert germ2.x.transient.edges == ("f",)
    with pytest.raises(Exception):
        parse_germ("germ (u,0,u) : (g)^inf", ex41)  # tail outside Z(u)


def test_germ_round_trip_via_str(ex41):
    germ = parse_germ("germ (e,1,u) : f.(g)^inf", ex41)
    again = parse_germ(str(germ), ex41)
    assert again == germ
