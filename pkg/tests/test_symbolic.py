from fractions import Fraction as F
from math import inf, pi

import pytest
from hypothesis import given, strategies as st

from gcapacity.symbolic import (
    PiLinear, Radical, RadicalInterval, iroot, parse_pilinear, parse_rat, pi_bounds,
)


def test_parse_rat_forms():
    assert parse_rat("3/4") == F(3, 4)
    assert parse_rat(7) == 7
    assert parse_rat(" -2/6 ") == F(-1, 3)


@pytest.mark.parametrize("bad,msg", [("3/0", "zero denominator"), (1.5, "floats"), ("x", "cannot parse")])
def test_parse_rat_rejects(bad, msg):
    with pytest.raises(ValueError, match=msg):
        parse_rat(bad, "w")


def test_parse_rat_names_field():
    with pytest.raises(ValueError, match=r"^vertices\[1\]\[0\]: zero denominator in '3/0'$"):
        parse_rat("3/0", "vertices[1][0]")


@given(st.integers(0, 10 ** 30), st.integers(2, 6))
def test_iroot_is_floor(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


@pytest.mark.parametrize("rad,idx,text", [
    (2, 2, "sqrt(2)"), (8, 4, "(8)^(1/4)"), (4, 2, "2"), (F(1, 16), 4, "1/2"), (inf, 2, "+inf"),
])
def test_radical_str(rad, idx, text):
    assert str(Radical.of(rad, idx)) == text


@given(st.fractions(min_value=0, max_value=1000), st.fractions(min_value=0, max_value=1000))
def test_radical_order_matches_powers(a, b):
    x, y = Radical.of(a, 2), Radical.of(b, 4)
    assert (x < y) == (a * a < b)
    assert (x == y) == (a * a == b)


def test_radical_bounds_bracket_root():
    lo, hi = Radical.of(2, 2).bounds(20)
    assert lo * lo < 2 < hi * hi and hi - lo <= F(1, 10 ** 20)
    assert Radical.of(2, 2).decimal(5) == "1.41421"


def test_interval_str():
    assert str(RadicalInterval(Radical.of(8, 4), Radical.of(8, 4))) == "(8)^(1/4)"
    assert str(RadicalInterval(Radical.of(1, 4), Radical.of(2, 4))) == "[1, (2)^(1/4)]"


@pytest.mark.parametrize("level", range(6))
def test_pi_bounds_enclose_and_shrink(level):
    lo, hi = pi_bounds(level)
    assert lo < F(pi) < hi
    if level:
        plo, phi = pi_bounds(level - 1)
        assert hi - lo <= phi - plo


def test_pilinear_compare_needs_refinement():
    # 22/7 - pi is tiny but positive; the base enclosure cannot decide it
    x = PiLinear(F(22, 7), F(-1))
    assert x.sign() == 1
    assert PiLinear(0, F(1, 5)) > F(1, 2)
    assert PiLinear(F(-355, 113), F(1)).sign() == -1


@pytest.mark.parametrize("text", ["pi", "-pi", "1/2 + 3/4*pi", "2 - pi", "1/10*pi", "5", "-1/3"])
def test_pilinear_round_trip(text):
    assert str(parse_pilinear(text)) == text


def test_pilinear_pi_over():
    assert parse_pilinear("3*pi/10") == PiLinear(0, F(3, 10))
    assert parse_pilinear("1 - pi/2") == PiLinear(1, F(-1, 2))


@given(st.fractions(-5, 5, max_denominator=20), st.fractions(-5, 5, max_denominator=20),
       st.fractions(-5, 5, max_denominator=20), st.fractions(-5, 5, max_denominator=20))
def test_pilinear_order_consistent_with_float(a, b, c, d):
    x, y = PiLinear(a, b), PiLinear(c, d)
    fx, fy = float(a) + float(b) * pi, float(c) + float(d) * pi
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
