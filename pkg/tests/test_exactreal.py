from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rlab.errors import DivideByZero, DomainError, ParseError, PrecisionExhausted
from rlab.exactreal import (
    Int,
    Norm,
    Order,
    Rat,
    Sqrt,
    as_expr,
    compare,
    compare_threshold,
    eval_interval,
    floor_exact,
    isqrt,
    nearest_exact,
    norm_below,
    parse,
    torus_norm,
)
from rlab.exactreal.radical import RadicalForm


def test_parse_precedence_and_render():
    e = parse("2*3/64")
    assert e.rational_value() == Fraction(3, 32)
    assert parse("sqrt(3)/4096").radical_form == RadicalForm.sqrt_of_int(3).scale(Fraction(1, 4096))
    assert parse(" -sqrt( 2 ) + 1 ").rational_value() is None
    for text in ["sqrt(2)/6", "1 + sqrt(2)", "-(1/3)*sqrt(5) - 7", "norm(sqrt(2))", "23/512"]:
        e = parse(text)
        assert parse(str(e)).radical_form == e.radical_form


@pytest.mark.parametrize("bad", ["", "sqrt(2", "2 $ 3", "1/", "(1))", "sqr(2)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_zero_denominator():
    with pytest.raises(DivideByZero):
        parse("1/0")
    with pytest.raises(DivideByZero):
        eval_interval(Int(1) / (Sqrt(Int(2)) - Sqrt(Int(2))), 64)


def test_negative_sqrt():
    with pytest.raises(DomainError):
        eval_interval(Sqrt(Int(1) - Sqrt(Int(2))), 64)


def test_radical_canonical_form():
    s2, s3, s6 = (RadicalForm.sqrt_of_int(k) for k in (2, 3, 6))
    assert (s2 * s3) == s6
    assert (s2 * s2).is_rational and (s2 * s2).rational_part == 2
    assert RadicalForm.sqrt_of_int(12) == s3.scale(2)
    x = RadicalForm.rational(1) + s2
    assert (x * x.inverse()).rational_part == 1
    assert parse("sqrt(8) - 2*sqrt(2)").rational_value() == 0


def test_interval_width_and_containment():
    iv = eval_interval(parse("sqrt(2)"), 100)
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2
    assert iv.width <= Fraction(2, 2**100) * 2
    big = eval_interval(parse("1000*sqrt(3)"), 80)
    assert big.lo ** 2 <= 3 * 10**6 <= big.hi ** 2
    assert big.width <= Fraction(2, 2**80) * 1733


def test_compare_and_equal():
    assert compare("sqrt(2)", "141421/100000") is Order.ABOVE
    assert compare("sqrt(2)*sqrt(3)", "sqrt(6)") is Order.EQUAL
    assert compare_threshold(Norm(parse("sqrt(2)")), Fraction(1, 2)) is Order.BELOW
    assert compare(Int(1), Int(2)) is Order.BELOW


def test_torus_norm():
    tn = torus_norm(parse("sqrt(2)"), 80)
    assert tn.lo <= Fraction(41421356, 10**8) + Fraction(1, 10**8)
    assert tn.hi >= Fraction(41421356, 10**8)
    assert torus_norm(Rat(3, 4)).hi == Fraction(1, 4)
    assert norm_below(parse("408*sqrt(2)"), Fraction(1, 512))
    assert not norm_below(parse("sqrt(2)"), Fraction(1, 4))


def test_floor_and_nearest():
    assert floor_exact(parse("sqrt(2)")) == 1
    assert floor_exact(parse("-sqrt(2)")) == -2
    assert nearest_exact(Rat(5, 2)) == 3  # ties go up
    assert nearest_exact(Rat(-5, 2)) == -2
    assert floor_exact(parse("sqrt(1000000000000)")) == 10**6


def test_nested_radical_uses_refinement():
    e = Sqrt(Int(1) + Sqrt(Int(2)))  # outside the canonical field
    assert e.radical_form is None
    assert floor_exact(e) == 1
    assert compare(e, Rat(155, 100)) is Order.ABOVE


def test_precision_cap():
    e = Sqrt(Int(1) + Sqrt(Int(2)))
    with pytest.raises(PrecisionExhausted):
        # exactly 1/4 but outside the canonical field: refinement never separates
        norm_below(e - e + Rat(1, 4), Fraction(1, 4), cap_bits=256)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**30))
def test_floor_sqrt_matches_isqrt(n):
    assert floor_exact(Sqrt(Int(n))) == isqrt(n)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6), st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6))
def test_compare_rationals_matches_fraction(a, b):
    want = Order.BELOW if a < b else Order.ABOVE if a > b else Order.EQUAL
    assert compare(as_expr(a), as_expr(b)) is want


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 50), st.integers(1, 64))
def test_interval_encloses_radical(m, r, bits):
    e = Int(m) * Sqrt(Int(r))
    iv = eval_interval(e, bits)
    lo, hi = e.radical_form.enclose(bits + 8)
    assert iv.lo <= Fraction(hi, 2 ** (bits + 8)) and Fraction(lo, 2 ** (bits + 8)) <= iv.hi
