import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rlab.errors import UnsupportedShape
from rlab.exactreal import Int, Sqrt, isqrt
from rlab.hardy import (
    HardyCombo,
    IterateSeq,
    Polynomial,
    Rounding,
    combo_deviation,
    evaluate,
    f_family,
    g_family,
    h_family,
    iterate,
    iterate_many,
)

F1, F2 = f_family("sqrt(2)")
G1, G2 = g_family("sqrt(2)", "sqrt(2)", 6)


def test_known_iterates():
    assert iterate(IterateSeq(F1), 4) == 8
    assert iterate(IterateSeq(F2), 2) == 6  # sqrt(2) * 2^(3/2) + 2 is exactly 6
    assert iterate(IterateSeq(F1), 5) == 11
    assert iterate(IterateSeq(G2), 1) == 15  # sqrt2 + 6 + 6 sqrt2 = 6 + 7 sqrt2 = 15.899


def test_floor_oracles_small_range():
    s1, s2 = IterateSeq(F1), IterateSeq(F2)
    for n in range(1, 2000):
        assert iterate(s1, n) == isqrt(n**3)
        assert iterate(s2, n) == isqrt(2 * n**3) + n


def test_interval_path_agrees():
    rng = random.Random(7)
    for s in (IterateSeq(F2), IterateSeq(G2), IterateSeq(G2, Rounding.NEAREST)):
        for n in (rng.randrange(1, 10**9) for _ in range(30)):
            assert iterate(s, n) == iterate(s, n, path="interval")


def test_nearest_of_square_is_exact():
    _, _, h3 = h_family("sqrt(2)", 6)
    s = IterateSeq(h3, Rounding.NEAREST)
    assert iterate_many(s, range(1, 200)) == [n * n for n in range(1, 200)]


def test_nearest_rounds_ties_up():
    half = HardyCombo.of((Fraction(1, 2), Fraction(1)))  # n/2
    s = IterateSeq(half, Rounding.NEAREST)
    assert [iterate(s, n) for n in (1, 2, 3)] == [1, 1, 2]


def test_shape_validation():
    with pytest.raises(UnsupportedShape):
        HardyCombo.of((Int(1), Fraction(1, 3)))
    with pytest.raises(UnsupportedShape):
        HardyCombo.of((Int(1), Fraction(-1, 2)))
    with pytest.raises(ValueError):
        iterate(IterateSeq(F1), 0)


def test_evaluate_is_exact_expression():
    assert evaluate(F1, 9).rational_value() == 27
    assert evaluate(F2, 2).radical_form == (Int(4) * Sqrt(Int(2)) * Sqrt(Int(2)) / Int(2) + Int(2)).radical_form


def test_polynomial_roundtrip():
    P = Polynomial.of("6*sqrt(2)", 6, 0)
    assert P.degree == 1
    assert Polynomial.from_json(P.to_json()) == P
    assert P(2).radical_form == Polynomial.of("6*sqrt(2)", 6).radical_at(2)


def test_combo_deviation_within_bound():
    rep = combo_deviation(
        [IterateSeq(G1), IterateSeq(G2)], ["-sqrt(2)", 1], Polynomial.of("6*sqrt(2)", 6), range(1, 500)
    )
    assert rep.max_enclosure.hi < 1 + Fraction(14142136, 10**7)
    assert rep.max_enclosure.lo <= rep.max_enclosure.hi
    assert 1 <= rep.argmax < 500


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**12))
def test_f_iterates_match_isqrt(n):
    assert iterate(IterateSeq(F1), n) == isqrt(n**3)
    assert iterate(IterateSeq(F2), n) == isqrt(2 * n**3) + n
