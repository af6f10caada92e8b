from rlab.span import (
    LimitKind,
    brute_force_dichotomy,
    classify_limit,
    f_span_family,
    g_span_family,
    h_span_family,
    integer_combination,
    integer_relation,
    joint_intersective_check,
    numeric_crosscheck,
    poly_shadow,
    verify_dichotomy,
)
from rlab.exactreal import parse


def test_dichotomy_matches_brute_force_small():
    for fam in (f_span_family(), g_span_family()):
        fast = verify_dichotomy(fam, 2, 1)
        slow = brute_force_dichotomy(fam, 2, 1)
        assert {k: v for k, v in fast.counts.items() if v} == slow


def test_dichotomy_full_size_f_and_g():
    for fam in (f_span_family(), g_span_family()):
        rep = verify_dichotomy(fam, 10, 5)
        assert rep.holds
        assert rep.matrices == 21**12
        assert sum(rep.counts.values()) == 21**12
        assert rep.counts[LimitKind.ZERO_FUNCTION.value] == 1


def test_classify_examples():
    fam = f_span_family()
    # second derivative of f1 is (3/4) t^(-1/2)
    g = integer_combination(fam, {(0, 2): 1})
    assert classify_limit(g).kind is LimitKind.LIMIT_ZERO
    g = integer_combination(fam, {(1, 0): 1})
    assert classify_limit(g).kind is LimitKind.LIMIT_INFINITY
    g = integer_combination(fam, {})
    assert classify_limit(g).kind is LimitKind.ZERO_FUNCTION


def test_numeric_crosscheck_agrees():
    for fam in (f_span_family(), g_span_family()):
        checks = numeric_crosscheck(fam, samples=40, seed=3)
        assert all(c.agrees for c in checks)


def test_shadows():
    assert poly_shadow(h_span_family()).is_multiples_of_t_squared()
    assert poly_shadow(h_span_family(include=(0, 1))).is_empty
    assert poly_shadow(h_span_family(include=(0,))).is_empty
    assert poly_shadow(h_span_family(include=(2,))).is_multiples_of_t_squared()
    assert poly_shadow(h_span_family(lam="sqrt(3)")).is_multiples_of_t_squared()


def test_intersectivity():
    rep = joint_intersective_check(poly_shadow(h_span_family()), 100)
    assert rep.holds and all(w == m for m, w in rep.witnesses.items())
    rep = joint_intersective_check([(1, 1)], 5)  # t + 1
    assert rep.witnesses[5] == 4
    rep = joint_intersective_check([(1, 2)], 2)  # 2t + 1 has no root mod 2
    assert rep.witnesses[2] is None and not rep.holds


def test_integer_relation():
    assert integer_relation([parse("1"), parse("sqrt(2)")]) is None
    rel = integer_relation([parse("1"), parse("sqrt(2)"), parse("3*sqrt(2) + 1/2")])
    assert rel is not None
