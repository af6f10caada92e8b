import random
from fractions import Fraction

import pytest

from rlab.bohr import BohrSpec, enumerate_with_density
from rlab.certify import (
    EmptyCert,
    NonThickCert,
    check_empty_cert,
    find_nonthick_h,
    find_thick_interval,
    finite_difference_check,
    fractional_norm_below,
    verify_inclusion,
    verify_interval,
    weyl_sum,
)
from rlab.errors import CertInvalid, NotFound
from rlab.exactreal import Int, Norm, Order, Rat, as_expr, compare
from rlab.hardy import IterateSeq, Polynomial, Rounding, g_family, h_family
from rlab.largeness import run_gap_profile

LINEAR = Polynomial.of(0, 1)


def test_nonthick_examples():
    assert find_nonthick_h("sqrt(2)", LINEAR, Fraction(1, 8), 10).h == 1
    assert find_nonthick_h("sqrt(2)", Polynomial.of(0, 0, 1), Fraction(1, 16), 10).h == 2
    cert = find_nonthick_h("sqrt(3)/4096", LINEAR, Fraction(15, 64), 10**5)
    assert cert.h == 1109 and cert.run_bound == 1109 and cert.check()
    assert NonThickCert.from_json(cert.to_json()) == cert
    assert cert.to_json()["inequality"] == "norm((1109/4096)*sqrt(3)) > 15/32"
    with pytest.raises(NotFound):
        find_nonthick_h("sqrt(3)/4096", LINEAR, Fraction(15, 64), 1000)


def test_nonthick_soundness_small():
    # every run of {n : ||gamma n|| < eta} is at most h long
    for gamma, eta in (("sqrt(2)/64", Fraction(1, 16)), ("sqrt(5)/1000", Fraction(1, 8))):
        cert = find_nonthick_h(gamma, LINEAR, eta, 10**4)
        ts, _ = enumerate_with_density(BohrSpec([gamma], [eta]), 2 * 10**5)
        assert run_gap_profile(ts).max_run <= cert.run_bound


def test_finite_differences():
    rng = random.Random(1)
    for _ in range(200):
        d = rng.randint(1, 5)
        coeffs = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(d)] + [Fraction(rng.choice([-3, -1, 1, 2]), rng.randint(1, 5))]
        P = Polynomial.of(*coeffs)
        assert finite_difference_check(P, rng.randint(1, 100), rng.randint(1, 100))
    P = Polynomial.of(as_expr("sqrt(2)"), 1, as_expr("sqrt(3)/7"))
    assert finite_difference_check(P, 17, 5)


def test_verify_inclusion_catches_planted_element():
    beta = as_expr("sqrt(3)/4096")
    eta = Fraction(15, 64)
    good, _ = enumerate_with_density(BohrSpec([beta], [eta]), 5000)
    assert verify_inclusion(good, beta, LINEAR, eta) == []
    outside = next(n for n in range(1, 5000) if n not in set(good.tolist()))
    bad = verify_inclusion(good.tolist()[:20] + [outside], beta, LINEAR, eta)
    assert [b["n"] for b in bad] == [outside]


def _empty_cert(L, rounding=Rounding.FLOOR, with_h3=False):
    lam = xi = as_expr("sqrt(2)")
    if with_h3:
        h1, h2, _ = h_family(lam, L)
        seqs = (IterateSeq(h1, rounding), IterateSeq(h2, rounding))
    else:
        seqs = tuple(IterateSeq(g, rounding) for g in g_family(lam, xi, L))
    return EmptyCert((-lam, Int(1)), Polynomial.of(Int(L) * xi, Int(L)), 1 + lam, Rat(1, L), Norm(xi), seqs)


def test_empty_cert_valid_and_invalid():
    v = check_empty_cert(_empty_cert(6), range(1, 300))
    assert v.valid and v.norm_mode == "symbolic" and v.deviation["within_bound"]
    assert all(q.holds for q in v.inequalities)
    # (1 + sqrt 2)/5 is not below sqrt 2 - 1
    with pytest.raises(CertInvalid) as exc:
        check_empty_cert(_empty_cert(5))
    assert "beta*D_bar < rho" in str(exc.value)


def test_empty_cert_nearest_rounding():
    v = check_empty_cert(_empty_cert(6, Rounding.NEAREST, with_h3=True), range(1, 300))
    assert v.valid and v.deviation["within_bound"]


def test_empty_cert_roundtrip():
    c = _empty_cert(6)
    back = EmptyCert.from_json(c.to_json())
    assert back.to_json() == c.to_json()


def test_margins_are_exact():
    lhs = (1 + as_expr("sqrt(2)")) / Int(6)
    assert compare(lhs, as_expr("sqrt(2)") - 1) is Order.BELOW
    assert compare((1 + as_expr("sqrt(2)")) / Int(5), as_expr("sqrt(2)") - 1) is Order.ABOVE


def test_fractional_norm_exact_method():
    rng = random.Random(3)
    for c in ("sqrt(2)", "sqrt(3)/4096", "-7*sqrt(5)/3", "1/100"):
        for eta in (Fraction(1, 3), Fraction(23, 512)):
            for n in [rng.randint(1, 10**6) for _ in range(40)]:
                slow = compare(Norm(as_expr(c) * Int(n) * as_expr(f"sqrt({n})")), as_expr(eta)) is Order.BELOW
                assert fractional_norm_below(c, eta, n) == slow


def test_thick_interval():
    ti = find_thick_interval(["1/100"], Fraction(3, 10), 10, 10**6)
    assert len(ti.elements) == 11
    assert verify_interval([as_expr("1/100")], Fraction(3, 10), ti.N, 10)
    assert find_thick_interval(["0"], Fraction(1, 4), 5, 100).N == 1
    with pytest.raises(NotFound):
        find_thick_interval(["sqrt(3)/4096", "sqrt(6)/4096", "sqrt(12)/4096"], Fraction(23, 512), 50, 10**4)


def test_weyl():
    assert weyl_sum("sqrt(2)", "3/2", 10**5).magnitude < 0.1
    assert weyl_sum("0", "3/2", 1000).magnitude == pytest.approx(1.0)
    with pytest.raises(ValueError):
        weyl_sum("sqrt(2)", "2", 10)
