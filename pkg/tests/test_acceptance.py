"""Acceptance checks, one printed PASS/FAIL line per criterion.

Each test asserts its criterion at the stated tolerance and time budget, and
prints a one-line summary whether it passes or fails.
"""

import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from rlab.bohr import BohrSpec, enumerate_with_density
from rlab.certify import find_nonthick_h, find_thick_interval, finite_difference_check, verify_interval, weyl_sum
from rlab.exactreal import Int, Order, as_expr, compare, eval_interval
from rlab.experiments import default_config, run
from rlab.hardy import IterateSeq, Polynomial, f_family, iterate
from rlab.largeness import run_gap_profile
from rlab.span import f_span_family, g_span_family, numeric_crosscheck, verify_dichotomy


def report(num: int, ok: bool, elapsed: float, budget: float | None, detail: str) -> None:
    timing = f"{elapsed:.2f}s" + (f" (budget {budget:g}s)" if budget else "")
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'}  {timing}  {detail}")


def newton_isqrt(x: int) -> int:
    """Integer square root by Newton's method, independent of the library."""
    if x < 2:
        return x
    y = 1 << ((x.bit_length() + 1) // 2)
    while True:
        z = (y + x // y) // 2
        if z >= y:
            return y
        y = z


@pytest.fixture(scope="module")
def main_run():
    t0 = time.perf_counter()
    rep = run(default_config("thm-main"))
    return rep, time.perf_counter() - t0


def test_c01_floor_oracle():
    f1, f2 = f_family("sqrt(2)")
    s1, s2 = IterateSeq(f1), IterateSeq(f2)
    rng = random.Random(2024)
    ns = [rng.randint(1, 10**6) for _ in range(10**4)]
    t0 = time.perf_counter()
    mism = 0
    for n in ns:
        mism += iterate(s1, n) != newton_isqrt(n**3)
        mism += iterate(s2, n) != newton_isqrt(2 * n**3) + n
    elapsed = time.perf_counter() - t0
    # interval cross-check of the oracle on a few values
    for n in ns[:50]:
        iv = eval_interval(as_expr("sqrt(2)") * Int(n) * as_expr(f"sqrt({n})"), 80)
        assert int(np.floor(float(iv.lo))) <= newton_isqrt(2 * n**3) <= int(np.floor(float(iv.hi))) + 1
    ok = mism == 0 and elapsed < 5
    report(1, ok, elapsed, 5, f"mismatches={mism} over {len(ns)} n")
    assert ok


def test_c02_span_classifier():
    t0 = time.perf_counter()
    details, ok = [], True
    allowed = {"ZeroFunction", "LimitZero", "LimitInfinity"}
    for label, fam in (("f", f_span_family("sqrt(2)")), ("g", g_span_family("sqrt(2)", "sqrt(2)", 6))):
        rep = verify_dichotomy(fam, 10, 5)
        kinds = {k for k, v in rep.counts.items() if v}
        checks = numeric_crosscheck(fam, samples=100, t=10**8)
        agree = sum(c.agrees for c in checks)
        ok &= rep.holds and kinds <= allowed and agree == 100 and rep.matrices == 21 ** (2 * 6)
        details.append(f"{label}: {rep.matrices} matrices, kinds={sorted(kinds)}, crosscheck {agree}/100")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report(2, ok, elapsed, 60, "; ".join(details))
    assert ok


def test_c03_thm_main(main_run):
    rep, elapsed = main_run
    c = rep.clauses
    bt = rep.return_sets["b_cap_t"]
    dens = rep.density["E"]
    checks = {
        "a": c["a_inclusion"]["status"] == "pass" and c["a_inclusion"]["violations"] == 0,
        "b": c["b_not_thick"]["status"] == "pass" and c["b_not_thick"]["max_run"] <= rep.certificates["nonthick"]["h"],
        "c": c["c_witnesses"]["size_S"] >= 1 and c["c_witnesses"]["fully_witnessed"] >= 5 and c["c_witnesses"]["invalid_witnesses"] == 0,
        "d": c["d_bt_in_S"]["status"] == "pass" or (c["d_bt_in_S"]["status"] == "inconclusive" and rep.certificates["synthetic_fallback"]["agree"]),
        "e": Fraction(dens["relative_error"]) < Fraction(1, 10),
    }
    ok = all(checks.values()) and not rep.violations and elapsed < 600
    detail = (
        f"clauses={ {k: v for k, v in checks.items()} } |S|={c['c_witnesses']['size_S']} "
        f"h={rep.certificates['nonthick']['h']} max_run={c['b_not_thick']['max_run']} "
        f"B∩T found={bt['found']} (d status {c['d_bt_in_S']['status']}) density rel.err={float(Fraction(dens['relative_error'])):.4f}"
    )
    report(3, ok, elapsed, 600, detail)
    assert ok


def test_c04_thm_empty():
    t0 = time.perf_counter()
    rep = run(default_config("thm-empty"))
    elapsed = time.perf_counter() - t0
    lhs = (1 + as_expr("sqrt(2)")) / Int(6)
    margin = compare(lhs, as_expr("sqrt(2)") - 1) is Order.BELOW
    c = rep.clauses
    dens = Fraction(rep.density["E"]["relative_error"])
    ok = (
        margin
        and rep.certificates["empty"]["verdict"] == "VALID"
        and c["intersection_empty"]["status"] == "pass"
        and c["deviation_bound"]["status"] == "pass"
        and dens < Fraction(1, 5)
        and rep.outcome == "pass"
        and elapsed < 120
    )
    report(4, ok, elapsed, 120, f"outcome={rep.outcome} |S|={rep.return_sets['size_S']} density rel.err={float(dens):.4f}")
    assert ok


def test_c05_thm_q65():
    t0 = time.perf_counter()
    rep = run(default_config("thm-q65"))
    elapsed = time.perf_counter() - t0
    inter = rep.certificates["joint_intersective"]
    ok = (
        rep.clauses["shadow_is_ct2"]["status"] == "pass"
        and inter["holds"] and inter["witness_is_m_for_all"]
        and len(inter["witnesses"]) == 100
        and rep.certificates["empty"]["verdict"] == "VALID"
        and rep.clauses["intersection_empty"]["status"] == "pass"
        and rep.outcome == "pass"
        and elapsed < 120
    )
    report(5, ok, elapsed, 120, f"shadow={rep.certificates['shadow']['description']} outcome={rep.outcome}")
    assert ok


def test_c06_finite_differences():
    rng = random.Random(6)
    t0 = time.perf_counter()
    fails = 0
    for _ in range(1000):
        d = rng.randint(1, 5)
        coeffs = [Fraction(rng.randint(-99, 99), rng.randint(1, 20)) for _ in range(d)]
        coeffs.append(Fraction(rng.choice([-1, 1]) * rng.randint(1, 99), rng.randint(1, 20)))
        fails += not finite_difference_check(Polynomial.of(*coeffs), rng.randint(1, 100), rng.randint(1, 100))
    elapsed = time.perf_counter() - t0
    ok = fails == 0 and elapsed < 5
    report(6, ok, elapsed, 5, f"failures={fails}/1000")
    assert ok


def test_c07_nonthick_soundness():
    cfg = default_config("thm-main")
    beta, eta = cfg.const("beta"), 5 * cfg.rational("delta")
    t0 = time.perf_counter()
    cert = find_nonthick_h(beta, Polynomial.of(0, 1), eta, 10**5)
    ts, _ = enumerate_with_density(BohrSpec([beta], [eta]), 10**6)
    prof = run_gap_profile(ts)
    elapsed = time.perf_counter() - t0
    ok = prof.max_run < cert.h + 1 and elapsed < 60
    report(7, ok, elapsed, 60, f"h={cert.h} longest run={prof.max_run} at [{prof.max_run_at.start}, {prof.max_run_at.end}]")
    assert ok


def test_c08_thick_interval():
    t0 = time.perf_counter()
    ti = find_thick_interval(["1/100"], Fraction(3, 10), 10, 10**6)
    direct = verify_interval([as_expr("1/100")], Fraction(3, 10), ti.N, 10)
    elapsed = time.perf_counter() - t0
    ok = direct and len(ti.elements) == 11 and elapsed < 30
    report(8, ok, elapsed, 30, f"interval [{ti.N}, {ti.N + 10}] verified={direct}")
    assert ok


def test_c09_weyl():
    t0 = time.perf_counter()
    w = weyl_sum("sqrt(2)", "3/2", 10**6)
    elapsed = time.perf_counter() - t0
    ok = w.magnitude <= 0.05 and elapsed < 30
    report(9, ok, elapsed, 30, f"|S_N|/N={w.magnitude:.5f} at N=10^6")
    assert ok


def test_c10_determinism(main_run):
    t0 = time.perf_counter()
    first, _ = main_run
    second = run(default_config("thm-main"))
    a, b = first.to_json(), second.to_json()
    a.pop("timestamp"), b.pop("timestamp")
    same_main = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    e1, e2 = run(default_config("thm-empty")).to_json(), run(default_config("thm-empty")).to_json()
    e1.pop("timestamp"), e2.pop("timestamp")
    same_empty = json.dumps(e1, sort_keys=True) == json.dumps(e2, sort_keys=True)
    elapsed = time.perf_counter() - t0
    ok = same_main and same_empty
    report(10, ok, elapsed, None, f"thm-main identical={same_main} thm-empty identical={same_empty}")
    assert ok
