"""End-to-end reproduction runs for the three constructions."""

from __future__ import annotations

import json
import logging
import random
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import __version__
from ..bohr import (
    BohrSpec,
    DiffStatus,
    TruncatedSet,
    WitnessSearcher,
    density_theoretical,
    enumerate_with_density,
    iter_members,
    return_diff_many,
)
from ..certify import (
    EmptyCert,
    check_empty_cert,
    find_nonthick_h,
    find_thick_interval,
    fractional_norm_below,
    verify_inclusion,
)
from ..errors import CertInvalid, NotFound
from ..exactreal import ConstExpr, Int, Norm, Order, Rat, as_expr, compare
from ..hardy import IterateSeq, Polynomial, Rounding, f_family, g_family, h_family, iterate
from ..largeness import pws_profile, run_gap_profile
from ..returnsets import Mode, confirm_witnesses, return_table, verify_witnesses
from ..span import (
    f_span_family,
    g_span_family,
    h_span_family,
    joint_intersective_check,
    poly_shadow,
    verify_dichotomy,
)
from .config import ExperimentConfig, validate_params

log = logging.getLogger("rlab")

PASS, VIOLATED, INCONCLUSIVE = "pass", "violated", "inconclusive"
EXIT_CODES = {PASS: 0, VIOLATED: 1, INCONCLUSIVE: 2}


@dataclass
class ExperimentReport:
    experiment: str
    params: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)
    density: dict = field(default_factory=dict)
    return_sets: dict = field(default_factory=dict)
    largeness: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    clauses: dict = field(default_factory=dict)
    timestamp: str = ""

    def clause(self, name: str, status: str, **detail) -> None:
        self.clauses[name] = {"status": status, **detail}
        log.info("clause %s: %s", name, status)

    @property
    def outcome(self) -> str:
        states = {c["status"] for c in self.clauses.values()}
        if self.violations or VIOLATED in states:
            return VIOLATED
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "outcome": self.outcome,
            "clauses": self.clauses,
            "params": self.params,
            "constraints": self.constraints,
            "density": self.density,
            "return_sets": self.return_sets,
            "largeness": self.largeness,
            "certificates": self.certificates,
            "violations": self.violations,
            "runtime": {"rlab": __version__, "numpy": np.__version__, "python": sys.version.split()[0]},
            "timestamp": self.timestamp,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps() + "\n")


def _new_report(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport(cfg.experiment)
    rep.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    rep.params = {
        "constants": {k: {"expr": v, "float": float(as_expr(v))} for k, v in sorted(cfg.constants.items())},
        "horizons": cfg.horizons,
        "cap_bits": cfg.cap_bits,
        "seed": cfg.seed,
    }
    rep.constraints = validate_params(cfg).to_json()
    return rep


def _abs(x: ConstExpr) -> ConstExpr:
    return -x if compare(x, Int(0)) is Order.BELOW else x


# -- shared pieces ---------------------------------------------------------------------------


def density_section(spec: BohrSpec, N: int, tolerance: Fraction) -> tuple[dict, bool]:
    """Empirical density at decades up to N against the product formula."""
    members, emp = enumerate_with_density(spec, N)
    theo = density_theoretical(spec).rational_value()
    points = []
    x = 10**4
    while x < N:
        points.append(x)
        x *= 10
    points.append(N)
    series = []
    for p in points:
        cnt = int(np.searchsorted(members.elements, p, side="right"))
        d = Fraction(cnt, p)
        series.append({"N": p, "count": cnt, "density": float(d), "rel_error": float(abs(d - theo) / theo)})
    rel = abs(emp - theo) / theo
    ok = rel <= tolerance
    return {
        "spec": spec.to_json(),
        "N": N,
        "count": len(members),
        "empirical": str(emp),
        "empirical_float": float(emp),
        "theoretical": str(theo),
        "theoretical_float": float(theo),
        "relative_error": float(rel),
        "tolerance": str(tolerance),
        "within_tolerance": bool(ok),
        "series": series,
    }, ok


def restrict(s: TruncatedSet, horizon: int) -> TruncatedSet:
    el = s.elements[s.elements <= horizon]
    return TruncatedSet(el, horizon, s.provenance)


def scan_b_cap_t(
    b_spec: BohrSpec,
    t_freqs: list[ConstExpr],
    eta: Fraction,
    cap: int,
    limit: int | None = None,
) -> tuple[list[int], int]:
    """Elements of ``B ∩ T`` up to ``cap``: ``B`` is a Bohr set in ``n``,
    ``T = {n : ||c n^(3/2)|| < eta for every c}``.  Returns the elements
    found and the number of ``B`` members examined."""
    found: list[int] = []
    seen = 0
    for chunk in iter_members(b_spec, 1, cap):
        seen += int(chunk.size)
        for n in chunk.tolist():
            if all(fractional_norm_below(c, eta, n) for c in t_freqs):
                found.append(n)
                if limit is not None and len(found) >= limit:
                    return found, seen
    return found, seen


def synthetic_diff_agreement(instances: int = 1000, M: int = 10**6, seed: int = 0, r_max: int = 10**6) -> dict:
    """On a planted fully independent spec, the ``2 delta`` test must agree
    with witness search: CERT_IN rows find a witness, CERT_OUT rows none."""
    spec = BohrSpec(["sqrt(2)", "sqrt(3)"], [Fraction(1, 8), Fraction(1, 8)], name="planted")
    rng = random.Random(seed)
    rs = [rng.randrange(0, r_max) for _ in range(instances)]
    statuses = return_diff_many(spec, rs)
    searcher = WitnessSearcher(spec, M)
    cert_in = cert_out = 0
    disagreements = []
    for r, st in zip(rs, statuses):
        m = searcher.search(r)
        if st is DiffStatus.CERT_IN:
            cert_in += 1
            if m is None:
                disagreements.append({"r": r, "status": st.value, "witness": None})
        else:
            cert_out += 1
            if m is not None:
                disagreements.append({"r": r, "status": st.value, "witness": m})
    return {
        "spec": spec.to_json(),
        "instances": instances,
        "witness_bound": M,
        "seed": seed,
        "cert_in": cert_in,
        "cert_out": cert_out,
        "disagreements": disagreements,
        "agree": not disagreements,
    }


# -- thm-main ------------------------------------------------------------------------------------


def reproduce_thm_main(cfg: ExperimentConfig) -> ExperimentReport:
    rep = _new_report(cfg)
    H = cfg.horizons
    lam, beta = cfg.const("lambda"), cfg.const("beta")
    delta, eta = cfg.rational("delta"), cfg.rational("eta")
    five_delta = 5 * delta
    a, b = cfg.n_range
    M = int(H["witness_bound"])

    E = BohrSpec([beta, lam * beta], [delta, delta], name="E")
    log.info("density of E up to %d", H["N_set"])
    rep.density["E"], ok = density_section(E, int(H["N_set"]), Fraction(1, 10))
    rep.clause("e_density", PASS if ok else VIOLATED, relative_error=rep.density["E"]["relative_error"])

    f1, f2 = f_family(lam)
    seqs = [IterateSeq(f1), IterateSeq(f2)]
    log.info("return table on [%d, %d]", a, b)
    searcher = WitnessSearcher(E, M)
    table = return_table(E, seqs, (a, b), M, Mode.TORUS_FIRST, cfg.cap_bits, searcher)
    S = table.S

    # (a) inclusion in {n : ||beta n|| < 5 delta}
    P = Polynomial.of(0, 1)
    bad = verify_inclusion(S, beta, P, five_delta, cfg.cap_bits)
    rep.violations.extend({"clause": "a_inclusion", **v} for v in bad)
    rep.clause("a_inclusion", PASS if not bad else VIOLATED, checked=len(S), violations=len(bad))

    # (b) no long runs
    cert = find_nonthick_h(beta, P, five_delta, int(H["h_max"]), cfg.cap_bits)
    rep.certificates["nonthick"] = cert.to_json()
    sound_spec = BohrSpec([beta], [five_delta], name="||beta n|| < 5 delta")
    sound_set, _ = enumerate_with_density(sound_spec, int(H["N_set"]))
    sound = run_gap_profile(sound_set)
    rep.certificates["nonthick_soundness"] = {
        "N": int(H["N_set"]),
        "max_run": sound.max_run,
        "max_run_at": sound.max_run_at.to_json(),
        "run_bound": cert.run_bound,
        "holds": sound.max_run <= cert.run_bound,
    }
    if len(S):
        prof = run_gap_profile(S)
        run_ok = prof.max_run <= cert.run_bound
        rep.clause("b_not_thick", PASS if run_ok and sound.max_run <= cert.run_bound else VIOLATED,
                   max_run=prof.max_run, h=cert.h, soundness_max_run=sound.max_run)
    else:
        rep.clause("b_not_thick", VIOLATED, reason="S is empty")

    # (c) witnesses
    full = confirm_witnesses(table, E, S.tolist(), M, searcher)
    wbad = verify_witnesses(table, E, 2 * cfg.cap_bits)
    rep.violations.extend({"clause": "c_witness", **w} for w in wbad)
    c_ok = len(S) >= 1 and full >= 5 and not wbad
    rep.clause("c_witnesses", PASS if c_ok else VIOLATED, size_S=len(S), fully_witnessed=full, invalid_witnesses=len(wbad))
    rep.return_sets = table.summary()
    rep.return_sets["witness_rows"] = [table.record(n) for n in S.tolist()]

    # (d) B ∩ T ⊆ S
    bt_cap = int(H["bt_cap"])
    B = BohrSpec([beta, lam * beta], [eta, eta], name="B")
    t_freqs = [beta, lam * beta, lam * lam * beta]
    log.info("scanning B ∩ T up to %d", bt_cap)
    bt, seen = scan_b_cap_t(B, t_freqs, eta, bt_cap)
    d_rows = []
    d_bad = []
    for n in bt:
        rs = [iterate(s, n, cfg.cap_bits) for s in seqs]
        st = return_diff_many(E, rs, cfg.cap_bits)
        in_s = all(x is DiffStatus.CERT_IN for x in st)
        in_table = (a <= n <= b) and (n in S)
        row = {"n": n, "r": rs, "status": [x.value for x in st], "in_S": in_s}
        if a <= n <= b:
            row["in_table_S"] = in_table
        d_rows.append(row)
        if not in_s or (a <= n <= b and not in_table):
            d_bad.append(row)
    rep.violations.extend({"clause": "d_bt_in_S", **r} for r in d_bad)
    rep.return_sets["b_cap_t"] = {
        "cap": bt_cap,
        "b_members_scanned": seen,
        "found": len(bt),
        "found_beyond_table": sum(1 for n in bt if n > b),
        "rows_head": d_rows[:100],
    }
    if d_bad:
        rep.clause("d_bt_in_S", VIOLATED, found=len(bt), failures=len(d_bad))
    elif len(bt) >= 3:
        rep.clause("d_bt_in_S", PASS, found=len(bt))
    else:
        synth = synthetic_diff_agreement(seed=cfg.seed)
        rep.certificates["synthetic_fallback"] = synth
        rep.clause("d_bt_in_S", INCONCLUSIVE if synth["agree"] else VIOLATED, found=len(bt), synthetic_agree=synth["agree"])

    # largeness diagnostics
    if len(S):
        b_set, _ = enumerate_with_density(B, b)
        g = run_gap_profile(b_set).max_gap
        horizons = sorted({max(a, b // 10), b})
        windows = {}
        for hz in horizons:
            sub = restrict(S, hz)
            if len(sub):
                windows[str(hz)] = pws_profile(sub, g).to_json()
        rep.largeness = {"S": run_gap_profile(S).to_json(), "probe_gap_from_B": g, "windows_by_horizon": windows}

    # span dichotomy for the integer derivative combinations
    span = verify_dichotomy(f_span_family(cfg.constants["lambda"]), int(H["span_coeff_bound"]), int(H["span_max_order"]))
    rep.certificates["span_dichotomy"] = span.to_json()
    rep.clause("span_dichotomy", PASS if span.holds else VIOLATED)

    # long intervals of T: informative only, desk-scale search is not expected to succeed
    try:
        ti = find_thick_interval(t_freqs, eta, int(H["thick_H"]), int(H["thick_cap"]))
        rep.certificates["thick_interval"] = {"status": "Found", **ti.to_json()}
    except NotFound as exc:
        rep.certificates["thick_interval"] = {
            "status": "NotFound",
            "cap": exc.cap,
            "H": int(H["thick_H"]),
            "note": "expected at desk scale; does not affect the outcome",
        }
    return rep


# -- thm-empty / thm-q65 -----------------------------------------------------------------------------


def _empty_setup(cfg: ExperimentConfig, xi: ConstExpr):
    lam, L, delta = cfg.const("lambda"), cfg.integer("L"), cfg.rational("delta")
    beta = Rat(1, L)
    thetas = (-lam, Int(1))
    E = BohrSpec([beta * thetas[0], beta * thetas[1]], [delta, delta], name="E")
    P = Polynomial.of(Int(L) * xi, Int(L))
    return lam, L, beta, thetas, E, P


def _emptiness_core(rep: ExperimentReport, cfg: ExperimentConfig, E: BohrSpec, cert: EmptyCert, table_seqs, tol: Fraction) -> None:
    H = cfg.horizons
    a, b = cfg.n_range
    M = int(H["witness_bound"])
    rep.density["E"], ok = density_section(E, int(H["N_set"]), tol)
    rep.clause("density", PASS if ok else VIOLATED, relative_error=rep.density["E"]["relative_error"])
    try:
        verdict = check_empty_cert(cert, range(a, b + 1), cfg.cap_bits)
        rep.certificates["empty"] = {**cert.to_json(), **verdict.to_json()}
        rep.clause("empty_cert", PASS)
        dev = verdict.deviation
        rep.clause("deviation_bound", PASS if dev and dev["within_bound"] else VIOLATED,
                   max_hi=dev["max"]["hi_float"] if dev else None)
    except CertInvalid as exc:
        rep.certificates["empty"] = {**cert.to_json(), "verdict": "INVALID", "failing": exc.inequality}
        rep.violations.append({"clause": "empty_cert", "inequality": exc.inequality, "detail": str(exc)})
        rep.clause("empty_cert", VIOLATED, failing=exc.inequality)
    log.info("brute-force table on [%d, %d]", a, b)
    table = return_table(E, table_seqs, (a, b), M, Mode.WITNESS_ONLY, cfg.cap_bits)
    S = table.S
    wbad = verify_witnesses(table, E, 2 * cfg.cap_bits)
    rep.return_sets = table.summary()
    rep.violations.extend({"clause": "intersection_empty", "n": n} for n in S.tolist())
    rep.violations.extend({"clause": "witness", **w} for w in wbad)
    rep.clause("intersection_empty", PASS if len(S) == 0 and not wbad else VIOLATED, size_S=len(S))
    per_seq = {}
    for i, name in enumerate(table.seq_names):
        col = table.ns[table.positive[:, i]]
        per_seq[name] = {"size": int(col.size), "head": col[:20].tolist()}
    rep.largeness = {"per_sequence_return_sets": per_seq, "note": "intersection empty; largeness statistics not applicable"}


def reproduce_thm_empty(cfg: ExperimentConfig) -> ExperimentReport:
    rep = _new_report(cfg)
    xi = cfg.const("xi")
    lam, L, beta, thetas, E, P = _empty_setup(cfg, xi)
    g1, g2 = g_family(lam, xi, L)
    seqs = (IterateSeq(g1), IterateSeq(g2))
    cert = EmptyCert(thetas, P, 1 + _abs(lam), beta, Norm(xi), seqs)
    _emptiness_core(rep, cfg, E, cert, list(seqs), Fraction(1, 5))
    H = cfg.horizons
    span = verify_dichotomy(
        g_span_family(cfg.constants["lambda"], cfg.constants["xi"], L), int(H["span_coeff_bound"]), int(H["span_max_order"])
    )
    rep.certificates["span_dichotomy"] = span.to_json()
    rep.clause("span_dichotomy", PASS if span.holds else VIOLATED)
    return rep


def reproduce_thm_q65(cfg: ExperimentConfig) -> ExperimentReport:
    rep = _new_report(cfg)
    xi = as_expr("sqrt(2)")
    lam, L, beta, thetas, E, P = _empty_setup(cfg, xi)
    H = cfg.horizons

    shadow = poly_shadow(h_span_family(cfg.constants["lambda"], L))
    shadow12 = poly_shadow(h_span_family(cfg.constants["lambda"], L, include=(0, 1)))
    rep.certificates["shadow"] = shadow.to_json()
    rep.certificates["shadow_without_h3"] = shadow12.to_json()
    rep.clause("shadow_is_ct2", PASS if shadow.is_multiples_of_t_squared() else VIOLATED, description=shadow.describe())
    inter = joint_intersective_check(shadow, int(H["modulus_bound"]))
    n_eq_m = all(w == m for m, w in inter.witnesses.items())
    rep.certificates["joint_intersective"] = {**inter.to_json(), "witness_is_m_for_all": n_eq_m}
    rep.clause("joint_intersective", PASS if inter.holds and n_eq_m else VIOLATED, modulus_bound=int(H["modulus_bound"]))

    h1, h2, h3 = h_family(lam, L)
    u1, u2, u3 = (IterateSeq(h, Rounding.NEAREST) for h in (h1, h2, h3))
    a, b = cfg.n_range
    sq_bad = [n for n in range(a, b + 1) if iterate(u3, n) != n * n]
    rep.clause("u3_is_n_squared", PASS if not sq_bad else VIOLATED, checked=b - a + 1, mismatches=sq_bad[:10])
    cert = EmptyCert(thetas, P, 1 + _abs(lam), beta, Norm(xi), (u1, u2))
    _emptiness_core(rep, cfg, E, cert, [u1, u2, u3], Fraction(1, 5))
    return rep


PIPELINES: dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
    "thm-main": reproduce_thm_main,
    "thm-empty": reproduce_thm_empty,
    "thm-q65": reproduce_thm_q65,
}


def run(cfg: ExperimentConfig) -> ExperimentReport:
    try:
        pipeline = PIPELINES[cfg.experiment]
    except KeyError:
        raise ValueError(f"no pipeline for experiment {cfg.experiment!r}") from None
    return pipeline(cfg)
