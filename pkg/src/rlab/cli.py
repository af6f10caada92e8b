"""``rlab`` command line.

Exit codes: 0 when every check passes, 1 when a check or constraint is
violated, 2 when a cap was reached before a decision.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .bohr import BohrSpec, density_theoretical, enumerate_with_density
from .certify import (
    EmptyCert,
    check_empty_cert,
    find_nonthick_h,
    find_thick_interval,
    weyl_sum,
)
from .errors import CertInvalid, ConstraintViolated, NotFound, PrecisionExhausted, RlabError
from .exactreal import Int, Norm, Order, Rat, as_expr, compare
from .hardy import IterateSeq, Polynomial, Rounding, g_family
from .experiments import default_config, load_config, run, validate_params
from .span import (
    f_span_family,
    g_span_family,
    h_span_family,
    joint_intersective_check,
    poly_shadow,
    verify_dichotomy,
)

EXIT_PASS, EXIT_VIOLATED, EXIT_INCONCLUSIVE = 0, 1, 2


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _nrange(text: str) -> tuple[int, int]:
    a, sep, b = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected A:B")
    return int(a), int(b)


# -- commands ---------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    try:
        rep = validate_params(cfg)
    except ConstraintViolated as exc:
        _emit({"experiment": cfg.experiment, "valid": False, "violated": exc.constraint, "detail": str(exc)})
        return EXIT_VIOLATED
    _emit({"experiment": cfg.experiment, "valid": True, "constraints": rep.to_json()})
    return EXIT_PASS


def cmd_run(args) -> int:
    cfg = load_config(args.config, args.experiment) if args.config else default_config(args.experiment)
    if args.nrange:
        cfg.horizons["n_range"] = list(args.nrange)
    if args.witness_bound:
        cfg.horizons["witness_bound"] = args.witness_bound
    try:
        rep = run(cfg)
    except ConstraintViolated as exc:
        _emit({"experiment": cfg.experiment, "outcome": "violated", "violated": exc.constraint, "detail": str(exc)})
        return EXIT_VIOLATED
    out = args.out or cfg.outputs.get("report")
    if out:
        rep.write(out)
    else:
        print(rep.dumps())
    summary = {name: c["status"] for name, c in rep.clauses.items()}
    print(f"{cfg.experiment}: {rep.outcome} {json.dumps(summary, sort_keys=True)}", file=sys.stderr)
    return rep.exit_code


def _spec_from_args(args) -> BohrSpec:
    radii = [Fraction(r) for r in _csv(args.radii)]
    freqs = _csv(args.freqs)
    if len(radii) == 1 and len(freqs) > 1:
        radii = radii * len(freqs)
    return BohrSpec(freqs, radii, independent=not args.dependent)


def cmd_bohr(args) -> int:
    spec = _spec_from_args(args)
    if args.action == "enum":
        N = args.N or 1000
        ts, d = enumerate_with_density(spec, N)
        if args.out:
            ts.dump_csv(args.out, spec.canonical())
        _emit({"spec": spec.to_json(), "N": N, "count": len(ts), "density": str(d), "head": ts.tolist()[:args.head]})
    else:
        theo = density_theoretical(spec)
        obj = {"spec": spec.to_json(), "theoretical": str(theo), "theoretical_float": float(theo)}
        if args.N:
            _, d = enumerate_with_density(spec, args.N)
            obj.update({"N": args.N, "empirical": str(d), "empirical_float": float(d)})
        _emit(obj)
    return EXIT_PASS


def cmd_cert(args) -> int:
    if args.kind == "nonthick":
        P = Polynomial.of(*([0] * args.degree + [args.leading]))
        try:
            cert = find_nonthick_h(args.gamma, P, Fraction(args.eta), args.h_max)
        except NotFound as exc:
            _emit({"status": "NotFound", "cap": exc.cap})
            return EXIT_INCONCLUSIVE
        _emit({"status": "Found", **cert.to_json()})
        return EXIT_PASS
    if args.kind == "empty":
        lam, L = as_expr(args.lam), args.L
        xi = as_expr(args.xi)
        mode = Rounding(args.rounding)
        fam = g_family(lam, xi, L)
        seqs = tuple(IterateSeq(f, mode) for f in fam)
        d_bar = 1 + (lam if compare(lam, Int(0)) is not Order.BELOW else -lam)
        cert = EmptyCert((-lam, Int(1)), Polynomial.of(Int(L) * xi, Int(L)), d_bar, Rat(1, L), Norm(xi), seqs)
        try:
            verdict = check_empty_cert(cert, range(1, args.range + 1) if args.range else None)
        except CertInvalid as exc:
            _emit({**cert.to_json(), "verdict": "INVALID", "failing": exc.inequality})
            return EXIT_VIOLATED
        _emit({**cert.to_json(), **verdict.to_json()})
        return EXIT_PASS
    try:
        ti = find_thick_interval(_csv(args.c), Fraction(args.eta), args.H, args.cap)
    except NotFound as exc:
        _emit({"status": "NotFound", "cap": exc.cap})
        return EXIT_INCONCLUSIVE
    _emit({"status": "Found", **ti.to_json()})
    return EXIT_PASS


def _family(args):
    if args.family == "f":
        return f_span_family(args.lam)
    if args.family == "g":
        return g_span_family(args.lam, args.xi, args.L)
    include = tuple(int(i) for i in _csv(args.include))
    return h_span_family(args.lam, args.L, include)


def cmd_span(args) -> int:
    if args.action == "classify":
        rep = verify_dichotomy(_family(args), args.coeff_bound, args.max_order)
        _emit(rep.to_json())
        return EXIT_PASS if rep.holds else EXIT_VIOLATED
    if args.action == "shadow":
        _emit(poly_shadow(_family(args)).to_json())
        return EXIT_PASS
    if args.polys:
        polys = [tuple(int(x) for x in _csv(p)) for p in args.polys.split(";")]
    else:
        polys = poly_shadow(_family(args))
    rep = joint_intersective_check(polys, args.modulus_bound)
    _emit(rep.to_json())
    return EXIT_PASS if rep.holds else EXIT_VIOLATED


def cmd_weyl(args) -> int:
    res = weyl_sum(args.c, Fraction(args.exponent), args.N)
    _emit(res.to_json())
    return EXIT_PASS


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlab", description="Bohr-set return-time verification toolkit")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="certify the parameter constraints of a config")
    v.add_argument("config")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="run a reproduction pipeline")
    r.add_argument("experiment", choices=["thm-main", "thm-empty", "thm-q65"])
    r.add_argument("--config")
    r.add_argument("--nrange", type=_nrange, help="n range A:B for the return table")
    r.add_argument("--witness-bound", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bohr", help="Bohr set enumeration and density")
    b.add_argument("action", choices=["enum", "density"])
    b.add_argument("--freqs", required=True, help="comma separated constants")
    b.add_argument("--radii", required=True, help="comma separated dyadic radii (one value applies to all)")
    b.add_argument("--dependent", action="store_true", help="do not declare the irrational frequencies independent")
    b.add_argument("--N", type=int, default=None)
    b.add_argument("--head", type=int, default=20)
    b.add_argument("--out", help="CSV dump of the enumerated set")
    b.set_defaults(func=cmd_bohr)

    c = sub.add_parser("cert", help="build and check certificates")
    csub = c.add_subparsers(dest="kind", required=True)
    nt = csub.add_parser("nonthick")
    nt.add_argument("--gamma", default="sqrt(3)/4096")
    nt.add_argument("--eta", default="15/64")
    nt.add_argument("--degree", type=int, default=1)
    nt.add_argument("--leading", default="1")
    nt.add_argument("--h-max", type=int, default=10**5)
    em = csub.add_parser("empty")
    em.add_argument("--lam", default="sqrt(2)")
    em.add_argument("--xi", default="sqrt(2)")
    em.add_argument("--L", type=int, default=6)
    em.add_argument("--rounding", choices=["floor", "nearest"], default="floor")
    em.add_argument("--range", type=int, default=1000, help="re-verify the deviation bound on n <= RANGE (0 to skip)")
    th = csub.add_parser("thick-interval")
    th.add_argument("--c", default="1/100")
    th.add_argument("--eta", default="3/10")
    th.add_argument("--H", type=int, default=10)
    th.add_argument("--cap", type=int, default=10**6)
    c.set_defaults(func=cmd_cert)

    s = sub.add_parser("span", help="integer derivative spans and polynomial shadows")
    s.add_argument("action", choices=["classify", "shadow", "intersective"])
    s.add_argument("--family", choices=["f", "g", "h"], default="f")
    s.add_argument("--lam", default="sqrt(2)")
    s.add_argument("--xi", default="sqrt(2)")
    s.add_argument("--L", type=int, default=6)
    s.add_argument("--include", default="0,1,2", help="h-family members to keep")
    s.add_argument("--coeff-bound", type=int, default=10)
    s.add_argument("--max-order", type=int, default=5)
    s.add_argument("--polys", help="integer polynomials 'c0,c1,...;...' for the intersectivity check")
    s.add_argument("--modulus-bound", type=int, default=100)
    s.set_defaults(func=cmd_span)

    w = sub.add_parser("weyl", help="normalised Weyl sum (floating point diagnostic)")
    w.add_argument("--c", default="sqrt(2)")
    w.add_argument("--exponent", default="3/2")
    w.add_argument("--N", type=int, default=10**6)
    w.set_defaults(func=cmd_weyl)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except PrecisionExhausted as exc:
        print(f"rlab: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except RlabError as exc:
        print(f"rlab: error: {exc}", file=sys.stderr)
        return EXIT_VIOLATED


if __name__ == "__main__":
    sys.exit(main())
