"""Experiment configuration: defaults, JSON loading and parameter validation."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..certify import Inequality, certify_lt
from ..errors import ConstraintViolated, InvalidSpec, ParseError
from ..exactreal import ConstExpr, Int, Norm, Order, as_expr, compare
from ..span import integer_relation

EXPERIMENTS = ("thm-main", "thm-empty", "thm-q65", "custom")

DEFAULTS: dict[str, dict] = {
    "thm-main": {
        "constants": {"lambda": "sqrt(2)", "delta": "3/64", "beta": "sqrt(3)/4096", "eta": "23/512"},
        "horizons": {
            "N_set": 10**6,
            "n_range": [1, 10**5],
            "witness_bound": 10**7,
            "bt_cap": 10**8,
            "h_max": 10**5,
            "thick_H": 50,
            "thick_cap": 10**7,
            "span_coeff_bound": 10,
            "span_max_order": 5,
        },
    },
    "thm-empty": {
        "constants": {"lambda": "sqrt(2)", "xi": "sqrt(2)", "L": "6", "delta": "1/512"},
        "horizons": {
            "N_set": 10**6,
            "n_range": [1, 10**4],
            "witness_bound": 10**7,
            "span_coeff_bound": 10,
            "span_max_order": 5,
        },
    },
    "thm-q65": {
        "constants": {"lambda": "sqrt(2)", "L": "6", "delta": "1/512"},
        "horizons": {
            "N_set": 10**6,
            "n_range": [1, 10**4],
            "witness_bound": 10**7,
            "modulus_bound": 100,
        },
    },
    "custom": {"constants": {}, "horizons": {}},
}


@dataclass
class ExperimentConfig:
    experiment: str
    constants: dict[str, str]
    horizons: dict
    cap_bits: int = 4096
    seed: int = 0
    outputs: dict[str, str | None] = field(default_factory=dict)

    def const(self, name: str) -> ConstExpr:
        try:
            return as_expr(self.constants[name])
        except KeyError:
            raise InvalidSpec(f"constant {name!r} missing from config") from None

    def integer(self, name: str) -> int:
        q = self.const(name).rational_value()
        if q is None or q.denominator != 1:
            raise InvalidSpec(f"constant {name!r} must be an integer")
        return int(q.numerator)

    def rational(self, name: str) -> Fraction:
        q = self.const(name).rational_value()
        if q is None:
            raise InvalidSpec(f"constant {name!r} must be rational")
        return q

    @property
    def n_range(self) -> tuple[int, int]:
        a, b = self.horizons["n_range"]
        return int(a), int(b)

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "constants": dict(self.constants),
            "horizons": dict(self.horizons),
            "cap_bits": self.cap_bits,
            "seed": self.seed,
            "outputs": dict(self.outputs),
        }


def default_config(experiment: str) -> ExperimentConfig:
    if experiment not in EXPERIMENTS:
        raise InvalidSpec(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")
    d = copy.deepcopy(DEFAULTS[experiment])
    return ExperimentConfig(experiment, d["constants"], d["horizons"])


def config_from_dict(raw: dict, experiment: str | None = None) -> ExperimentConfig:
    exp = raw.get("experiment", experiment)
    if experiment is not None and exp != experiment:
        raise InvalidSpec(f"config is for {exp!r}, not {experiment!r}")
    cfg = default_config(exp)
    for k, v in raw.get("constants", {}).items():
        cfg.constants[k] = str(v)
    for k, v in raw.get("horizons", {}).items():
        cfg.horizons[k] = v
    cfg.cap_bits = int(raw.get("cap_bits", cfg.cap_bits))
    cfg.seed = int(raw.get("seed", cfg.seed))
    cfg.outputs.update(raw.get("outputs", {}))
    for name in cfg.constants:
        try:
            cfg.const(name)
        except ParseError as exc:
            raise InvalidSpec(f"constant {name!r}: {exc}") from exc
    return cfg


def load_config(path: str | Path, experiment: str | None = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return config_from_dict(raw, experiment)


# -- validation ----------------------------------------------------------------------------


@dataclass
class ConstraintReport:
    experiment: str
    inequalities: list[Inequality]
    checks: dict[str, object] = field(default_factory=dict)

    def to_json(self) -> list[dict]:
        out = [q.to_json() for q in self.inequalities]
        for name, value in self.checks.items():
            out.append({"name": name, "holds": True, "value": value})
        return out


def _abs(x: ConstExpr) -> ConstExpr:
    return -x if compare(x, Int(0)) is Order.BELOW else x


def _max(a: ConstExpr, b: ConstExpr) -> ConstExpr:
    return b if compare(a, b) is Order.BELOW else a


def _dyadic(name: str, q: Fraction) -> None:
    if q.denominator & (q.denominator - 1):
        raise ConstraintViolated(f"{name} is dyadic", f"(got {q})")


def _irrational(name: str, x: ConstExpr) -> None:
    rf = x.radical_form
    if rf is not None and rf.is_rational:
        raise ConstraintViolated(f"{name} is irrational", f"(got {rf.rational_part})")


class _Collector:
    def __init__(self, cap_bits: int):
        self.cap_bits = cap_bits
        self.items: list[Inequality] = []

    def lt(self, name: str, lhs, rhs, strict: bool = True) -> Inequality:
        q = certify_lt(name, lhs, rhs, strict, self.cap_bits)
        if not q.holds:
            raise ConstraintViolated(name, f"(decided {q.order.value}: {q.lhs} vs {q.rhs})")
        self.items.append(q)
        return q


def validate_params(cfg: ExperimentConfig) -> ConstraintReport:
    """Certify every parameter constraint; raise :class:`ConstraintViolated`
    naming the first that fails."""
    c = _Collector(cfg.cap_bits)
    checks: dict[str, object] = {}
    if cfg.experiment == "thm-main":
        lam, beta = cfg.const("lambda"), cfg.const("beta")
        delta, eta = cfg.rational("delta"), cfg.rational("eta")
        _irrational("lambda", lam)
        _irrational("beta", beta)
        c.lt("0 < delta", 0, delta)
        c.lt("delta < 1/20", delta, Fraction(1, 20))
        c.lt("0 < beta", 0, beta)
        c.lt("beta < delta/(1+|lambda|)", beta, as_expr(delta) / (1 + _abs(lam)))
        c.lt("0 < eta", 0, eta)
        c.lt("2*eta + max(1,|lambda|)*beta < 2*delta", 2 * as_expr(eta) + _max(Int(1), _abs(lam)) * beta, 2 * as_expr(delta))
        c.lt("5*delta < 1/4", 5 * delta, Fraction(1, 4))
        _dyadic("delta", delta)
        _dyadic("eta", eta)
        rel = integer_relation([Int(1), beta, lam * beta])
        if rel is not None:
            raise ConstraintViolated("1, beta, lambda*beta independent over Q", f"(relation {rel})")
        checks["1, beta, lambda*beta independent over Q (no relation with |c| <= 10^6)"] = True
    elif cfg.experiment in ("thm-empty", "thm-q65"):
        lam, L, delta = cfg.const("lambda"), cfg.integer("L"), cfg.rational("delta")
        xi = cfg.const("xi") if cfg.experiment == "thm-empty" else as_expr("sqrt(2)")
        _irrational("lambda", lam)
        xi_rf = xi.radical_form
        if xi_rf is not None and xi_rf.is_rational and xi_rf.rational_part.denominator == 1:
            raise ConstraintViolated("xi is not an integer", f"(got {xi})")
        if L < 1:
            raise ConstraintViolated("L >= 1", f"(got {L})")
        rho = Norm(xi)
        d_bar = 1 + _abs(lam)
        c.lt("L*||xi|| > 1+|lambda|", d_bar, Int(L) * rho)
        c.lt("0 < delta", 0, delta)
        c.lt("delta < 1/2", delta, Fraction(1, 2))
        c.lt("delta < (rho - beta*D_bar)/(2k)", delta, (rho - d_bar / Int(L)) / 4)
        _dyadic("delta", delta)
        rel = integer_relation([Int(1), lam / Int(L)])
        if rel is not None:
            raise ConstraintViolated("1, lambda/L independent over Q", f"(relation {rel})")
        checks["1, lambda/L independent over Q (no relation with |c| <= 10^6)"] = True
    elif cfg.experiment == "custom":
        for name in cfg.constants:
            cfg.const(name)
        checks["constants parse"] = sorted(cfg.constants)
    else:
        raise InvalidSpec(f"unknown experiment {cfg.experiment!r}")
    for k, v in cfg.horizons.items():
        vals = v if isinstance(v, list) else [v]
        if any(not isinstance(x, int) or x < 1 for x in vals):
            raise ConstraintViolated(f"horizon {k} is a positive integer", f"(got {v})")
    if "n_range" in cfg.horizons:
        a, b = cfg.n_range
        if a > b:
            raise ConstraintViolated("n_range is nonempty", f"(got {a}:{b})")
    return ConstraintReport(cfg.experiment, c.items, checks)
