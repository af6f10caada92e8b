"""Checkable certificates: non-thickness of polynomial Bohr sets, emptiness of
common return-time sets, and explicit long intervals in fractional Bohr sets.

Every inequality is decided exactly (canonical radical form) or by interval
refinement; :func:`weyl_sum` is the one floating-point diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bohr import TruncatedSet
from .errors import CertInvalid, NotFound, PrecisionExhausted, UnsupportedStructure
from .exactreal import (
    DEFAULT_CAP_BITS,
    ConstExpr,
    Int,
    Norm,
    Order,
    Rat,
    Sqrt,
    as_expr,
    compare,
    eval_interval,
    from_radical,
    torus_norm,
)
from .hardy import IterateSeq, Polynomial, combo_deviation

# -- certified inequalities --------------------------------------------------------------


@dataclass(frozen=True)
class Inequality:
    """``lhs < rhs`` (or ``<=``) with the decided order of ``lhs - rhs``."""

    name: str
    lhs: ConstExpr
    rhs: ConstExpr
    strict: bool
    order: Order

    @property
    def holds(self) -> bool:
        if self.order is Order.BELOW:
            return True
        return self.order is Order.EQUAL and not self.strict

    def margin(self, bits: int = 64):
        """Enclosure of ``rhs - lhs``."""
        return eval_interval(self.rhs - self.lhs, bits)

    def to_json(self) -> dict:
        m = self.margin()
        return {
            "name": self.name,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "relation": "<" if self.strict else "<=",
            "decision": self.order.value,
            "holds": self.holds,
            "lhs_float": float(self.lhs),
            "rhs_float": float(self.rhs),
            "margin": m.to_json(),
        }


def certify_lt(name: str, lhs, rhs, strict: bool = True, cap_bits: int = DEFAULT_CAP_BITS) -> Inequality:
    lhs, rhs = as_expr(lhs), as_expr(rhs)
    order = compare(lhs, rhs, cap_bits)
    if order is Order.UNKNOWN:
        raise PrecisionExhausted(f"{name}: {lhs} vs {rhs} undecided at {cap_bits} bits")
    return Inequality(name, lhs, rhs, strict, order)


def _require(ineq: Inequality) -> Inequality:
    if not ineq.holds:
        rel = "<" if ineq.strict else "<="
        raise CertInvalid(f"{ineq.lhs} {rel} {ineq.rhs}", f"({ineq.name}: decided {ineq.order.value})")
    return ineq


# -- non-thickness ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonThickCert:
    """``||d! a_d gamma h^d|| > 2^d eta``; then no interval of length
    ``d*h + 1`` fits inside ``{n : ||gamma P(n)|| < eta}``."""

    gamma: ConstExpr
    P: Polynomial
    eta: Fraction
    h: int

    @property
    def d(self) -> int:
        return self.P.degree

    @property
    def run_bound(self) -> int:
        """Longest run of consecutive integers the set can contain."""
        return self.d * self.h

    def key_value(self) -> ConstExpr:
        d = self.d
        x = Int(math.factorial(d)) * self.P.leading * self.gamma * Int(self.h**d)
        rf = x.radical_form
        return from_radical(rf) if rf is not None else x

    def threshold(self) -> Fraction:
        return Fraction(2**self.d) * self.eta

    def check(self, cap_bits: int = DEFAULT_CAP_BITS) -> bool:
        return compare(Norm(self.key_value()), as_expr(self.threshold()), cap_bits) is Order.ABOVE

    def to_json(self) -> dict:
        tn = torus_norm(self.key_value(), 96)
        return {
            "type": "NonThickCert",
            "gamma": str(self.gamma),
            "P": self.P.to_json(),
            "eta": str(self.eta),
            "h": self.h,
            "run_bound": self.run_bound,
            "inequality": f"norm({self.key_value()}) > {self.threshold()}",
            "norm_enclosure": tn.interval.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> NonThickCert:
        return cls(as_expr(d["gamma"]), Polynomial.from_json(d["P"]), Fraction(d["eta"]), int(d["h"]))


def find_nonthick_h(gamma, P: Polynomial, eta, h_max: int, cap_bits: int = DEFAULT_CAP_BITS) -> NonThickCert:
    """Least ``h <= h_max`` with ``||d! a_d gamma h^d|| > 2^d eta``."""
    gamma = as_expr(gamma)
    eta = Fraction(eta)
    d = P.degree
    if d < 1:
        raise UnsupportedStructure("P must be nonconstant")
    if not (0 < eta < Fraction(1, 2 ** (d + 1))):
        raise ValueError(f"eta must lie in (0, 2^-{d + 1})")
    base = Int(math.factorial(d)) * P.leading * gamma
    rf = base.radical_form
    if rf is not None and rf.is_rational:
        raise UnsupportedStructure(f"gamma * a_d = {rf} is rational")
    t = as_expr(Fraction(2**d) * eta)
    for h in range(1, h_max + 1):
        x = base * Int(h**d)
        order = compare(Norm(x), t, cap_bits)
        if order is Order.ABOVE:
            return NonThickCert(gamma, P, eta, h)
        if order is Order.UNKNOWN:
            raise PrecisionExhausted(f"||{x}|| vs {t} undecided")
    raise NotFound("non-thickness step h", h_max)


def finite_difference_check(P: Polynomial, N: int, h: int) -> bool:
    """Exact check of ``sum_j (-1)^(d-j) C(d,j) P(N+jh) == d! a_d h^d``."""
    d = P.degree
    lhs = None
    for j in range(d + 1):
        v = P.radical_at(N + j * h)
        if v is None:
            raise UnsupportedStructure("coefficients outside the radical field")
        term = v.scale((-1) ** (d - j) * math.comb(d, j))
        lhs = term if lhs is None else lhs + term
    lead = P.leading.radical_form
    rhs = lead.scale(math.factorial(d) * h**d)
    return (lhs - rhs).is_zero


def verify_inclusion(source, beta, P: Polynomial, eta, cap_bits: int = DEFAULT_CAP_BITS) -> list[dict]:
    """Elements ``n`` of the set with ``||beta P(n)|| >= eta``.

    ``source`` is a return table, a truncated set or any iterable of ints.
    """
    if hasattr(source, "S"):
        source = source.S
    ns = source.tolist() if isinstance(source, TruncatedSet) else [int(n) for n in source]
    beta = as_expr(beta)
    t = as_expr(Fraction(eta))
    out = []
    for n in ns:
        x = beta * P(n)
        order = compare(Norm(x), t, cap_bits)
        if order is Order.UNKNOWN:
            raise PrecisionExhausted(f"||beta P({n})|| vs {eta} undecided")
        if order is not Order.BELOW:
            out.append({"n": n, "norm": torus_norm(x, 64).interval.to_json(), "eta": str(t)})
    return out


# -- emptiness ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class EmptyCert:
    """Data for the obstruction: ``|sum theta_i u_i(n) - P(n)| <= D_bar``,
    ``||beta P(n)|| >= rho`` for every n, and ``beta D_bar < rho``."""

    thetas: tuple[ConstExpr, ...]
    P: Polynomial
    D_bar: ConstExpr
    beta: ConstExpr
    rho: ConstExpr
    seqs: tuple[IterateSeq, ...] = ()

    def to_json(self) -> dict:
        return {
            "type": "EmptyCert",
            "thetas": [str(t) for t in self.thetas],
            "P": self.P.to_json(),
            "D_bar": str(self.D_bar),
            "beta": str(self.beta),
            "rho": str(self.rho),
            "seqs": [s.to_json() for s in self.seqs],
        }

    @classmethod
    def from_json(cls, d: dict) -> EmptyCert:
        from .hardy import HardyCombo, Rounding

        seqs = tuple(IterateSeq(HardyCombo.from_json(s["function"]), Rounding(s["mode"])) for s in d.get("seqs", []))
        return cls(
            tuple(as_expr(t) for t in d["thetas"]),
            Polynomial.from_json(d["P"]),
            as_expr(d["D_bar"]),
            as_expr(d["beta"]),
            as_expr(d["rho"]),
            seqs,
        )


@dataclass
class EmptyVerdict:
    valid: bool
    inequalities: list[Inequality]
    norm_mode: str  # "symbolic" or "sampled"
    deviation: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": "VALID" if self.valid else "INVALID",
            "inequalities": [q.to_json() for q in self.inequalities],
            "norm_mode": self.norm_mode,
            "deviation": self.deviation,
            "notes": self.notes,
        }


def check_empty_cert(cert: EmptyCert, deviation_range: range | None = None, cap_bits: int = DEFAULT_CAP_BITS) -> EmptyVerdict:
    """Verify an emptiness certificate; raises :class:`CertInvalid` naming
    the first inequality that fails."""
    ineqs = [_require(certify_lt("beta*D_bar < rho", cert.beta * cert.D_bar, cert.rho, cap_bits=cap_bits))]
    notes = []
    P = cert.P
    lead_scaled = (cert.beta * P.coeffs[1]).rational_value() if P.degree == 1 else None
    if P.degree <= 1 and (P.degree == 0 or (lead_scaled is not None and lead_scaled.denominator == 1)):
        # ||beta P(n)|| = ||beta a_1 n + beta a_0|| = ||beta a_0|| for every n
        const_norm = Norm(cert.beta * P.coeffs[0])
        ineqs.append(_require(certify_lt("rho <= ||beta P(n)|| (all n)", cert.rho, const_norm, strict=False, cap_bits=cap_bits)))
        mode = "symbolic"
    else:
        if deviation_range is None:
            raise UnsupportedStructure("sampled norm check needs a range")
        for n in deviation_range:
            q = certify_lt(f"rho <= ||beta P({n})||", cert.rho, Norm(cert.beta * P(n)), strict=False, cap_bits=cap_bits)
            _require(q)
        notes.append(f"||beta P(n)|| >= rho checked on n in [{deviation_range[0]}, {deviation_range[-1]}] only")
        mode = "sampled"
    deviation = None
    if deviation_range is not None and cert.seqs:
        deviation = _check_deviation(cert, deviation_range, cap_bits)
    elif deviation_range is not None:
        notes.append("no sequences attached; deviation bound not re-verified")
    return EmptyVerdict(True, ineqs, mode, deviation, notes)


def _check_deviation(cert: EmptyCert, rng: range, cap_bits: int) -> dict:
    for bits in (96, 192, 384):
        rep = combo_deviation(cert.seqs, cert.thetas, cert.P, rng, bits=bits, cap_bits=cap_bits)
        hi = as_expr(rep.max_enclosure.hi)
        order = compare(hi, cert.D_bar, cap_bits)
        if order in (Order.BELOW, Order.EQUAL):
            return {**rep.to_json(), "bound": str(cert.D_bar), "within_bound": True}
        if compare(as_expr(rep.max_enclosure.lo), cert.D_bar, cap_bits) is Order.ABOVE:
            raise CertInvalid(
                f"|sum theta_i u_i(n) - P(n)| <= {cert.D_bar}",
                f"exceeded at n={rep.argmax} ({rep.max_enclosure})",
            )
    raise PrecisionExhausted("deviation bound undecided")


# -- long intervals in fractional Bohr sets -----------------------------------------------------


@dataclass
class ThickInterval:
    """``{N, ..., N+H}`` with ``||c_j n^(3/2)|| < eta`` verified for all elements."""

    N: int
    H: int
    c_list: tuple[ConstExpr, ...]
    eta: Fraction
    candidates_checked: int
    taylor_misses: int = 0

    @property
    def elements(self) -> list[int]:
        return list(range(self.N, self.N + self.H + 1))

    def to_json(self) -> dict:
        return {
            "type": "ThickInterval",
            "N": self.N,
            "H": self.H,
            "interval": [self.N, self.N + self.H],
            "c": [str(c) for c in self.c_list],
            "eta": str(self.eta),
            "candidates_checked": self.candidates_checked,
            "taylor_misses": self.taylor_misses,
        }


def _n32(n: int) -> ConstExpr:
    return Sqrt(Int(n**3))


def _frac_dist(x: np.ndarray) -> np.ndarray:
    return np.abs(x - np.rint(x))


def verify_interval(c_list: Sequence[ConstExpr], eta: Fraction, N: int, H: int, cap_bits: int = 2 * DEFAULT_CAP_BITS) -> bool:
    t = as_expr(eta)
    for n in range(N, N + H + 1):
        for c in c_list:
            if compare(Norm(c * _n32(n)), t, cap_bits) is not Order.BELOW:
                return False
    return True


def find_thick_interval(c_list: Sequence, eta, H: int, search_cap: int, chunk: int = 1 << 20) -> ThickInterval:
    """Smallest ``N <= search_cap`` meeting the first-order Taylor conditions
    whose whole interval ``{N..N+H}`` then verifies directly.

    The second-order remainder is bounded by ``(3/8) H^2 max|c| N^(-1/2)``.
    Candidates come from a float prefilter with slack; every accepted
    condition is re-decided exactly.
    """
    cs = tuple(as_expr(c) for c in c_list)
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    if H < 1:
        raise ValueError("H must be positive")
    absval = [c if compare(c, Int(0)) is not Order.BELOW else -c for c in cs]
    cmax = absval[0]
    for a in absval[1:]:
        if compare(a, cmax) is Order.ABOVE:
            cmax = a
    cf = np.array([float(c) for c in cs])
    cmax_f = float(cmax)
    e1, e2 = eta / 3, eta / (3 * H)
    tol = 1e-9
    checked = misses = 0
    for lo in range(1, search_cap + 1, chunk):
        hi = min(search_cap, lo + chunk - 1)
        n = np.arange(lo, hi + 1, dtype=np.float64)
        rt = np.sqrt(n)
        ok = (3 / 8) * H * H * cmax_f / rt < float(e1) + tol
        for c in cf:
            x = c * n * rt
            slack = 8 * np.finfo(float).eps * np.abs(x) + tol
            ok &= _frac_dist(x) < float(e1) + slack
            ok &= _frac_dist(1.5 * c * rt) < float(e2) + tol
            if not ok.any():
                break
        for N in (lo + np.flatnonzero(ok)).tolist():
            checked += 1
            if not _taylor_conditions(cs, cmax, eta, H, N):
                continue
            if verify_interval(cs, eta, N, H):
                return ThickInterval(N, H, cs, eta, checked, misses)
            misses += 1
    raise NotFound(f"interval of length {H + 1}", search_cap)


def _taylor_conditions(cs, cmax, eta: Fraction, H: int, N: int) -> bool:
    t1, t2 = as_expr(eta / 3), as_expr(eta / (3 * H))
    # (3/8) H^2 cmax N^(-1/2) < eta/3  <=>  (9/8) H^2 cmax / eta < sqrt(N)
    if compare(Rat(9 * H * H, 8) * cmax / as_expr(eta), Sqrt(Int(N))) is not Order.BELOW:
        return False
    for c in cs:
        if compare(Norm(c * _n32(N)), t1) is not Order.BELOW:
            return False
        if compare(Norm(Rat(3, 2) * c * Sqrt(Int(N))), t2) is not Order.BELOW:
            return False
    return True


def _single_radical(c: ConstExpr) -> tuple[int, int, int] | None:
    """``c = (p/s) sqrt(r)`` as ``(|p|, s, r)``; ``None`` for other shapes."""
    rf = c.radical_form
    if rf is None or len(rf.terms) != 1:
        return None
    (r, q), = rf.terms.items()
    return abs(q.numerator), q.denominator, r


def fractional_norm_below(c, eta, n: int) -> bool:
    """Exact ``||c n^(3/2)|| < eta``.

    For ``c = (p/s) sqrt(r)`` write the value as ``sqrt(K)/s`` with
    ``K = p^2 r n^3``; with ``k`` its floor, both tails of the torus norm are
    integer comparisons of ``K`` against squares.
    """
    c = as_expr(c)
    eta = Fraction(eta)
    shape = _single_radical(c)
    if shape is None:
        return compare(Norm(c * _n32(n)), as_expr(eta)) is Order.BELOW
    p, s, r = shape
    K = p * p * r * n**3
    a, b = eta.numerator, eta.denominator
    k = math.isqrt(K) // s
    lhs = K * b * b
    if lhs < (s * (k * b + a)) ** 2:
        return True
    return lhs > (s * ((k + 1) * b - a)) ** 2


# -- Weyl sums ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylResult:
    c: str
    exponent: str
    N: int
    magnitude: float
    rigorous: bool = False

    def to_json(self) -> dict:
        return {"c": self.c, "exponent": self.exponent, "N": self.N, "magnitude": self.magnitude, "rigorous": self.rigorous}


def weyl_sum(c, exponent, N: int, chunk: int = 1 << 20) -> WeylResult:
    """``|(1/N) sum_{n<=N} exp(2 pi i c n^gamma)|`` in double precision.

    Diagnostic only: the phases are reduced mod 1 in floating point.
    """
    c = as_expr(c)
    gamma = Fraction(exponent)
    if gamma not in (Fraction(1, 2), Fraction(3, 2)):
        raise ValueError("exponent must be 1/2 or 3/2")
    if N < 1:
        raise ValueError("N must be >= 1")
    cf = float(c)
    total = 0j
    for lo in range(1, N + 1, chunk):
        n = np.arange(lo, min(N, lo + chunk - 1) + 1, dtype=np.float64)
        base = np.sqrt(n) if gamma == Fraction(1, 2) else n * np.sqrt(n)
        phase = np.mod(cf * base, 1.0)
        total += np.exp(2j * np.pi * phase).sum()
    return WeylResult(str(c), str(gamma), N, float(abs(total) / N))
