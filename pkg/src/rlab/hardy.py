"""Test functions ``sum coeff * t^exponent`` and their rounded integer iterates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UnsupportedShape
from .exactreal import (
    DEFAULT_CAP_BITS,
    ConstExpr,
    DyadicInterval,
    Int,
    Sqrt,
    as_expr,
    eval_interval,
    floor_exact,
    nearest_exact,
)
from .exactreal.radical import RadicalForm

ALLOWED_EXPONENTS = frozenset(Fraction(k, 2) for k in range(0, 5))


class Rounding(enum.Enum):
    FLOOR = "floor"
    NEAREST = "nearest"


@dataclass(frozen=True)
class HardyCombo:
    """``f(t) = sum_j coeff_j * t**exponent_j`` with half-integer exponents."""

    terms: tuple[tuple[ConstExpr, Fraction], ...]
    name: str = ""

    def __post_init__(self):
        terms = tuple((as_expr(c), Fraction(x)) for c, x in self.terms)
        exps = [x for _, x in terms]
        if len(set(exps)) != len(exps):
            raise ValueError("exponents must be distinct")
        for x in exps:
            if x < 0 or x.denominator not in (1, 2):
                raise UnsupportedShape(f"exponent {x} is not a nonnegative half-integer")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *terms, name: str = "") -> HardyCombo:
        return cls(tuple(terms), name)

    def __str__(self) -> str:
        parts = [f"({c})*t^({x})" for c, x in self.terms]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"name": self.name, "terms": [[str(c), str(x)] for c, x in self.terms]}

    @classmethod
    def from_json(cls, d: dict) -> HardyCombo:
        return cls(tuple((as_expr(c), Fraction(x)) for c, x in d["terms"]), d.get("name", ""))


def power(n: int, exponent: Fraction) -> ConstExpr:
    """Exact ``n**exponent`` for half-integer exponents; odd halves become
    ``Sqrt(n**k)`` with an integer radicand."""
    k = exponent * 2
    if k.denominator != 1:
        raise UnsupportedShape(f"exponent {exponent}")
    k = int(k)
    if k % 2 == 0:
        return Int(n ** (k // 2))
    return Sqrt(Int(n**k))


def evaluate(f: HardyCombo, n: int) -> ConstExpr:
    if n < 1:
        raise ValueError("n must be >= 1")
    out: ConstExpr | None = None
    for c, x in f.terms:
        term = c * power(n, x)
        out = term if out is None else out + term
    return out if out is not None else Int(0)


@dataclass
class _Compiled:
    """Radical data of the coefficients, reused across many ``n``."""

    parts: list[tuple[Fraction, int, Fraction]] = field(default_factory=list)  # (coeff, radicand, exponent)
    exact: bool = True


def _compile(f: HardyCombo) -> _Compiled:
    comp = _Compiled()
    for c, x in f.terms:
        rf = c.radical_form
        if rf is None:
            comp.exact = False
            return comp
        for r, q in rf.terms.items():
            comp.parts.append((q, r, x))
    return comp


def _radical_value(comp: _Compiled, n: int) -> RadicalForm:
    out = RadicalForm()
    for q, r, x in comp.parts:
        k = int(x * 2)
        if k % 2 == 0:
            out._add_term(r, q * n ** (k // 2))
        else:
            out._add_term(r * n**k, q)
    return out


@dataclass(frozen=True)
class IterateSeq:
    function: HardyCombo
    mode: Rounding = Rounding.FLOOR

    @property
    def name(self) -> str:
        return self.function.name

    def to_json(self) -> dict:
        return {"function": self.function.to_json(), "mode": self.mode.value}


_COMPILED: dict[HardyCombo, _Compiled] = {}


def _compiled(f: HardyCombo) -> _Compiled:
    comp = _COMPILED.get(f)
    if comp is None:
        comp = _COMPILED[f] = _compile(f)
    return comp


def exact_value(f: HardyCombo, n: int) -> RadicalForm | None:
    """Canonical radical form of ``f(n)``; ``None`` outside the radical field."""
    comp = _compiled(f)
    if not comp.exact:
        return evaluate(f, n).radical_form
    return _radical_value(comp, n)


def iterate(s: IterateSeq, n: int, cap_bits: int = DEFAULT_CAP_BITS, path: str = "auto") -> int:
    """``floor(f(n))`` or the closest integer to ``f(n)`` (ties upward).

    ``path="interval"`` forces the refinement route through the expression
    tree, bypassing the canonical radical form; it exists so the two routes
    can be checked against each other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if path == "interval":
        return _iterate_by_refinement(s, n, cap_bits)
    rf = exact_value(s.function, n)
    if rf is None:
        e = evaluate(s.function, n)
        return floor_exact(e, cap_bits) if s.mode is Rounding.FLOOR else nearest_exact(e, cap_bits)
    if s.mode is Rounding.NEAREST:
        rf = rf + RadicalForm.rational(Fraction(1, 2))
    return rf.floor(cap_bits)


def _iterate_by_refinement(s: IterateSeq, n: int, cap_bits: int) -> int:
    from .errors import PrecisionExhausted

    e = evaluate(s.function, n)
    shift = Fraction(1, 2) if s.mode is Rounding.NEAREST else Fraction(0)
    p = 64
    while p <= cap_bits:
        iv = eval_interval(e, p)
        lo, hi = iv.lo + shift, iv.hi + shift
        flo, fhi = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if flo == fhi:
            return flo
        p *= 2
    raise PrecisionExhausted(f"iterate undecided at n={n}")


def iterate_many(s: IterateSeq, ns: Iterable[int], cap_bits: int = DEFAULT_CAP_BITS) -> list[int]:
    return [iterate(s, n, cap_bits) for n in ns]


# -- deviation of a real combination of iterates from a polynomial -------------------


@dataclass(frozen=True)
class Polynomial:
    """``sum coeffs[j] * t**j`` with exact coefficients (lowest degree first)."""

    coeffs: tuple[ConstExpr, ...]

    def __post_init__(self):
        cs = [as_expr(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1].rational_value() == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs) -> Polynomial:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> ConstExpr:
        return self.coeffs[-1]

    def __call__(self, x) -> ConstExpr:
        x = as_expr(x)
        out = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            out = out * x + c
        return out

    def radical_at(self, n) -> RadicalForm | None:
        out = RadicalForm()
        xn = Fraction(n)
        power_ = Fraction(1)
        for c in self.coeffs:
            rf = c.radical_form
            if rf is None:
                return None
            out = out + rf.scale(power_)
            power_ *= xn
        return out

    def __str__(self) -> str:
        return " + ".join(f"({c})*t^{j}" for j, c in enumerate(self.coeffs))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, cs: Sequence[str]) -> Polynomial:
        return cls(tuple(as_expr(c) for c in cs))


@dataclass
class DeviationReport:
    max_enclosure: DyadicInterval  # encloses max_n |sum theta_i u_i(n) - P(n)|
    argmax: int
    n_lo: int
    n_hi: int
    bits: int

    def to_json(self) -> dict:
        return {
            "max": self.max_enclosure.to_json(),
            "argmax": self.argmax,
            "range": [self.n_lo, self.n_hi],
            "bits": self.bits,
        }


def combo_deviation(
    u_list: Sequence[IterateSeq],
    theta_list: Sequence,
    P: Polynomial,
    n_range: range,
    bits: int = 96,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> DeviationReport:
    """Rigorous enclosure of ``max_n |sum_i theta_i u_i(n) - P(n)|`` over a
    finite range, with the ``n`` attaining the largest upper bound."""
    if len(u_list) != len(theta_list):
        raise ValueError("u_list and theta_list differ in length")
    if len(n_range) == 0:
        raise ValueError("empty range")
    thetas = [as_expr(t).radical_form for t in theta_list]
    best_lo = best_hi = None
    argmax = n_range[0]
    for n in n_range:
        us = [iterate(s, n, cap_bits) for s in u_list]
        if any(t is None for t in thetas):
            lo, hi = _deviation_by_tree(u_list, theta_list, us, P, n, bits)
        else:
            acc = RadicalForm()
            for t, u in zip(thetas, us):
                acc = acc + t.scale(u)
            pn = P.radical_at(n)
            if pn is None:
                lo, hi = _deviation_by_tree(u_list, theta_list, us, P, n, bits)
            else:
                lo, hi = _abs_enclosure(*(acc - pn).enclose(bits))
        if best_hi is None or hi > best_hi:
            best_hi, argmax = hi, n
        if best_lo is None or lo > best_lo:
            best_lo = lo
    return DeviationReport(DyadicInterval(best_lo, best_hi, -bits), argmax, n_range[0], n_range[-1], bits)


def _abs_enclosure(lo: int, hi: int) -> tuple[int, int]:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return 0, max(-lo, hi)


def _deviation_by_tree(u_list, theta_list, us, P, n, bits):
    e: ConstExpr = -P(n)
    for t, u in zip(theta_list, us):
        e = e + as_expr(t) * u
    iv = eval_interval(e, bits)
    scale = bits + iv.exp
    lo = iv.lo_m << scale if scale >= 0 else iv.lo_m >> -scale
    hi = iv.hi_m << scale if scale >= 0 else -((-iv.hi_m) >> -scale)
    return _abs_enclosure(lo, hi)


# -- the families used by the three theorems ----------------------------------------


def f_family(lam) -> tuple[HardyCombo, HardyCombo]:
    """``f1 = t^(3/2)``, ``f2 = lam t^(3/2) + t``."""
    lam = as_expr(lam)
    h = Fraction(3, 2)
    return (
        HardyCombo.of((Int(1), h), name="f1"),
        HardyCombo.of((lam, h), (Int(1), Fraction(1)), name="f2"),
    )


def g_family(lam, xi, L: int) -> tuple[HardyCombo, HardyCombo]:
    """``g1 = t^(3/2)``, ``g2 = lam t^(3/2) + L(t + xi)``."""
    lam, xi = as_expr(lam), as_expr(xi)
    h = Fraction(3, 2)
    return (
        HardyCombo.of((Int(1), h), name="g1"),
        HardyCombo.of((lam, h), (Int(L), Fraction(1)), (Int(L) * xi, Fraction(0)), name="g2"),
    )


def h_family(lam, L: int) -> tuple[HardyCombo, HardyCombo, HardyCombo]:
    """``h1 = t^(3/2)``, ``h2 = lam t^(3/2) + L(t + sqrt 2)``, ``h3 = t^2``."""
    g1, g2 = g_family(lam, Sqrt(Int(2)), L)
    return (
        HardyCombo(g1.terms, "h1"),
        HardyCombo(g2.terms, "h2"),
        HardyCombo.of((Int(1), Fraction(2)), name="h3"),
    )
