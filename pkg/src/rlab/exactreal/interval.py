"""Rigorous dyadic interval evaluation and the decisions built on it."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DivideByZero, DomainError, PrecisionExhausted
from .expr import Add, ConstExpr, Div, Int, Mul, Neg, Norm, Rat, Sqrt, Sub, as_expr
from .radical import RadicalForm

DEFAULT_CAP_BITS = 4096
_MAX_WORK_BITS = 1 << 16


def isqrt(n: int) -> int:
    """Floor of the square root of a nonnegative integer."""
    if n < 0:
        raise ValueError("isqrt of a negative integer")
    return math.isqrt(n)


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval ``[lo_m, hi_m] * 2**exp`` with integer mantissas."""

    lo_m: int
    hi_m: int
    exp: int

    def __post_init__(self):
        if self.lo_m > self.hi_m:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, q) -> DyadicInterval:
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not dyadic")
        e = den.bit_length() - 1
        return cls(q.numerator, q.numerator, -e)

    @property
    def lo(self) -> Fraction:
        return _scaled(self.lo_m, self.exp)

    @property
    def hi(self) -> Fraction:
        return _scaled(self.hi_m, self.exp)

    @property
    def width(self) -> Fraction:
        return _scaled(self.hi_m - self.lo_m, self.exp)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def is_subset_of(self, other: DyadicInterval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __str__(self) -> str:
        return f"[{float(self.lo)!r}, {float(self.hi)!r}]"

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "lo_float": float(self.lo), "hi_float": float(self.hi)}


def _scaled(m: int, e: int) -> Fraction:
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


# -- fixed-point tree walk ------------------------------------------------------------
# Every node evaluates to integers (lo, hi) with value in [lo, hi] * 2^-w.


class _NeedMorePrecision(Exception):
    pass


def _ev(e: ConstExpr, w: int) -> tuple[int, int]:
    if isinstance(e, Int):
        v = e.value << w
        return v, v
    if isinstance(e, Rat):
        x = e.num << w
        return x // e.den, -((-x) // e.den)
    if isinstance(e, Neg):
        lo, hi = _ev(e.arg, w)
        return -hi, -lo
    if isinstance(e, Add):
        a, b = _ev(e.left, w), _ev(e.right, w)
        return a[0] + b[0], a[1] + b[1]
    if isinstance(e, Sub):
        a, b = _ev(e.left, w), _ev(e.right, w)
        return a[0] - b[1], a[1] - b[0]
    if isinstance(e, Mul):
        (a, b), (c, d) = _ev(e.left, w), _ev(e.right, w)
        prods = (a * c, a * d, b * c, b * d)
        return min(prods) >> w, -((-max(prods)) >> w)
    if isinstance(e, Div):
        rf = e.right.radical_form
        if rf is not None and rf.is_zero:
            raise DivideByZero(f"divisor {e.right} is zero")
        (a, b), (c, d) = _ev(e.left, w), _ev(e.right, w)
        if c == 0 and d == 0:
            raise DivideByZero(f"divisor {e.right} is zero")
        if c <= 0 <= d:
            raise _NeedMorePrecision
        quots_lo = [(x << w) // y for x in (a, b) for y in (c, d)]
        quots_hi = [-((-(x << w)) // y) for x in (a, b) for y in (c, d)]
        return min(quots_lo), max(quots_hi)
    if isinstance(e, Sqrt):
        lo, hi = _ev(e.arg, w)
        if hi < 0:
            raise DomainError(f"sqrt argument {e.arg} is negative")
        # sqrt(x * 2^-w) * 2^w = sqrt(x * 2^w)
        slo = math.isqrt(max(lo, 0) << w)
        t = hi << w
        shi = math.isqrt(t)
        if shi * shi != t:
            shi += 1
        return slo, shi
    if isinstance(e, Norm):
        lo, hi = _ev(e.arg, w)
        return _torus_scaled(lo, hi, w)
    raise TypeError(f"unknown node {type(e).__name__}")


def _torus_scaled(lo: int, hi: int, w: int) -> tuple[int, int]:
    """Enclosure of ||x|| for x in [lo, hi] * 2^-w, at the same scale."""
    one = 1 << w
    half = one >> 1
    if hi - lo >= half:
        return 0, half
    k = lo >> w
    a, b = lo - k * one, hi - k * one  # 0 <= a < one, b < 1.5 * one

    def dist(x: int) -> int:
        return x if x <= half else abs(one - x)

    nmax = half if (a <= half <= b or a <= one + half <= b) else max(dist(a), dist(b))
    nmin = 0 if (a == 0 or a <= one <= b) else min(dist(a), dist(b))
    return nmin, nmax


def _to_interval(lo: int, hi: int, w: int) -> DyadicInterval:
    return DyadicInterval(lo, hi, -w)


def eval_interval(e, precision_bits: int) -> DyadicInterval:
    """Enclosure of ``e`` of width at most ``2^(1-p) * max(1, |value|)``.

    Raises DomainError if a square root argument is certified negative and
    DivideByZero if a divisor evaluates exactly to zero.
    """
    e = as_expr(e)
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    target = precision_bits
    w = precision_bits + 16
    for _ in range(64):
        try:
            lo, hi = _ev(e, w)
        except _NeedMorePrecision:
            if w > _MAX_WORK_BITS:
                raise PrecisionExhausted(f"divisor sign undecided for {e}") from None
            w *= 2
            continue
        # |value| >= min(|lo|, |hi|) unless the interval straddles zero
        mag = 0 if lo <= 0 <= hi else min(abs(lo), abs(hi))
        scale = max(1 << w, mag)
        # width * 2^-w <= 2^(1-p) * scale * 2^-w
        if (hi - lo) << (target - 1) <= scale:
            return _to_interval(lo, hi, w)
        w += max(precision_bits, w // 2)
        if w > _MAX_WORK_BITS:
            break
    raise PrecisionExhausted(f"could not reach {precision_bits} bits for {e}")


@dataclass(frozen=True)
class TorusNorm:
    """Enclosure of a torus norm, always inside ``[0, 1/2]``."""

    interval: DyadicInterval

    @property
    def lo(self) -> Fraction:
        return self.interval.lo

    @property
    def hi(self) -> Fraction:
        return self.interval.hi


def torus_norm(e, precision_bits: int = 64) -> TorusNorm:
    """Enclosure of the distance from ``e`` to the nearest integer."""
    e = as_expr(e)
    q = e.rational_value()
    if q is not None:
        frac = q - (q.numerator // q.denominator)
        v = min(frac, 1 - frac)
        if v.denominator & (v.denominator - 1) == 0:
            return TorusNorm(DyadicInterval.point(v))
    iv = eval_interval(e, precision_bits)
    w = -iv.exp
    lo, hi = _torus_scaled(iv.lo_m, iv.hi_m, w)
    return TorusNorm(_to_interval(lo, hi, w))


class Order(enum.Enum):
    BELOW = "BELOW"
    ABOVE = "ABOVE"
    EQUAL = "EQUAL"
    UNKNOWN = "UNKNOWN"


def _compare_radical(rf: RadicalForm, cap_bits: int) -> Order:
    if rf.is_rational:
        q = rf.rational_part
        return Order.BELOW if q < 0 else Order.ABOVE if q > 0 else Order.EQUAL
    bits = 64
    while bits <= cap_bits:
        lo, hi = rf.enclose(bits)
        if hi < 0:
            return Order.BELOW
        if lo > 0:
            return Order.ABOVE
        bits *= 2
    return Order.UNKNOWN


def compare(a, b, cap_bits: int = DEFAULT_CAP_BITS) -> Order:
    """Three-way comparison of two constants; EQUAL is only ever returned
    from the exact canonical-form path."""
    a, b = as_expr(a), as_expr(b)
    ra, rb = a.radical_form, b.radical_form
    if ra is not None and rb is not None:
        return _compare_radical(ra - rb, cap_bits)
    diff = Sub(a, b)
    p = 64
    while p <= cap_bits:
        try:
            iv = eval_interval(diff, p)
        except PrecisionExhausted:
            return Order.UNKNOWN
        if iv.hi_m < 0:
            return Order.BELOW
        if iv.lo_m > 0:
            return Order.ABOVE
        p *= 2
    return Order.UNKNOWN


def compare_threshold(e, t, cap_bits: int = DEFAULT_CAP_BITS) -> Order:
    """Decide ``value(e) < t`` (BELOW) or ``> t`` (ABOVE).

    ``t`` is a nonnegative rational, normally dyadic.  Wrap ``e`` in
    :class:`Norm` to compare a torus norm.
    """
    t = Fraction(t)
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    return compare(e, as_expr(t), cap_bits)


def norm_below(e, t, cap_bits: int = DEFAULT_CAP_BITS) -> bool:
    """True iff ``||e|| < t`` is certified; raises if undecidable by the cap."""
    res = compare_threshold(Norm(as_expr(e)), t, cap_bits)
    if res is Order.UNKNOWN:
        raise PrecisionExhausted(f"||{e}|| vs {t} undecided at {cap_bits} bits")
    return res is Order.BELOW


def floor_exact(e, cap_bits: int = DEFAULT_CAP_BITS) -> int:
    """Exact floor.  Rational and radical values are decided from their
    canonical form; other values refine until one integer candidate remains."""
    e = as_expr(e)
    rf = e.radical_form
    if rf is not None:
        return rf.floor(cap_bits)
    p = 64
    while p <= cap_bits:
        iv = eval_interval(e, p)
        lo = iv.lo_m >> -iv.exp if iv.exp < 0 else iv.lo_m << iv.exp
        hi = iv.hi_m >> -iv.exp if iv.exp < 0 else iv.hi_m << iv.exp
        if lo == hi:
            return lo
        p *= 2
    raise PrecisionExhausted(f"floor of {e} undecided at {cap_bits} bits")


def nearest_exact(e, cap_bits: int = DEFAULT_CAP_BITS) -> int:
    """Closest integer, ties resolved upward."""
    return floor_exact(Add(as_expr(e), Rat(1, 2)), cap_bits)
