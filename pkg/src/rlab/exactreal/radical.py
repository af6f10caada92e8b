"""Exact arithmetic in Q(sqrt(r1), sqrt(r2), ...).

A :class:`RadicalForm` is a finite sum ``sum c_i * sqrt(r_i)`` with rational
``c_i`` and positive integer radicands.  Radicand ``1`` carries the rational
part.  Two invariants make the form canonical enough to decide rationality:

* no radicand other than 1 is a perfect square;
* no product of two distinct radicands is a perfect square.

Under these invariants the square roots involved have pairwise distinct
squarefree kernels, hence are linearly independent over Q.  A form is
therefore rational exactly when it has no irrational term, and a form with an
irrational term is never an integer or half-integer, so refining an interval
enclosure of it always terminates.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def _split_radicand(r: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``r == s*s*k``, pulling out small square factors."""
    s = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > r:
            break
        while r % pp == 0:
            r //= pp
            s *= p
    root = isqrt(r)
    if root * root == r:
        return s * root, 1
    return s, r


class RadicalForm:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms: dict[int, Fraction] = terms or {}

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q) -> RadicalForm:
        q = Fraction(q)
        return cls({1: q} if q else {})

    @classmethod
    def sqrt_of_int(cls, r: int, coeff=1) -> RadicalForm:
        out = cls()
        out._add_term(r, Fraction(coeff))
        return out

    @classmethod
    def from_terms(cls, items: Iterable[tuple[int, Fraction]]) -> RadicalForm:
        out = cls()
        for r, c in items:
            out._add_term(r, Fraction(c))
        return out

    def _add_term(self, r: int, c: Fraction) -> None:
        if not c:
            return
        if r <= 0:
            if r == 0:
                return
            raise ValueError("negative radicand")
        if r != 1:
            s, r = _split_radicand(r)
            c *= s
        if r != 1 and r not in self.terms:
            for r2 in self.terms:
                if r2 == 1:
                    continue
                prod = r * r2
                root = isqrt(prod)
                if root * root == prod:
                    # sqrt(r) = root / sqrt(r2) = (root / r2) * sqrt(r2)
                    c = c * Fraction(root, r2)
                    r = r2
                    break
        new = self.terms.get(r, Fraction(0)) + c
        if new:
            self.terms[r] = new
        else:
            self.terms.pop(r, None)

    # -- queries ------------------------------------------------------------
    def copy(self) -> RadicalForm:
        return RadicalForm(dict(self.terms))

    @property
    def is_rational(self) -> bool:
        return all(r == 1 for r in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def rational_part(self) -> Fraction:
        return self.terms.get(1, Fraction(0))

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("form is irrational")
        return self.rational_part

    def irrational_terms(self) -> list[tuple[int, Fraction]]:
        return sorted((r, c) for r, c in self.terms.items() if r != 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadicalForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "RadicalForm(0)"
        parts = []
        for r, c in sorted(self.terms.items()):
            parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return "RadicalForm(" + " + ".join(parts) + ")"

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: RadicalForm) -> RadicalForm:
        out = self.copy()
        for r, c in other.terms.items():
            out._add_term(r, c)
        return out

    def __neg__(self) -> RadicalForm:
        return RadicalForm({r: -c for r, c in self.terms.items()})

    def __sub__(self, other: RadicalForm) -> RadicalForm:
        return self + (-other)

    def scale(self, q) -> RadicalForm:
        q = Fraction(q)
        if not q:
            return RadicalForm()
        return RadicalForm({r: c * q for r, c in self.terms.items()})

    def __mul__(self, other: RadicalForm) -> RadicalForm:
        out = RadicalForm()
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                g = gcd(r1, r2)
                out._add_term((r1 // g) * (r2 // g), c1 * c2 * g)
        return out

    def inverse(self) -> RadicalForm | None:
        """Exact reciprocal for rational, single-radical and ``a + b*sqrt(r)``
        forms; ``None`` for anything wider."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return RadicalForm.rational(1 / self.rational_part)
        irr = self.irrational_terms()
        if len(irr) == 1:
            (r, b), a = irr[0], self.rational_part
            if not a:
                # 1/(b sqrt r) = sqrt(r) / (b r)
                return RadicalForm.sqrt_of_int(r, 1 / (b * r))
            norm = a * a - b * b * r
            return RadicalForm.from_terms([(1, a / norm), (r, -b / norm)])
        return None

    def sqrt(self) -> RadicalForm | None:
        """Square root of a nonnegative rational form; ``None`` otherwise."""
        if not self.is_rational:
            return None
        q = self.rational_part
        if q < 0:
            raise ValueError("square root of a negative rational")
        if not q:
            return RadicalForm()
        # sqrt(p/q) = sqrt(p*q)/q
        return RadicalForm.sqrt_of_int(q.numerator * q.denominator, Fraction(1, q.denominator))

    # -- enclosures -----------------------------------------------------------
    def enclose(self, bits: int) -> tuple[int, int]:
        """Integers ``lo, hi`` with ``lo/2^bits <= value <= hi/2^bits``."""
        lo = hi = 0
        for r, c in self.terms.items():
            p, q = c.numerator, c.denominator
            if r == 1:
                x = p << bits
                lo += x // q
                hi += -((-x) // q)
                continue
            k = isqrt(r << (2 * bits))
            # sqrt(r) * 2^bits in [k, k+1]
            a, b = (p * k, p * (k + 1)) if p > 0 else (p * (k + 1), p * k)
            lo += a // q
            hi += -((-b) // q)
        return lo, hi

    def sign(self, cap_bits: int = 4096) -> int:
        if self.is_rational:
            q = self.rational_part
            return (q > 0) - (q < 0)
        bits = 64
        while bits <= cap_bits:
            lo, hi = self.enclose(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        from ..errors import PrecisionExhausted

        raise PrecisionExhausted(f"sign undecided at {cap_bits} bits")

    def floor(self, cap_bits: int = 4096) -> int:
        if self.is_rational:
            q = self.rational_part
            return q.numerator // q.denominator
        irr = self.irrational_terms()
        if len(irr) == 1:
            return _floor_single(self.rational_part, *irr[0])
        bits = 64
        while bits <= cap_bits:
            lo, hi = self.enclose(bits)
            flo, fhi = lo >> bits, hi >> bits
            if flo == fhi:
                return flo
            bits *= 2
        from ..errors import PrecisionExhausted

        raise PrecisionExhausted(f"floor undecided at {cap_bits} bits")


def _floor_single(a: Fraction, r: int, b: Fraction) -> int:
    """floor(a + b*sqrt(r)) for non-square ``r`` using one integer square root."""
    # b*sqrt(r) = s*sqrt(K)/(den) with everything integral
    sgn = 1 if b > 0 else -1
    b2r = b * b * r  # = (b sqrt r)^2, rational
    u, v = b2r.numerator, b2r.denominator
    c, d = a.numerator, a.denominator
    # a + sgn*sqrt(u/v) = (c*v + sgn*sqrt(d*d*u*v)) / (d*v)
    K = d * d * u * v
    root = isqrt(K)
    if root * root == K:
        num = c * v + sgn * root
        return num // (d * v)
    if sgn > 0:
        fl = c * v + root
    else:
        fl = c * v - root - 1
    return fl // (d * v)
