"""Bohr sets ``E = {m >= 1 : ||phi_i m|| < delta_i for all i}``.

Bulk scans use a 64-bit fixed-point enclosure of each irrational frequency:
``frac(phi) in [B, B+1) * 2^-64``, so ``m*phi mod 1`` lies in
``[m*B, m*B + m] * 2^-64`` where ``m*B`` is computed exactly modulo ``2^64``.
A comparison that this enclosure cannot settle falls back to the exact
radical path.  Rational frequencies are handled by residues, exactly.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidSpec, UnsupportedStructure
from .exactreal import (
    DEFAULT_CAP_BITS,
    ConstExpr,
    Int,
    Mul,
    Rat,
    as_expr,
    floor_exact,
    norm_below,
)
from .exactreal.radical import RadicalForm
from .span import integer_relation

_W = 64
_ONE = 1 << _W
_MAX_RADIUS_DENOM = 1 << 60


def _dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class _Fixed:
    """frac(phi) in [B, B + (0 if exact else 1)] * 2^-64."""

    B: int
    exact: bool


@dataclass(frozen=True)
class _Residue:
    p: int
    q: int


class BohrSpec:
    """Frequencies and dyadic radii of a Bohr set.

    Frequencies with an exact rational value form the rational block; the
    rest are the irrational block, declared linearly independent over Q
    together with 1 when ``independent`` is true.
    """

    def __init__(self, frequencies: Sequence, radii: Sequence, independent: bool = True, name: str = "", check_relations: bool = True):
        self.frequencies: tuple[ConstExpr, ...] = tuple(as_expr(f) for f in frequencies)
        self.radii: tuple[Fraction, ...] = tuple(Fraction(r) for r in radii)
        self.independent = independent
        self.name = name
        if len(self.frequencies) != len(self.radii):
            raise InvalidSpec("one radius per frequency required")
        if not self.frequencies:
            raise InvalidSpec("at least one frequency required")
        for d in self.radii:
            if not (0 < d < Fraction(1, 2)):
                raise InvalidSpec(f"radius {d} outside (0, 1/2)")
            if not _dyadic(d) or d.denominator > _MAX_RADIUS_DENOM:
                raise InvalidSpec(f"radius {d} must be dyadic with denominator <= 2^60")
        self.rational: list[int] = []
        self.irrational: list[int] = []
        for i, f in enumerate(self.frequencies):
            (self.rational if f.rational_value() is not None else self.irrational).append(i)
        for i in self.rational:
            q = self.frequencies[i].rational_value().denominator
            if (self.radii[i] * q).denominator == 1:
                raise InvalidSpec(f"radius {self.radii[i]} sits on the lattice (1/{q})Z")
        self.relation = None
        if independent and self.irrational and check_relations:
            self.relation = integer_relation([Int(1)] + [self.frequencies[i] for i in self.irrational])
            if self.relation is not None:
                raise InvalidSpec(f"declared independent frequencies satisfy the relation {self.relation}")
        self._fixed: dict[int, _Fixed] = {}
        self._residue: dict[int, _Residue] = {}
        self._rf = [f.radical_form for f in self.frequencies]
        for i, f in enumerate(self.frequencies):
            if i in self.rational:
                q = f.rational_value()
                self._residue[i] = _Residue(q.numerator % q.denominator, q.denominator)
            else:
                frac = f - Int(floor_exact(f))
                scaled = Mul(frac, Int(_ONE))
                B = floor_exact(scaled)
                self._fixed[i] = _Fixed(B, scaled.rational_value() is not None)

    # -- identity ----------------------------------------------------------------
    @property
    def k(self) -> int:
        return len(self.frequencies)

    @property
    def fully_independent(self) -> bool:
        """No rational frequencies and 1, phi_1, ..., phi_k declared independent."""
        return self.independent and not self.rational

    def canonical(self) -> str:
        fs = ",".join(str(f) for f in self.frequencies)
        rs = ",".join(str(r) for r in self.radii)
        return f"freqs=[{fs}];radii=[{rs}]"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "frequencies": [str(f) for f in self.frequencies],
            "radii": [str(r) for r in self.radii],
            "independent": self.independent,
            "rational_block": self.rational,
            "irrational_block": self.irrational,
        }

    def __repr__(self):
        return f"BohrSpec({self.canonical()})"

    # -- exact membership -----------------------------------------------------------
    def _coord_below(self, i: int, m: int, t: Fraction, cap_bits: int) -> bool:
        rf = self._rf[i]
        if rf is None:
            return norm_below(Mul(self.frequencies[i], Int(m)), t, cap_bits)
        return _radical_norm_below(rf.scale(m), t, cap_bits)

    def member_exact(self, m: int, factor: int = 1, cap_bits: int = DEFAULT_CAP_BITS) -> bool:
        return all(self._coord_below(i, m, factor * self.radii[i], cap_bits) for i in range(self.k))

    # -- vectorised membership ---------------------------------------------------------
    @functools.lru_cache(maxsize=None)
    def _residue_table(self, i: int, factor: int) -> np.ndarray:
        res = self._residue[i]
        t = factor * self.radii[i]
        ok = np.zeros(res.q, dtype=bool)
        for j in range(res.q):
            ok[j] = min(j, res.q - j) < t * res.q
        return ok

    def _coord_status(self, i: int, ms: np.ndarray, factor: int) -> tuple[np.ndarray, np.ndarray]:
        """(certainly below, certainly not below) for coordinate i."""
        if i in self._residue:
            res = self._residue[i]
            j = ((ms % np.uint64(res.q)) * np.uint64(res.p)) % np.uint64(res.q)
            below = self._residue_table(i, factor)[j.astype(np.int64)]
            return below, ~below
        fx = self._fixed[i]
        T = int(factor * self.radii[i] * _ONE)
        x = ms * np.uint64(fx.B)  # exact modulo 2^64
        s = x + np.uint64(T)
        if fx.exact:
            below = (s >= np.uint64(1)) & (s <= np.uint64(2 * T - 1))
            above = (s >= np.uint64(2 * T)) | (s == np.uint64(0))
            return below, above
        w = ms
        fits = w <= np.uint64(2 * T - 1)
        lim = np.where(fits, np.uint64(2 * T - 1) - np.where(fits, w, np.uint64(0)), np.uint64(0))
        below = fits & (s >= np.uint64(1)) & (s <= lim)
        above = (s >= np.uint64(2 * T)) & ((s - np.uint64(2 * T)) <= (np.uint64(_ONE - 2 * T) - w))
        return below, above

    def member_mask(self, ms, factor: int = 1, cap_bits: int = DEFAULT_CAP_BITS) -> np.ndarray:
        """Exact membership for an array of positive integers (< 2^63).

        ``factor`` scales every radius, e.g. 2 for the difference test."""
        ms = np.asarray(ms, dtype=np.uint64)
        sure_in = np.ones(ms.shape, dtype=bool)
        sure_out = np.zeros(ms.shape, dtype=bool)
        order = self.rational + self.irrational
        for i in order:
            below, above = self._coord_status(i, ms, factor)
            sure_out |= above
            sure_in &= below
        undecided = np.flatnonzero(~sure_in & ~sure_out)
        result = sure_in & ~sure_out
        for idx in undecided:
            result[idx] = self.member_exact(int(ms[idx]), factor, cap_bits)
        return result

    def coordinate_status(self, rs, factor: int = 2, cap_bits: int = DEFAULT_CAP_BITS) -> np.ndarray:
        """Boolean matrix ``[len(rs), k]``: ``||phi_i r|| < factor * delta_i``."""
        rs = np.asarray(rs, dtype=np.uint64)
        out = np.zeros((len(rs), self.k), dtype=bool)
        for i in range(self.k):
            below, above = self._coord_status(i, rs, factor)
            col = below.copy()
            for idx in np.flatnonzero(~below & ~above):
                col[idx] = self._coord_below(i, int(rs[idx]), factor * self.radii[i], cap_bits)
            out[:, i] = col
        return out

    # -- residue structure ------------------------------------------------------------------
    @functools.cached_property
    def residue_modulus(self) -> int:
        q = 1
        for i in self.rational:
            q = math.lcm(q, self._residue[i].q)
        return q

    @functools.cached_property
    def admissible_residues(self) -> np.ndarray:
        """Residues a mod Q passing every rational coordinate exactly."""
        Q = self.residue_modulus
        a = np.arange(Q, dtype=np.uint64)
        ok = np.ones(Q, dtype=bool)
        for i in self.rational:
            below, _ = self._coord_status(i, a, 1)
            ok &= below
        return np.flatnonzero(ok).astype(np.uint64)


def _radical_norm_below(rf: RadicalForm, t: Fraction, cap_bits: int) -> bool:
    """||x|| < t for an exact radical value x."""
    if rf.is_rational:
        q = rf.rational_part
        frac = q - (q.numerator // q.denominator)
        return min(frac, 1 - frac) < t
    k = (rf + RadicalForm.rational(Fraction(1, 2))).floor(cap_bits)
    d = rf - RadicalForm.rational(k)  # d in (-1/2, 1/2), ||x|| = |d|
    # |d| < t  iff  d - t < 0 and d + t > 0
    return (d - RadicalForm.rational(t)).sign(cap_bits) < 0 and (d + RadicalForm.rational(t)).sign(cap_bits) > 0


def member(spec: BohrSpec, m: int, cap_bits: int = DEFAULT_CAP_BITS) -> bool:
    if m < 1:
        raise ValueError("m must be >= 1")
    return spec.member_exact(m, 1, cap_bits)


# -- truncated sets ------------------------------------------------------------------------


@dataclass
class TruncatedSet:
    """Finite view ``X ∩ [1, horizon]`` of an integer set."""

    elements: np.ndarray
    horizon: int
    provenance: str = ""

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=np.int64)
        if el.size:
            if el[0] < 1 or el[-1] > self.horizon:
                raise ValueError("elements must lie in [1, horizon]")
            if el.size > 1 and not (np.diff(el) > 0).all():
                raise ValueError("elements must be strictly increasing")
        el.setflags(write=False)
        self.elements = el

    def __len__(self) -> int:
        return int(self.elements.size)

    def __iter__(self):
        return (int(x) for x in self.elements)

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < self.elements.size and self.elements[i] == x)

    def tolist(self) -> list[int]:
        return [int(x) for x in self.elements]

    def density(self) -> Fraction:
        return Fraction(len(self), self.horizon)

    def dump_csv(self, path: str | Path, spec_string: str | None = None) -> None:
        header = f"# spec={spec_string or self.provenance} N={self.horizon}\n"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(header)
            for x in self.elements.tolist():
                fh.write(f"{x}\n")

    @classmethod
    def load_csv(cls, path: str | Path) -> TruncatedSet:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            if not header.startswith("# spec="):
                raise ValueError("missing '# spec=' header")
            spec_part, _, n_part = header[len("# spec="):].rpartition(" N=")
            xs = [int(line) for line in fh if line.strip()]
        return cls(np.array(xs, dtype=np.int64), int(n_part), spec_part)


# -- enumeration ----------------------------------------------------------------------------

_CHUNK = 1 << 20


def iter_members(spec: BohrSpec, lo: int, hi: int, chunk: int = _CHUNK) -> Iterable[np.ndarray]:
    """Sorted members of E in ``[lo, hi]``, yielded chunk by chunk."""
    Q = spec.residue_modulus
    res = spec.admissible_residues
    if res.size == 0 or hi < lo:
        return
    k0 = max(lo, 1) // Q
    k1 = hi // Q
    per = max(1, chunk // max(1, res.size))
    for kb in range(k0, k1 + 1, per):
        ke = min(k1 + 1, kb + per)
        ks = np.arange(kb, ke, dtype=np.uint64)
        cand = (ks[:, None] * np.uint64(Q) + res[None, :]).ravel()
        cand = cand[(cand >= np.uint64(max(lo, 1))) & (cand <= np.uint64(hi))]
        if cand.size == 0:
            continue
        mask = spec.member_mask(cand)
        yield cand[mask]


def enumerate_with_density(spec: BohrSpec, N: int) -> tuple[TruncatedSet, Fraction]:
    if N < 1:
        raise ValueError("N must be >= 1")
    parts = list(iter_members(spec, 1, N))
    el = np.concatenate(parts).astype(np.int64) if parts else np.zeros(0, dtype=np.int64)
    ts = TruncatedSet(el, N, spec.canonical())
    return ts, Fraction(len(ts), N)


def density_theoretical(spec: BohrSpec) -> ConstExpr:
    """Natural density from the product structure: ``prod 2 delta_i`` over the
    independent irrational block times the admissible residue fraction."""
    if spec.irrational and not spec.independent:
        raise UnsupportedStructure("irrational frequencies not declared independent")
    frac = Fraction(len(spec.admissible_residues), spec.residue_modulus)
    for i in spec.irrational:
        frac *= 2 * spec.radii[i]
    return Rat(frac.numerator, frac.denominator) if frac.denominator != 1 else Int(frac.numerator)


# -- difference sets ----------------------------------------------------------------------------


class DiffStatus(enum.Enum):
    CERT_IN = "CERT_IN"
    CERT_OUT = "CERT_OUT"
    NEED_WITNESS = "NEED_WITNESS"


def return_diff_test(spec: BohrSpec, r: int, cap_bits: int = DEFAULT_CAP_BITS) -> DiffStatus:
    if r < 0:
        raise ValueError("r must be >= 0")
    return return_diff_many(spec, [r], cap_bits)[0]


def return_diff_many(spec: BohrSpec, rs, cap_bits: int = DEFAULT_CAP_BITS) -> list[DiffStatus]:
    """Necessity: some ``||phi_i r|| >= 2 delta_i`` rules ``r`` out.
    Sufficiency of the ``2 delta`` test is only claimed in the fully
    independent case, where every orbit tail is dense."""
    small = spec.coordinate_status(rs, 2, cap_bits).all(axis=1)
    ok = DiffStatus.CERT_IN if spec.fully_independent else DiffStatus.NEED_WITNESS
    return [ok if s else DiffStatus.CERT_OUT for s in small]


class WitnessSearcher:
    """Finds the least ``m <= M`` with ``m, m + r`` both in E, for many ``r``."""

    def __init__(self, spec: BohrSpec, M: int, block: int = 1 << 14):
        if M < 1:
            raise ValueError("M must be >= 1")
        self.spec = spec
        self.M = M
        self.block = block
        parts = list(iter_members(spec, 1, M))
        self.members = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)

    def search(self, r: int) -> int | None:
        if r < 0:
            raise ValueError("r must be >= 0")
        if r == 0:
            return int(self.members[0]) if self.members.size else None
        for start in range(0, self.members.size, self.block):
            ms = self.members[start : start + self.block]
            hit = self.spec.member_mask(ms + np.uint64(r))
            if hit.any():
                return int(ms[int(np.argmax(hit))])
        return None


def witness_search(spec: BohrSpec, r: int, M: int) -> int | None:
    """Least witness ``m <= M``; ``None`` means not found up to ``M``."""
    return WitnessSearcher(spec, M).search(r)
