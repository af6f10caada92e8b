"""Integer derivative spans, limit classification, polynomial shadows and
joint intersectivity.

Coefficients live in a declared constant basis ``B = {1, b1, ..., br}``
assumed linearly independent over Q.  A coefficient is then zero exactly when
all its rational coordinates vanish, which is all the classifier needs.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import UnsupportedShape
from .exactreal import (
    ConstExpr,
    Int,
    Order,
    Rat,
    as_expr,
    compare,
    eval_interval,
)


@dataclass(frozen=True)
class Basis:
    names: tuple[str, ...]
    values: tuple[ConstExpr, ...]

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("names and values differ in length")
        if not self.names or self.values[0].rational_value() != 1:
            raise ValueError("the first basis element must be 1")
        object.__setattr__(self, "values", tuple(as_expr(v) for v in self.values))

    @classmethod
    def of(cls, **named) -> Basis:
        names = ("1",) + tuple(named)
        return cls(names, (Int(1),) + tuple(as_expr(v) for v in named.values()))

    @property
    def size(self) -> int:
        return len(self.names)

    def coeff(self, *coords) -> SymCoeff:
        cs = [Fraction(c) for c in coords] + [Fraction(0)] * (self.size - len(coords))
        return SymCoeff(self, tuple(cs))

    def element(self, name: str, scale=1) -> SymCoeff:
        cs = [Fraction(0)] * self.size
        cs[self.names.index(name)] = Fraction(scale)
        return SymCoeff(self, tuple(cs))

    def zero(self) -> SymCoeff:
        return SymCoeff(self, (Fraction(0),) * self.size)

    def relation_search(self, max_coeff: int = 10**6, bits: int = 256):
        """Small integer relation among the basis values, or ``None``."""
        return integer_relation(self.values, max_coeff, bits)


def integer_relation(values: Sequence, max_coeff: int = 10**6, bits: int = 256):
    """PSLQ search for ``sum k_i v_i = 0`` with ``|k_i| <= max_coeff``.

    Any relation found is re-checked exactly (or by a tight interval when the
    values leave the radical field) before it is returned.
    """
    import mpmath

    vals = [as_expr(v) for v in values]
    if any(v.rational_value() == 0 for v in vals):
        return [1 if v.rational_value() == 0 else 0 for v in vals]
    mids = [eval_interval(v, bits + 16).midpoint for v in vals]
    with mpmath.workprec(bits + 16):
        xs = [mpmath.mpf(q.numerator) / q.denominator for q in mids]
        rel = mpmath.pslq(xs, maxcoeff=max_coeff, maxsteps=10**5)
    if rel is None:
        return None
    combo: ConstExpr = Int(0)
    for k, v in zip(rel, vals):
        combo = combo + Int(int(k)) * v
    if combo.radical_form is not None:
        return [int(k) for k in rel] if combo.radical_form.is_zero else None
    iv = eval_interval(combo, bits)
    return [int(k) for k in rel] if iv.contains(0) else None


@dataclass(frozen=True)
class SymCoeff:
    basis: Basis
    coords: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other: SymCoeff) -> SymCoeff:
        return SymCoeff(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> SymCoeff:
        return SymCoeff(self.basis, tuple(-a for a in self.coords))

    def __sub__(self, other: SymCoeff) -> SymCoeff:
        return self + (-other)

    def scale(self, q) -> SymCoeff:
        q = Fraction(q)
        return SymCoeff(self.basis, tuple(a * q for a in self.coords))

    def ratio_to(self, other: SymCoeff) -> Fraction | None:
        """Rational ``q`` with ``self == q * other``, if one exists."""
        if other.is_zero:
            return None
        q = None
        for a, b in zip(self.coords, other.coords):
            if b == 0:
                if a != 0:
                    return None
                continue
            r = a / b
            if q is None:
                q = r
            elif r != q:
                return None
        return q

    def times(self, other: SymCoeff) -> SymCoeff:
        """Product, defined when one factor is rational."""
        if self.is_rational:
            return other.scale(self.coords[0])
        if other.is_rational:
            return self.scale(other.coords[0])
        raise UnsupportedShape("product of two irrational basis combinations")

    def value(self) -> ConstExpr:
        out: ConstExpr = Int(0)
        for c, v in zip(self.coords, self.basis.values):
            if c:
                out = out + _const(c) * v
        return out

    def __str__(self) -> str:
        parts = []
        for c, name in zip(self.coords, self.basis.names):
            if not c:
                continue
            parts.append(str(c) if name == "1" else (name if c == 1 else f"{c}*{name}"))
        return " + ".join(parts) if parts else "0"


def _const(q: Fraction) -> ConstExpr:
    return Int(q.numerator) if q.denominator == 1 else Rat(q.numerator, q.denominator)


Generator = tuple[tuple[SymCoeff, Fraction], ...]


@dataclass(frozen=True)
class GenFamily:
    basis: Basis
    generators: tuple[Generator, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(tuple((c, Fraction(x)) for c, x in g) for g in self.generators)
        for g in gens:
            exps = [x for _, x in g]
            if len(set(exps)) != len(exps):
                raise ValueError("exponents must be distinct within a generator")
        object.__setattr__(self, "generators", gens)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i + 1}" for i in range(len(gens))))

    @property
    def k(self) -> int:
        return len(self.generators)


class GPS:
    """Generalized power sum: exponent -> nonzero coefficient."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: Basis, terms: Mapping[Fraction, SymCoeff] | None = None):
        self.basis = basis
        self.terms = {x: c for x, c in (terms or {}).items() if not c.is_zero}

    def add_term(self, x: Fraction, c: SymCoeff) -> None:
        cur = self.terms.get(x)
        new = c if cur is None else cur + c
        if new.is_zero:
            self.terms.pop(x, None)
        else:
            self.terms[x] = new

    def __add__(self, other: GPS) -> GPS:
        out = GPS(self.basis, self.terms)
        for x, c in other.terms.items():
            out.add_term(x, c)
        return out

    def scale(self, k) -> GPS:
        return GPS(self.basis, {x: c.scale(k) for x, c in self.terms.items()})

    @property
    def exponents(self) -> list[Fraction]:
        return sorted(self.terms, reverse=True)

    def __eq__(self, other) -> bool:
        return isinstance(other, GPS) and self.terms == other.terms

    def __repr__(self) -> str:
        inner = ", ".join(f"{x}: {c}" for x, c in sorted(self.terms.items(), reverse=True))
        return "GPS{" + inner + "}"

    def value_at(self, t: int) -> ConstExpr:
        """Exact ``F(t)``; ``t`` must be a perfect square when half-integer
        exponents occur."""
        from math import isqrt

        out: ConstExpr = Int(0)
        for x, c in self.terms.items():
            k = x * 2
            if k.denominator != 1:
                raise UnsupportedShape(f"exponent {x}")
            k = int(k)
            if k % 2:
                root = isqrt(t)
                if root * root != t:
                    raise ValueError("t must be a perfect square for half-integer exponents")
                base = Fraction(root) ** k
            else:
                base = Fraction(t) ** (k // 2)
            out = out + c.value() * _const(base)
        return out


def falling(x: Fraction, m: int) -> Fraction:
    out = Fraction(1)
    for j in range(m):
        out *= x - j
    return out


def derivative(fam: GenFamily, i: int, m: int) -> GPS:
    g = GPS(fam.basis)
    for c, x in fam.generators[i]:
        f = falling(x, m)
        if f:
            g.add_term(x - m, c.scale(f))
    return g


def integer_combination(fam: GenFamily, coeffs) -> GPS:
    """``sum_{i,m} c[i][m] * (d/dt)^m generator_i`` as a GPS.

    ``coeffs`` is a matrix indexed ``[i][m]`` or a mapping ``(i, m) -> c``.
    """
    items = coeffs.items() if isinstance(coeffs, Mapping) else (
        ((i, m), c) for i, row in enumerate(coeffs) for m, c in enumerate(row)
    )
    out = GPS(fam.basis)
    for (i, m), c in items:
        if c:
            if int(c) != c:
                raise ValueError("integer coefficients required")
            out = out + derivative(fam, i, m).scale(int(c))
    return out


class LimitKind(enum.Enum):
    ZERO_FUNCTION = "ZeroFunction"
    LIMIT_ZERO = "LimitZero"
    LIMIT_INFINITY = "LimitInfinity"
    FINITE_NONZERO = "FiniteNonzero"


@dataclass(frozen=True)
class Limit:
    kind: LimitKind
    value: SymCoeff | None = None

    def __str__(self) -> str:
        if self.kind is LimitKind.FINITE_NONZERO:
            return f"FiniteNonzero({self.value})"
        return self.kind.value


def classify_limit(g: GPS) -> Limit:
    if not g.terms:
        return Limit(LimitKind.ZERO_FUNCTION)
    top = max(g.terms)
    if top > 0:
        return Limit(LimitKind.LIMIT_INFINITY)
    if top == 0:
        return Limit(LimitKind.FINITE_NONZERO, g.terms[top])
    return Limit(LimitKind.LIMIT_ZERO)


def _kind_of_support(support: frozenset) -> LimitKind:
    if not support:
        return LimitKind.ZERO_FUNCTION
    top = max(support)
    if top > 0:
        return LimitKind.LIMIT_INFINITY
    return LimitKind.FINITE_NONZERO if top == 0 else LimitKind.LIMIT_ZERO


@dataclass
class DichotomyReport:
    coeff_bound: int
    max_order: int
    matrices: int
    counts: dict[str, int]
    components: list[list[tuple[int, int]]]
    patterns_per_component: list[int]

    @property
    def holds(self) -> bool:
        return self.counts.get(LimitKind.FINITE_NONZERO.value, 0) == 0

    def to_json(self) -> dict:
        return {
            "coeff_bound": self.coeff_bound,
            "max_order": self.max_order,
            "matrices": str(self.matrices),
            "counts": {k: str(v) for k, v in self.counts.items()},
            "components": [[list(u) for u in comp] for comp in self.components],
            "patterns_per_component": self.patterns_per_component,
            "holds": self.holds,
        }


def verify_dichotomy(fam: GenFamily, coeff_bound: int = 10, max_order: int = 5) -> DichotomyReport:
    """Classify every integer matrix ``|c[i][m]| <= coeff_bound``, ``m <= max_order``.

    The coefficient of a GPS at a given exponent depends only on the entries
    ``c[i][m]`` whose derivative contributes a term at that exponent.  Entries
    are grouped into components linked by shared exponents; each component is
    enumerated in full and reduced to the set of exponent supports it can
    produce (with multiplicities).  The classification of a matrix depends
    only on the union of its components' supports, so combining the per
    component tables accounts for every matrix exactly once.
    """
    units = [(i, m) for i in range(fam.k) for m in range(max_order + 1)]
    gps = {u: derivative(fam, *u) for u in units}
    units = [u for u in units if gps[u].terms]  # entries that never matter
    dead = (fam.k * (max_order + 1)) - len(units)

    parent = {u: u for u in units}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    by_exp = defaultdict(list)
    for u in units:
        for x in gps[u].terms:
            by_exp[x].append(u)
    for us in by_exp.values():
        for u in us[1:]:
            parent[find(u)] = find(us[0])
    comps = defaultdict(list)
    for u in units:
        comps[find(u)].append(u)
    components = sorted(comps.values())

    values = range(-coeff_bound, coeff_bound + 1)
    tables = [_component_table(comp, gps, values) for comp in components]

    counts: Counter = Counter()
    free = len(values) ** dead
    for choice in itertools.product(*(t.items() for t in tables)):
        support = frozenset().union(*(s for s, _ in choice)) if choice else frozenset()
        mult = free
        for _, n in choice:
            mult *= n
        counts[_kind_of_support(support).value] += mult
    return DichotomyReport(
        coeff_bound,
        max_order,
        len(values) ** (fam.k * (max_order + 1)),
        dict(counts),
        components,
        [len(t) for t in tables],
    )


def _component_table(comp, gps, values) -> Counter:
    """Support pattern -> number of coefficient tuples producing it."""
    import numpy as np

    exps = sorted({x for u in comp for x in gps[u].terms})
    # integer matrix: unit -> (exponent, coordinate) entries over a common denominator
    den = 1
    for u in comp:
        for c in gps[u].terms.values():
            for q in c.coords:
                den = den * q.denominator // gcd(den, q.denominator)
    width = len(next(iter(gps[comp[0]].terms.values())).coords)
    mat = np.zeros((len(comp), len(exps) * width), dtype=np.int64)
    for r, u in enumerate(comp):
        for x, c in gps[u].terms.items():
            j = exps.index(x)
            for k, q in enumerate(c.coords):
                mat[r, j * width + k] = int(q * den)
    if np.abs(mat).max(initial=0) * len(comp) * max(abs(values[0]), abs(values[-1])) >= 2**62:
        raise OverflowError("coefficients too large for the vectorised enumeration")
    vals = np.arange(values[0], values[-1] + 1, dtype=np.int64)
    grids = np.meshgrid(*([vals] * len(comp)), indexing="ij")
    combos = np.stack([g.ravel() for g in grids], axis=1)
    coeffs = combos @ mat  # (n_combos, exps*width)
    nonzero = (coeffs.reshape(len(combos), len(exps), width) != 0).any(axis=2)
    bits = nonzero.astype(np.int64) @ (1 << np.arange(len(exps), dtype=np.int64))
    keys, counts = np.unique(bits, return_counts=True)
    table: Counter = Counter()
    for key, n in zip(keys.tolist(), counts.tolist()):
        table[frozenset(x for j, x in enumerate(exps) if key >> j & 1)] += n
    return table


def brute_force_dichotomy(fam: GenFamily, coeff_bound: int, max_order: int) -> dict[str, int]:
    """Literal enumeration of every matrix; only for small sizes."""
    values = range(-coeff_bound, coeff_bound + 1)
    shape = [(i, m) for i in range(fam.k) for m in range(max_order + 1)]
    gps = {u: derivative(fam, *u) for u in shape}
    counts: Counter = Counter()
    for combo in itertools.product(values, repeat=len(shape)):
        g = GPS(fam.basis)
        for u, c in zip(shape, combo):
            if c:
                g = g + gps[u].scale(c)
        counts[classify_limit(g).kind.value] += 1
    return dict(counts)


@dataclass
class CrossCheck:
    coeffs: list[list[int]]
    kind: str
    magnitude_lo: float
    magnitude_hi: float
    agrees: bool


def numeric_crosscheck(
    fam: GenFamily,
    samples: int = 100,
    t: int = 10**8,
    coeff_bound: int = 10,
    max_order: int = 5,
    seed: int = 0,
    big: Fraction = Fraction(100),
    small: Fraction = Fraction(1, 100),
) -> list[CrossCheck]:
    """Evaluate sampled combinations at ``t`` with interval arithmetic:
    LimitInfinity must give ``|F(t)| > big``, LimitZero ``|F(t)| < small``.

    The leading nonzero derivative order is drawn uniformly so both kinds
    occur.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        m0 = rng.randint(0, max_order)
        mat = [[0] * (max_order + 1) for _ in range(fam.k)]
        for i in range(fam.k):
            for m in range(m0, max_order + 1):
                mat[i][m] = rng.randint(-coeff_bound, coeff_bound)
        if all(mat[i][m0] == 0 for i in range(fam.k)):
            mat[rng.randrange(fam.k)][m0] = rng.choice([-1, 1]) * rng.randint(1, coeff_bound)
        g = integer_combination(fam, mat)
        kind = classify_limit(g).kind
        val = g.value_at(t)
        iv = eval_interval(val, 80)
        mag_lo = float(min(abs(iv.lo), abs(iv.hi))) if not iv.contains(0) else 0.0
        mag_hi = float(max(abs(iv.lo), abs(iv.hi)))
        if kind is LimitKind.LIMIT_INFINITY:
            ok = compare(val, _const(big)) is Order.ABOVE or compare(val, _const(-big)) is Order.BELOW
        elif kind is LimitKind.LIMIT_ZERO:
            ok = compare(val, _const(small)) is Order.BELOW and compare(val, _const(-small)) is Order.ABOVE
        elif kind is LimitKind.ZERO_FUNCTION:
            ok = val.rational_value() == 0
        else:
            ok = False
        out.append(CrossCheck(mat, kind.value, mag_lo, mag_hi, ok))
    return out


# -- polynomial shadow P_Z ----------------------------------------------------------------

SHADOW_EXPONENTS = (Fraction(0), Fraction(1), Fraction(2))
_THREE_HALVES = Fraction(3, 2)


@dataclass
class ShadowSet:
    """``{sum k_j basis_j : k in Z^r}``, minus 0 unless ``includes_zero``.

    Polynomials are integer coefficient tuples, lowest degree first.
    """

    lattice: list[tuple[int, ...]]
    includes_zero: bool
    forced_zero: list[str] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.lattice and not self.includes_zero

    def describe(self) -> str:
        if self.is_empty:
            return "{}"
        if not self.lattice:
            return "{0}"
        gens = [_poly_str(p) for p in self.lattice]
        names = "abcdefgh"[: len(gens)]
        combo = " + ".join(f"{n}*({g})" if len(gens) > 1 else f"{n}*{g}" for n, g in zip(names, gens))
        nz = "" if self.includes_zero else (f", {names[0]} != 0" if len(gens) == 1 else ", not all zero")
        return "{" + f"{combo} : {', '.join(names)} in Z{nz}" + "}"

    def is_multiples_of_t_squared(self) -> bool:
        """True iff the set is exactly ``{c t^2 : c in Z, c != 0}``."""
        return (
            not self.includes_zero
            and len(self.lattice) == 1
            and tuple(abs(x) for x in self.lattice[0]) == (0, 0, 1)
        )

    def to_json(self) -> dict:
        return {
            "lattice": [list(p) for p in self.lattice],
            "includes_zero": self.includes_zero,
            "forced_zero": self.forced_zero,
            "description": self.describe(),
        }


def _poly_str(p: Sequence[int]) -> str:
    parts = []
    for j in range(len(p) - 1, -1, -1):
        c = p[j]
        if not c:
            continue
        mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
        coef = str(c) if (j == 0 or abs(c) != 1) else ("-" if c < 0 else "")
        parts.append(f"{coef}*{mono}" if mono and coef not in ("", "-") else f"{coef}{mono}")
    return " + ".join(parts) if parts else "0"


def poly_shadow(fam: GenFamily) -> ShadowSet:
    """Integer polynomials ``q`` with ``sum x_i g_i - q -> 0`` for some real
    ``x != 0``, for generators of the form ``alpha t^(3/2) + (poly, deg <= 2)``."""
    basis = fam.basis
    alphas, polys = [], []
    for idx, g in enumerate(fam.generators):
        a = basis.zero()
        p = {e: basis.zero() for e in SHADOW_EXPONENTS}
        for c, x in g:
            if x == _THREE_HALVES:
                a = a + c
            elif x in p:
                p[x] = p[x] + c
            else:
                raise UnsupportedShape(f"generator {fam.names[idx]} has exponent {x}")
        alphas.append(a)
        polys.append([p[e] for e in SHADOW_EXPONENTS])

    # Eliminate the t^(3/2) condition sum x_i alpha_i = 0 with a pivot.
    nonzero = [i for i, a in enumerate(alphas) if not a.is_zero]
    columns: list[tuple[str, list[SymCoeff]]] = []
    if not nonzero:
        free = list(range(fam.k))
        for i in free:
            columns.append((fam.names[i], polys[i]))
    else:
        pivot = next((i for i in nonzero if alphas[i].is_rational), nonzero[0])
        ap = alphas[pivot]
        for i in range(fam.k):
            if i == pivot:
                continue
            if alphas[i].is_zero:
                ratio = basis.zero()
            elif ap.is_rational:
                ratio = alphas[i].scale(1 / ap.coords[0])
            else:
                q = alphas[i].ratio_to(ap)
                if q is None:
                    raise UnsupportedShape("t^(3/2) coefficients with irrational ratio and no rational pivot")
                ratio = basis.coeff(q)
            col = [pe - ratio.times(pp) for pe, pp in zip(polys[i], polys[pivot])]
            columns.append((fam.names[i], col))

    includes_zero = False
    forced: list[str] = []
    rational_cols: list[tuple[str, list[Fraction]]] = []
    irrational_cols: list[tuple[str, list[SymCoeff]]] = []
    for name, col in columns:
        nz = [c for c in col if not c.is_zero]
        if not nz:
            includes_zero = True
            continue
        kappa = nz[0]
        ratios = [c.ratio_to(kappa) if not c.is_zero else Fraction(0) for c in col]
        if all(r is not None for r in ratios):
            rational_cols.append((name, ratios))
        else:
            irrational_cols.append((name, col))

    def support(col_vals) -> set[int]:
        return {j for j, c in enumerate(col_vals) if (c if isinstance(c, Fraction) else not c.is_zero)}

    rat_supports = [support(c) for _, c in rational_cols]
    irr_supports = [support(c) for _, c in irrational_cols]
    for k, (name, col) in enumerate(irrational_cols):
        others = rat_supports + irr_supports[:k] + irr_supports[k + 1 :]
        if any(irr_supports[k] & s for s in others):
            raise UnsupportedShape(f"parameter of {name} shares coefficients with other parameters")
        entries = [f"t^{SHADOW_EXPONENTS[j]}: {col[j]}" for j in sorted(irr_supports[k])]
        forced.append(
            f"coefficient of {name} is forced to 0: integrality of "
            + ", ".join(entries)
            + " times one real parameter needs an irrational ratio to be rational"
        )

    lattice: list[tuple[int, ...]] = []
    if rational_cols:
        rows = []
        for _, ratios in rational_cols:
            den = 1
            for r in ratios:
                den = den * r.denominator // gcd(den, r.denominator)
            rows.append([int(r * den) for r in ratios])
        rank = _rank(rows)
        if rank < len(rows):
            includes_zero = True
        lattice = _saturate(rows)
    return ShadowSet(lattice, includes_zero, forced)


def _rank(rows: list[list[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncol = len(m[0]) if m else 0
    for c in range(ncol):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _integer_kernel(rows: list[list[int]], n: int) -> list[list[int]]:
    """Basis of ``{x in Z^n : rows . x = 0}`` via unimodular column reduction."""
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # columns of U
    col = 0
    for r in range(len(A)):
        # reduce columns col..n-1 on row r to a single nonzero at position col
        while True:
            nz = [j for j in range(col, n) if A[r][j] != 0]
            if len(nz) <= 1:
                break
            jmin = min(nz, key=lambda j: abs(A[r][j]))
            for j in nz:
                if j == jmin:
                    continue
                q = A[r][j] // A[r][jmin]
                for row in A:
                    row[j] -= q * row[jmin]
                for urow in U:
                    urow[j] -= q * urow[jmin]
        nz = [j for j in range(col, n) if A[r][j] != 0]
        if nz:
            j = nz[0]
            for row in A:
                row[col], row[j] = row[j], row[col]
            for urow in U:
                urow[col], urow[j] = urow[j], urow[col]
            col += 1
    return [[U[i][j] for i in range(n)] for j in range(col, n)]


def _saturate(rows: list[list[int]]) -> list[tuple[int, ...]]:
    n = len(rows[0])
    perp = _integer_kernel(rows, n)
    basis = _integer_kernel(perp, n) if perp else [[int(i == j) for j in range(n)] for i in range(n)]
    out = []
    for v in basis:
        lead = next((x for x in reversed(v) if x), 0)
        out.append(tuple(-x for x in v) if lead < 0 else tuple(v))
    return sorted(out)


# -- joint intersectivity -----------------------------------------------------------------


@dataclass
class IntersectivityReport:
    modulus_bound: int
    witnesses: dict[int, int | None]

    @property
    def holds(self) -> bool:
        return all(w is not None for w in self.witnesses.values())

    @property
    def failures(self) -> list[int]:
        return [m for m, w in self.witnesses.items() if w is None]

    def to_json(self) -> dict:
        return {
            "modulus_bound": self.modulus_bound,
            "holds": self.holds,
            "failures": self.failures,
            "witnesses": {str(m): w for m, w in self.witnesses.items()},
        }


def _eval_mod(p: Sequence[int], n: int, m: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = (acc * n + c) % m
    return acc


def joint_intersective_check(polys: ShadowSet | Iterable[Sequence[int]], modulus_bound: int) -> IntersectivityReport:
    """For each ``m <= M`` a common root ``n`` modulo ``m``.

    ``n = m`` is tried first (it is a root exactly when every constant term
    vanishes mod m); otherwise ``n = 1..m`` is scanned, which covers every
    residue class.  For a :class:`ShadowSet` the lattice generators are
    checked, since a common root of the generators is a root of every
    integer combination of them.
    """
    if modulus_bound < 1:
        raise ValueError("modulus bound must be >= 1")
    family = [tuple(p) for p in (polys.lattice if isinstance(polys, ShadowSet) else polys)]
    witnesses: dict[int, int | None] = {}
    for m in range(1, modulus_bound + 1):
        found = None
        for n in itertools.chain((m,), range(1, m)):
            if all(_eval_mod(p, n, m) == 0 for p in family):
                found = n
                break
        witnesses[m] = found
    return IntersectivityReport(modulus_bound, witnesses)


# -- the three families ------------------------------------------------------------------


def f_span_family(lam: str = "sqrt(2)") -> GenFamily:
    """``f1 = t^(3/2)``, ``f2 = lam t^(3/2) + t`` over the basis ``{1, lam}``."""
    B = Basis.of(λ=lam)
    h = Fraction(3, 2)
    return GenFamily(
        B,
        (
            ((B.coeff(1), h),),
            ((B.element("λ"), h), (B.coeff(1), Fraction(1))),
        ),
        ("f1", "f2"),
    )


def g_span_family(lam: str = "sqrt(2)", xi: str = "sqrt(2)", L: int = 6) -> GenFamily:
    """``g1``, ``g2 = lam t^(3/2) + L t + L xi``.

    When ``lam`` and ``xi`` coincide the basis is ``{1, lam}``; otherwise
    ``{1, lam, xi}``.
    """
    lam_e, xi_e = as_expr(lam), as_expr(xi)
    same = compare(lam_e, xi_e) is Order.EQUAL
    B = Basis.of(λ=lam) if same else Basis.of(λ=lam, ξ=xi)
    xi_name = "λ" if same else "ξ"
    h = Fraction(3, 2)
    return GenFamily(
        B,
        (
            ((B.coeff(1), h),),
            ((B.element("λ"), h), (B.coeff(L), Fraction(1)), (B.element(xi_name, L), Fraction(0))),
        ),
        ("g1", "g2"),
    )


def h_span_family(lam: str = "sqrt(2)", L: int = 6, include=(0, 1, 2)) -> GenFamily:
    """``h1, h2 = lam t^(3/2) + L(t + sqrt 2), h3 = t^2`` over ``{1, lam, sqrt 2, lam sqrt 2}``
    (collapsed to ``{1, sqrt 2}`` when ``lam = sqrt 2``)."""
    lam_e = as_expr(lam)
    same = compare(lam_e, as_expr("sqrt(2)")) is Order.EQUAL
    B = Basis.of(λ=lam) if same else Basis.of(λ=lam, r2="sqrt(2)")
    r2 = "λ" if same else "r2"
    h = Fraction(3, 2)
    gens = (
        ((B.coeff(1), h),),
        ((B.element("λ"), h), (B.coeff(L), Fraction(1)), (B.element(r2, L), Fraction(0))),
        ((B.coeff(1), Fraction(2)),),
    )
    names = ("h1", "h2", "h3")
    return GenFamily(B, tuple(gens[i] for i in include), tuple(names[i] for i in include))
