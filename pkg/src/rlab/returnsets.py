"""Finite-scale return-time sets ``R_{u_1}(E) ∩ ... ∩ R_{u_k}(E)``.

Every (n, i) cell carries the provenance of its status.  ``NotFoundUpTo`` is
evidence only: absence is proved solely by ``CertOut`` here, or by an
emptiness certificate elsewhere.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bohr import BohrSpec, DiffStatus, TruncatedSet, WitnessSearcher, return_diff_many
from .errors import HorizonMismatch
from .exactreal import DEFAULT_CAP_BITS
from .hardy import IterateSeq, iterate


class Status(enum.IntEnum):
    IN_WITH_WITNESS = 0
    IN_BY_TORUS = 1
    NOT_FOUND = 2
    CERT_OUT = 3

    @property
    def positive(self) -> bool:
        return self in (Status.IN_WITH_WITNESS, Status.IN_BY_TORUS)


class Mode(enum.Enum):
    TORUS_FIRST = "TorusFirst"
    WITNESS_ONLY = "WitnessOnly"


@dataclass
class ReturnTable:
    """Per-(n, i) statuses over the inclusive range ``[n_lo, n_hi]``."""

    n_lo: int
    n_hi: int
    seq_names: tuple[str, ...]
    r: np.ndarray  # int64 [rows, k]
    status: np.ndarray  # int8 [rows, k], values of Status
    witness: np.ndarray  # int64 [rows, k], -1 when absent
    witness_bound: int
    mode: Mode
    cap_limited: list[tuple[int, int]] = field(default_factory=list)  # (n, i) torus-in without witness

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1, dtype=np.int64)

    @property
    def positive(self) -> np.ndarray:
        return (self.status == Status.IN_WITH_WITNESS) | (self.status == Status.IN_BY_TORUS)

    @property
    def S(self) -> TruncatedSet:
        rows = self.positive.all(axis=1)
        return TruncatedSet(self.ns[rows], self.n_hi, f"return-set[{','.join(self.seq_names)}]")

    def row_status(self, n: int) -> list[Status]:
        return [Status(int(s)) for s in self.status[n - self.n_lo]]

    def counts(self) -> dict[str, dict[str, int]]:
        out = {}
        for i, name in enumerate(self.seq_names):
            col = self.status[:, i]
            out[name] = {s.name: int((col == s).sum()) for s in Status}
        return out

    def record(self, n: int) -> dict:
        j = n - self.n_lo
        st = []
        for s in self.status[j]:
            s = Status(int(s))
            st.append(_status_label(s, self.witness_bound))
        wit = [int(w) if w >= 0 else None for w in self.witness[j]]
        return {"n": int(n), "r": [int(x) for x in self.r[j]], "status": st, "witness": wit}

    def dump_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for n in range(self.n_lo, self.n_hi + 1):
                fh.write(json.dumps(self.record(n), separators=(",", ":")) + "\n")

    def summary(self) -> dict:
        S = self.S
        return {
            "n_range": [self.n_lo, self.n_hi],
            "sequences": list(self.seq_names),
            "mode": self.mode.value,
            "witness_bound": self.witness_bound,
            "status_counts": self.counts(),
            "size_S": len(S),
            "S_head": S.tolist()[:50],
            "cap_limited": [list(x) for x in self.cap_limited],
        }


def _status_label(s: Status, M: int) -> str:
    return {
        Status.IN_WITH_WITNESS: "InWithWitness",
        Status.IN_BY_TORUS: "InByTorus",
        Status.NOT_FOUND: f"NotFoundUpTo({M})",
        Status.CERT_OUT: "CertOut",
    }[s]


def compute_iterates(seqs: Sequence[IterateSeq], n_lo: int, n_hi: int, cap_bits: int = DEFAULT_CAP_BITS) -> np.ndarray:
    rows = n_hi - n_lo + 1
    out = np.empty((rows, len(seqs)), dtype=np.int64)
    for i, s in enumerate(seqs):
        out[:, i] = [iterate(s, n, cap_bits) for n in range(n_lo, n_hi + 1)]
    return out


def return_table(
    spec: BohrSpec,
    seqs: Sequence[IterateSeq],
    n_range: tuple[int, int] | range,
    witness_bound: int,
    mode: Mode = Mode.TORUS_FIRST,
    cap_bits: int = DEFAULT_CAP_BITS,
    searcher: WitnessSearcher | None = None,
) -> ReturnTable:
    """Statuses of ``r_i = u_i(n)`` for every ``n`` in the range.

    ``TorusFirst`` takes CERT_IN / CERT_OUT from the ``2 delta`` test and
    searches witnesses only where the test is not authoritative.
    ``WitnessOnly`` searches a witness for every cell; a cell without a
    witness is reported CertOut when the necessity test excludes it and
    NotFoundUpTo otherwise.
    """
    n_lo, n_hi = (n_range.start, n_range.stop - 1) if isinstance(n_range, range) else n_range
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError("n_range must be a nonempty range of positive integers")
    if witness_bound < 1:
        raise ValueError("witness bound must be >= 1")
    k = len(seqs)
    r = compute_iterates(seqs, n_lo, n_hi, cap_bits)
    rows = r.shape[0]
    status = np.empty((rows, k), dtype=np.int8)
    witness = np.full((rows, k), -1, dtype=np.int64)
    if searcher is None or searcher.M != witness_bound or searcher.spec is not spec:
        searcher = WitnessSearcher(spec, witness_bound)
    for i in range(k):
        col = r[:, i]
        if (col < 0).any():
            raise ValueError(f"sequence {seqs[i].name} has negative iterates")
        diff = return_diff_many(spec, col, cap_bits)
        for j, d in enumerate(diff):
            rv = int(col[j])
            if mode is Mode.TORUS_FIRST:
                if d is DiffStatus.CERT_OUT:
                    status[j, i] = Status.CERT_OUT
                    continue
                if d is DiffStatus.CERT_IN:
                    status[j, i] = Status.IN_BY_TORUS
                    continue
            m = searcher.search(rv)
            if m is not None:
                if d is DiffStatus.CERT_OUT:
                    raise AssertionError(f"witness {m} found for certified-out r={rv}")
                status[j, i] = Status.IN_WITH_WITNESS
                witness[j, i] = m
            else:
                status[j, i] = Status.CERT_OUT if d is DiffStatus.CERT_OUT else Status.NOT_FOUND
    names = tuple(s.name or f"u{i + 1}" for i, s in enumerate(seqs))
    return ReturnTable(n_lo, n_hi, names, r, status, witness, witness_bound, mode)


def confirm_witnesses(table: ReturnTable, spec: BohrSpec, ns: Iterable[int], M: int, searcher: WitnessSearcher | None = None) -> int:
    """Upgrade torus-certified cells of the given rows to witnessed ones.

    Rows whose witness is not found within ``M`` stay torus-certified and
    are logged in ``table.cap_limited``.  Returns the number of rows whose
    every cell now carries a witness.
    """
    if searcher is None or searcher.M != M or searcher.spec is not spec:
        searcher = WitnessSearcher(spec, M)
    full = 0
    for n in ns:
        j = n - table.n_lo
        for i in range(table.status.shape[1]):
            if table.status[j, i] == Status.IN_BY_TORUS:
                m = searcher.search(int(table.r[j, i]))
                if m is None:
                    table.cap_limited.append((int(n), i))
                else:
                    table.status[j, i] = Status.IN_WITH_WITNESS
                    table.witness[j, i] = m
        if (table.status[j] == Status.IN_WITH_WITNESS).all():
            full += 1
    return full


def verify_witnesses(table: ReturnTable, spec: BohrSpec, cap_bits: int = 2 * DEFAULT_CAP_BITS) -> list[dict]:
    """Re-check every reported witness with the exact path at a raised cap."""
    bad = []
    rows, cols = np.nonzero(table.witness >= 0)
    for j, i in zip(rows.tolist(), cols.tolist()):
        m, rv = int(table.witness[j, i]), int(table.r[j, i])
        if not (spec.member_exact(m, 1, cap_bits) and spec.member_exact(m + rv, 1, cap_bits)):
            bad.append({"n": table.n_lo + j, "i": i, "m": m, "r": rv})
    return bad


def intersect(*items: ReturnTable | TruncatedSet) -> TruncatedSet:
    sets = [x.S if isinstance(x, ReturnTable) else x for x in items]
    if not sets:
        raise ValueError("nothing to intersect")
    horizon = sets[0].horizon
    for s in sets[1:]:
        if s.horizon != horizon:
            raise HorizonMismatch(f"horizons {horizon} and {s.horizon} differ")
    el = sets[0].elements
    for s in sets[1:]:
        el = np.intersect1d(el, s.elements, assume_unique=True)
    return TruncatedSet(el, horizon, " & ".join(s.provenance for s in sets))
