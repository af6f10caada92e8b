"""Run, gap and windowed-gap statistics of finite integer sets.

Thickness and piecewise syndeticity are asymptotic; at finite scale the best
one can do is report the numbers and watch how they move with the horizon.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bohr import TruncatedSet
from .errors import EmptySet


@dataclass
class Window:
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "length": self.length}


@dataclass
class LargenessReport:
    horizon: int
    size: int
    max_run: int
    max_run_at: Window
    max_gap: int
    max_gap_at: tuple[int, int] | None  # consecutive elements (a, b) realising it
    gap_histogram: dict[int, int]
    windows: dict[int, Window] = field(default_factory=dict)  # probe gap -> longest window

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "size": self.size,
            "max_run": self.max_run,
            "max_run_at": self.max_run_at.to_json(),
            "max_gap": self.max_gap,
            "max_gap_at": list(self.max_gap_at) if self.max_gap_at else None,
            "gap_histogram": {str(g): c for g, c in sorted(self.gap_histogram.items())},
            "windows": {str(g): w.to_json() for g, w in sorted(self.windows.items())},
        }


def _elements(s: TruncatedSet) -> np.ndarray:
    if len(s) == 0:
        raise EmptySet("largeness statistics need a nonempty set")
    return s.elements


def _longest_block(ok: np.ndarray) -> tuple[int, int]:
    """Longest stretch of True in ``ok``: (first index, count); (0, 0) if none."""
    if not ok.any():
        return 0, 0
    padded = np.concatenate(([False], ok, [False])).astype(np.int8)
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    lens = ends - starts
    best = int(np.argmax(lens))  # argmax picks the leftmost among ties
    return int(starts[best]), int(lens[best])


def run_gap_profile(s: TruncatedSet, probe_gaps=()) -> LargenessReport:
    """Maximal runs of consecutive integers and maximal gaps between
    consecutive elements.  A gap is the difference ``b - a`` of neighbours."""
    el = _elements(s)
    gaps = np.diff(el)
    i0, cnt = _longest_block(gaps == 1)
    if cnt == 0:
        run_at = Window(int(el[0]), int(el[0]))
    else:
        run_at = Window(int(el[i0]), int(el[i0 + cnt]))
    if gaps.size:
        j = int(np.argmax(gaps))
        max_gap, gap_at = int(gaps[j]), (int(el[j]), int(el[j + 1]))
        hist = dict(sorted(Counter(gaps.tolist()).items()))
    else:
        max_gap, gap_at, hist = 0, None, {}
    rep = LargenessReport(s.horizon, len(s), run_at.length, run_at, max_gap, gap_at, hist)
    for g in probe_gaps:
        rep.windows[int(g)] = pws_profile(s, int(g))
    return rep


def pws_profile(s: TruncatedSet, g: int) -> Window:
    """Longest window ``[a, b]`` of elements in which neighbouring gaps are
    all at most ``g``.  The window cannot be extended at either end."""
    if g < 1:
        raise ValueError("g must be positive")
    el = _elements(s)
    i0, cnt = _longest_block(np.diff(el) <= g)
    if cnt == 0:
        return Window(int(el[0]), int(el[0]))
    return Window(int(el[i0]), int(el[i0 + cnt]))
