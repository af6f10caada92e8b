import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.bohr import TruncatedSet
from rlab.errors import EmptySet
from rlab.largeness import pws_profile, run_gap_profile


def test_small_example():
    rep = run_gap_profile(TruncatedSet([1, 2, 3, 7, 8], 10))
    assert rep.max_run == 3 and (rep.max_run_at.start, rep.max_run_at.end) == (1, 3)
    assert rep.max_gap == 4 and rep.max_gap_at == (3, 7)
    w = pws_profile(TruncatedSet([1, 2, 3, 7, 8], 10), 1)
    assert (w.start, w.end, w.length) == (1, 3, 3)


def test_evens():
    ev = TruncatedSet(np.arange(2, 101, 2), 100)
    rep = run_gap_profile(ev)
    assert rep.max_run == 1 and rep.max_gap == 2
    w = pws_profile(ev, 2)
    assert (w.start, w.end, w.length) == (2, 100, 99)


def test_full_interval_and_empty():
    assert run_gap_profile(TruncatedSet(np.arange(1, 51), 50)).max_run == 50
    with pytest.raises(EmptySet):
        run_gap_profile(TruncatedSet([], 5))
    with pytest.raises(EmptySet):
        pws_profile(TruncatedSet([], 5), 3)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(1, 300), min_size=1))
def test_properties(xs):
    s = TruncatedSet(sorted(xs), 300)
    rep = run_gap_profile(s)
    assert rep.max_run <= 300
    assert (rep.max_run == 300) == (len(xs) == 300)
    # a run of length k is a window of gaps <= 1
    assert pws_profile(s, 1).length == rep.max_run
    lengths = [pws_profile(s, g).length for g in range(1, 12)]
    assert lengths == sorted(lengths)
    w = pws_profile(s, 3)
    el = s.tolist()
    i, j = el.index(w.start), el.index(w.end)
    assert all(b - a <= 3 for a, b in zip(el[i:j], el[i + 1 : j + 1]))
    assert i == 0 or el[i] - el[i - 1] > 3
    assert j == len(el) - 1 or el[j + 1] - el[j] > 3
