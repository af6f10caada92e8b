from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlab.bohr import (
    BohrSpec,
    DiffStatus,
    TruncatedSet,
    density_theoretical,
    enumerate_with_density,
    member,
    return_diff_test,
    witness_search,
)
from rlab.errors import InvalidSpec, UnsupportedStructure

EMPTY_E = BohrSpec(["1/6", "sqrt(2)/6"], [Fraction(1, 512)] * 2)
MAIN_E = BohrSpec(["sqrt(3)/4096", "sqrt(6)/4096"], [Fraction(3, 64)] * 2)
EVENS = BohrSpec(["1/2"], [Fraction(1, 4)])


def test_member_examples():
    assert not member(EMPTY_E, 6)
    assert member(EMPTY_E, 2448)  # 408 sqrt(2) is close to 577
    zero = BohrSpec(["0"], [Fraction(1, 8)])
    assert all(member(zero, m) for m in range(1, 50))


def test_enumeration_and_density():
    ts, d = enumerate_with_density(EVENS, 10)
    assert ts.tolist() == [2, 4, 6, 8, 10] and d == Fraction(1, 2)
    assert density_theoretical(EVENS).rational_value() == Fraction(1, 2)
    assert density_theoretical(EMPTY_E).rational_value() == Fraction(1, 1536)
    assert density_theoretical(MAIN_E).rational_value() == Fraction(9, 1024)


def test_mask_matches_exact_path():
    ms = np.arange(1, 4001)
    for spec in (EMPTY_E, MAIN_E, EVENS):
        fast = spec.member_mask(ms)
        slow = np.array([spec.member_exact(int(m)) for m in ms])
        assert (fast == slow).all()


def test_density_converges():
    ts, _ = enumerate_with_density(EMPTY_E, 10**6)
    theo = Fraction(1, 1536)
    errs = [abs(Fraction(int(np.searchsorted(ts.elements, N, side="right")), N) - theo) / theo for N in (10**4, 10**5, 10**6)]
    assert errs[-1] < Fraction(1, 5)
    assert sum(1 for a, b in zip(errs, errs[1:]) if b > a) <= 1


def test_return_diff_routing():
    assert return_diff_test(MAIN_E, 0) is DiffStatus.CERT_IN
    assert return_diff_test(EMPTY_E, 2448) is DiffStatus.NEED_WITNESS
    # ||beta r|| >= 2 delta for r = 1000: beta r = 0.4229
    assert return_diff_test(MAIN_E, 1000) is DiffStatus.CERT_OUT


def test_witness_search():
    assert witness_search(EVENS, 2, 10) == 2
    assert witness_search(EVENS, 1, 1000) is None
    # monotone in M: the least witness does not change once found
    r = 2448
    w = witness_search(EMPTY_E, r, 10**6)
    assert w is not None and member(EMPTY_E, w) and member(EMPTY_E, w + r)
    assert witness_search(EMPTY_E, r, 10**7) == w
    assert witness_search(EMPTY_E, r, w - 1) is None


def test_cert_out_has_no_witness():
    for r in (1000, 1001, 12345):
        assert return_diff_test(MAIN_E, r) is DiffStatus.CERT_OUT
        assert witness_search(MAIN_E, r, 10**6) is None


def test_invalid_specs():
    with pytest.raises(InvalidSpec):
        BohrSpec(["sqrt(2)"], [Fraction(1, 10)])  # not dyadic
    with pytest.raises(InvalidSpec):
        BohrSpec(["sqrt(2)"], [Fraction(1, 2)])
    with pytest.raises(InvalidSpec):
        BohrSpec(["1/4"], [Fraction(1, 4)])  # radius on the lattice (1/4)Z
    with pytest.raises(InvalidSpec):
        BohrSpec(["sqrt(2)", "2*sqrt(2) + 1"], [Fraction(1, 8)] * 2)  # dependent
    dep = BohrSpec(["sqrt(2)", "2*sqrt(2)"], [Fraction(1, 8)] * 2, independent=False)
    with pytest.raises(UnsupportedStructure):
        density_theoretical(dep)


def test_truncated_set_csv_roundtrip(tmp_path):
    ts, _ = enumerate_with_density(EMPTY_E, 20000)
    p = tmp_path / "e.csv"
    ts.dump_csv(p, EMPTY_E.canonical())
    assert p.read_text().splitlines()[0] == f"# spec={EMPTY_E.canonical()} N=20000"
    back = TruncatedSet.load_csv(p)
    assert back.tolist() == ts.tolist() and back.horizon == 20000
    with pytest.raises(ValueError):
        TruncatedSet([3, 2], 10)
    with pytest.raises(ValueError):
        TruncatedSet([1, 20], 10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2**40))
def test_mask_matches_exact_large_m(m):
    assert bool(MAIN_E.member_mask([m])[0]) == MAIN_E.member_exact(m)
    assert bool(EMPTY_E.member_mask([m])[0]) == EMPTY_E.member_exact(m)
