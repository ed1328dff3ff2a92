"""Finite sections and the Sturm bisection eigensolver.

The free matrix (a = 1, b = 0) is the oracle throughout: its size-n section
has eigenvalues 2 cos(j pi / (n+1)), j = 1..n.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacspec.sections import (
    accumulation_profile,
    count_in,
    eigs_all,
    eigs_in,
    gap_profile,
    gershgorin,
    section,
    sturm_count,
)


def free_eigs(n: int) -> np.ndarray:
    j = np.arange(1, n + 1)
    return np.sort(2.0 * np.cos(j * np.pi / (n + 1)))


def free_section(n: int):
    return np.zeros(n), np.ones(n - 1)


def test_section_extracts_and_copies():
    a = np.arange(1.0, 6.0)
    b = np.arange(10.0, 15.0)
    d, e = section(a, b, 3)
    assert d.tolist() == [10.0, 11.0, 12.0]
    assert e.tolist() == [1.0, 2.0]
    d[0] = -1.0
    assert b[0] == 10.0


def test_section_rejects_bad_sizes():
    with pytest.raises(ValueError):
        section(np.ones(4), np.ones(4), 0)
    with pytest.raises(ValueError):
        section(np.ones(4), np.ones(4), 6)


def test_gershgorin_free_interval():
    d, e = free_section(5)
    assert gershgorin(d, e) == (-2.0, 2.0)


def test_sturm_count_at_midpoints_is_exact():
    n = 10
    d, e = free_section(n)
    eigs = free_eigs(n)
    mids = 0.5 * (eigs[:-1] + eigs[1:])
    shifts = np.concatenate([[-2.5], mids, [2.5]])
    counts = sturm_count(d, e, shifts)
    assert counts.tolist() == list(range(n + 1))


def test_sturm_count_when_shift_hits_an_eigenvalue():
    # size 9: 0 is the middle eigenvalue and also an eigenvalue of every
    # odd leading submatrix.  The tiny-pivot rule counts an exact hit as
    # below the shift (the "<=" reading); anything else breaks count
    # monotonicity across the hit.
    d, e = free_section(9)
    assert int(sturm_count(d, e, np.array([0.0]))[0]) == 5
    assert int(sturm_count(d, e, np.array([-1e-12]))[0]) == 4
    # size 10: 0 is not an eigenvalue of the full matrix, only of the odd
    # leading submatrices met along the recurrence
    d, e = free_section(10)
    assert int(sturm_count(d, e, np.array([0.0]))[0]) == 5


def test_eigs_all_free_oracle():
    n = 50
    d, e = free_section(n)
    got = eigs_all(d, e)
    assert len(got) == n
    assert np.max(np.abs(got - free_eigs(n))) < 1e-10


def test_eigs_interlace_between_consecutive_sizes():
    e20 = eigs_all(*free_section(20))
    e19 = eigs_all(*free_section(19))
    assert np.all(e20[:19] < e19 + 1e-12)
    assert np.all(e19 < e20[1:] + 1e-12)


def test_eigs_in_subrange_matches_oracle():
    n = 40
    d, e = free_section(n)
    lo, hi = 0.3, 1.2
    got = eigs_in(d, e, lo, hi)
    want = free_eigs(n)
    want = want[(want >= lo) & (want < hi)]
    assert len(got) == len(want) == count_in(d, e, lo, hi)
    assert np.max(np.abs(np.sort(got) - want)) < 1e-10
    assert np.all((got >= lo) & (got < hi))


def test_eigs_in_empty_window():
    d, e = free_section(12)
    assert len(eigs_in(d, e, 5.0, 6.0)) == 0


def test_count_in_is_half_open():
    d, e = free_section(4)
    golden = (np.sqrt(5.0) - 1.0) / 2.0  # 2 cos(2 pi / 5)
    inner = count_in(d, e, -golden - 1e-9, golden + 1e-9)
    assert inner == 2
    # nudge the top end just below the eigenvalue: it drops out
    assert count_in(d, e, -golden - 1e-9, golden - 1e-9) == 1


def test_single_entry_section():
    assert eigs_all(np.array([3.5]), np.zeros(0)).tolist() == \
        pytest.approx([3.5], abs=1e-10)


def test_gap_profile_rejects_unsorted():
    assert gap_profile(np.array([0.0, 1.0, 3.0])).tolist() == [1.0, 2.0]
    with pytest.raises(ValueError):
        gap_profile(np.array([1.0, 0.5]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2 ** 31 - 1))
def test_eigs_all_matches_dense_solver(n, seed):
    rng = np.random.default_rng(seed)
    d = rng.uniform(-3.0, 3.0, n)
    e = rng.uniform(0.1, 2.0, max(n - 1, 0))
    got = eigs_all(d, e)
    dense = np.diag(d)
    if n > 1:
        dense += np.diag(e, 1) + np.diag(e, -1)
    want = np.linalg.eigvalsh(dense)
    assert len(got) == n
    scale = 1.0 + float(np.max(np.abs(want)))
    assert np.max(np.abs(got - want)) < 1e-9 * scale


def test_accumulation_profile_separates_spectrum_from_gap():
    n = np.arange(900)
    a = np.ones(900)
    b = np.zeros(900)
    prof = accumulation_profile(a, b, sizes=(100, 200, 400),
                                windows=((-1.0, 1.0), (3.0, 4.0)))
    inside, outside = prof.counts
    # one third of the free eigenvalues fall in (-1, 1)
    assert inside[0] > 0
    growth = prof.growth_factors(0)
    assert np.all((growth > 1.8) & (growth < 2.2))
    assert outside == (0, 0, 0)
    assert np.all(np.isinf(prof.growth_factors(1)))


def test_accumulation_profile_rejects_empty_window():
    with pytest.raises(ValueError):
        accumulation_profile(np.ones(50), np.zeros(50), (10,), ((1.0, 1.0),))
