"""Finite principal sections and a Sturm-count eigensolver.

The n-th principal section of the Jacobi matrix built from (a, b) is the
symmetric tridiagonal matrix with diagonal b_0..b_{n-1} and off-diagonal
a_0..a_{n-2}.  Eigenvalues are computed by bisection on the Sturm count
(the number of eigenvalues strictly below a shift), which is exact in
exact arithmetic and monotone in floating point with the standard pivot
safeguard.  Everything is hand-rolled on purpose: the finite sections are
the independent check against the asymptotic predictions, so they must not
share machinery with the transfer-matrix side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np


def section(a: np.ndarray, b: np.ndarray, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the size x size principal section."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if size < 1:
        raise ValueError("section size must be >= 1")
    if size > len(b) or size - 1 > len(a):
        raise ValueError(f"need {size} diagonal and {size - 1} off-diagonal "
                         f"entries, have {len(b)} and {len(a)}")
    return b[:size].copy(), a[: size - 1].copy()


def gershgorin(d: np.ndarray, e: np.ndarray) -> Tuple[float, float]:
    """An interval certainly containing all eigenvalues."""
    d = np.asarray(d, dtype=float)
    e = np.abs(np.asarray(e, dtype=float))
    left = np.concatenate([[0.0], e])
    right = np.concatenate([e, [0.0]])
    radius = left + right
    return float(np.min(d - radius)), float(np.max(d + radius))


def sturm_count(d: np.ndarray, e: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift, vectorized.

    Runs the scaled Sturm recurrence q_i = (d_i - x) - e_{i-1}^2 / q_{i-1}
    with the standard tiny-pivot safeguard and counts negative pivots.
    Rows are sequential; shifts run as lanes.
    """

    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    e2 = e * e
    pivmin = max(float(np.max(e2)) if len(e2) else 0.0, 1.0) * 1e-292
    q = d[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, len(d)):
        q = (d[i] - shifts) - e2[i - 1] / q
        # Zero pivot means the shift hits a leading-submatrix eigenvalue;
        # it must be counted as negative or the count loses monotonicity.
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def eigs_in(d: np.ndarray, e: np.ndarray, lo: float, hi: float,
            tol: float = 1e-12, max_iter: int = 120) -> np.ndarray:
    """All eigenvalues in [lo, hi), each to absolute accuracy ~tol*scale.

    Bisection per eigenvalue index, batched: every target keeps its own
    bracket and all Sturm counts for one sweep go through a single
    vectorized pass.
    """

    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    k_lo = int(sturm_count(d, e, np.asarray([lo]))[0])
    k_hi = int(sturm_count(d, e, np.asarray([hi]))[0])
    m = k_hi - k_lo
    if m <= 0:
        return np.zeros(0)
    scale = max(abs(lo), abs(hi), 1.0)
    lows = np.full(m, lo)
    highs = np.full(m, hi)
    targets = np.arange(k_lo + 1, k_hi + 1)  # 1-based eigenvalue indices
    for _ in range(max_iter):
        mids = 0.5 * (lows + highs)
        counts = sturm_count(d, e, mids)
        below = counts < targets  # root is above mid
        lows = np.where(below, mids, lows)
        highs = np.where(below, highs, mids)
        if float(np.max(highs - lows)) <= tol * scale:
            break
    return 0.5 * (lows + highs)


def eigs_all(d: np.ndarray, e: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Full spectrum of a symmetric tridiagonal matrix by Sturm bisection."""
    lo, hi = gershgorin(d, e)
    pad = 1e-8 * max(1.0, abs(lo), abs(hi))
    return eigs_in(d, e, lo - pad, hi + pad, tol=tol)


def count_in(d: np.ndarray, e: np.ndarray, lo: float, hi: float) -> int:
    """Number of eigenvalues in [lo, hi)."""
    counts = sturm_count(np.asarray(d, dtype=float), np.asarray(e, dtype=float),
                         np.asarray([lo, hi]))
    return int(counts[1] - counts[0])


def gap_profile(eigs: np.ndarray) -> np.ndarray:
    """Consecutive gaps of a sorted eigenvalue array; rejects unsorted input."""
    eigs = np.asarray(eigs, dtype=float)
    gaps = np.diff(eigs)
    if np.any(gaps < 0.0):
        raise ValueError("eigenvalues must be sorted in increasing order")
    return gaps


@dataclass(frozen=True)
class AccumulationProfile:
    """Eigenvalue counts of growing sections inside fixed windows.

    For each section size, ``counts[w][k]`` is the number of eigenvalues of
    the size sizes[k] section inside window w.  Windows inside the
    essential-spectrum carrier should show counts growing with the size;
    windows in the complement should stay bounded.
    """

    sizes: Tuple[int, ...]
    windows: Tuple[Tuple[float, float], ...]
    counts: Tuple[Tuple[int, ...], ...]

    def growth_factors(self, w: int) -> np.ndarray:
        c = np.asarray(self.counts[w], dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(c[:-1] > 0, c[1:] / c[:-1], np.inf)


def accumulation_profile(a: np.ndarray, b: np.ndarray,
                         sizes: Sequence[int],
                         windows: Sequence[Tuple[float, float]]
                         ) -> AccumulationProfile:
    """Count section eigenvalues in fixed windows across growing sizes."""
    counts = []
    for lo, hi in windows:
        if not lo < hi:
            raise ValueError(f"window ({lo}, {hi}) is empty")
        row = []
        for size in sizes:
            d, e = section(a, b, size)
            row.append(count_in(d, e, lo, hi))
        counts.append(tuple(row))
    return AccumulationProfile(tuple(int(s) for s in sizes),
                               tuple((float(lo), float(hi)) for lo, hi in windows),
                               tuple(counts))
