"""Finite-difference regularity diagnostics for sequences.

The classes probed here are the discrete bounded-variation families

    D_{r,s}(X):  x bounded and sum_n ||Delta^j x_n||^{r/(j+s)} < infinity
                 for every j in 1..r-s,

together with the small-ball variant D^0 (which adds summability of
||x_n||^{r/s} itself), the stride-N refinement acting on each residue
subsequence, and the weighted one-difference class
D_1(X; w): sum ||Delta x_n|| w_n < infinity.

Membership is a statement about infinite tails, so a finite probe can only
gather evidence.  Every diagnostic reports partial sums, dyadic block sums
and a fitted tail ratio, with a three-valued verdict:

- "consistent"    every probed difference order has geometrically decaying
                  dyadic block sums,
- "violated"      the sequence itself is unbounded over the probe (or a
                  declared budget is exceeded),
- "inconclusive"  anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .transfer import norm2

#: dyadic block ratio below which a tail is called geometrically decaying
DECAY_RATIO = 0.9

#: blocks smaller than this are ignored when fitting tail ratios
MIN_BLOCK = 4


def diff(x: np.ndarray, order: int = 1) -> np.ndarray:
    """Forward difference Delta^order along axis 0; length drops by order."""
    x = np.asarray(x)
    if order < 0:
        raise ValueError("difference order must be >= 0")
    for _ in range(order):
        x = x[1:] - x[:-1]
    return x


def seq_norms(x: np.ndarray) -> np.ndarray:
    """Per-index norms: |.| for scalars and vectors, spectral norm for
    (n, 2, 2) stacks."""
    x = np.asarray(x)
    if x.ndim == 1:
        return np.abs(x).astype(float)
    if x.ndim == 2:
        return np.sqrt(np.sum(np.abs(x) ** 2, axis=1))
    if x.ndim == 3 and x.shape[1:] == (2, 2):
        return norm2(x)
    raise ValueError(f"unsupported sequence shape {x.shape}")


def strided(x: np.ndarray, stride: int) -> Tuple[np.ndarray, ...]:
    """The residue subsequences (x_{i}, x_{i+stride}, ...) for i in 0..stride-1."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    x = np.asarray(x)
    return tuple(x[i::stride] for i in range(stride))


def _dyadic_blocks(values: np.ndarray) -> np.ndarray:
    """Sums of ``values`` over index blocks [2^k, 2^{k+1}), discarding a
    final fragment shorter than MIN_BLOCK."""
    n = len(values)
    sums = []
    k = 0
    while 2 ** k < n:
        lo, hi = 2 ** k, min(2 ** (k + 1), n)
        if hi - lo >= MIN_BLOCK or hi == 2 ** (k + 1):
            sums.append(float(np.sum(values[lo:hi])))
        k += 1
    return np.asarray(sums)


def _fit_ratio(block_sums: np.ndarray) -> float:
    """Geometric mean of successive block ratios; inf if a block vanishes
    before a nonzero one, nan if fewer than two usable blocks."""
    bs = block_sums
    if len(bs) < 2:
        return math.nan
    ratios = []
    for prev, cur in zip(bs[:-1], bs[1:]):
        if prev == 0.0 and cur == 0.0:
            continue
        if prev == 0.0:
            return math.inf
        ratios.append(cur / prev)
    if not ratios:
        return 0.0  # every block vanished: the sum is finite trivially
    ratios = np.asarray(ratios)
    if np.any(ratios <= 0.0):
        return float(np.max(ratios))
    return float(np.exp(np.mean(np.log(ratios))))


@dataclass(frozen=True)
class StolzDiagnostic:
    """Evidence gathered for one membership question.

    ``partial_sums`` maps difference order j to the probed value of
    sum ||Delta^j x||^{exponent_j}; ``block_ratios`` and ``fitted_ratio``
    describe the dyadic tail behaviour of the same summands.
    """

    r: int
    s: int
    bounded: bool
    sup_norm: float
    partial_sums: Dict[int, float]
    exponents: Dict[int, float]
    fitted_ratio: Dict[int, float]
    block_sums: Dict[int, np.ndarray]
    verdict: str

    def __str__(self):
        head = (f"D_({self.r},{self.s}) diagnostic: verdict {self.verdict}; "
                f"sup ||x|| = {self.sup_norm:.6g}")
        lines = [head]
        for j in sorted(self.partial_sums):
            lines.append(
                f"  j={j}: sum ||D^j x||^{self.exponents[j]:.4g} = "
                f"{self.partial_sums[j]:.6g}, fitted dyadic ratio "
                f"{self.fitted_ratio[j]:.4g}")
        return "\n".join(lines)


def _verdict(bounded: bool, fitted: Dict[int, float]) -> str:
    if not bounded:
        return "violated"
    ratios = list(fitted.values())
    if ratios and all(math.isfinite(r) and r < DECAY_RATIO for r in ratios):
        return "consistent"
    return "inconclusive"


def class_diagnostic(x: np.ndarray, r: int, s: int,
                     small_ball: bool = False,
                     budget: Optional[float] = None) -> StolzDiagnostic:
    """Probe membership of x in D_{r,s} (or D^0_{r,s} with ``small_ball``).

    Requires 0 <= s <= r-1; difference orders 1..r-s are probed, and the
    plain class D_r is s = 0.  The small-ball variant adds the order-0 term
    ||x||^{r/s} and therefore needs s >= 1.  ``budget`` optionally declares
    an upper bound for any probed partial sum; exceeding it turns the
    verdict into "violated".
    """

    if s < 0 or r <= s:
        raise ValueError(f"need 0 <= s <= r-1, got r={r}, s={s}")
    if small_ball and s < 1:
        raise ValueError("the small-ball variant needs s >= 1")
    norms = seq_norms(np.asarray(x))
    sup = float(np.max(norms)) if len(norms) else 0.0
    bounded = bool(np.isfinite(sup))

    partial, exps, fitted, blocks = {}, {}, {}, {}
    orders = list(range(1, r - s + 1))
    if small_ball:
        orders = [0] + orders
    for j in orders:
        exp_j = r / (j + s) if j > 0 else r / s
        summand = seq_norms(diff(x, j)) ** exp_j
        partial[j] = float(np.sum(summand))
        exps[j] = exp_j
        bs = _dyadic_blocks(summand)
        blocks[j] = bs
        fitted[j] = _fit_ratio(bs)

    verdict = _verdict(bounded, fitted)
    if budget is not None and any(v > budget for v in partial.values()):
        verdict = "violated"
    return StolzDiagnostic(r, s, bounded, sup, partial, exps, fitted, blocks,
                           verdict)


def strided_diagnostic(x: np.ndarray, stride: int, r: int, s: int,
                       small_ball: bool = False) -> Tuple[StolzDiagnostic, ...]:
    """Probe each residue subsequence; the strided class holds when every
    residue is a member."""
    return tuple(class_diagnostic(sub, r, s, small_ball=small_ball)
                 for sub in strided(x, stride))


def weighted_diagnostic(x: np.ndarray, w: np.ndarray) -> StolzDiagnostic:
    """Probe the weighted one-difference class: sum ||Delta x_n|| w_n."""
    w = np.asarray(w, dtype=float)
    dx = seq_norms(diff(x, 1))
    if len(w) < len(dx):
        raise ValueError(f"need {len(dx)} weights, got {len(w)}")
    summand = dx * w[: len(dx)]
    norms = seq_norms(np.asarray(x))
    sup = float(np.max(norms)) if len(norms) else 0.0
    bs = _dyadic_blocks(summand)
    fitted = {1: _fit_ratio(bs)}
    verdict = _verdict(bool(np.isfinite(sup)), fitted)
    return StolzDiagnostic(1, 0, bool(np.isfinite(sup)), sup,
                           {1: float(np.sum(summand))}, {1: 1.0}, fitted,
                           {1: bs}, verdict)
