"""Diagonalization cascades and solution asymptotics for 2x2 systems.

Given a sequence of transfer matrices converging to a limit with distinct
eigenvalues, the generalized-eigenvector ansatz turns the product
X_n ... X_1 into D_n ... D_1 up to conjugations that converge: solutions
behave like products of instantaneous eigenvalues.  This module implements

- :func:`split_diagonalize`   one robust eigen-split of a single matrix,
- :func:`cascade`             the iterated re-diagonalization of a family,
- :func:`propagate`           overflow-safe orbit computation,
- :func:`recessive_solution`  backward-recurrence minimal solutions,
- :func:`product_growth`      eigenvalue-product growth vs closed forms in
                              the near-identity regime,
- :func:`yafaev_asymptotics`  a generalized-eigenvector basis with explicit
                              error terms for entries with regular ratios.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .transfer import inv2, norm2

#: |v| larger than this in the normalized eigenvector form triggers the
#: general eigenvector-column fallback.
_V_FALLBACK = 1e8

#: reconstruction residual Y D Y^{-1} vs W, relative to ||W||
_RECON_TOL = 1e-10


class DegenerateSplitError(ValueError):
    """The two eigenvalues are too close for a stable split."""


class CascadeError(RuntimeError):
    """A cascade stage hit a degenerate split; carries stage and position."""

    def __init__(self, stage: int, index: int, reason: str):
        self.stage = stage
        self.index = index
        super().__init__(f"stage {stage}, position {index}: {reason}")


class InstabilityError(RuntimeError):
    """Backward recurrence failed to stabilize; the solution pair is not
    numerically separated on the requested range."""


# ---------------------------------------------------------------------------
# single-matrix split
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagStep:
    """One eigen-split W = Y diag(mu_plus, mu_minus) Y^{-1}.

    ``mode`` is "real-split" for real matrices with positive discriminant,
    "complex-pair" for real matrices with negative discriminant (mu_minus is
    then the conjugate of mu_plus), and "general" for complex input.
    ``sigma`` records the branch convention sign(w11) used to order the real
    split.  ``residual`` is the reconstruction error relative to ||W||.
    """

    mu_plus: complex
    mu_minus: complex
    Y: np.ndarray
    mode: str
    sigma: int
    residual: float

    @property
    def D(self) -> np.ndarray:
        return np.diag([self.mu_plus, self.mu_minus])


def _recon_residual(W, Y, mu_p, mu_m) -> float:
    D = np.diag([mu_p, mu_m]).astype(complex)
    approx = Y @ D @ inv2(Y)
    scale = max(float(norm2(W)), 1e-300)
    return float(norm2(approx - np.asarray(W, dtype=complex))) / scale


def _eig_column(W, mu) -> np.ndarray:
    """A unit eigenvector of (W - mu), from the larger row of the adjugate."""
    A = np.asarray(W, dtype=complex) - mu * np.eye(2)
    # rows of adj(A) span ker(A) when rank(A) = 1
    cand1 = np.array([A[1, 1], -A[1, 0]])
    cand2 = np.array([-A[0, 1], A[0, 0]])
    v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
    nrm = np.linalg.norm(v)
    if nrm == 0.0:  # W is mu * Id on this numerical scale
        v = np.array([1.0 + 0.0j, 0.0j])
        nrm = 1.0
    return v / nrm


def split_diagonalize(W: np.ndarray, delta_floor: float = 0.0) -> DiagStep:
    """Split a 2x2 matrix into eigenvalues and a normalized conjugator.

    For real W with discr > 0 the branches are

        mu_{+-} = (w11 + w22)/2 +- (sigma/2) sqrt(discr),  sigma = sign(w11),

    and Y is sought in the near-identity form [[1, v-], [v+, 1]] with

        v+ = -2 w21 / (w22 - w11 - sigma sqrt(discr)),
        v- = 2 w12 / (w22 - w11 - sigma sqrt(discr)),

    falling back to equivalent quotients with larger denominators, and to a
    general eigenvector-column Y when the normalized form does not exist.
    The returned split always satisfies ||Y D Y^{-1} - W|| <= 1e-10 ||W||.

    ``delta_floor`` rejects splits with |discr| below its square (scaled by
    ||W||^2), raising :class:`DegenerateSplitError`.
    """

    W = np.asarray(W)
    scale = max(float(norm2(W)), 1e-300)
    w11, w12, w21, w22 = W[0, 0], W[0, 1], W[1, 0], W[1, 1]
    d = (w22 - w11) ** 2 + 4.0 * w12 * w21

    if abs(d) < (delta_floor * scale) ** 2:
        raise DegenerateSplitError(
            f"discriminant {d!r} below floor ({delta_floor!r} * scale)^2")

    real_input = not np.iscomplexobj(W)
    sigma = 1 if (real_input and w11 >= 0.0) else (-1 if real_input else 1)

    if real_input and d >= 0.0:
        mode = "real-split"
        root = math.sqrt(d)
        half = 0.5 * (w11 + w22)
        mu_p = half + 0.5 * sigma * root
        mu_m = half - 0.5 * sigma * root
    elif real_input:
        mode = "complex-pair"
        root = math.sqrt(-d)
        half = 0.5 * (w11 + w22)
        mu_p = complex(half, 0.5 * root)
        mu_m = complex(half, -0.5 * root)
    else:
        mode = "general"
        t = w11 + w22
        root = cmath.sqrt(t * t - 4.0 * (w11 * w22 - w12 * w21))
        r1, r2 = 0.5 * (t + root), 0.5 * (t - root)
        # pair the branch closest to the (1,1) entry with mu_plus, so that
        # near-diagonal input keeps Y near the identity
        if abs(r1 - w11) + abs(r2 - w22) <= abs(r2 - w11) + abs(r1 - w22):
            mu_p, mu_m = r1, r2
        else:
            mu_p, mu_m = r2, r1

    # normalized form: choose for each column the quotient with the larger
    # denominator among the two equivalent expressions
    def best_quot(num1, den1, num2, den2):
        if abs(den1) >= abs(den2):
            num, den = num1, den1
        else:
            num, den = num2, den2
        if den == 0.0:
            return math.inf
        with np.errstate(over="ignore"):  # inf is handled by the caller
            return num / den

    v_plus = best_quot(w21, mu_p - w22, mu_p - w11, w12)
    v_minus = best_quot(w12, mu_m - w11, mu_m - w22, w21)

    dtype = complex if (mode != "real-split") else float
    if (abs(v_plus) <= _V_FALLBACK and abs(v_minus) <= _V_FALLBACK
            and math.isfinite(abs(v_plus)) and math.isfinite(abs(v_minus))):
        Y = np.array([[1.0, v_minus], [v_plus, 1.0]], dtype=dtype)
        if abs(v_plus * v_minus - 1.0) > 1e-8:  # keep Y invertible
            res = _recon_residual(W, Y, mu_p, mu_m)
            if res <= _RECON_TOL:
                return DiagStep(mu_p, mu_m, Y, mode, sigma, res)

    # general fallback: eigenvector columns
    Y = np.column_stack([_eig_column(W, mu_p), _eig_column(W, mu_m)])
    if not np.iscomplexobj(W) and np.max(np.abs(Y.imag)) == 0.0:
        Y = Y.real
    if abs(np.linalg.det(Y)) < 1e-12:
        raise DegenerateSplitError("eigenvectors are numerically parallel")
    res = _recon_residual(W, Y, mu_p, mu_m)
    if res > _RECON_TOL:
        raise DegenerateSplitError(
            f"reconstruction residual {res:.3e} exceeds {_RECON_TOL:.1e}")
    return DiagStep(mu_p, mu_m, Y, mode, sigma, res)


# ---------------------------------------------------------------------------
# batched first-stage split for matrix families
# ---------------------------------------------------------------------------

def _family_eigdata(X: np.ndarray, sigma: int):
    """Batched eigenvalues lambda_{+-} of a (M,2,2) stack.

    Real stacks with positive discriminant use the ordering
    lambda_{+-} = (tr +- sigma sqrt(discr)) / 2; negative-discriminant and
    complex stacks take Im lambda_plus >= 0.
    """

    t = X[:, 0, 0] + X[:, 1, 1]
    dd = (X[:, 0, 0] - X[:, 1, 1]) ** 2 + 4.0 * X[:, 0, 1] * X[:, 1, 0]
    if not np.iscomplexobj(X) and np.all(dd >= 0.0):
        root = np.sqrt(dd)
        lam_p = 0.5 * (t + sigma * root)
        lam_m = 0.5 * (t - sigma * root)
    else:
        root = np.sqrt(dd.astype(complex))
        root = np.where(root.imag < 0.0, -root, root)
        lam_p = 0.5 * (t + root)
        lam_m = 0.5 * (t - root)
    return lam_p, lam_m


# ---------------------------------------------------------------------------
# cascade
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CascadeStage:
    """Arrays for one stage: conjugators C, diagonal entries mu_plus and
    mu_minus, and the reconstruction residuals of the split matrices.
    Stage k has M - k members."""

    C: np.ndarray
    mu_plus: np.ndarray
    mu_minus: np.ndarray
    residual: np.ndarray


@dataclass(frozen=True)
class CascadeResult:
    """Result of r rounds of re-diagonalization of a matrix family.

    stages[0] holds the initial eigen-split of X_n itself with the
    off-diagonal-normalized conjugator; stages[k] for k >= 1 splits the
    one-step mismatch W_{n,k} = D_{n,k-1} C_{n,k-1}^{-1} C_{n-1,k-1}
    (evaluated with the convergent normalization), whose conjugators
    C_{n,k} tend to the identity when the mismatch family has summable
    differences.
    """

    stages: Tuple[CascadeStage, ...]
    sigma: int
    conjugated: bool
    mode: str

    def conjugator_drift(self, stage: int) -> np.ndarray:
        """||C_{n,stage} - Id|| profile."""
        C = self.stages[stage].C
        return norm2(C - np.eye(2, dtype=C.dtype))


def _stage0_split(X: np.ndarray, sigma: int, conjugate: bool):
    """Off-diagonal-normalized split of the family itself:

        C_n = [[x12/(lam+ - x11), 1], [1, x21/(lam- - x22)]],

    after an optional swap conjugation by [[0,1],[1,0]] applied to X."""

    if conjugate:
        X = X[:, ::-1, :][:, :, ::-1]  # J X J with J the swap matrix
    lam_p, lam_m = _family_eigdata(X, sigma)
    den_p = lam_p - X[:, 0, 0]
    den_m = lam_m - X[:, 1, 1]
    if np.any(np.abs(den_p) == 0.0) or np.any(np.abs(den_m) == 0.0):
        k = int(np.argmin(np.minimum(np.abs(den_p), np.abs(den_m))))
        raise CascadeError(0, k, "eigenvalue coincides with a diagonal entry; "
                                 "try the swapped normalization")
    C = np.empty(X.shape, dtype=np.result_type(X, lam_p))
    C[:, 0, 0] = X[:, 0, 1] / den_p
    C[:, 0, 1] = 1.0
    C[:, 1, 0] = 1.0
    C[:, 1, 1] = X[:, 1, 0] / den_m
    dets = C[:, 0, 0] * C[:, 1, 1] - 1.0
    if np.any(np.abs(dets) < 1e-14):
        k = int(np.argmin(np.abs(dets)))
        raise CascadeError(0, k, "stage-0 conjugator is singular")
    return C, lam_p, lam_m, X


def _batched_split_general(W: np.ndarray):
    """Vectorized proximity-paired split for near-diagonal stacks.

    Returns (C, mu_p, mu_m); C has ones on the diagonal and the coupled
    quotients off it.  Positions where the quotient denominators vanish
    are reported by the caller.
    """

    t = W[:, 0, 0] + W[:, 1, 1]
    root = np.sqrt((t * t - 4.0 * (W[:, 0, 0] * W[:, 1, 1]
                                   - W[:, 0, 1] * W[:, 1, 0])).astype(complex))
    r1 = 0.5 * (t + root)
    r2 = 0.5 * (t - root)
    swap = (np.abs(r1 - W[:, 0, 0]) + np.abs(r2 - W[:, 1, 1])
            > np.abs(r2 - W[:, 0, 0]) + np.abs(r1 - W[:, 1, 1]))
    mu_p = np.where(swap, r2, r1)
    mu_m = np.where(swap, r1, r2)
    den_p = mu_p - W[:, 1, 1]
    den_m = mu_m - W[:, 0, 0]
    bad = (np.abs(den_p) == 0.0) | (np.abs(den_m) == 0.0)
    C = np.empty(W.shape, dtype=complex)
    C[:, 0, 0] = 1.0
    C[:, 1, 1] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        C[:, 1, 0] = np.where(bad, np.nan, W[:, 1, 0] / den_p)
        C[:, 0, 1] = np.where(bad, np.nan, W[:, 0, 1] / den_m)
    return C, mu_p, mu_m, bad


def _stage_residual(W: np.ndarray, C: np.ndarray, mu_p, mu_m) -> np.ndarray:
    D = np.zeros(C.shape, dtype=np.result_type(C, mu_p))
    D[:, 0, 0] = mu_p
    D[:, 1, 1] = mu_m
    recon = C @ D @ inv2(C)
    scale = np.maximum(norm2(W), 1e-300)
    return norm2(recon - W) / scale


def cascade(X: np.ndarray, rounds: int = 1, sigma: int = 1,
            conjugate: Optional[bool] = None,
            limit: Optional[np.ndarray] = None) -> CascadeResult:
    """Iterated re-diagonalization of a convergent matrix family.

    ``X`` is an (M, 2, 2) stack of consecutive transfer matrices; ``rounds``
    is the number of re-diagonalization passes after the initial split.
    ``sigma`` orients the real eigenvalue branches (sign of the limit
    trace).  ``conjugate`` forces or forbids the swap normalization of the
    initial split; by default the variant whose limit denominators
    |X11 - lam+|, |X22 - lam-| are larger is chosen, evaluated on ``limit``
    (default: the last family member).

    Raises :class:`CascadeError` with stage and position on degenerate
    splits.
    """

    X = np.asarray(X)
    if X.ndim != 3 or X.shape[1:] != (2, 2):
        raise ValueError("X must be an (M, 2, 2) stack")
    if len(X) < 2:
        raise ValueError("need at least two family members")

    if conjugate is None:
        ref = np.asarray(limit) if limit is not None else X[-1]
        ref = ref[None, :, :]
        lp, lm = _family_eigdata(ref.astype(complex), sigma)
        q_plain = min(abs(ref[0, 0, 0] - lp[0]), abs(ref[0, 1, 1] - lm[0]))
        q_swap = min(abs(ref[0, 1, 1] - lp[0]), abs(ref[0, 0, 0] - lm[0]))
        conjugate = bool(q_swap > q_plain)

    C0, lam_p, lam_m, Xw = _stage0_split(X, sigma, conjugate)
    res0 = _stage_residual(Xw, C0, lam_p, lam_m)
    stages = [CascadeStage(C0, lam_p, lam_m, res0)]
    mode = ("real-split" if not np.iscomplexobj(lam_p) else "complex-pair")

    C_prev = C0
    mu_p_prev, mu_m_prev = lam_p.astype(complex), lam_m.astype(complex)
    for k in range(1, rounds + 1):
        D = np.zeros(C_prev.shape, dtype=complex)
        D[:, 0, 0] = mu_p_prev
        D[:, 1, 1] = mu_m_prev
        # W_{n,k} = D_{n,k-1} C_{n,k-1}^{-1} C_{n-1,k-1}
        W = D[1:] @ inv2(C_prev[1:]) @ C_prev[:-1]
        C, mu_p, mu_m, bad = _batched_split_general(W)
        if np.any(bad):
            raise CascadeError(k, int(np.nonzero(bad)[0][0]),
                               "eigenvalue coincides with a diagonal entry")
        res = _stage_residual(W, C, mu_p, mu_m)
        if np.any(~np.isfinite(res)):
            raise CascadeError(k, int(np.nonzero(~np.isfinite(res))[0][0]),
                               "non-finite stage residual")
        stages.append(CascadeStage(C, mu_p, mu_m, res))
        C_prev, mu_p_prev, mu_m_prev = C, mu_p, mu_m

    return CascadeResult(tuple(stages), sigma, conjugate, mode)


# ---------------------------------------------------------------------------
# orbit propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    """A propagated vector orbit with per-step scaling exponents.

    The true vector at position k is ``vectors[k] * 2**exponents[k]``;
    ``log_norm`` gives log ||Phi_k|| directly.
    """

    vectors: np.ndarray
    exponents: np.ndarray

    @property
    def log_norm(self) -> np.ndarray:
        return np.log(np.linalg.norm(self.vectors, axis=1)) + \
            np.log(2.0) * self.exponents


def propagate(steps: np.ndarray, phi0: np.ndarray) -> Orbit:
    """Apply a (M,2,2) stack of steps to phi0, rescaling to avoid overflow.

    Returns M+1 vectors: phi0 and each partial application, highest factor
    applied last (steps[k] maps vector k to vector k+1).
    """

    steps = np.asarray(steps)
    M = len(steps)
    dtype = np.result_type(steps, np.asarray(phi0))
    vecs = np.empty((M + 1, 2), dtype=dtype)
    exps = np.zeros(M + 1, dtype=np.int64)
    v = np.asarray(phi0, dtype=dtype)
    e = 0
    vecs[0] = v
    for k in range(M):
        v = steps[k] @ v
        m = float(np.max(np.abs(v)))
        if m != 0.0 and (m > 2.0 ** 500 or m < 2.0 ** -500):
            shift = int(math.floor(math.log2(m)))
            v = v * 2.0 ** (-shift)
            e += shift
        vecs[k + 1] = v
        exps[k + 1] = e
    return Orbit(vecs, exps)


def three_term_residual(a: np.ndarray, b: np.ndarray, x, u: np.ndarray,
                        start: int = 0) -> np.ndarray:
    """Relative residual of a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1} = x u_n.

    ``u[k]`` holds u_{start+k}; the residual is reported for each interior
    index, scaled by the magnitude of the three terms.
    """

    u = np.asarray(u)
    n = np.arange(start + 1, start + len(u) - 1)
    lhs = a[n - 1] * u[:-2] + b[n] * u[1:-1] + a[n] * u[2:]
    rhs = x * u[1:-1]
    scale = (np.abs(a[n - 1] * u[:-2]) + np.abs(b[n] * u[1:-1])
             + np.abs(a[n] * u[2:]) + np.abs(rhs) + 1e-300)
    return np.abs(lhs - rhs) / scale


def recessive_solution(a: np.ndarray, b: np.ndarray, x, n_max: int,
                       buffer: Optional[int] = None, tol: float = 1e-6,
                       max_doublings: int = 8) -> np.ndarray:
    """Minimal solution of the three-term recurrence on 0..n_max by the
    backward method.

    Runs the recurrence downward from a far seed, then doubles the seed
    distance until two consecutive runs agree to ``tol`` in relative sup
    norm after normalization.  Raises :class:`InstabilityError` when the
    runs keep disagreeing, which is the symptom of a non-dominated pair
    (no minimal solution can be extracted numerically).
    """

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dtype = complex if np.iscomplexobj(np.asarray(x)) else float
    buf = buffer if buffer is not None else max(32, n_max)
    prev = None
    for _ in range(max_doublings + 1):
        far = n_max + buf
        if far + 1 >= len(a):
            raise ValueError(f"need entries up to index {far + 1}, have "
                             f"{len(a) - 1}; extend the arrays or lower buffer")
        u = np.zeros(far + 2, dtype=dtype)
        u[far + 1] = 0.0
        u[far] = 1.0
        for n in range(far, 0, -1):
            u[n - 1] = ((x - b[n]) * u[n] - a[n] * u[n + 1]) / a[n - 1]
            m = np.abs(u[n - 1])
            if m > 1e280:  # rescale; the recurrence is linear
                u[n - 1:] /= m
        window = u[: n_max + 1]
        pivot = window[np.argmax(np.abs(window))]
        if pivot == 0.0:
            raise InstabilityError("backward run vanished on the window")
        window = window / pivot
        if prev is not None:
            diff = float(np.max(np.abs(window - prev)))
            if diff <= tol:
                return window
        prev = window
        buf *= 2
    raise InstabilityError(
        f"backward runs did not stabilize to {tol:g} after "
        f"{max_doublings} doublings; the recurrence has no numerically "
        "dominated solution on this range")


# ---------------------------------------------------------------------------
# eigenvalue-product growth in the near-identity regime
# ---------------------------------------------------------------------------

def product_growth(R: np.ndarray, gamma: np.ndarray, sigma: int,
                   R_limit: Optional[np.ndarray] = None) -> Dict[str, np.ndarray]:
    """Growth of prod |sigma + mu_j^{+-}/gamma_j|^2 against its closed form.

    ``R`` is an (M,2,2) stack of scaled deviations R_j = gamma_j (X_j -
    sigma Id) with real positive discriminants; mu{+-}_j are their
    eigenvalue branches

        mu_j^{-+} = (tr R_j -+ sigma sqrt(discr R_j)) / 2.

    The closed forms are exp(Gamma_n (sigma tr RL -+ sqrt(discr RL))) with
    Gamma_n = sum_{j<=n} 1/gamma_j and RL the limit deviation (default: the
    last stack entry).  Everything is returned in log space.
    """

    R = np.asarray(R, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if R.ndim != 3 or R.shape[1:] != (2, 2) or len(gamma) != len(R):
        raise ValueError("R must be (M,2,2) with one gamma per entry")
    t = R[:, 0, 0] + R[:, 1, 1]
    d = (R[:, 0, 0] - R[:, 1, 1]) ** 2 + 4.0 * R[:, 0, 1] * R[:, 1, 0]
    if np.any(d < 0.0):
        k = int(np.nonzero(d < 0.0)[0][0])
        raise ValueError(f"negative discriminant at position {k}; the "
                         "growth dichotomy needs a positive-discriminant tail")
    root = np.sqrt(d)
    mu_minus = 0.5 * (t - sigma * root)
    mu_plus = 0.5 * (t + sigma * root)

    RL = np.asarray(R_limit, dtype=float) if R_limit is not None else R[-1]
    tL = RL[0, 0] + RL[1, 1]
    dL = (RL[0, 0] - RL[1, 1]) ** 2 + 4.0 * RL[0, 1] * RL[1, 0]
    if dL < 0.0:
        raise ValueError("limit deviation has negative discriminant")
    rootL = math.sqrt(dL)

    factor_minus = np.abs(sigma + mu_minus / gamma) ** 2
    factor_plus = np.abs(sigma + mu_plus / gamma) ** 2
    if np.any(factor_minus == 0.0) or np.any(factor_plus == 0.0):
        raise ValueError("a growth factor vanished; shrink the window")
    Gamma = np.cumsum(1.0 / gamma)
    return {
        "Gamma": Gamma,
        "log_lhs_minus": np.cumsum(np.log(factor_minus)),
        "log_lhs_plus": np.cumsum(np.log(factor_plus)),
        "log_rhs_minus": Gamma * (sigma * tL - rootL),
        "log_rhs_plus": Gamma * (sigma * tL + rootL),
        "mu_minus": mu_minus,
        "mu_plus": mu_plus,
    }


# ---------------------------------------------------------------------------
# generalized eigenvector basis for regular-ratio entries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticBasis:
    """Two solutions with eigenvalue-product asymptotics.

    ``u_plus[k]``, ``u_minus[k]`` hold the solution values at index k for
    k in 0..n_max.  ``eps_plus``/``eps_minus`` are the relative errors of
    the product form u_n = prod_{j=1}^n lambda_j(0) (1 + eps_n) against the
    spectral-parameter-free eigenvalue branches; they tend to 0 along the
    computed range.  ``q`` is the limiting diagonal-to-offdiagonal ratio
    b_n / (2 sqrt(a_{n-1} a_n)) and ``mode`` is "complex-pair" (|q| < 1) or
    "real-split" (|q| > 1).
    """

    u_plus: np.ndarray
    u_minus: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    log_scale_plus: np.ndarray
    log_scale_minus: np.ndarray
    q: float
    mode: str
    residual_plus: np.ndarray
    residual_minus: np.ndarray


def _ratio_limits(a: np.ndarray, b: np.ndarray) -> Tuple[float, float, float]:
    """Tail estimates of r = lim a_{n-1}/a_n, s = lim b_n/a_n and the
    induced q = s / (2 sqrt(r))."""
    n = len(a) - 1
    lo = max(1, n - max(16, n // 100))
    r = float(np.mean(a[lo - 1:n] / a[lo:n + 1]))
    s = float(np.mean(b[lo:n + 1] / a[lo:n + 1]))
    if not 0.0 < r <= 1.0 + 1e-9:
        raise ValueError(f"ratio limit r = {r!r} outside (0, 1]")
    return r, s, s / (2.0 * math.sqrt(r))


def _lambda_branches(a: np.ndarray, b: np.ndarray, z, n: np.ndarray):
    """Instantaneous eigenvalues lambda_{+-}_n(z) of the one-step matrices,
    branch-tracked against the z = 0 convention.

    The characteristic equation is lam^2 - ((z - b_n)/a_n) lam +
    a_{n-1}/a_n = 0.  For real z the plus branch takes the + square root
    when the discriminant is positive and Im > 0 otherwise; for complex z
    branches follow continuity from the real convention.
    """

    t = (z - b[n]) / a[n]
    p = a[n - 1] / a[n]
    disc = (t * t - 4.0 * p).astype(complex)
    root = np.sqrt(disc)
    # canonical branch: Im root >= 0, and Re root >= 0 on the real axis.
    # This matches +sqrt for positive real discriminants and the upper
    # branch for negative ones.
    flip = (root.imag < 0.0) | ((root.imag == 0.0) & (root.real < 0.0))
    root = np.where(flip, -root, root)
    lam_p = 0.5 * (t + root)
    lam_m = 0.5 * (t - root)
    return lam_p, lam_m


def yafaev_asymptotics(a: np.ndarray, b: np.ndarray, z, n_max: int,
                       q_tol: float = 1e-3,
                       far_factor: int = 8) -> AsymptoticBasis:
    """Solution basis with eigenvalue-product asymptotics for entries whose
    ratios a_{n-1}/a_n and b_n/a_n settle down fast.

    Preconditions: sum 1/a_n must converge numerically over the supplied
    range, and the limiting ratio q = lim b_n / (2 sqrt(a_{n-1} a_n)) must
    stay q_tol away from +-1 (at |q| = 1 the two branches collide and no
    basis of this form exists; a ValueError explains the refusal).

    For |q| < 1 both branches have equal modulus and each solution is
    produced by backward propagation from an instantaneous-eigenvector seed
    far past n_max (the seed error decays like the coupling tail).  For
    |q| > 1 the dominant branch is forward-propagated and the recessive one
    backward-propagated.  The returned solutions satisfy the three-term
    recurrence to machine precision by construction; ``eps`` reports the
    deviation of u_n from prod lambda_j(0) normalized at the far end.
    """

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    far = far_factor * max(n_max, 16)
    if far + 2 >= len(a):
        raise ValueError(f"need entries up to index {far + 2}, have "
                         f"{len(a) - 1}; supply more entries or lower "
                         "far_factor")

    # numeric convergence probe for sum 1/a_n: dyadic tail blocks must decay
    m0 = max(n_max, 16)
    if far >= 8 * m0:
        blocks = [float(np.sum(1.0 / a[m0 * 2 ** k: m0 * 2 ** (k + 1)]))
                  for k in range(3)]
        if blocks[0] > 0.0 and (blocks[1] > 0.85 * blocks[0]
                                or blocks[2] > 0.85 * blocks[1]):
            raise ValueError(
                "sum 1/a_n does not converge numerically over the probe "
                f"(dyadic tail blocks {blocks}); the eigenvalue-product "
                "basis needs a summable 1/a tail")

    r, s, q = _ratio_limits(a[: far + 2], b[: far + 2])
    if abs(abs(q) - 1.0) <= q_tol:
        raise ValueError(
            f"boundary case |q| = {abs(q):.6f} within {q_tol:g} of 1: the "
            "branch eigenvalues collide and the asymptotic basis degenerates; "
            "no expansion of this form is returned")

    mode = "complex-pair" if abs(q) < 1.0 else "real-split"
    ns = np.arange(1, far + 1)
    lam_p, lam_m = _lambda_branches(a, b, z, ns)
    lam_p0, lam_m0 = _lambda_branches(a, b, 0.0, ns)

    def backward_from_seed(lam_far):
        u = np.zeros(far + 2, dtype=complex)
        # seed with the instantaneous eigenvector (1, lam) at the far end
        u[far] = 1.0
        u[far + 1] = lam_far
        for n in range(far, 0, -1):
            u[n - 1] = ((z - b[n]) * u[n] - a[n] * u[n + 1]) / a[n - 1]
            m = abs(u[n - 1])
            if m > 1e200:
                # scaling every computed entry keeps the array a single
                # scalar multiple of the true solution
                u /= m
        return u

    def forward_from_seed(lam0):
        # the forward branch is only read on 0..n_max+1; running it out to
        # the far seed would span a dynamic range that underflows the early
        # window after rescaling
        u = np.zeros(far + 2, dtype=complex)
        u[0] = 1.0
        u[1] = lam0
        for n in range(1, n_max + 1):
            u[n + 1] = ((z - b[n]) * u[n] - a[n - 1] * u[n - 1]) / a[n]
            m = abs(u[n + 1])
            if m > 1e200:
                u[: n + 2] /= m
        return u

    if mode == "complex-pair":
        u_p = backward_from_seed(lam_p[far - 1])
        u_m = backward_from_seed(lam_m[far - 1])
    else:
        # dominant branch: |lam_p| > |lam_m|; it survives forward propagation
        dom_p = abs(lam_p0[-1]) >= abs(lam_m0[-1])
        if dom_p:
            u_p = forward_from_seed(lam_p[0])
            u_m = backward_from_seed(lam_m[far - 1])
        else:
            u_p = backward_from_seed(lam_p[far - 1])
            u_m = forward_from_seed(lam_m[0])

    def eps_profile(u, lam0):
        # log of the reference product prod_{j<=n} lambda_j(0), cumulative
        logs = np.concatenate([[0.0], np.cumsum(np.log(lam0.astype(complex)))])
        with np.errstate(divide="ignore"):
            logu = np.log(u[: n_max + 1].astype(complex))
        ratio_log = logu - logs[: n_max + 1]
        # the product form carries a free constant; anchor it at the deepest
        # computed index, in log space to dodge over/underflow
        anchor = ratio_log[n_max]
        if not math.isfinite(anchor.real):
            raise InstabilityError("asymptotic anchor vanished")
        return np.exp(ratio_log - anchor) - 1.0, logs[: n_max + 1]

    eps_p, logs_p = eps_profile(u_p, lam_p0)
    eps_m, logs_m = eps_profile(u_m, lam_m0)
    res_p = three_term_residual(a, b, z, u_p[: n_max + 2])
    res_m = three_term_residual(a, b, z, u_m[: n_max + 2])
    return AsymptoticBasis(u_p[: n_max + 1], u_m[: n_max + 1],
                           eps_p, eps_m, logs_p, logs_m, q, mode,
                           res_p, res_m)
