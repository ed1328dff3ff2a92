"""Transfer matrices, window products, and their closed-form limits.

The one-step transfer matrix of the three-term recurrence
a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1} = x u_n is

    B_n(x) = [[0, 1], [-a_{n-1}/a_n, (x - b_n)/a_n]],

acting on (u_n, u_{n+1})^T.  Products here always compose with the highest
index leftmost: prod(n0..n1) = B_{n1} ... B_{n0}.

For an N-periodic profile (alpha, beta) the same construction gives the
periodic one-step matrix frak_B_n(x) with det = alpha_{n-1}/alpha_n and the
unimodular window frak_X_n(x) = frak_B_{N+n-1} ... frak_B_n.  The limits of
length-N windows of a modulated matrix, the scaled deviations from +-Id in
the critical case, and the blended-layout window limits all have closed
forms implemented at the bottom of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .model import (BlendedSpec, ExplicitSpec, JacobiSpec, KMSpec,
                    ModulatedSpec, PeriodicSeq, SpecError, build)

Matrix = np.ndarray  # shape (2, 2), real or complex


def _dtype_for(x) -> type:
    return complex if np.iscomplexobj(np.asarray(x)) else float


# ---------------------------------------------------------------------------
# scalar 2x2 helpers
# ---------------------------------------------------------------------------

def tr(m: Matrix) -> complex:
    return m[0, 0] + m[1, 1]


def det(m: Matrix):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def discr(m: Matrix):
    """Discriminant tr^2 - 4 det, invariant under similarity."""
    return tr(m) ** 2 - 4.0 * det(m)


def norm2(m: np.ndarray) -> np.ndarray:
    """Spectral norm of a (...,2,2) stack, by the closed form
    ||M||^2 = (A + sqrt(A^2 - 4 D)) / 2 with A = ||M||_F^2, D = |det M|^2."""
    m = np.asarray(m)
    fro2 = np.sum(np.abs(m) ** 2, axis=(-2, -1))
    d2 = np.abs(m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]) ** 2
    inner = np.maximum(fro2 ** 2 - 4.0 * d2, 0.0)
    return np.sqrt((fro2 + np.sqrt(inner)) / 2.0)


def inv2(m: np.ndarray) -> np.ndarray:
    """Inverse of a (...,2,2) stack via the adjugate."""
    m = np.asarray(m)
    d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    out = np.empty_like(m)
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 1, 1] = m[..., 0, 0]
    out[..., 0, 1] = -m[..., 0, 1]
    out[..., 1, 0] = -m[..., 1, 0]
    return out / d[..., None, None]


# ---------------------------------------------------------------------------
# one-step matrices and window products
# ---------------------------------------------------------------------------

def step_matrix(a_prev: float, a_cur: float, b_cur: float, x) -> Matrix:
    dtype = _dtype_for(x)
    return np.array([[0.0, 1.0],
                     [-a_prev / a_cur, (x - b_cur) / a_cur]], dtype=dtype)


def step_stack(a: np.ndarray, b: np.ndarray, x, start: int, count: int) -> np.ndarray:
    """B_{start}(x), ..., B_{start+count-1}(x) as a (count, 2, 2) stack.

    ``a`` and ``b`` hold entries from index 0; start must be >= 1 so that
    a_{start-1} exists.
    """

    if start < 1:
        raise ValueError("step matrices need start >= 1 (a_{n-1} must exist)")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if start + count > len(a):
        raise ValueError(f"need entries up to index {start + count - 1}, "
                         f"have {len(a) - 1}")
    dtype = _dtype_for(x)
    n = np.arange(start, start + count)
    out = np.zeros((count, 2, 2), dtype=dtype)
    out[:, 0, 1] = 1.0
    out[:, 1, 0] = -a[n - 1] / a[n]
    out[:, 1, 1] = (x - b[n]) / a[n]
    return out


def transfer(a: np.ndarray, b: np.ndarray, j: int, x=0.0) -> Matrix:
    """B_j(x) from entry arrays; j = 0 is rejected (a_{-1} does not exist)."""
    if j < 1:
        raise ValueError("transfer index must be >= 1 (a_{j-1} must exist)")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if j >= len(a):
        raise ValueError(f"need entries up to index {j}, have {len(a) - 1}")
    return step_matrix(a[j - 1], a[j], b[j], x)


def window_product(a: np.ndarray, b: np.ndarray, n: int, length: int,
                   x=0.0) -> Matrix:
    """X_n(x) = B_{n+length-1}(x) ... B_n(x), a single window."""
    return window_products(a, b, x, np.asarray([n]), length)[0]


def window_products(a: np.ndarray, b: np.ndarray, x, starts: np.ndarray,
                    length: int) -> np.ndarray:
    """X_n(x) = B_{n+length-1}(x) ... B_n(x) for each n in starts, batched.

    Returns a (len(starts), 2, 2) stack.  Highest index is leftmost.
    """

    starts = np.asarray(starts, dtype=int)
    if starts.size and int(starts.min()) < 1:
        raise ValueError("window starts must be >= 1")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    hi = int(starts.max()) + length - 1 if starts.size else 0
    if hi >= len(a):
        raise ValueError(f"need entries up to index {hi}, have {len(a) - 1}")
    dtype = _dtype_for(x)
    out = np.broadcast_to(np.eye(2, dtype=dtype), (len(starts), 2, 2)).copy()
    for m in range(length):
        n = starts + m
        step = np.zeros((len(starts), 2, 2), dtype=dtype)
        step[:, 0, 1] = 1.0
        step[:, 1, 0] = -a[n - 1] / a[n]
        step[:, 1, 1] = (x - b[n]) / a[n]
        out = step @ out
    return out


# ---------------------------------------------------------------------------
# periodic profile: one-step matrices, windows, orthogonal polynomials
# ---------------------------------------------------------------------------

def periodic_step(alpha: PeriodicSeq, beta: PeriodicSeq, n: int, x=0.0) -> Matrix:
    """frak_B_n(x) = [[0, 1], [-alpha_{n-1}/alpha_n, (x - beta_n)/alpha_n]]."""
    dtype = _dtype_for(x)
    return np.array([[0.0, 1.0],
                     [-alpha[n - 1] / alpha[n], (x - beta[n]) / alpha[n]]],
                    dtype=dtype)


def periodic_window(alpha: PeriodicSeq, beta: PeriodicSeq, n: int = 0,
                    x=0.0, length: Optional[int] = None) -> Matrix:
    """frak_X_n(x) = frak_B_{n+length-1}(x) ... frak_B_n(x); length defaults to
    the period, which makes det frak_X_n = 1 by telescoping."""
    N = alpha.period if length is None else length
    out = np.eye(2, dtype=_dtype_for(x))
    for m in range(N):
        out = periodic_step(alpha, beta, n + m, x) @ out
    return out


def detect_sigma(alpha: PeriodicSeq, beta: PeriodicSeq,
                 tol: float = 1e-12) -> Optional[int]:
    """Return +1 or -1 if frak_X_0(0) equals sigma * Id within tol, else None."""
    X = periodic_window(alpha, beta, 0, 0.0)
    for sigma in (1, -1):
        if np.max(np.abs(X - sigma * np.eye(2))) <= tol:
            return sigma
    return None


def periodic_poly(alpha: PeriodicSeq, beta: PeriodicSeq, n: int, k: int = 0,
                  x=0.0) -> Tuple[float, float]:
    """(p_n(x), p_n'(x)) for the orthonormal-polynomial recurrence shifted by k:

        p_0 = 1, p_1 = (x - beta_k)/alpha_k,
        p_{m+1} = ((x - beta_{m+k}) p_m - alpha_{m+k-1} p_{m-1}) / alpha_{m+k}.
    """

    if n < 0:
        raise ValueError("polynomial degree must be >= 0")
    p_prev, p = 1.0, 0.0  # p_{-1} plays no role at m = 0; handled explicitly
    d_prev, d = 0.0, 0.0
    if n == 0:
        return 1.0, 0.0
    p = (x - beta[k]) / alpha[k]
    d = 1.0 / alpha[k]
    for m in range(1, n):
        p_next = ((x - beta[m + k]) * p - alpha[m + k - 1] * p_prev) / alpha[m + k]
        d_next = ((x - beta[m + k]) * d + p - alpha[m + k - 1] * d_prev) / alpha[m + k]
        p_prev, p = p, p_next
        d_prev, d = d, d_next
    return p, d


# ---------------------------------------------------------------------------
# limit windows of a modulated matrix
# ---------------------------------------------------------------------------

def limit_matrix_modulated(alpha: PeriodicSeq, beta: PeriodicSeq,
                           i: int = 0) -> Matrix:
    """Limit of the length-N windows X_{jN+i}(x) of a modulated matrix.

    The limit is frak_X_i(0) and does not depend on x: the x-dependent part
    of each factor is O(1/a_n).  Valid for i in 0..N-1 (other i reduce by
    periodicity).
    """

    return periodic_window(alpha, beta, i % alpha.period, 0.0)


# ---------------------------------------------------------------------------
# critical case: scaled deviations from sigma * Id and closed forms
# ---------------------------------------------------------------------------

def scaled_deviations(a: np.ndarray, b: np.ndarray, x, starts: np.ndarray,
                      length: int, scale: np.ndarray, sigma: int) -> np.ndarray:
    """R_n(x) = scale_n * (X_n(x) - sigma Id) for each window start, batched."""
    X = window_products(a, b, x, starts, length)
    scale = np.asarray(scale, dtype=float)
    if scale.shape != (len(X),):
        raise ValueError("scale must provide one factor per window")
    return scale[:, None, None] * (X - sigma * np.eye(2, dtype=X.dtype))


@dataclass(frozen=True)
class AffineMat2:
    """Matrix family m0 + x * m1 with exact coefficient access."""

    m0: Matrix
    m1: Matrix

    def at(self, x) -> Matrix:
        return self.m0 + x * self.m1

    def trace_coeffs(self) -> Tuple[float, float]:
        """Coefficients (t0, t1) of tr(m0 + x m1) = t0 + t1 x."""
        return float(tr(self.m0).real), float(tr(self.m1).real)

    def discr_coeffs(self) -> Tuple[float, float, float]:
        """Coefficients (c0, c1, c2) of discr(m0 + x m1) = c0 + c1 x + c2 x^2.

        Exact when the family is affine in x, since tr is affine and det is
        quadratic.
        """
        d0 = float(discr(self.m0).real)
        d2 = float(discr(self.m1).real)
        # discr is a quadratic polynomial in x; recover the middle coefficient
        # from the value at x = 1.
        d_at1 = float(discr(self.at(1.0)).real)
        return d0, d_at1 - d0 - d2, d2


def _lower_insert(s_val: float, z_val: float) -> Matrix:
    return np.array([[0.0, 0.0], [s_val, z_val]])


def closed_form_R_modulated(alpha: PeriodicSeq, beta: PeriodicSeq,
                         s: PeriodicSeq, z: PeriodicSeq, i: int = 0,
                         check_tol: float = 1e-12) -> AffineMat2:
    """Closed-form limit of a_{n+N-1} (X_n - sigma Id) along n = kN + i.

    Requires frak_X_0(0) = sigma Id (the critical case) and the correction
    sequences s, z of the entry ratios.  The limit is affine in x:

        R_i(x) = alpha_{i-1} C_i(x) + alpha_{i-1} D_i,

    where C_i collects derivative values of the shifted orthonormal
    polynomials at 0 and D_i is a sum of window products with a rank-one
    lower insertion carrying (s, z)/alpha.  The trace identity
    tr R_i = -sigma * sum_j s_{i+j} alpha_{i-1}/alpha_{i+j-1} is asserted to
    ``check_tol`` before returning.
    """

    N = alpha.period
    if N < 2:
        raise SpecError("critical closed forms need period >= 2: a period-1 "
                        "profile never has frak_X_0(0) = +-Id")
    sigma = detect_sigma(alpha, beta)
    if sigma is None:
        raise SpecError("profile is not critical: frak_X_0(0) != +-Id")

    # slope part: derivative polynomial values at 0
    _, dp_N = periodic_poly(alpha, beta, N, k=i, x=0.0)
    _, dp_Nm1_i = periodic_poly(alpha, beta, N - 1, k=i, x=0.0)
    _, dp_Nm1_i1 = periodic_poly(alpha, beta, N - 1, k=i + 1, x=0.0)
    _, dp_Nm2_i1 = periodic_poly(alpha, beta, N - 2, k=i + 1, x=0.0)
    ratio = alpha[i - 1] / alpha[i]
    C = np.array([[-ratio * dp_Nm2_i1, dp_Nm1_i],
                  [-ratio * dp_Nm1_i1, dp_N]])

    # offset part: insertions weighted by 1/alpha at the insertion point
    D = np.zeros((2, 2))
    for j in range(N):
        left = np.eye(2)
        for m in range(j + 1, N):
            left = periodic_step(alpha, beta, i + m, 0.0) @ left
        right = np.eye(2)
        for m in range(0, j):
            right = periodic_step(alpha, beta, i + m, 0.0) @ right
        D += (1.0 / alpha[i + j]) * (
            left @ _lower_insert(s[i + j], z[i + j]) @ right)

    m1 = alpha[i - 1] * C
    m0 = alpha[i - 1] * D
    expected = -sigma * sum(s[i + j] * alpha[i - 1] / alpha[i + j - 1]
                            for j in range(N))
    got = float(tr(m0))
    scale = max(1.0, abs(expected))
    if abs(got - expected) > check_tol * scale:
        raise AssertionError(
            f"trace identity violated: tr = {got!r}, expected {expected!r}")
    if abs(float(tr(m1))) > check_tol:
        raise AssertionError(f"slope part must be traceless, tr = {float(tr(m1))!r}")
    return AffineMat2(m0, m1)


def closed_form_R_noncarleman(alpha: PeriodicSeq, beta: PeriodicSeq,
                  s_t: PeriodicSeq, z_t: PeriodicSeq, i: int = 0,
                  check_tol: float = 1e-12) -> Matrix:
    """Closed-form limit of gamma_n (X_{nN+i}(0) - sigma Id) at the origin.

    Here s_t and z_t are the gamma-scaled ratio corrections

        s_t_k = lim gamma_n (alpha_{k-1}/alpha_k - a_{nN+k-1}/a_{nN+k}),
        z_t_k = lim gamma_n (beta_k/alpha_k - b_{nN+k}/a_{nN+k}).

    Unlike :func:`closed_form_R_modulated` the insertions enter without 1/alpha
    weights.  The trace identity
    tr R_i = -sigma * sum_j s_t_{i+j} alpha_{i+j}/alpha_{i+j-1} is asserted.
    """

    N = alpha.period
    if N < 2:
        raise SpecError("critical closed forms need period >= 2: a period-1 "
                        "profile never has frak_X_0(0) = +-Id")
    sigma = detect_sigma(alpha, beta)
    if sigma is None:
        raise SpecError("profile is not critical: frak_X_0(0) != +-Id")

    R = np.zeros((2, 2))
    for j in range(N):
        left = np.eye(2)
        for m in range(j + 1, N):
            left = periodic_step(alpha, beta, i + m, 0.0) @ left
        right = np.eye(2)
        for m in range(0, j):
            right = periodic_step(alpha, beta, i + m, 0.0) @ right
        R += left @ _lower_insert(s_t[i + j], z_t[i + j]) @ right

    expected = -sigma * sum(s_t[i + j] * alpha[i + j] / alpha[i + j - 1]
                            for j in range(N))
    got = float(tr(R))
    if abs(got - expected) > check_tol * max(1.0, abs(expected)):
        raise AssertionError(
            f"trace identity violated: tr = {got!r}, expected {expected!r}")
    return R


def km_R(alpha: PeriodicSeq, beta: PeriodicSeq, kappa: float,
         frak_f: PeriodicSeq, i: int = 0, check_tol: float = 1e-12) -> Matrix:
    """Closed-form limit of gamma_{nN} (X_{nN+i}(0) - sigma Id) for the
    growth-regulated class.

    frak_f is the N-periodic limit of the bounded perturbation f.  The limit
    matrix is

        R_i = sum_j (alpha_{i+j-1}/alpha_{i+j}) (kappa + f_{i+j} - f_{i+j-1})
              * (window product with a lower-left rank-one insertion),

    with trace identically -kappa * sigma * N, asserted to ``check_tol``.
    """

    N = alpha.period
    if N < 2:
        raise SpecError("critical closed forms need period >= 2: a period-1 "
                        "profile never has frak_X_0(0) = +-Id")
    sigma = detect_sigma(alpha, beta)
    if sigma is None:
        raise SpecError("profile is not critical: frak_X_0(0) != +-Id")

    R = np.zeros((2, 2))
    for j in range(N):
        left = np.eye(2)
        for m in range(j + 1, N):
            left = periodic_step(alpha, beta, i + m, 0.0) @ left
        right = np.eye(2)
        for m in range(0, j):
            right = periodic_step(alpha, beta, i + m, 0.0) @ right
        weight = (alpha[i + j - 1] / alpha[i + j]) * (
            kappa + frak_f[i + j] - frak_f[i + j - 1])
        R += weight * (left @ _lower_insert(1.0, 0.0) @ right)

    expected = -kappa * sigma * N
    got = float(tr(R))
    if abs(got - expected) > check_tol * max(1.0, abs(expected)):
        raise AssertionError(
            f"trace identity violated: tr = {got!r}, expected {expected!r}")
    return R


def km_ratio_corrections(alpha: PeriodicSeq, kappa: float,
                         frak_f: PeriodicSeq) -> Tuple[PeriodicSeq, PeriodicSeq]:
    """The gamma-scaled ratio corrections induced by the growth-regulated
    class: s_t_k = (alpha_{k-1}/alpha_k)(kappa + f_k - f_{k-1}) and z_t = 0."""
    N = alpha.period
    s_t = tuple((alpha[k - 1] / alpha[k]) * (kappa + frak_f[k] - frak_f[k - 1])
                for k in range(N))
    return PeriodicSeq(s_t), PeriodicSeq((0.0,) * N)


def km_R_even_closed(alpha: PeriodicSeq, frak_f: PeriodicSeq,
                     kappa: float) -> Tuple[float, float]:
    """Closed trace and discriminant of the growth-regulated deviation limit
    for even periods with balanced off-diagonal profile and zero diagonal.

    Requires N even and the balance identity
    alpha_0 alpha_2 ... alpha_{N-2} = alpha_1 alpha_3 ... alpha_{N-1}
    (relative tolerance 1e-12), under which frak_X_0(0) = (-1)^{N/2} Id and

        trace = -(-1)^{N/2} N kappa,
        discr = 4 (sum_j (-1)^j f_j)^2 >= 0.
    """

    N = alpha.period
    if N % 2 != 0:
        raise SpecError(f"period {N} must be even")
    if frak_f.period != N:
        raise SpecError(f"perturbation period {frak_f.period} must match "
                        f"profile period {N}")
    even = math.prod(alpha[j] for j in range(0, N, 2))
    odd = math.prod(alpha[j] for j in range(1, N, 2))
    if abs(even - odd) > 1e-12 * max(abs(even), abs(odd)):
        raise SpecError(f"unbalanced profile: even-index product {even!r} "
                        f"vs odd-index product {odd!r}")
    sigma = (-1) ** (N // 2)
    trace = -sigma * N * kappa
    alt = sum((-1) ** j * frak_f[j] for j in range(N))
    return float(trace), float(4.0 * alt * alt)


# ---------------------------------------------------------------------------
# blended layout: window limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMat2:
    """2x2 matrix of polynomials in x, stored by coefficient stacks.

    ``coeffs`` has shape (deg+1, 2, 2); coeffs[k] multiplies x^k.
    """

    coeffs: np.ndarray

    def at(self, x) -> Matrix:
        out = np.zeros((2, 2), dtype=_dtype_for(x))
        for c in self.coeffs[::-1]:
            out = out * x + c
        return out

    def at_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs)
        out = np.zeros(xs.shape + (2, 2), dtype=np.result_type(xs, self.coeffs))
        for c in self.coeffs[::-1]:
            out = out * xs[..., None, None] + c
        return out

    def __matmul__(self, other: "PolyMat2") -> "PolyMat2":
        a, b = self.coeffs, other.coeffs
        deg = len(a) + len(b) - 1
        out = np.zeros((deg, 2, 2))
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] += ca @ cb
        return PolyMat2(out)

    def discr_poly(self) -> "np.polynomial.Polynomial":
        """Discriminant tr^2 - 4 det as a scalar polynomial in x."""
        t = np.polynomial.Polynomial(self.coeffs[:, 0, 0] + self.coeffs[:, 1, 1])
        p00 = np.polynomial.Polynomial(self.coeffs[:, 0, 0])
        p01 = np.polynomial.Polynomial(self.coeffs[:, 0, 1])
        p10 = np.polynomial.Polynomial(self.coeffs[:, 1, 0])
        p11 = np.polynomial.Polynomial(self.coeffs[:, 1, 1])
        return t * t - 4.0 * (p00 * p11 - p01 * p10)


def _poly_const(m: Matrix) -> PolyMat2:
    return PolyMat2(np.asarray(m, dtype=float)[None, :, :])


def _poly_step(alpha: PeriodicSeq, beta: PeriodicSeq, n: int) -> PolyMat2:
    c0 = np.array([[0.0, 1.0], [-alpha[n - 1] / alpha[n], -beta[n] / alpha[n]]])
    c1 = np.array([[0.0, 0.0], [0.0, 1.0 / alpha[n]]])
    return PolyMat2(np.stack([c0, c1]))


def blended_corner(alpha: PeriodicSeq, beta: PeriodicSeq) -> PolyMat2:
    """Limit of the corner triple B_{(k+1)(N+2)} B_{k(N+2)+N+1} B_{k(N+2)+N}:

        C(x) = [[0, -1], [alpha_{N-1}/alpha_0, -(2x - beta_0)/alpha_0]].
    """
    N = alpha.period
    c0 = np.array([[0.0, -1.0],
                   [alpha[N - 1] / alpha[0], beta[0] / alpha[0]]])
    c1 = np.array([[0.0, 0.0], [0.0, -2.0 / alpha[0]]])
    return PolyMat2(np.stack([c0, c1]))


def limit_matrix_blended(alpha: PeriodicSeq, beta: PeriodicSeq,
                         i: int = 1) -> PolyMat2:
    """Limit of the length-(N+2) windows X_{k(N+2)+i}(x) of a blended matrix.

    For i in 1..N the limit is the polynomial family

        frak_X_i(x) = (prod_{j=1}^{i-1} frak_B_j(x)) C(x)
                      (prod_{j=i}^{N-1} frak_B_j(x)),

    with C the corner limit above; i = N puts the corner leftmost with an
    empty right product.  The window starting inside the corner (i = 0 mod
    N+2 layouts) has no nondegenerate limit and is rejected.
    """

    N = alpha.period
    if not 1 <= i <= N:
        raise SpecError(f"blended window index i = {i} must satisfy 1 <= i <= N")
    out = _poly_const(np.eye(2))
    for j in range(i, N):
        out = _poly_step(alpha, beta, j) @ out
    out = blended_corner(alpha, beta) @ out
    for j in range(1, i):
        out = _poly_step(alpha, beta, j) @ out
    return out


# ---------------------------------------------------------------------------
# spec-level dispatchers
# ---------------------------------------------------------------------------

def limit_matrix(spec: JacobiSpec, i: int = 0, x=0.0) -> Matrix:
    """Limit of the window family of a structured spec, evaluated at x.

    Modulated and growth-regulated specs give the x-independent periodic
    window frak_X_i(0); blended specs give the polynomial window evaluated
    at x.  Explicit specs have no declared window structure.
    """

    if isinstance(spec, (ModulatedSpec, KMSpec)):
        return limit_matrix_modulated(spec.alpha, spec.beta, i)
    if isinstance(spec, BlendedSpec):
        return limit_matrix_blended(spec.alpha, spec.beta, i).at(x)
    raise SpecError(f"spec variant {type(spec).__name__!r} declares no "
                    "window structure; use the structured variants")


def scaled_deviation(spec: JacobiSpec, i: int, x, k: int,
                     scaling: str = "a") -> Matrix:
    """One scaled deviation R at window k of a critical structured spec.

    The window is X_{kN+i}(x) of length N; ``scaling`` selects the factor:
    "a" uses the entry a_{(k+1)N+i-1} (the last off-diagonal inside the
    window) and "gamma" uses gamma_{kN} of a growth-regulated spec.

    Raises :class:`SpecError` for non-critical profiles (frak_X_0(0) is not
    +-Id to 1e-12); those belong to the |trace| != 2 classifier paths.
    """

    if not isinstance(spec, (ModulatedSpec, KMSpec)):
        raise SpecError(f"spec variant {type(spec).__name__!r} has no "
                        "periodic modulation structure")
    sigma = detect_sigma(spec.alpha, spec.beta)
    if sigma is None:
        raise SpecError(
            "non-critical spec: frak_X_0(0) != +-Id; the elliptic and "
            "hyperbolic-free classifier paths handle |trace| != 2")
    N = spec.alpha.period
    start = k * N + i
    if start < 1:
        raise SpecError("window k, residue i must give start index >= 1")
    n_hi = (k + 1) * N + i
    a, b = build(spec, n_hi)
    X = window_products(a, b, x, np.asarray([start]), N)[0]
    if scaling == "a":
        factor = a[n_hi - 1]
    elif scaling == "gamma":
        if not isinstance(spec, KMSpec):
            raise SpecError("gamma scaling needs a growth-regulated spec")
        factor = float(spec.gamma.at(k * N))
    else:
        raise SpecError(f"unknown scaling {scaling!r}; use 'a' or 'gamma'")
    return factor * (X - sigma * np.eye(2, dtype=X.dtype))


# ---------------------------------------------------------------------------
# perturbation bound
# ---------------------------------------------------------------------------

def perturbation_bound(a: np.ndarray, b: np.ndarray, z: complex, n: int,
                       length: int) -> Tuple[float, float]:
    """Actual window deviation ||X_n(z) - X_n(0)|| and its explicit bound.

    Each factor satisfies ||B_j(z) - B_j(0)|| = |z| / a_j exactly, so the
    factorized estimate

        ||X_n(z) - X_n(0)|| <= c * sum_{j=0}^{length-1} 1 / a_{n+j},
        c = |z| * prod_j sup_{|w| <= |z|} ||B_{n+j}(w)||

    holds: expand the difference as a telescoping sum, bound every factor by
    its sup norm over the disk (which is ||B_j(0)|| + |z|/a_j), and use that
    every one-step matrix has norm >= 1 to absorb the missing factor.
    Returns (actual, bound).
    """

    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if n < 1 or n + length > len(a):
        raise ValueError("window out of range")
    js = np.arange(n, n + length)
    # evaluate both windows through the complex path so the difference is
    # exactly zero at z = 0 instead of summation-order noise
    X0 = window_products(a, b, 0j, np.asarray([n]), length)[0]
    Xz = window_products(a, b, complex(z), np.asarray([n]), length)[0]
    actual = float(norm2(Xz - X0))
    M_sup = norm2(step_stack(a, b, 0.0, n, length)) + abs(z) / a[js]
    c = abs(z) * float(np.prod(M_sup))
    bound = c * float(np.sum(1.0 / a[js]))
    return actual, bound
