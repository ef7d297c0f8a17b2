"""Dense linear-algebra kernels shared by the rest of the package.

Column-pivoted Householder QR is implemented here directly because its pivot
order *is* the sensor ranking. The SVD-based routines delegate the small dense
decompositions to LAPACK through :func:`numpy.linalg.svd`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyMatrix, MaxPivotsTooLarge, RankTooLarge
from .utils import SeededRng, as_matrix

__all__ = [
    "DEFAULT_RCOND",
    "PivotedQrResult",
    "SvdResult",
    "condition_number",
    "least_squares",
    "pivoted_qr",
    "pseudoinverse",
    "randomized_svd",
    "truncated_svd",
]

DEFAULT_RCOND = 1e-12
TIE_RTOL = 1e-12
# Squared-norm ratio below which a downdated column norm is recomputed.
DOWNDATE_GUARD = 1e-6


@dataclass(frozen=True)
class PivotedQrResult:
    pivots: np.ndarray
    r_diagonal: np.ndarray
    # Best selection score at each step; equals r_diagonal without a penalty.
    scores: np.ndarray


@dataclass(frozen=True)
class SvdResult:
    left_modes: np.ndarray
    singular_values: np.ndarray
    right_modes: np.ndarray

    @property
    def rank(self):
        return len(self.singular_values)

    def reconstruct(self):
        return (self.left_modes * self.singular_values) @ self.right_modes.T


def _greedy_householder(A, max_pivots, penalty=None):
    """Greedy column selection by Householder QR.

    At step ``k`` the unchosen column maximizing ``residual_norm - penalty``
    is chosen (``penalty`` is a per-column vector, or None for plain norms),
    ties within ``TIE_RTOL`` going to the lowest column index. Running squared
    norms are downdated after each reflection and recomputed from scratch once
    they fall below ``DOWNDATE_GUARD`` times their last exact value.
    """
    R = np.array(A, dtype=float, copy=True)
    n_rows, n_cols = R.shape
    active = np.ones(n_cols, dtype=bool)
    norms2 = np.einsum("ij,ij->j", R, R)
    ref2 = norms2.copy()

    pivots = np.empty(max_pivots, dtype=np.intp)
    r_diag = np.empty(max_pivots)
    scores = np.empty(max_pivots)
    for k in range(max_pivots):
        cand = np.flatnonzero(active)
        score = np.sqrt(np.maximum(norms2[cand], 0.0))
        if penalty is not None:
            score = score - penalty[cand]
        best = score.max()
        tied = np.flatnonzero(score >= best - TIE_RTOL * abs(best))
        j = cand[tied[0]]

        x = R[k:, j].copy()
        alpha = np.sqrt(x @ x)
        sign = 1.0 if x[0] >= 0.0 else -1.0
        pivots[k] = j
        r_diag[k] = alpha
        scores[k] = best
        active[j] = False

        rest = np.flatnonzero(active)
        if alpha > 0.0 and rest.size:
            v = x
            v[0] += sign * alpha
            v /= np.sqrt(v @ v)
            block = R[k:, rest]
            block -= 2.0 * np.outer(v, v @ block)
            R[k:, rest] = block
        R[k:, j] = 0.0
        R[k, j] = -sign * alpha

        if rest.size:
            norms2[rest] -= R[k, rest] ** 2
            stale = rest[norms2[rest] < DOWNDATE_GUARD * ref2[rest]]
            if stale.size:
                tail = R[k + 1 :, stale]
                norms2[stale] = np.einsum("ij,ij->j", tail, tail)
                ref2[stale] = norms2[stale]
    return PivotedQrResult(pivots=pivots, r_diagonal=r_diag, scores=scores)


def pivoted_qr(A, max_pivots=None):
    """Column-pivoted Householder QR, returning only the pivot order.

    Parameters
    ----------
    A : array_like, shape (rows, cols)
    max_pivots : int, optional
        Number of pivot steps; defaults to ``min(rows, cols)``.

    Returns
    -------
    PivotedQrResult
        ``pivots[k]`` is the column chosen at step ``k`` and ``r_diagonal[k]``
        the magnitude of the corresponding diagonal entry of R.
    """
    A = as_matrix(A, "A")
    limit = min(A.shape)
    if max_pivots is None:
        max_pivots = limit
    if max_pivots > limit:
        raise MaxPivotsTooLarge(f"max_pivots={max_pivots} exceeds min(rows, cols)={limit}")
    return _greedy_householder(A, int(max_pivots))


def truncated_svd(A, r):
    """Leading ``r`` singular triplets of ``A``."""
    A = as_matrix(A, "A")
    if not 1 <= r <= min(A.shape):
        raise RankTooLarge(f"r={r} must lie in [1, {min(A.shape)}]")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    return SvdResult(U[:, :r].copy(), s[:r].copy(), Vt[:r].T.copy())


def _orthonormal_range(Y):
    Q, _ = np.linalg.qr(Y)
    return Q


def randomized_svd(A, r, n_oversamples=10, n_power_iters=2, seed=0):
    """Randomized range-finder SVD.

    A Gaussian test matrix with ``r + n_oversamples`` columns sketches the
    range of ``A``; ``n_power_iters`` rounds of re-orthonormalized subspace
    iteration sharpen it before an exact SVD of the small projected matrix.
    Results are bit-reproducible for a fixed ``seed``.
    """
    A = as_matrix(A, "A")
    k = r + n_oversamples
    if r < 1 or k > min(A.shape):
        raise RankTooLarge(
            f"r + n_oversamples = {k} must not exceed min(rows, cols) = {min(A.shape)}"
        )
    omega = SeededRng(seed).standard_normal((A.shape[1], k))
    Q = _orthonormal_range(A @ omega)
    for _ in range(n_power_iters):
        Q = _orthonormal_range(A.T @ Q)
        Q = _orthonormal_range(A @ Q)
    Ub, s, Vt = np.linalg.svd(Q.T @ A, full_matrices=False)
    return SvdResult((Q @ Ub[:, :r]).copy(), s[:r].copy(), Vt[:r].T.copy())


def pseudoinverse(A, rcond=DEFAULT_RCOND):
    """Moore-Penrose pseudoinverse; singular values below ``rcond * s_max``
    are treated as zero."""
    A = as_matrix(A, "A")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    cutoff = rcond * (s[0] if s.size else 0.0)
    keep = s > cutoff
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vt.T * inv) @ U.T


def least_squares(A, b, rcond=DEFAULT_RCOND):
    """Minimum-norm least-squares solution of ``A x = b``.

    ``b`` may be a vector or a matrix of right-hand sides (one per column).
    """
    A = as_matrix(A, "A")
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
    return pseudoinverse(A, rcond) @ b


def condition_number(A):
    """Ratio of the largest to the smallest of the ``min(rows, cols)``
    singular values; ``inf`` when the smallest is zero."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        raise EmptyMatrix("cannot take the condition number of an empty matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])
