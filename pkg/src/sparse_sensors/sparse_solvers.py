"""Sparse recovery of sensor weights.

Both solvers look for a row-sparse ``S`` (``n x q``) with ``D @ S ~= W`` for
a dictionary ``D`` of shape ``r x n``. Nonzero rows of ``S`` mark locations.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InfeasibleSparsity, NonPositiveAlpha, ZeroDictionary
from .linalg import least_squares
from .utils import as_matrix

__all__ = [
    "SUPPORT_TOL",
    "SparseSolution",
    "group_lasso_objective",
    "lasso_alpha_max",
    "multitask_lasso",
    "omp",
]

SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class SparseSolution:
    s: np.ndarray
    row_support: np.ndarray
    iterations: int
    converged: bool
    # OMP: residual norm after each iteration (index 0 = before any atom).
    # Lasso: objective after each sweep (index 0 = at the zero start).
    history: tuple = field(default=(), repr=False)

    @property
    def row_norms(self):
        return np.linalg.norm(self.s, axis=1)


def _support(s, tol=SUPPORT_TOL):
    return np.flatnonzero(np.linalg.norm(s, axis=1) > tol)


def omp(dictionary, target, n_nonzero, residual_tol=1e-10):
    """Orthogonal matching pursuit.

    Each iteration adds the atom maximizing ``|<d_j, residual>| / ||d_j||``
    and refits all active coefficients by least squares. Stops after
    ``n_nonzero`` atoms or once the residual norm drops to ``residual_tol``.
    Returns an ``n x 1`` solution.
    """
    D = as_matrix(dictionary, "dictionary")
    target = np.asarray(target, dtype=float).ravel()
    r, n = D.shape
    if target.shape != (r,):
        raise DimensionMismatch(f"target must have length {r}, got {target.shape[0]}")
    if n_nonzero > min(r, n) or n_nonzero < 0:
        raise InfeasibleSparsity(f"n_nonzero={n_nonzero} must lie in [0, min(r, n)={min(r, n)}]")
    col_norms = np.linalg.norm(D, axis=0)
    if not np.any(col_norms > 0):
        raise ZeroDictionary("every dictionary column is zero")

    usable = col_norms > 0
    safe_norms = np.where(usable, col_norms, 1.0)
    active = []
    coef = np.zeros(0)
    residual = target.copy()
    res_norm = float(np.linalg.norm(residual))
    history = [res_norm]
    while len(active) < n_nonzero and res_norm > residual_tol:
        score = np.abs(D.T @ residual) / safe_norms
        score[~usable] = -1.0
        score[active] = -1.0
        j = int(np.argmax(score))
        if score[j] <= 0.0:
            break  # residual orthogonal to every remaining atom
        active.append(j)
        coef = least_squares(D[:, active], target)
        residual = target - D[:, active] @ coef
        res_norm = float(np.linalg.norm(residual))
        history.append(res_norm)

    s = np.zeros((n, 1))
    s[active, 0] = coef
    return SparseSolution(
        s=s,
        row_support=_support(s),
        iterations=len(active),
        converged=res_norm <= residual_tol or len(active) == n_nonzero,
        history=tuple(history),
    )


def group_lasso_objective(dictionary, targets, S, alpha):
    """``(1/2r) ||D S - W||_F^2 + alpha * sum_j ||S_j||_2``."""
    D = np.asarray(dictionary, dtype=float)
    resid = D @ S - targets
    return 0.5 / D.shape[0] * float(np.sum(resid**2)) + alpha * float(np.sum(np.linalg.norm(S, axis=1)))


def lasso_alpha_max(dictionary, targets):
    """Smallest ``alpha`` for which :func:`multitask_lasso` returns zero."""
    D = np.asarray(dictionary, dtype=float)
    W = np.asarray(targets, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    return float(np.max(np.linalg.norm(D.T @ W, axis=1)) / D.shape[0])


def multitask_lasso(dictionary, targets, alpha=0.1, max_iter=5000, tol=1e-10):
    """Row-sparse regression by cyclic block coordinate descent.

    Minimizes ``(1/2r) ||D S - W||_F^2 + alpha * sum_j ||S_j||_2`` where ``r``
    is the number of dictionary rows. Rows are updated in ascending order
    with group soft-thresholding; iteration stops when no row moves by more
    than ``tol`` in one sweep, or after ``max_iter`` sweeps (``converged`` is
    then False).
    """
    D = as_matrix(dictionary, "dictionary")
    W = np.asarray(targets, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    r, n = D.shape
    if W.shape[0] != r:
        raise DimensionMismatch(f"targets must have {r} rows, got {W.shape[0]}")
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")

    lipschitz = np.einsum("ij,ij->j", D, D) / r
    S = np.zeros((n, W.shape[1]))
    R = W.copy()  # W - D S
    history = [group_lasso_objective(D, W, S, alpha)]
    if alpha >= lasso_alpha_max(D, W):
        # zero is optimal; skip the sweep so round-off cannot leave dust rows
        return SparseSolution(s=S, row_support=_support(S), iterations=0, converged=True, history=tuple(history))
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        max_step = 0.0
        for j in range(n):
            if lipschitz[j] == 0.0:
                continue
            d = D[:, j]
            old = S[j]
            z = d @ R / r + lipschitz[j] * old
            norm_z = np.sqrt(z @ z)
            if norm_z <= alpha:
                new = np.zeros_like(old)
            else:
                new = (1.0 - alpha / norm_z) / lipschitz[j] * z
            delta = new - old
            step = np.sqrt(delta @ delta)
            if step > 0.0:
                R -= np.outer(d, delta)
                S[j] = new
                max_step = max(max_step, step)
        history.append(group_lasso_objective(D, W, S, alpha))
        if max_step < tol:
            converged = True
            break

    return SparseSolution(
        s=S,
        row_support=_support(S),
        iterations=sweeps,
        converged=converged,
        history=tuple(history),
    )
