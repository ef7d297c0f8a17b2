"""Slow, independent reference computations used to check the library.

None of these call into ``sparse_sensors``; they recompute everything from
first principles with plain numpy.
"""

import itertools

import numpy as np


def greedy_projector_pivots(A, k, penalty=None, tie_rtol=1e-12):
    """Greedy column selection by explicit orthogonal projection.

    At each step every unchosen column is projected onto the orthogonal
    complement of the span of the chosen columns (via least squares), and
    the column maximizing ``residual_norm - penalty`` is taken.
    """
    A = np.asarray(A, dtype=float)
    n_cols = A.shape[1]
    penalty = np.zeros(n_cols) if penalty is None else np.asarray(penalty, dtype=float)
    chosen = []
    for _ in range(k):
        if chosen:
            B = A[:, chosen]
            coef = np.linalg.lstsq(B, A, rcond=None)[0]
            resid = A - B @ coef
        else:
            resid = A
        norms = np.linalg.norm(resid, axis=0)
        score = norms - penalty
        score[chosen] = -np.inf
        best = score.max()
        j = int(np.flatnonzero(score >= best - tie_rtol * abs(best))[0])
        chosen.append(j)
    return chosen


def jacobi_eigenvalues(S, sweeps=100, tol=1e-15):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    S = np.array(S, dtype=float)
    n = S.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum((S - np.diag(np.diag(S))) ** 2))
        if off <= tol * np.sqrt(np.sum(S**2)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p, q]
                if abs(apq) <= 1e-300 + 1e-18 * np.sqrt(abs(S[p, p] * S[q, q])):
                    continue
                theta = (S[q, q] - S[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta**2 + 1.0))
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                S = J.T @ S @ J
    return np.sort(np.diag(S))[::-1]


def jacobi_singular_values(A):
    """Singular values of ``A`` from Jacobi eigenvalues of ``A^T A``."""
    A = np.asarray(A, dtype=float)
    G = A.T @ A if A.shape[0] >= A.shape[1] else A @ A.T
    return np.sqrt(np.maximum(jacobi_eigenvalues(G), 0.0))


def exhaustive_best_support(D, target, k):
    """Support of size ``k`` minimizing the least-squares residual, by brute
    force over every subset. Returns (support, residual_norm)."""
    best = (None, np.inf)
    for support in itertools.combinations(range(D.shape[1]), k):
        sub = D[:, support]
        coef = np.linalg.lstsq(sub, target, rcond=None)[0]
        res = np.linalg.norm(target - sub @ coef)
        if res < best[1] - 1e-12:
            best = (list(support), res)
    return best


def group_lasso_objective(D, W, S, alpha):
    r = D.shape[0]
    return 0.5 / r * np.sum((D @ S - W) ** 2) + alpha * np.sum(np.linalg.norm(S, axis=1))


def proximal_gradient_group_lasso(D, W, alpha, n_iter=100_000):
    """Accelerated proximal gradient (FISTA) on the same objective.

    Stops early only once an iterate is an exact fixed point.
    """
    r, n = D.shape
    L = np.linalg.norm(D, 2) ** 2 / r
    S = np.zeros((n, W.shape[1]))
    Y = S.copy()
    t = 1.0
    for _ in range(n_iter):
        G = D.T @ (D @ Y - W) / r
        Z = Y - G / L
        norms = np.linalg.norm(Z, axis=1, keepdims=True)
        shrink = np.maximum(0.0, 1.0 - (alpha / L) / np.where(norms > 0, norms, 1.0))
        S_new = shrink * Z
        t_new = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
        Y = S_new + ((t - 1.0) / t_new) * (S_new - S)
        if np.array_equal(S_new, S):
            break
        S, t = S_new, t_new
    return S_new


def naive_rmse(a, b):
    a = np.ravel(a)
    b = np.ravel(b)
    total = 0.0
    for u, v in zip(a, b):
        total += (float(u) - float(v)) ** 2
    return (total / len(a)) ** 0.5
