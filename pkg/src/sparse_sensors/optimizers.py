"""Rank candidate sensor locations from a basis matrix.

Both optimizers run greedy column-pivoted QR on ``psi_r.T`` (one column per
candidate location). The first ``min(n, r)`` entries of the ranking are the
pivots; past that point QR has nothing left to say, so the remaining
locations follow in a seeded random order.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NegativeCost
from .linalg import _greedy_householder
from .utils import SeededRng, as_matrix, shuffled_complement

__all__ = ["CCQR", "QR", "SensorRanking", "ccqr_rank", "qr_rank"]


@dataclass(frozen=True)
class SensorRanking:
    order: np.ndarray
    n_meaningful: int
    seed: int
    # Winning selection score at each pivot step, kept for diagnostics.
    pivot_scores: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.order.flags.writeable = False

    def __len__(self):
        return len(self.order)

    def top(self, p):
        return self.order[:p]


def _rank(psi_r, seed, penalty=None):
    psi_r = as_matrix(psi_r, "psi_r")
    n, r = psi_r.shape
    k = min(n, r)
    qr = _greedy_householder(psi_r.T, k, penalty)
    tail = shuffled_complement(n, qr.pivots, SeededRng(seed))
    order = np.concatenate([qr.pivots, tail]).astype(np.intp)
    return SensorRanking(order=order, n_meaningful=k, seed=seed, pivot_scores=qr.scores)


def qr_rank(psi_r, seed=0):
    """Rank the ``n`` rows of ``psi_r`` (shape ``n x r``) by pivoted QR."""
    return _rank(psi_r, seed)


def ccqr_rank(psi_r, costs, weight=1.0, seed=0):
    """Cost-constrained ranking.

    Same greedy loop as :func:`qr_rank`, but the pivot at each step maximizes
    ``residual_norm - weight * cost``. ``weight`` is in norm units per cost
    unit; with ``weight == 0`` the result is identical to :func:`qr_rank`.
    """
    psi_r = as_matrix(psi_r, "psi_r")
    costs = np.asarray(costs, dtype=float)
    if costs.shape != (psi_r.shape[0],):
        raise DimensionMismatch(
            f"expected {psi_r.shape[0]} costs (one per location), got shape {costs.shape}"
        )
    if not np.all(np.isfinite(costs)) or np.any(costs < 0):
        raise NegativeCost("costs must be finite and non-negative")
    if weight < 0 or not np.isfinite(weight):
        raise NegativeCost(f"cost weight must be finite and non-negative, got {weight}")
    return _rank(psi_r, seed, weight * costs)


@dataclass(frozen=True)
class QR:
    """Plain pivoted-QR optimizer."""

    def rank(self, psi_r, seed=0):
        return qr_rank(psi_r, seed)

    def to_dict(self):
        return {"kind": "qr"}


@dataclass(frozen=True)
class CCQR:
    """Cost-constrained QR optimizer with per-location ``costs``."""

    costs: np.ndarray
    weight: float = 1.0

    def rank(self, psi_r, seed=0):
        return ccqr_rank(psi_r, self.costs, self.weight, seed)

    def to_dict(self):
        return {"kind": "ccqr", "costs": np.asarray(self.costs, dtype=float).tolist(), "weight": self.weight}


def optimizer_from_dict(d):
    if d["kind"] == "qr":
        return QR()
    return CCQR(np.asarray(d["costs"], dtype=float), float(d["weight"]))
