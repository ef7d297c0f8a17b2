"""Low-dimensional representations of snapshot data.

Snapshots arrive as rows of ``X`` (shape ``m x n``: ``m`` examples, ``n``
candidate sensor locations). A fitted basis stores an ``n x r_max`` mode
matrix whose columns span the representation; ``active_modes`` of them are
served to the optimizers and can be reduced later without refitting.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import InvalidParams, TooManyModes
from .linalg import randomized_svd, truncated_svd
from .utils import SeededRng, as_matrix

__all__ = [
    "BasisKind",
    "BasisSpec",
    "FittedBasis",
    "check_shrink",
    "fit_basis",
    "matrix_representation",
    "shrink_modes",
]

# Oversampling used by the randomized SVD, capped by the data shape.
RANDOMIZED_OVERSAMPLES = 10
RANDOMIZED_POWER_ITERS = 2


class BasisKind(str, Enum):
    IDENTITY = "identity"
    SVD = "svd"
    RANDOM_PROJECTION = "random_projection"


@dataclass(frozen=True)
class BasisSpec:
    """What basis to fit.

    ``n_basis_modes=None`` means "as many as the data supports" for
    ``identity`` (all snapshots) and ``svd`` (``min(m, n)``); a random
    projection needs an explicit count.
    """

    kind: BasisKind = BasisKind.IDENTITY
    n_basis_modes: int = None
    randomized: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        if self.n_basis_modes is not None and self.n_basis_modes < 1:
            raise InvalidParams(f"n_basis_modes must be >= 1, got {self.n_basis_modes}")
        if self.kind is BasisKind.RANDOM_PROJECTION and self.n_basis_modes is None:
            raise InvalidParams("random projection basis needs n_basis_modes")

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "n_basis_modes": self.n_basis_modes,
            "randomized": self.randomized,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True)
class FittedBasis:
    spec: BasisSpec
    modes: np.ndarray
    singular_values: np.ndarray = None
    active_modes: int = None

    def __post_init__(self):
        if self.active_modes is None:
            object.__setattr__(self, "active_modes", self.modes.shape[1])
        self.modes.flags.writeable = False

    @property
    def n_features(self):
        return self.modes.shape[0]

    @property
    def max_modes(self):
        return self.modes.shape[1]


def _fix_signs(modes):
    """Flip each column so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(modes), axis=0)
    signs = np.sign(modes[idx, np.arange(modes.shape[1])])
    signs[signs == 0] = 1.0
    return modes * signs


def fit_basis(spec, X):
    """Fit ``spec`` to snapshots ``X`` (rows are examples).

    ``identity`` uses the first ``r`` snapshots themselves as modes. ``svd``
    uses the leading left singular vectors of ``X.T`` (each mode has length
    ``n``), signs fixed so that every mode's largest-magnitude entry is
    positive. ``random_projection`` multiplies the snapshots by Gaussian
    vectors with entry variance ``1/r``, giving ``r`` random combinations of
    the snapshots.
    """
    X = as_matrix(X, "X")
    m, n = X.shape
    r = spec.n_basis_modes

    if spec.kind is BasisKind.IDENTITY:
        r = m if r is None else r
        if r > m:
            raise TooManyModes(f"identity basis has at most {m} modes (one per snapshot), got {r}")
        return FittedBasis(spec, np.array(X[:r].T, order="C"))

    if spec.kind is BasisKind.SVD:
        limit = min(m, n)
        r = limit if r is None else r
        if r > limit:
            raise TooManyModes(f"svd basis has at most min(m, n)={limit} modes, got {r}")
        if spec.randomized:
            oversamples = min(RANDOMIZED_OVERSAMPLES, limit - r)
            svd = randomized_svd(X.T, r, oversamples, RANDOMIZED_POWER_ITERS, spec.seed)
        else:
            svd = truncated_svd(X.T, r)
        return FittedBasis(spec, _fix_signs(svd.left_modes), svd.singular_values)

    gauss = SeededRng(spec.seed).standard_normal((m, r)) / np.sqrt(r)
    return FittedBasis(spec, X.T @ gauss)


def matrix_representation(basis, r=None):
    """The leading ``r`` modes (default: the active count), as an ``n x r``
    read-only view."""
    r = basis.active_modes if r is None else r
    if not 1 <= r <= basis.max_modes:
        raise TooManyModes(f"requested {r} modes; basis was fitted with {basis.max_modes}")
    return basis.modes[:, :r]


def check_shrink(basis, r):
    """Estimators only ever reduce their mode count after fitting."""
    if r > basis.active_modes:
        raise TooManyModes(
            f"cannot grow from {basis.active_modes} to {r} modes without refitting the basis"
        )


def shrink_modes(basis, r):
    """Return a copy of ``basis`` with ``r`` active modes.

    Growing past the fitted maximum would need a refit and is refused.
    """
    if r > basis.max_modes:
        raise TooManyModes(
            f"cannot grow to {r} modes without refitting (fitted with {basis.max_modes})"
        )
    if r < 1:
        raise TooManyModes(f"need at least one mode, got {r}")
    return replace(basis, active_modes=int(r))
