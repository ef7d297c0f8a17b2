"""Linear classifiers usable inside SSPOC.

Anything with ``fit(features, labels)``, ``predict(features)`` and
``weights()`` (an ``r x q`` matrix of discriminating directions) can be
plugged in. The shipped implementation is linear discriminant analysis with
shrinkage toward a scaled identity.
"""

from dataclasses import dataclass
from typing import Protocol

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, EmptyClass, SingleClass
from .linalg import pseudoinverse
from .utils import as_matrix, warn

__all__ = ["LDA", "LdaModel", "LinearClassifier", "lda_fit", "lda_predict"]

DEFAULT_SHRINKAGE = 1e-4
# Relative eigenvalue size below which a discriminant direction is flagged.
DEGENERATE_RTOL = 1e-10


class LinearClassifier(Protocol):
    def fit(self, features, labels): ...

    def predict(self, features): ...

    def weights(self): ...


@dataclass(frozen=True)
class LdaModel:
    classes: np.ndarray
    class_means: np.ndarray
    directions: np.ndarray
    centroids: np.ndarray
    eigenvalues: np.ndarray
    shrinkage: float


def _unit_sign(V):
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def lda_fit(features, labels, shrinkage=DEFAULT_SHRINKAGE):
    """Fit LDA.

    The pooled within-class covariance ``S_w`` (scatter divided by
    ``m - c``) is regularized as ``(1 - shrinkage) S_w + shrinkage *
    tr(S_w)/r * I``. For two classes the single direction is
    ``S_w_reg^+ (mu_1 - mu_0)``; otherwise the directions are the leading
    ``min(c - 1, r)`` generalized eigenvectors of ``(S_b, S_w_reg)``,
    normalized to ``v' S_w_reg v = 1``.
    """
    X = as_matrix(features, "features")
    y = np.asarray(labels).ravel()
    m, r = X.shape
    if y.shape[0] != m:
        raise DimensionMismatch(f"{m} feature rows but {y.shape[0]} labels")
    classes, inverse, counts = np.unique(y, return_inverse=True, return_counts=True)
    if len(classes) < 2:
        raise SingleClass(f"need at least two classes, found {len(classes)}")
    if np.any(counts == 0):
        raise EmptyClass("every class needs at least one example")
    c = len(classes)

    means = np.zeros((c, r))
    np.add.at(means, inverse, X)
    means /= counts[:, None]
    centered = X - means[inverse]
    S_w = centered.T @ centered / max(m - c, 1)
    S_w_reg = (1.0 - shrinkage) * S_w + shrinkage * np.trace(S_w) / r * np.eye(r)

    if c == 2:
        directions = (pseudoinverse(S_w_reg) @ (means[1] - means[0]))[:, None]
        eigenvalues = np.array([float((means[1] - means[0]) @ directions[:, 0])])
    else:
        q = min(c - 1, r)
        grand = counts @ means / m
        diff = (means - grand) * np.sqrt(counts)[:, None]
        S_b = diff.T @ diff / m
        evals, evecs = scipy.linalg.eigh(S_b, S_w_reg)
        top = np.argsort(evals)[::-1][:q]
        eigenvalues = evals[top]
        directions = _unit_sign(evecs[:, top])
        scale = max(abs(eigenvalues[0]), np.finfo(float).tiny)
        if np.any(np.abs(eigenvalues) <= DEGENERATE_RTOL * scale):
            warn(
                "between-class scatter is rank deficient; "
                f"{int(np.sum(np.abs(eigenvalues) <= DEGENERATE_RTOL * scale))} "
                "discriminant direction(s) carry no separation"
            )

    return LdaModel(
        classes=classes,
        class_means=means,
        directions=directions,
        centroids=means @ directions,
        eigenvalues=eigenvalues,
        shrinkage=shrinkage,
    )


def lda_predict(model, features):
    """Nearest class centroid in discriminant space; ties go to the class
    listed first."""
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[0] == 0:
        return model.classes[:0]
    if X.shape[1] != model.directions.shape[0]:
        raise DimensionMismatch(
            f"model expects {model.directions.shape[0]} features, got {X.shape[1]}"
        )
    Z = X @ model.directions
    dist = ((Z[:, None, :] - model.centroids[None, :, :]) ** 2).sum(axis=2)
    return model.classes[np.argmin(dist, axis=1)]


class LDA:
    """Estimator-style wrapper around :func:`lda_fit` / :func:`lda_predict`."""

    def __init__(self, shrinkage=DEFAULT_SHRINKAGE):
        self.shrinkage = shrinkage
        self.model_ = None

    def fit(self, features, labels):
        self.model_ = lda_fit(features, labels, self.shrinkage)
        return self

    def predict(self, features):
        return lda_predict(self._fitted(), features)

    def weights(self):
        return self._fitted().directions

    @property
    def classes_(self):
        return self._fitted().classes

    def _fitted(self):
        if self.model_ is None:
            raise RuntimeError("LDA is not fitted yet")
        return self.model_

    def get_params(self):
        return {"shrinkage": self.shrinkage}
