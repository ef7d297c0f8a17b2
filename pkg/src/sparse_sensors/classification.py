"""Sensor placement for classification (SSPOC)."""

import numpy as np

from .basis import BasisSpec, check_shrink, fit_basis, matrix_representation, shrink_modes
from .classifiers import LDA
from .errors import DimensionMismatch, NoSensorsSelected, OutOfRange
from .linalg import pseudoinverse
from .sparse_solvers import multitask_lasso, omp
from .utils import as_matrix, warn

__all__ = ["SSPOC", "reweighted_mode_order", "select_sensors_from_solution"]

DEFAULT_THRESHOLD = 1e-10
DEFAULT_L1_PENALTY = 0.1
OMP_RESIDUAL_TOL = 1e-10


def select_sensors_from_solution(s, n_sensors=None, threshold=DEFAULT_THRESHOLD):
    """Sensor indices ordered by descending row norm of ``s``.

    With ``n_sensors`` the top ``n_sensors`` rows are taken even if some
    fall below ``threshold`` (a warning says so); otherwise every row whose
    norm exceeds ``threshold``.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim == 1:
        s = s[:, None]
    norms = np.linalg.norm(s, axis=1)
    order = np.argsort(-norms, kind="stable")
    n_above = int(np.sum(norms > threshold))
    if n_sensors is None:
        return order[:n_above]
    if n_sensors > n_above:
        warn(
            f"{n_sensors} sensors requested but only {n_above} have weight above "
            f"{threshold:g}; padding with the next-largest rows"
        )
    return order[:n_sensors]


def reweighted_mode_order(singular_values, w):
    """Mode indices sorted by ``sigma_k * ||w_k||`` (largest first).

    Reordering basis columns this way favors modes that are both energetic
    and discriminating.
    """
    sigma = np.asarray(singular_values, dtype=float).ravel()
    w = np.asarray(w, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if w.shape[0] != sigma.shape[0]:
        raise DimensionMismatch(f"{sigma.shape[0]} singular values but w has {w.shape[0]} rows")
    score = sigma * np.linalg.norm(w, axis=1)
    return np.argsort(-score, kind="stable")


class SSPOC:
    """Choose sensors that preserve a linear classifier's decision space.

    Fitting runs five steps: fit the basis; fit ``classifier`` on the
    projected features ``X @ pinv(Psi).T``; solve a sparse problem
    ``pinv(Psi) @ s ~= w`` for the classifier weights ``w`` (orthogonal
    matching pursuit when ``w`` has one column, multi-task Lasso otherwise);
    select sensors from the row norms of ``s``; refit a fresh classifier on
    ``X`` restricted to those sensors.

    Parameters
    ----------
    basis : BasisSpec, optional
        Identity basis by default.
    classifier : callable, optional
        Zero-argument factory returning an unfitted linear classifier.
        ``LDA`` by default.
    n_sensors : int, optional
        Number of sensors. When omitted, every row of ``s`` with norm above
        ``threshold`` is used, and the OMP budget is ``r``.
    threshold : float
    l1_penalty : float
        Group-Lasso penalty for multi-class problems.
    """

    def __init__(
        self,
        basis=None,
        classifier=None,
        n_sensors=None,
        threshold=DEFAULT_THRESHOLD,
        l1_penalty=DEFAULT_L1_PENALTY,
    ):
        self.basis = basis if basis is not None else BasisSpec()
        self.classifier = classifier if classifier is not None else LDA
        self.n_sensors = n_sensors
        self.threshold = threshold
        self.l1_penalty = l1_penalty
        self.basis_ = None
        self.classifier_ = None
        self.refit_classifier_ = None
        self.w_ = None
        self.solution_ = None
        self.selected_sensors = None
        self.classes_ = None

    def fit(self, X, y):
        X = as_matrix(X, "X")
        y = np.asarray(y).ravel()
        if y.shape[0] != X.shape[0]:
            raise DimensionMismatch(f"{X.shape[0]} examples but {y.shape[0]} labels")
        if self.n_sensors is not None and not 1 <= self.n_sensors <= X.shape[1]:
            raise OutOfRange(f"n_sensors={self.n_sensors} must lie in [1, {X.shape[1]}]")
        self.basis_ = fit_basis(self.basis, X)
        self._fit_downstream(X, y)
        return self

    def _fit_downstream(self, X, y):
        self.classes_ = np.unique(y)
        psi = matrix_representation(self.basis_)
        dictionary = pseudoinverse(psi)
        features = X @ dictionary.T
        self.classifier_ = self.classifier().fit(features, y)
        w = np.asarray(self.classifier_.weights(), dtype=float)
        self.w_ = w[:, None] if w.ndim == 1 else w

        r, n = dictionary.shape
        if self.w_.shape[1] == 1:
            budget = min(r, n) if self.n_sensors is None else min(self.n_sensors, r, n)
            self.solution_ = omp(dictionary, self.w_[:, 0], budget, OMP_RESIDUAL_TOL)
        else:
            self.solution_ = multitask_lasso(dictionary, self.w_, alpha=self.l1_penalty)
            if not self.solution_.converged:
                warn(f"multi-task Lasso stopped after {self.solution_.iterations} sweeps without converging")
        self._select_and_refit(X, y)

    def _select_and_refit(self, X, y):
        sensors = select_sensors_from_solution(self.solution_.s, self.n_sensors, self.threshold)
        if len(sensors) == 0 or not np.any(self.solution_.row_norms[sensors] > self.threshold):
            raise NoSensorsSelected(
                "sparse solution is identically zero; reduce l1_penalty or change the basis"
            )
        self.selected_sensors = sensors
        self.refit_classifier_ = self.classifier().fit(X[:, sensors], y)

    def _check_fitted(self):
        if self.solution_ is None:
            raise RuntimeError("SSPOC is not fitted yet")

    def predict(self, X_sub):
        """Classify samples measured only at ``selected_sensors`` (columns in
        the same order)."""
        self._check_fitted()
        X_sub = np.asarray(X_sub, dtype=float)
        if X_sub.ndim == 1:
            X_sub = X_sub[None, :]
        if X_sub.shape[1] != len(self.selected_sensors):
            raise DimensionMismatch(
                f"expected {len(self.selected_sensors)} sensor columns, got {X_sub.shape[1]}"
            )
        if X_sub.shape[0] == 0:
            return self.classes_[:0]
        return self.refit_classifier_.predict(X_sub)

    def update_sensors(self, n_sensors, X, y):
        """Reselect ``n_sensors`` from the stored sparse solution and refit the
        classifier; the sparse problem is not solved again."""
        self._check_fitted()
        X = as_matrix(X, "X")
        y = np.asarray(y).ravel()
        n = self.solution_.s.shape[0]
        if not 1 <= n_sensors <= n:
            raise OutOfRange(f"n_sensors={n_sensors} must lie in [1, {n}]")
        self.n_sensors = int(n_sensors)
        self._select_and_refit(X, y)
        return self

    def update_n_basis_modes(self, r, X, y):
        """Shrink the basis to ``r`` modes and redo every later step.

        ``r`` may not exceed the current mode count; the basis is not refit.
        """
        self._check_fitted()
        check_shrink(self.basis_, r)
        X = as_matrix(X, "X")
        y = np.asarray(y).ravel()
        self.basis_ = shrink_modes(self.basis_, r)
        self._fit_downstream(X, y)
        return self

    def get_params(self):
        params = {
            "basis": self.basis.to_dict(),
            "n_sensors": self.n_sensors,
            "threshold": self.threshold,
            "l1_penalty": self.l1_penalty,
        }
        inst = self.classifier()
        if hasattr(inst, "get_params"):
            params["classifier"] = {"name": type(inst).__name__, **inst.get_params()}
        return params
