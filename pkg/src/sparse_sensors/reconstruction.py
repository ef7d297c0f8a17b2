"""Sensor placement for full-state reconstruction (SSPOR)."""

import numpy as np

from .basis import BasisSpec, check_shrink, fit_basis, matrix_representation, shrink_modes
from .errors import DimensionMismatch, OutOfRange
from .linalg import condition_number, least_squares
from .optimizers import QR
from .utils import as_matrix, rmse, warn

__all__ = ["ILL_CONDITIONED", "SSPOR"]

ILL_CONDITIONED = 1e12


class SSPOR:
    """Choose ``n_sensors`` measurement locations from which full states can
    be recovered by least squares in a fitted basis.

    Parameters
    ----------
    basis : BasisSpec, optional
        Defaults to an identity basis using every training snapshot.
    optimizer : QR or CCQR, optional
        Ranking strategy; plain pivoted QR by default.
    n_sensors : int, optional
        Number of sensors to select. Defaults to the number of meaningful
        QR pivots, ``min(n, r)``.
    seed : int
        Seed for the random order of the locations ranked past the pivots.

    Attributes
    ----------
    basis_ : FittedBasis
    ranking_ : SensorRanking
    diagnostics_ : dict
        Condition number of the last sampled basis used by :meth:`predict`.
    """

    def __init__(self, basis=None, optimizer=None, n_sensors=None, seed=0):
        self.basis = basis if basis is not None else BasisSpec()
        self.optimizer = optimizer if optimizer is not None else QR()
        self.n_sensors = n_sensors
        self.seed = seed
        self.basis_ = None
        self.ranking_ = None
        self.diagnostics_ = {}

    def fit(self, X):
        X = as_matrix(X, "X")
        n = X.shape[1]
        if self.n_sensors is not None and not 1 <= self.n_sensors <= n:
            raise OutOfRange(f"n_sensors={self.n_sensors} must lie in [1, {n}]")
        self.basis_ = fit_basis(self.basis, X)
        self._rank()
        return self

    def _rank(self):
        self.ranking_ = self.optimizer.rank(matrix_representation(self.basis_), self.seed)
        if self.n_sensors is not None and self.n_sensors > self.ranking_.n_meaningful:
            self._warn_oversampling(self.n_sensors)

    def _check_fitted(self):
        if self.ranking_ is None:
            raise RuntimeError("SSPOR is not fitted yet")

    def _warn_oversampling(self, p):
        warn(
            f"{p} sensors requested but only the first {self.ranking_.n_meaningful} "
            "are QR pivots; the rest are drawn at random"
        )

    def _check_count(self, p):
        n = self.basis_.n_features
        if not 1 <= p <= n:
            raise OutOfRange(f"number of sensors {p} must lie in [1, {n}]")

    @property
    def n_features(self):
        self._check_fitted()
        return self.basis_.n_features

    @property
    def ranked_sensors(self):
        self._check_fitted()
        return self.ranking_.order

    @property
    def n_sensors_(self):
        self._check_fitted()
        return self.ranking_.n_meaningful if self.n_sensors is None else self.n_sensors

    @property
    def selected_sensors(self):
        return self.ranked_sensors[: self.n_sensors_]

    def set_n_sensors(self, p):
        self._check_fitted()
        self._check_count(p)
        if p > self.ranking_.n_meaningful:
            self._warn_oversampling(p)
        self.n_sensors = int(p)
        return self

    def update_n_basis_modes(self, r):
        """Keep only the leading ``r`` basis modes and recompute the ranking.

        The basis itself is not refit, so ``r`` can only shrink from the
        current mode count; growing again needs a fresh :meth:`fit`.
        """
        self._check_fitted()
        check_shrink(self.basis_, r)
        self.basis_ = shrink_modes(self.basis_, r)
        self._rank()
        return self

    def _reconstruct(self, sensors, y):
        psi = matrix_representation(self.basis_)
        sampled = psi[sensors]
        cond = condition_number(sampled)
        self.diagnostics_ = {"condition_number": cond, "ill_conditioned": cond > ILL_CONDITIONED}
        return (psi @ least_squares(sampled, y.T)).T

    def predict(self, y):
        """Reconstruct full states from measurements at ``selected_sensors``.

        ``y`` is a vector of length ``n_sensors`` or a matrix with one
        measurement vector per row.
        """
        self._check_fitted()
        y = np.asarray(y, dtype=float)
        sensors = self.selected_sensors
        if y.shape[-1] != len(sensors):
            raise DimensionMismatch(f"expected {len(sensors)} measurements, got {y.shape[-1]}")
        return self._reconstruct(sensors, y)

    def reconstruction_error(self, x_test, sensor_range, score=rmse):
        """Reconstruction error of ``x_test`` for each sensor count in
        ``sensor_range``.

        Each test row is sampled at the first ``p`` ranked sensors and
        reconstructed in full; ``score`` compares reconstructions with the
        true rows over every entry (RMSE by default). The model's own
        ``n_sensors`` is left untouched.
        """
        self._check_fitted()
        x_test = as_matrix(x_test, "x_test")
        if x_test.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"test rows have {x_test.shape[1]} entries; model has {self.n_features} locations"
            )
        sensor_range = [int(p) for p in np.atleast_1d(sensor_range)]
        for p in sensor_range:
            self._check_count(p)
        over = [p for p in sensor_range if p > self.ranking_.n_meaningful]
        if over:
            self._warn_oversampling(max(over))
        errors = np.empty(len(sensor_range))
        for i, p in enumerate(sensor_range):
            sensors = self.ranked_sensors[:p]
            errors[i] = score(self._reconstruct(sensors, x_test[:, sensors]), x_test)
        return errors

    def get_params(self):
        return {
            "basis": self.basis.to_dict(),
            "optimizer": self.optimizer.to_dict(),
            "n_sensors": self.n_sensors,
            "seed": self.seed,
        }
