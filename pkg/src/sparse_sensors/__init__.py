"""Data-driven sparse sensor placement.

:class:`SSPOR` picks sensors for reconstructing full states from a few
measurements; :class:`SSPOC` picks sensors for classification.
"""

from .basis import BasisKind, BasisSpec, FittedBasis, fit_basis, matrix_representation, shrink_modes
from .classification import SSPOC, reweighted_mode_order, select_sensors_from_solution
from .classifiers import LDA, LinearClassifier
from .errors import SensorError, SensorWarning
from .optimizers import CCQR, QR, SensorRanking, ccqr_rank, qr_rank
from .reconstruction import SSPOR

__version__ = "0.1.0"

__all__ = [
    "CCQR",
    "LDA",
    "QR",
    "SSPOC",
    "SSPOR",
    "BasisKind",
    "BasisSpec",
    "FittedBasis",
    "LinearClassifier",
    "SensorError",
    "SensorRanking",
    "SensorWarning",
    "ccqr_rank",
    "fit_basis",
    "matrix_representation",
    "qr_rank",
    "reweighted_mode_order",
    "select_sensors_from_solution",
    "shrink_modes",
]
