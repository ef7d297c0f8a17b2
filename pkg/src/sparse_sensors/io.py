"""Dataset files, synthetic fixtures, model persistence and result documents.

All numeric files are comma-separated text, rows = examples, floats written
with 17 significant digits so that a write/read round trip is exact.
"""

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .basis import BasisSpec, FittedBasis
from .classification import SSPOC
from .classifiers import LDA, LdaModel
from .errors import InvalidParams, LabelColumnMissing, NonFiniteInput, ParseError
from .optimizers import SensorRanking, optimizer_from_dict
from .reconstruction import SSPOR
from .sparse_solvers import SparseSolution
from .utils import SeededRng

__all__ = [
    "SCHEMA_VERSION",
    "ResultDocument",
    "digits_subset",
    "file_sha256",
    "load_dataset",
    "load_model",
    "lowrank",
    "result_schema",
    "save_dataset",
    "save_model",
    "two_gaussians",
    "vandermonde",
]

SCHEMA_VERSION = "1.0"
MODEL_VERSION = "1.0"


def _fmt(v):
    return format(float(v), ".17g")


# Dataset files ===============================================================


def _is_number(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_dataset(path, labels=False):
    """Read a delimited-text dataset.

    A first row made entirely of non-numeric fields is taken as a header.
    With ``labels=True`` the first column holds integer class labels.

    Returns
    -------
    X : ndarray, shape (m, n)
    y : ndarray of int, or None
    """
    path = Path(path)
    rows = []
    width = None
    with path.open(newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in fields]
            if not fields or all(f == "" for f in fields):
                continue
            if not rows and width is None and not any(_is_number(f) for f in fields):
                width = len(fields)  # header
                continue
            if width is None:
                width = len(fields)
            if len(fields) != width:
                raise ParseError(f"{path}:{lineno}: expected {width} fields, found {len(fields)}")
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if not all(np.isfinite(values)):
                raise NonFiniteInput(f"{path}:{lineno}: non-finite value")
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    data = np.array(rows)
    if not labels:
        return data, None
    first = data[:, 0]
    if data.shape[1] < 2 or not np.all(first == np.round(first)):
        raise LabelColumnMissing(f"{path}: first column does not hold integer labels")
    return data[:, 1:], first.astype(int)


def save_dataset(path, X, labels=None, header=None):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        for i, row in enumerate(X):
            prefix = [str(int(labels[i]))] if labels is not None else []
            writer.writerow(prefix + [_fmt(v) for v in row])


def file_sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# Synthetic fixtures ==========================================================


def vandermonde(n_points=1001, n_modes=11):
    """Monomials ``1, x, ..., x^(n_modes-1)`` on ``n_points`` equispaced
    points of [0, 1], one monomial per row.

    Returns the grid and the ``n_modes x n_points`` matrix.
    """
    if n_points < 2 or n_modes < 1:
        raise InvalidParams("vandermonde needs n_points >= 2 and n_modes >= 1")
    x = np.linspace(0.0, 1.0, n_points)
    return x, np.vander(x, n_modes, increasing=True).T


def lowrank(n_rows, n_cols, rank, seed=0):
    if not 1 <= rank <= min(n_rows, n_cols):
        raise InvalidParams(f"rank must lie in [1, {min(n_rows, n_cols)}]")
    rng = SeededRng(seed)
    return rng.standard_normal((n_rows, rank)) @ rng.standard_normal((rank, n_cols))


def two_gaussians(n_per_class, n_features, separation=6.0, seed=0):
    """Two unit-variance spherical Gaussian classes whose means differ by
    ``separation`` along feature 0."""
    if n_per_class < 1 or n_features < 1:
        raise InvalidParams("two-gaussians needs n_per_class >= 1 and n_features >= 1")
    X = SeededRng(seed).standard_normal((2 * n_per_class, n_features))
    y = np.repeat([0, 1], n_per_class)
    X[y == 1, 0] += separation
    return X, y


def digits_subset():
    """The bundled 8x8 handwritten-digit subset (1000 images, 10 classes)."""
    ref = resources.files("sparse_sensors") / "data" / "digits_subset.csv"
    with resources.as_file(ref) as path:
        return load_dataset(path, labels=True)


def digits_path():
    return Path(str(resources.files("sparse_sensors") / "data" / "digits_subset.csv"))


# Result documents ============================================================


@dataclass
class ResultDocument:
    command: str
    parameters: dict
    selected_sensors: list
    error_curve: list = None
    accuracy: float = None
    timing_ms: int = 0
    warnings: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def result_schema():
    ref = resources.files("sparse_sensors") / "data" / "result.schema.json"
    return json.loads(ref.read_text())


# Model persistence ===========================================================


def _basis_to_dict(b):
    return {
        "spec": b.spec.to_dict(),
        "modes": b.modes.tolist(),
        "singular_values": None if b.singular_values is None else b.singular_values.tolist(),
        "active_modes": b.active_modes,
    }


def _basis_from_dict(d):
    sv = d["singular_values"]
    return FittedBasis(
        BasisSpec.from_dict(d["spec"]),
        np.array(d["modes"], dtype=float),
        None if sv is None else np.array(sv, dtype=float),
        d["active_modes"],
    )


def _lda_to_dict(clf):
    m = clf.model_
    return {
        "shrinkage": clf.shrinkage,
        "classes": m.classes.tolist(),
        "class_means": m.class_means.tolist(),
        "directions": m.directions.tolist(),
        "centroids": m.centroids.tolist(),
        "eigenvalues": m.eigenvalues.tolist(),
    }


def _lda_from_dict(d):
    clf = LDA(d["shrinkage"])
    clf.model_ = LdaModel(
        classes=np.array(d["classes"]),
        class_means=np.array(d["class_means"], dtype=float),
        directions=np.array(d["directions"], dtype=float),
        centroids=np.array(d["centroids"], dtype=float),
        eigenvalues=np.array(d["eigenvalues"], dtype=float),
        shrinkage=d["shrinkage"],
    )
    return clf


def save_model(model, path):
    """Write a fitted :class:`SSPOR` or LDA-based :class:`SSPOC` as JSON."""
    if isinstance(model, SSPOR):
        doc = {
            "model_version": MODEL_VERSION,
            "type": "SSPOR",
            "params": model.get_params(),
            "basis": _basis_to_dict(model.basis_),
            "ranking": {
                "order": model.ranking_.order.tolist(),
                "n_meaningful": model.ranking_.n_meaningful,
                "seed": model.ranking_.seed,
            },
        }
    elif isinstance(model, SSPOC):
        if not isinstance(model.refit_classifier_, LDA):
            raise InvalidParams("only LDA-based SSPOC models can be saved")
        sol = model.solution_
        doc = {
            "model_version": MODEL_VERSION,
            "type": "SSPOC",
            "params": model.get_params(),
            "basis": _basis_to_dict(model.basis_),
            "w": model.w_.tolist(),
            "solution": {
                "s": sol.s.tolist(),
                "iterations": sol.iterations,
                "converged": sol.converged,
            },
            "selected_sensors": [int(i) for i in model.selected_sensors],
            "classifier": _lda_to_dict(model.classifier_),
            "refit_classifier": _lda_to_dict(model.refit_classifier_),
        }
    else:
        raise InvalidParams(f"cannot save {type(model).__name__}")
    Path(path).write_text(json.dumps(doc))


def load_model(path):
    doc = json.loads(Path(path).read_text())
    if doc.get("model_version") != MODEL_VERSION:
        raise ParseError(f"{path}: unsupported model version {doc.get('model_version')!r}")
    params = doc["params"]
    basis = _basis_from_dict(doc["basis"])
    if doc["type"] == "SSPOR":
        model = SSPOR(
            basis=BasisSpec.from_dict(params["basis"]),
            optimizer=optimizer_from_dict(params["optimizer"]),
            n_sensors=params["n_sensors"],
            seed=params["seed"],
        )
        model.basis_ = basis
        rk = doc["ranking"]
        model.ranking_ = SensorRanking(np.array(rk["order"], dtype=np.intp), rk["n_meaningful"], rk["seed"])
        return model
    if doc["type"] == "SSPOC":
        shrinkage = doc["classifier"]["shrinkage"]
        model = SSPOC(
            basis=BasisSpec.from_dict(params["basis"]),
            classifier=lambda: LDA(shrinkage),
            n_sensors=params["n_sensors"],
            threshold=params["threshold"],
            l1_penalty=params["l1_penalty"],
        )
        model.basis_ = basis
        model.w_ = np.array(doc["w"], dtype=float)
        s = np.array(doc["solution"]["s"], dtype=float)
        model.solution_ = SparseSolution(
            s=s,
            row_support=np.flatnonzero(np.linalg.norm(s, axis=1) > 1e-10),
            iterations=doc["solution"]["iterations"],
            converged=doc["solution"]["converged"],
        )
        model.selected_sensors = np.array(doc["selected_sensors"], dtype=np.intp)
        model.classifier_ = _lda_from_dict(doc["classifier"])
        model.refit_classifier_ = _lda_from_dict(doc["refit_classifier"])
        model.classes_ = model.refit_classifier_.classes_
        return model
    raise ParseError(f"{path}: unknown model type {doc['type']!r}")
