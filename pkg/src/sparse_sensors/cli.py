"""Command-line front end.

``stdout`` carries exactly one JSON document per invocation: the result, or
an error object on failure. Human-readable messages go to ``stderr``.

Exit codes: 0 success, 1 unexpected failure, 2 usage error, 3 missing file,
otherwise the ``exit_code`` of the raised :class:`~sparse_sensors.errors.SensorError`
subclass (see README).
"""

import argparse
import json
import os
import shutil
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import io
from .basis import BasisKind, BasisSpec
from .classification import SSPOC
from .errors import InvalidParams, SensorError, SensorWarning, SingleClass
from .optimizers import CCQR, QR
from .reconstruction import SSPOR
from .utils import SeededRng, shuffled_complement

SEED_ENV = "SPARSE_SENSORS_SEED"

BASIS_CHOICES = {
    "identity": (BasisKind.IDENTITY, False),
    "svd": (BasisKind.SVD, False),
    "rsvd": (BasisKind.SVD, True),
    "randproj": (BasisKind.RANDOM_PROJECTION, False),
}


def default_seed():
    return int(os.environ.get(SEED_ENV, "0"))


def _basis_spec(args):
    kind, randomized = BASIS_CHOICES[args.basis]
    return BasisSpec(kind, args.modes, randomized, args.seed)


def _data_params(path):
    return {"data": str(path), "data_sha256": io.file_sha256(path)}


def parse_sensor_range(text):
    """``"a..b"`` (inclusive) or a comma-separated list."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(t) for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError(f"empty sensor range {text!r}")
    return values


# Commands ====================================================================


def cmd_rank(args):
    X, _ = io.load_dataset(args.data)
    params = {
        **_data_params(args.data),
        "basis": args.basis,
        "modes": args.modes,
        "optimizer": args.optimizer,
        "n_sensors": args.n_sensors,
        "seed": args.seed,
    }
    if args.optimizer == "ccqr":
        if args.costs is None:
            raise InvalidParams("--optimizer ccqr needs --costs")
        costs, _ = io.load_dataset(args.costs)
        optimizer = CCQR(costs.ravel(), args.cost_weight)
        params.update(costs=str(args.costs), costs_sha256=io.file_sha256(args.costs), cost_weight=args.cost_weight)
    else:
        optimizer = QR()

    model = SSPOR(_basis_spec(args), optimizer, args.n_sensors, args.seed).fit(X)
    if args.save_model:
        io.save_model(model, args.save_model)
    diagnostics = {
        "n_meaningful": model.ranking_.n_meaningful,
        "ranked_sensors": model.ranked_sensors.tolist(),
        "pivot_scores": model.ranking_.pivot_scores.tolist(),
    }
    return io.ResultDocument(
        command="rank",
        parameters=params,
        selected_sensors=model.selected_sensors.tolist(),
        diagnostics=diagnostics,
    )


def cmd_reconstruct(args):
    if args.model is None and args.data is None:
        raise InvalidParams("reconstruct needs training data or --model")
    params = {"sensor_range": args.sensor_range, "seed": args.seed}
    if args.model is not None:
        model = io.load_model(args.model)
        if not isinstance(model, SSPOR):
            raise InvalidParams(f"{args.model} does not hold a reconstruction model")
        params.update(model=str(args.model), model_sha256=io.file_sha256(args.model))
        params["seed"] = model.seed
    else:
        X, _ = io.load_dataset(args.data)
        params.update(_data_params(args.data), basis=args.basis, modes=args.modes)
        model = SSPOR(_basis_spec(args), QR(), None, args.seed).fit(X)

    if args.test is not None:
        X_test, _ = io.load_dataset(args.test)
        params.update(test=str(args.test), test_sha256=io.file_sha256(args.test))
    elif args.data is not None:
        X_test = X if args.model is None else io.load_dataset(args.data)[0]
    else:
        raise InvalidParams("--test is required when reconstructing from a saved model alone")

    errors = model.reconstruction_error(X_test, args.sensor_range)
    curve = [[int(p), float(e)] for p, e in zip(args.sensor_range, errors)]
    csv_path = args.csv
    if csv_path is None and args.output is not None:
        csv_path = Path(args.output).with_suffix(".csv")
    if csv_path is not None:
        with Path(csv_path).open("w") as fh:
            fh.write("n_sensors,rmse\n")
            fh.writelines(f"{p},{io._fmt(e)}\n" for p, e in curve)
    return io.ResultDocument(
        command="reconstruct",
        parameters=params,
        selected_sensors=model.ranked_sensors[: max(args.sensor_range)].tolist(),
        error_curve=curve,
    )


def cmd_classify(args):
    X, y = io.load_dataset(args.data, labels=True)
    if len(np.unique(y)) < 2:
        raise SingleClass(f"{args.data} holds a single class; need at least two")
    if not 0.0 < args.train_frac <= 1.0:
        raise InvalidParams("--train-frac must lie in (0, 1]")
    m = len(y)
    if args.train_frac >= 1.0:
        warnings.warn("train-frac is 1.0; accuracy is measured on the training data", SensorWarning)
        train = test = np.arange(m)
    else:
        order = shuffled_complement(m, [], SeededRng(args.seed))
        n_train = max(1, min(m - 1, int(round(args.train_frac * m))))
        train, test = np.sort(order[:n_train]), np.sort(order[n_train:])

    model = SSPOC(
        basis=_basis_spec(args),
        n_sensors=args.n_sensors,
        threshold=args.threshold,
        l1_penalty=args.l1_penalty,
    ).fit(X[train], y[train])
    if args.save_model:
        io.save_model(model, args.save_model)
    sensors = model.selected_sensors
    accuracy = float(np.mean(model.predict(X[test][:, sensors]) == y[test]))
    params = {
        **_data_params(args.data),
        "basis": args.basis,
        "modes": args.modes,
        "n_sensors": args.n_sensors,
        "l1_penalty": args.l1_penalty,
        "threshold": args.threshold,
        "train_frac": args.train_frac,
        "seed": args.seed,
    }
    return io.ResultDocument(
        command="classify",
        parameters=params,
        selected_sensors=[int(i) for i in sensors],
        accuracy=accuracy,
        diagnostics={"n_train": int(len(train)), "n_test": int(len(test))},
    )


def cmd_generate(args):
    out = Path(args.out)
    params = {"kind": args.kind, "out": str(out), "seed": args.seed}
    if args.kind == "vandermonde":
        _, V = io.vandermonde(args.n_points, args.n_modes)
        io.save_dataset(out, V)
        params.update(n_points=args.n_points, n_modes=args.n_modes)
    elif args.kind == "lowrank":
        io.save_dataset(out, io.lowrank(args.rows, args.cols, args.rank, args.seed))
        params.update(rows=args.rows, cols=args.cols, rank=args.rank)
    elif args.kind == "two-gaussians":
        X, y = io.two_gaussians(args.n_per_class, args.features, args.separation, args.seed)
        io.save_dataset(out, X, labels=y)
        params.update(n_per_class=args.n_per_class, features=args.features, separation=args.separation)
    else:
        shutil.copyfile(io.digits_path(), out)
    params["out_sha256"] = io.file_sha256(out)
    return io.ResultDocument(command="generate", parameters=params, selected_sensors=[])


# Parser ======================================================================


def _add_basis_args(p, default_basis="identity"):
    p.add_argument("--basis", choices=sorted(BASIS_CHOICES), default=default_basis)
    p.add_argument("--modes", type=int, default=None, help="number of basis modes r")


class _Parser(argparse.ArgumentParser):
    """Usage errors also print the JSON error object on stdout."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        _emit(json.dumps({"error": {"type": "UsageError", "message": message, "exit_code": 2}}), None)
        sys.exit(2)


def build_parser():
    parser = _Parser(
        prog="sparse-sensors",
        description="Sparse sensor placement for reconstruction and classification.",
    )
    parser.add_argument("--output", "-o", default=None, help="also write the JSON result here")
    sub = parser.add_subparsers(dest="command", required=True)
    seed_help = f"random seed (default: ${SEED_ENV} or 0)"

    p = sub.add_parser("rank", help="rank sensor locations for reconstruction")
    p.add_argument("data")
    _add_basis_args(p)
    p.add_argument("--optimizer", choices=["qr", "ccqr"], default="qr")
    p.add_argument("--costs", default=None, help="file with one cost per location")
    p.add_argument("--cost-weight", type=float, default=1.0)
    p.add_argument("--n-sensors", type=int, default=None)
    p.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    p.add_argument("--save-model", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("reconstruct", help="reconstruction error versus sensor count")
    p.add_argument("data", nargs="?", default=None)
    p.add_argument("--model", default=None, help="saved SSPOR model (skips fitting)")
    _add_basis_args(p)
    p.add_argument("--sensor-range", type=parse_sensor_range, required=True, help="a..b or p1,p2,...")
    p.add_argument("--test", default=None, help="test snapshots (default: the training data)")
    p.add_argument("--csv", default=None, help="plot-ready CSV of (n_sensors, rmse)")
    p.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("classify", help="select sensors for classification")
    p.add_argument("data", help="labelled dataset, integer label in the first column")
    _add_basis_args(p)
    p.add_argument("--n-sensors", type=int, default=None)
    p.add_argument("--l1-penalty", type=float, default=0.1)
    p.add_argument("--threshold", type=float, default=1e-10)
    p.add_argument("--train-frac", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    p.add_argument("--save-model", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", help="write a synthetic or bundled fixture")
    p.add_argument("--kind", choices=["vandermonde", "lowrank", "two-gaussians", "digits"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n-points", type=int, default=1001)
    p.add_argument("--n-modes", type=int, default=11)
    p.add_argument("--rows", type=int, default=50)
    p.add_argument("--cols", type=int, default=40)
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--n-per-class", type=int, default=500)
    p.add_argument("--features", type=int, default=5)
    p.add_argument("--separation", type=float, default=6.0)
    p.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    p.set_defaults(func=cmd_generate)
    return parser


def _emit(text, output):
    sys.stdout.write(text + "\n")
    if output is not None:
        Path(output).write_text(text + "\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SensorWarning)
            doc = args.func(args)
    except SensorError as exc:
        code, kind, message = exc.exit_code, type(exc).__name__, str(exc)
    except FileNotFoundError as exc:
        code, kind, message = 3, "FileNotFound", f"{exc.filename}: no such file"
    else:
        doc.warnings = [str(w.message) for w in caught if issubclass(w.category, SensorWarning)]
        for msg in doc.warnings:
            print(f"warning: {msg}", file=sys.stderr)
        doc.timing_ms = int(round((time.perf_counter() - start) * 1000))
        _emit(doc.to_json(), args.output)
        return 0
    print(f"error: {message}", file=sys.stderr)
    _emit(json.dumps({"error": {"type": kind, "message": message, "exit_code": code}}), None)
    return code


if __name__ == "__main__":
    sys.exit(main())
