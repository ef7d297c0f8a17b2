import json

import jsonschema
import numpy as np
import pytest

from sparse_sensors import SSPOC, SSPOR, BasisSpec, io
from sparse_sensors.cli import SEED_ENV, main
from sparse_sensors.classifiers import LDA
from sparse_sensors.errors import LabelColumnMissing, ParseError, SensorWarning

FEKETE_X = [1.0, 0.641, 0.0, 0.884, 0.289, 0.47, 0.099, 0.958, 0.763, 0.036]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


@pytest.fixture
def vander_csv(tmp_path):
    path = tmp_path / "vander.csv"
    _, V = io.vandermonde()
    io.save_dataset(path, V)
    return path


@pytest.fixture
def target_csv(tmp_path):
    path = tmp_path / "target.csv"
    x = np.linspace(0, 1, 1001)
    io.save_dataset(path, np.abs(x**2 - 0.5))
    return path


# dataset files ===============================================================


def test_csv_round_trip_is_bit_identical(tmp_path):
    X = io.lowrank(7, 5, 2, seed=3) * 1e-7 + np.pi
    io.save_dataset(tmp_path / "a.csv", X, header=[f"c{j}" for j in range(5)])
    back, _ = io.load_dataset(tmp_path / "a.csv")
    assert np.array_equal(back, X)


def test_labels_round_trip(tmp_path):
    X, y = io.two_gaussians(3, 2, seed=1)
    io.save_dataset(tmp_path / "l.csv", X, labels=y)
    X2, y2 = io.load_dataset(tmp_path / "l.csv", labels=True)
    assert np.array_equal(X2, X) and np.array_equal(y2, y)


def test_malformed_rows_name_the_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n3,oops\n")
    with pytest.raises(ParseError, match=":3:"):
        io.load_dataset(path)
    path.write_text("1,2\n3\n")
    with pytest.raises(ParseError, match=":2:"):
        io.load_dataset(path)


def test_label_column_missing(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("0.5,1\n1.5,2\n")
    with pytest.raises(LabelColumnMissing):
        io.load_dataset(path, labels=True)


def test_digits_fixture_shape():
    X, y = io.digits_subset()
    assert X.shape == (1000, 64)
    assert sorted(np.unique(y).tolist()) == list(range(10))


# rank ========================================================================


def test_rank_vandermonde_fekete(capsys, vander_csv):
    code, doc, _ = run(capsys, "rank", vander_csv, "--modes", 11, "--n-sensors", 10)
    assert code == 0
    x = np.linspace(0, 1, 1001)
    assert np.round(x[doc["selected_sensors"]], 3).tolist() == FEKETE_X
    jsonschema.validate(doc, io.result_schema())


def test_rank_ccqr_zero_weight_matches_qr(capsys, tmp_path, vander_csv):
    costs = tmp_path / "costs.csv"
    io.save_dataset(costs, np.linspace(5, 0, 1001)[:, None])
    _, plain, _ = run(capsys, "rank", vander_csv, "--n-sensors", 10)
    _, zero, _ = run(
        capsys, "rank", vander_csv, "--n-sensors", 10, "--optimizer", "ccqr", "--costs", costs, "--cost-weight", 0
    )
    assert zero["selected_sensors"] == plain["selected_sensors"]
    assert zero["diagnostics"]["ranked_sensors"] == plain["diagnostics"]["ranked_sensors"]


def test_rank_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,x\n")
    code, doc, err = run(capsys, "rank", path)
    assert code == ParseError.exit_code
    assert doc["error"]["type"] == "ParseError"
    assert ":2:" in doc["error"]["message"]
    assert "error:" in err


def test_missing_file_exit_code(capsys, tmp_path):
    code, doc, _ = run(capsys, "rank", tmp_path / "nope.csv")
    assert code == 3
    assert doc["error"]["type"] == "FileNotFound"


def test_rank_is_reproducible(capsys, tmp_path):
    path = tmp_path / "lr.csv"
    io.save_dataset(path, io.lowrank(30, 40, 4, seed=1))
    runs = [run(capsys, "rank", path, "--basis", "rsvd", "--modes", 4, "--n-sensors", 9, "--seed", 7)[1] for _ in range(2)]
    for doc in runs:
        doc.pop("timing_ms")
    assert runs[0] == runs[1]
    assert runs[0]["parameters"]["seed"] == 7
    assert runs[0]["warnings"]


def test_seed_from_environment(capsys, monkeypatch, tmp_path):
    path = tmp_path / "lr.csv"
    io.save_dataset(path, io.lowrank(20, 15, 3, seed=2))
    monkeypatch.setenv(SEED_ENV, "42")
    _, doc, _ = run(capsys, "rank", path)
    assert doc["parameters"]["seed"] == 42
    _, doc, _ = run(capsys, "rank", path, "--seed", 5)
    assert doc["parameters"]["seed"] == 5


# reconstruct =================================================================


def test_reconstruct_error_curve_and_csv(capsys, tmp_path, vander_csv, target_csv):
    out = tmp_path / "curve.json"
    code, doc, _ = run(capsys, "-o", out, "reconstruct", vander_csv, "--test", target_csv, "--sensor-range", "2..11")
    assert code == 0
    curve = np.array(doc["error_curve"])
    assert curve[:, 0].tolist() == list(range(2, 12))
    assert curve[-1, 1] < curve[0, 1]
    assert json.loads(out.read_text()) == doc
    lines = out.with_suffix(".csv").read_text().splitlines()
    assert lines[0] == "n_sensors,rmse"
    assert [float(v.split(",")[1]) for v in lines[1:]] == curve[:, 1].tolist()
    jsonschema.validate(doc, io.result_schema())


def test_reconstruct_in_span_single_p(capsys, tmp_path):
    path = tmp_path / "lr.csv"
    io.save_dataset(path, io.lowrank(25, 30, 4, seed=3))
    _, doc, _ = run(capsys, "reconstruct", path, "--basis", "svd", "--modes", 4, "--sensor-range", "4")
    assert doc["error_curve"][0][1] < 1e-8


def test_reconstruct_empty_range_is_usage_error(capsys, vander_csv):
    with pytest.raises(SystemExit) as exc:
        main(["reconstruct", str(vander_csv), "--sensor-range", "5..4"])
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().out)["error"]["exit_code"] == 2


def test_reconstruct_from_saved_model(capsys, tmp_path, vander_csv, target_csv):
    model = tmp_path / "m.json"
    run(capsys, "rank", vander_csv, "--save-model", model)
    _, direct, _ = run(capsys, "reconstruct", vander_csv, "--test", target_csv, "--sensor-range", "3..6")
    _, saved, _ = run(capsys, "reconstruct", "--model", model, "--test", target_csv, "--sensor-range", "3..6")
    assert saved["error_curve"] == direct["error_curve"]


# classify ====================================================================


def test_classify_digits(capsys, tmp_path):
    code, doc, _ = run(
        capsys, "classify", io.digits_path(), "--basis", "svd", "--modes", 10, "--n-sensors", 10, "--l1-penalty", 1e-3
    )
    assert code == 0
    assert len(doc["selected_sensors"]) == 10
    assert doc["accuracy"] >= 0.30
    assert doc["diagnostics"] == {"n_train": 700, "n_test": 300}
    jsonschema.validate(doc, io.result_schema())


def test_classify_default_penalty_too_large_for_digits(capsys):
    code, doc, _ = run(capsys, "classify", io.digits_path(), "--basis", "svd", "--modes", 10)
    assert doc["error"]["type"] == "NoSensorsSelected"
    assert code == 42


def test_classify_full_train_frac_warns(capsys, tmp_path):
    path = tmp_path / "g.csv"
    X, y = io.two_gaussians(40, 4, seed=5)
    io.save_dataset(path, X, labels=y)
    code, doc, err = run(capsys, "classify", path, "--train-frac", 1.0)
    assert code == 0
    assert any("training data" in w for w in doc["warnings"])
    assert "warning:" in err
    assert doc["diagnostics"]["n_test"] == 80


def test_classify_single_class(capsys, tmp_path):
    path = tmp_path / "one.csv"
    io.save_dataset(path, np.ones((5, 3)), labels=np.zeros(5))
    code, doc, _ = run(capsys, "classify", path)
    assert doc["error"]["type"] == "SingleClass"
    assert code == 40


# generate ====================================================================


def test_generate_vandermonde(capsys, tmp_path):
    out = tmp_path / "v.csv"
    code, doc, _ = run(capsys, "generate", "--kind", "vandermonde", "--out", out)
    V, _ = io.load_dataset(out)
    assert V.shape == (11, 1001)
    assert np.all(V[0] == 1.0)
    assert np.array_equal(V[1], np.linspace(0, 1, 1001))
    assert np.array_equal(V, io.vandermonde()[1])
    assert doc["parameters"]["out_sha256"] == io.file_sha256(out)


def test_generate_lowrank_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "generate", "--kind", "lowrank", "--rank", 3, "--seed", 4, "--out", a)
    run(capsys, "generate", "--kind", "lowrank", "--rank", 3, "--seed", 4, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert np.linalg.matrix_rank(io.load_dataset(a)[0]) == 3


def test_generate_two_gaussians_separable(capsys, tmp_path):
    out = tmp_path / "g.csv"
    run(capsys, "generate", "--kind", "two-gaussians", "--separation", 6, "--out", out)
    X, y = io.load_dataset(out, labels=True)
    assert np.mean(LDA().fit(X, y).predict(X) == y) >= 0.99


def test_generate_invalid_params(capsys, tmp_path):
    code, doc, _ = run(capsys, "generate", "--kind", "lowrank", "--rank", 0, "--out", tmp_path / "x.csv")
    assert doc["error"]["type"] == "InvalidParams"
    assert code == 52


# result documents and models =================================================


def test_result_document_round_trip():
    doc = io.ResultDocument(
        command="reconstruct",
        parameters={"seed": 1, "p": [2, 3]},
        selected_sensors=[4, 1],
        error_curve=[[2, 0.5], [3, 0.25]],
        timing_ms=12,
    )
    assert io.ResultDocument.from_json(doc.to_json()) == doc
    jsonschema.validate(doc.to_dict(), io.result_schema())
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({**doc.to_dict(), "extra": 1}, io.result_schema())


def test_sspor_model_round_trip(tmp_path):
    X = io.lowrank(20, 30, 5, seed=6)
    with pytest.warns(SensorWarning, match="only the first 5"):
        model = SSPOR(BasisSpec("svd", 5), n_sensors=7, seed=2).fit(X)
    io.save_model(model, tmp_path / "m.json")
    back = io.load_model(tmp_path / "m.json")
    assert np.array_equal(back.ranked_sensors, model.ranked_sensors)
    assert np.array_equal(back.basis_.modes, model.basis_.modes)
    assert np.array_equal(back.predict(X[:2, back.selected_sensors]), model.predict(X[:2, model.selected_sensors]))


def test_sspoc_model_round_trip(tmp_path, digits_split):
    X, y, X_test, _ = digits_split
    model = SSPOC(BasisSpec("svd", 10), n_sensors=10, l1_penalty=1e-3).fit(X, y)
    io.save_model(model, tmp_path / "c.json")
    back = io.load_model(tmp_path / "c.json")
    assert np.array_equal(back.selected_sensors, model.selected_sensors)
    sub = X_test[:, model.selected_sensors]
    assert np.array_equal(back.predict(sub), model.predict(sub))
