"""Command-line behavior: reports, exit codes, determinism."""

import json

import numpy as np
import pytest

from gjrep import ArmaModel, LinearPencil, NoiseSpec, PolynomialPencil, make
from gjrep.cli import main
from gjrep.io import dump_model, dump_pencil


@pytest.fixture
def matrix_pencil_file(tmp_path):
    path = tmp_path / "pencil.json"
    path.write_text(json.dumps(dump_pencil(make("matrix", eps=0.5).pencil)))
    return str(path)


@pytest.fixture
def matrix_model_file(tmp_path):
    e = make("matrix", eps=0.5)
    model = ArmaModel(
        a0=e.pencil.c0 - e.pencil.c1,
        a1=e.pencil.c1,
        f0=np.eye(2),
        f1=0.5 * np.eye(2),
        c=np.zeros(2),
    )
    spec = NoiseSpec(kind="gaussian", dim=2, seed=7, burn_in=60)
    path = tmp_path / "model.json"
    path.write_text(json.dumps(dump_model(model, spec)))
    return str(path)


def test_analyze_report(matrix_pencil_file, tmp_path):
    out = tmp_path / "report.json"
    code = main(["analyze", "--pencil", matrix_pencil_file, "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["singularity"] == {"kind": "pole", "order": 1}
    assert rep["projections"]["domain_sin_rank"] == 1
    assert rep["fundamental"]["passed"] is True
    assert rep["fundamental"]["max_residual"] <= 1e-10
    assert rep["separation"]["passed"] is True
    assert set(rep["laurent"]) == {str(j) for j in range(-3, 7)}


def test_analyze_polynomial(tmp_path):
    rng = np.random.default_rng(5)
    c0 = np.array([[1.0], [0.5]]) @ np.array([[1.0, -1.0]])
    poly = PolynomialPencil((c0, rng.standard_normal((2, 2)), 0.3 * np.eye(2)))
    path = tmp_path / "poly.json"
    path.write_text(json.dumps(dump_pencil(poly)))
    out = tmp_path / "rep.json"
    assert main(["analyze", "--pencil", str(path), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["polynomial"]["degree"] == 2
    assert rep["polynomial"]["fundamental_passed"] is True
    assert rep["polynomial"]["unpack_disagreement"] <= 1e-9


def test_analyze_deterministic(matrix_pencil_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", "--pencil", matrix_pencil_file, "--out", str(a)]) == 0
    assert main(["analyze", "--pencil", matrix_pencil_file, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_analyze_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["analyze", "--pencil", str(bad)]) == 3
    assert main(["analyze", "--pencil", str(tmp_path / "missing.json")]) == 3
    bad.write_text(json.dumps({"n": 2}))
    assert main(["analyze", "--pencil", str(bad)]) == 3


def test_config_validation(matrix_pencil_file):
    assert main(["analyze", "--pencil", matrix_pencil_file, "--nodes", "24"]) == 3
    assert main(["analyze", "--pencil", matrix_pencil_file, "--nodes", "8"]) == 3
    assert (
        main(["analyze", "--pencil", matrix_pencil_file, "--tol-fund", "-1e-9"]) == 3
    )
    assert main(["analyze", "--pencil", matrix_pencil_file, "--tol-fund", "0"]) == 3


def test_represent_json_and_csv(matrix_model_file, tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(
        [
            "represent",
            "--model",
            matrix_model_file,
            "--form",
            "extended_s",
            "--T",
            "120",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] is True
    assert rep["residual_max"] <= 1e-6
    assert rep["form"] == "extended_s"
    assert "budgets" in rep and "annulus" in rep

    csv_out = tmp_path / "rep.csv"
    code = main(
        [
            "represent",
            "--model",
            matrix_model_file,
            "--form",
            "extended_ns",
            "--T",
            "40",
            "--format",
            "csv",
            "--out",
            str(csv_out),
        ]
    )
    assert code == 0
    lines = csv_out.read_text().strip().split("\n")
    assert lines[0] == "t,component,coordinate,re,im"
    names = {ln.split(",")[1] for ln in lines[1:]}
    assert names == {
        "stochastic_trend",
        "stationary",
        "det_sin",
        "det_reg",
        "k_term",
        "xhat",
        "oracle",
    }
    # 41 times x 7 components x 2 coordinates
    assert len(lines) == 1 + 41 * 7 * 2


def test_represent_seed_override_changes_path(matrix_model_file, tmp_path):
    a, b, c = (tmp_path / f"{k}.json" for k in "abc")
    base = ["represent", "--model", matrix_model_file, "--form", "extended_ns", "--T", "50"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--seed", "99", "--out", str(b)]) == 0
    assert main(base + ["--out", str(c)]) == 0
    assert a.read_bytes() == c.read_bytes()
    assert a.read_bytes() != b.read_bytes()


def test_represent_natural_divergence_exit(matrix_model_file):
    code = main(
        ["represent", "--model", matrix_model_file, "--form", "natural_s", "--T", "40"]
    )
    assert code == 4


def test_demo_all_pass(capsys):
    for name in ("matrix", "c0", "volterra", "hierarchy"):
        assert main(["demo", "--name", name]) == 0, name
        text = capsys.readouterr().out
        assert "FAIL" not in text
        assert "PASS" in text


def test_demo_param_override(capsys):
    assert main(["demo", "--name", "matrix", "--param", "eps=0.25"]) == 0
    assert main(["demo", "--name", "matrix", "--param", "eps"]) == 3
    assert main(["demo", "--name", "matrix", "--param", "eps=big"]) == 3


def test_demo_unknown_name():
    assert main(["demo", "--name", "unknown"]) == 3


def test_demo_json_format(tmp_path):
    out = tmp_path / "demo.json"
    assert main(["demo", "--name", "c0", "--format", "json", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["name"] == "c0"
    assert all(ch["passed"] for ch in rep["checks"])
