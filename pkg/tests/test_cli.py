import json
import math

import numpy as np
import pytest

from dwradius.cli import main
from dwradius.linalg import save_matrix


@pytest.fixture(autouse=True)
def _inline_workers(monkeypatch):
    monkeypatch.setenv("DWRADIUS_THREADS", "1")


@pytest.fixture()
def matrices(tmp_path):
    paths = {}
    mats = {
        "nil": np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex),
        "eye": np.eye(3, dtype=complex),
        "zero": np.zeros((2, 2), dtype=complex),
        "gen": np.array([[1.0 + 2.0j, 0.5], [0.25j, -1.0]], dtype=complex),
    }
    for name, t in mats.items():
        p = tmp_path / f"{name}.json"
        save_matrix(p, t)
        paths[name] = str(p)
    return paths


def test_compute_text(matrices, capsys):
    rc = main(["compute", "--matrix", matrices["nil"], "--norms", "op,fro"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "w    = 1 " in out
    assert "dw   = 4 " in out
    assert "dw_N = 4.12310563" in out  # nine significant digits
    assert "[fro] dw_N = 4.24264069" in out


def test_compute_json_full_precision(matrices, capsys):
    rc = main(["compute", "--matrix", matrices["nil"], "--norms", "op", "--format", "json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["n"] == 2
    assert obj["per_norm"]["op"]["dw_N"]["value"] == pytest.approx(math.sqrt(17.0), abs=1e-9)
    assert obj["w"]["method"] == "theta_sup"
    assert "theta" in obj["per_norm"]["op"]["w_N"]["witness"]


def test_compute_zero_matrix(matrices, capsys):
    rc = main(["compute", "--matrix", matrices["zero"]])
    out = capsys.readouterr().out
    assert rc == 0
    assert "w    = 0 " in out and "dw   = 0 " in out


def test_compute_csv(matrices, capsys):
    rc = main(["compute", "--matrix", matrices["gen"], "--format", "csv"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "matrix,norm,quantity,value,est_error"
    assert len(lines) == 1 + 2 + 2  # w/dw plus w_N/dw_N for the default norm


def test_bounds_exit_zero_despite_refuted(matrices, capsys):
    rc = main(["bounds", "--matrix", matrices["eye"], "--norms", "op"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "B_REFUTED_UP" in out and "VIOLATED (expected: refuted bound)" in out


def test_bounds_json_rows(matrices, capsys):
    rc = main(["bounds", "--matrix", matrices["nil"], "--norms", "op,w", "--format", "json"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert set(obj["per_norm"]) == {"op", "w"}
    assert len(obj["per_norm"]["op"]) == 21
    eqp2 = next(r for r in obj["per_norm"]["op"] if r["bound"]["id"] == "B_EQP2")
    assert eqp2["lhs"] == pytest.approx(0.5 * math.sqrt(66.0), abs=1e-9)


def test_bounds_pair_mode(matrices, capsys):
    rc = main([
        "bounds", "--matrix", f"{matrices['nil']},{matrices['gen']}",
        "--norms", "op", "--format", "csv",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    tri = [line for line in out.splitlines() if line.startswith("op,B_TRI_")]
    assert len(tri) == 2
    assert all(",True,True" in line for line in tri)


def test_bounds_rejects_three_matrices(matrices, capsys):
    rc = main([
        "bounds", "--matrix",
        ",".join([matrices["nil"], matrices["gen"], matrices["eye"]]),
    ])
    assert rc == 2


def test_parse_and_usage_errors(matrices, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "re": [[1]]}')
    assert main(["compute", "--matrix", str(bad)]) == 2
    assert main(["compute", "--matrix", str(tmp_path / "missing.json")]) == 2
    assert main(["compute", "--matrix", matrices["nil"], "--norms", "sp:bad"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_fuzz_small_run_and_exit_code(matrices, capsys):
    rc = main([
        "fuzz", "--seed", "42", "--dims", "2", "--classes", "projection,hermitian",
        "--norms", "op", "--count", "4", "--format", "json",
    ])
    captured = capsys.readouterr()
    assert rc == 0
    obj = json.loads(captured.out)
    assert obj["totals"]["samples"] == 8
    assert obj["totals"]["unexpected_violations"] == 0
    assert obj["totals"]["refuted_violations"] >= 1


def test_fuzz_count_zero_is_usage_error(capsys):
    assert main(["fuzz", "--count", "0"]) == 2
    assert "count_per_cell" in capsys.readouterr().err


def test_fuzz_out_file_deterministic(tmp_path, capsys):
    args = [
        "fuzz", "--seed", "7", "--dims", "2", "--classes", "diagonal",
        "--norms", "op", "--count", "4", "--format", "json",
    ]
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()


def test_paper_examples_pass(capsys):
    rc = main(["paper-examples"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "FAIL" not in out.replace("0 FAIL", "")
    assert "EXPECTED-DISCREPANCY" in out
    assert "sqrt(17)" in out


def test_paper_examples_json(capsys):
    rc = main(["paper-examples", "--format", "json"])
    assert rc == 0
    checks = json.loads(capsys.readouterr().out)
    statuses = {c["status"] for c in checks}
    assert statuses == {"PASS", "EXPECTED-DISCREPANCY"}


def test_counterexample_default_identity(capsys):
    rc = main(["counterexample"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "bound refuted" in out


def test_counterexample_not_found_on_zero(matrices, capsys):
    rc = main(["counterexample", "--matrix", matrices["zero"]])
    out = capsys.readouterr().out
    assert rc == 1
    assert "no violation" in out


def test_out_flag_writes_file(matrices, tmp_path, capsys):
    dest = tmp_path / "r.json"
    rc = main([
        "compute", "--matrix", matrices["nil"], "--format", "json", "--out", str(dest),
    ])
    capsys.readouterr()
    assert rc == 0
    assert json.loads(dest.read_text())["n"] == 2
