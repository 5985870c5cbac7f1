import json

import numpy as np
import pytest

from outlierfree.cli import main
from outlierfree.formats import read_matrix_market


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symbol_table(capsys):
    code, out, _ = run(capsys, "symbol", "--p", "1", "--r", "1", "--samples", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,value"
    vals = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    np.testing.assert_allclose(vals, [(0, 0), (np.pi / 2, 2), (np.pi, 4)], atol=1e-14)
    code, out, _ = run(capsys, "symbol", "--p", "1", "--r", "0", "--samples", "3", "--format", "json")
    obj = json.loads(out)
    assert obj["rows"][-1]["value"] == pytest.approx(1 / 3, abs=1e-15)
    assert list(obj["rows"][0]) == ["theta", "value"]


def test_eigs_linear(capsys):
    code, out, _ = run(capsys, "eigs", "--p", "1", "--kind", "dirichlet", "--n", "3")
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 3
    lam = np.array([float(r.split(",")[2]) for r in rows])
    th = np.arange(1, 4) * np.pi / 4
    np.testing.assert_allclose(lam, 6 * 16 * (1 - np.cos(th)) / (2 + np.cos(th)), rtol=1e-12)


def test_eigs_vectors(capsys):
    code, out, _ = run(capsys, "eigs", "--p", "2", "--kind", "mixed", "--n", "4", "--vectors",
                       "--format", "json")
    obj = json.loads(out)
    assert len(obj["rows"][0]["vector"]) == 4 and obj["algebra"] == "tau(0,1)"


def test_threshold_messages(capsys):
    code, _, err = run(capsys, "verify-structure", "--p", "3", "--kind", "neumann", "--n", "4")
    assert code == 1
    assert "max{2p-floor(p/2)" in err and "= 5" in err
    code, _, err = run(capsys, "spectrum", "--p", "2", "--kind", "reduced", "--n", "2")
    assert code == 1 and "p+p/2 = 3" in err


def test_verify_structure_ok(capsys):
    code, out, _ = run(capsys, "verify-structure", "--p", "4", "--kind", "dirichlet", "--n", "9")
    assert code == 0
    assert out.count("true") == 3


def test_spectrum_report(capsys):
    code, out, _ = run(capsys, "spectrum", "--p", "3", "--kind", "neumann", "--n", "12",
                       "--format", "json", "--sorted")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_ok"] is True
    assert obj["rows"][0]["rel_error"] is None
    assert set(obj["rows"][0]) == {"j", "theta", "lambda_discrete", "lambda_exact", "rel_error",
                                   "bound_rhs", "ok"}


def test_tolerance_failure_exit_code(capsys):
    code, _, _ = run(capsys, "spectrum", "--p", "2", "--n", "10", "--tol", "-1")
    assert code == 2


def test_solve_exit_codes(capsys):
    code, out, _ = run(capsys, "solve", "--p", "2", "--kind", "neumann", "--n", "8", "--r", "1")
    assert code == 3
    code, out, _ = run(capsys, "solve", "--p", "2", "--kind", "neumann", "--n", "8", "--r", "0",
                       "--format", "json")
    assert code == 0 and json.loads(out)["relative_residual"] < 1e-12


def test_usage_errors(capsys):
    assert run(capsys, "eigs", "--p", "1")[0] == 1
    assert run(capsys, "eigs", "--p", "3", "--n", "8", "--kind", "reduced")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["eigs", "--p", "x", "--n", "3"])
    assert info.value.code == 1
    assert run(capsys, "eigs", "--p", "1", "--n", "3", "--format", "matrixmarket")[0] == 1


def test_matrix_market_round_trip(tmp_path, capsys):
    path = tmp_path / "k.mtx"
    code, _, _ = run(capsys, "assemble", "--p", "3", "--n", "9", "--kind", "mixed", "--r", "1",
                     "--format", "matrixmarket", "--output", str(path))
    assert code == 0
    back = read_matrix_market(path)
    from outlierfree.iga import SpaceSpec, assemble_closed_form
    ref = assemble_closed_form(SpaceSpec(3, 9, "mixed"), 1).dense()
    assert np.abs(back - ref).max() <= 1e-15 * np.abs(ref).max()


def test_assemble_methods_agree(capsys):
    outs = []
    for method in ("quadrature", "closed-form"):
        code, out, _ = run(capsys, "assemble", "--p", "2", "--n", "6", "--method", method,
                           "--format", "json")
        outs.append({(r["i"], r["j"]): r["value"] for r in json.loads(out)["rows"]})
    assert outs[0].keys() == outs[1].keys()
    assert max(abs(outs[0][k] - outs[1][k]) for k in outs[0]) < 1e-14


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"p": 2, "n": 5, "kind": "neumann", "r": 0}))
    code, out, _ = run(capsys, "assemble", "--config", str(cfg), "--n", "6", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["n"] == 6 and obj["kind"] == "neumann"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "assemble", "--config", str(cfg))[0] == 1


def test_deterministic_output(tmp_path, capsys):
    files = []
    for k in range(2):
        path = tmp_path / f"out{k}.csv"
        main(["tensor", "--p", "2", "3", "--n", "5", "6", "--output", str(path)])
        files.append(path.read_bytes())
    capsys.readouterr()
    assert files[0] == files[1]


def test_tensor_command(capsys, monkeypatch):
    monkeypatch.setenv("OFI_THREADS", "1")
    code, out, err = run(capsys, "tensor", "--p", "1", "--n", "4", "4", "4", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["residual_ok"] is True and len(obj["rows"]) == 64
    assert "residual" in err
    monkeypatch.setenv("OFI_THREADS", "zero")
    assert run(capsys, "tensor", "--p", "1", "--n", "4", "4")[0] == 1


def test_seventeen_digits(capsys):
    _, out, _ = run(capsys, "eigs", "--p", "2", "--n", "5")
    value = out.strip().splitlines()[1].split(",")[2]
    assert len(value.replace(".", "").lstrip("0").split("e")[0]) == 17
