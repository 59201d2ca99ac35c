import json
import re

import numpy as np
import pytest

from belldiag import cli

FLOAT_16E = re.compile(r"^-?\d\.\d{16}e[+-]\d{2,3}$")


def test_sweep_csv_stdout(capsys):
    rc = cli.main(["sweep", "--d", "2", "--steps", "9", "--restarts", "2"])
    assert rc == 0
    out, err = capsys.readouterr()
    lines = out.strip().split("\n")
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 10
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 7
        assert all(FLOAT_16E.match(f) for f in fields)
    # diagnostics go to stderr, not into the data stream
    assert "sweep:" in err


def test_sweep_csv_file_deterministic(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        rc = cli.main(["sweep", "--d", "2", "--steps", "7", "--restarts", "2",
                       "--seed", "3", "--out", str(path)])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().endswith("\n")


def test_sweep_json(capsys):
    rc = cli.main(["sweep", "--d", "2", "--steps", "5", "--restarts", "2",
                   "--format", "json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 5
    for entry in payload:
        assert tuple(entry) == cli.GAP_FIELDS
    assert payload[0]["nu"] == 0.0
    assert payload[-1]["nu"] == 1.0


@pytest.mark.parametrize("argv", [
    ["sweep", "--d", "2", "--steps", "1"],
    ["sweep", "--d", "2", "--nu-min", "0.9", "--nu-max", "0.1"],
    ["sweep", "--d", "1", "--steps", "5"],
    ["sweep", "--d", "2", "--steps", "4", "--restarts", "2",
     "--out", "/nonexistent-dir/x.csv"],
])
def test_sweep_usage_errors(argv, capsys):
    assert cli.main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_minimizers_output(capsys):
    rc = cli.main(["minimizers", "--d", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("# d1 d2 beta gamma")
    assert "total vectors: 12" in out
    assert "distinct modulus profiles: 7" in out
    # one data row per vector (the header line also contains pipes)
    assert sum("|" in line and not line.startswith("#") for line in lines) == 12


def test_gap_detects_minimal_profile(capsys):
    rc = cli.main(["gap", "--d", "4", "--lambda", "0.5,0,0.5,0"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["is_minimizer"] is True
    assert payload["minimizer_spec"] == {"d1": 2, "d2": 2, "beta": 0, "gamma": 0}
    assert abs(payload["gap_bits"]) < 1e-9
    assert payload["converged"] is True


def test_gap_generic_profile(capsys):
    rc = cli.main(["gap", "--d", "2", "--lambda", "0.75,0.25"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["is_minimizer"] is False
    assert payload["minimizer_spec"] is None
    assert payload["gap_bits"] > 1e-3
    assert abs(payload["epsilon_bits"] - 0.35457890266527003) < 1e-9
    assert len(payload["optimizer_phases"]) == 2


def test_gap_uniform_profile(capsys):
    rc = cli.main(["gap", "--d", "3", "--lambda",
                   "0.3333333333333333,0.3333333333333333,0.3333333333333334"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["is_minimizer"] is True
    assert payload["epsilon_bits"] < 1e-9


@pytest.mark.parametrize("argv", [
    ["gap", "--d", "3", "--lambda", "0.5,0.5"],          # wrong length
    ["gap", "--d", "2", "--lambda", "0.8,0.3"],          # sum != 1
    ["gap", "--d", "2", "--lambda", "0.75;0.25"],        # unparsable
    ["state", "--d", "2", "--lambda", "1.2,-0.2", "--show", "eigs"],
])
def test_bad_lambda_is_usage_error(argv, capsys):
    assert cli.main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_passes(capsys):
    rc = cli.main(["verify", "--d-max", "4", "--samples", "20"])
    out = capsys.readouterr().out
    assert rc == 0
    m = re.search(r"(\d+)/(\d+) checks passed", out)
    assert m and m.group(1) == m.group(2)
    assert "FAIL" not in out


def test_verify_absurd_tolerance_fails(capsys):
    rc = cli.main(["verify", "--d-max", "4", "--samples", "10", "--tol", "1e-30"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out


def test_verify_usage_error():
    assert cli.main(["verify", "--samples", "0"]) == 2
    assert cli.main(["verify", "--d-max", "1"]) == 2


def test_state_eigs(capsys):
    rc = cli.main(["state", "--d", "2", "--lambda", "0.75,0.25", "--show", "eigs"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert np.allclose(payload["eigenvalues"], [0.0, 0.0, 0.25, 0.75], atol=1e-12)


def test_state_ptrace(capsys):
    rc = cli.main(["state", "--d", "3", "--lambda", "0.5,0.3,0.2", "--show", "ptrace"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    for side in ("A", "B"):
        rows = payload[f"marginal_{side}"]
        assert len(rows) == 3
        assert rows[0][0].startswith("+0.333333")


def test_state_ptranspose(capsys):
    rc = cli.main(["state", "--d", "2", "--lambda", "1,0", "--show", "ptranspose"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["npt"] is True
    assert abs(payload["pt_min_eigenvalue"] + 0.5) < 1e-12
    # the flat profile is the separable corner: positive partial transpose
    cli.main(["state", "--d", "2", "--lambda", "0.5,0.5", "--show", "ptranspose"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["npt"] is False


def test_state_twirl(capsys):
    rc = cli.main(["state", "--d", "2", "--lambda", "0.2,0.8", "--show", "twirl"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["invariance_distance"] < 1e-12
    assert np.allclose(payload["diagonal_weights"], [0.2, 0.8], atol=1e-12)


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
