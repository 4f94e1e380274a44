import csv
import json

import pytest

from dermarket.cli import main

from conftest import SCENARIO_FILE

EX = str(SCENARIO_FILE)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "model, price, extra",
    [
        ("full-strategic", 5.5, {"bid_slope": 5.5}),
        ("restricted-strategic", 6.5, {"active_set_size": 1}),
        ("full-truthful", 5.0, {"total_supply": 10.0}),
    ],
)
def test_solve_json(capsys, model, price, extra):
    code, out, _ = run(capsys, "solve", "--scenario", EX, "--model", model)
    assert code == 0
    data = json.loads(out)
    assert data["price"] == pytest.approx(price)
    for key, value in extra.items():
        assert data[key] == pytest.approx(value)


def test_solve_table(capsys):
    code, out, _ = run(capsys, "solve", "--scenario", EX, "--model", "restricted-truthful", "--format", "table")
    assert code == 0
    assert "active_set_size" in out and "322.5" in out


def test_solve_no_active_prosumer(capsys, tmp_path):
    path = tmp_path / "dead.json"
    path.write_text(json.dumps({
        "prosumers": [{"a": -0.1, "b": 10, "capacity": 30}] * 2,
        "generators": {"count": 1, "marginal_cost": 5},
    }))
    code, _, err = run(capsys, "solve", "--scenario", str(path), "--model", "full-truthful")
    assert code == 2
    assert json.loads(err)["error"] == "NoActiveProsumer"


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"prosumers": []}')
    code, _, err = run(capsys, "solve", "--scenario", str(path), "--model", "full-truthful")
    assert code == 2
    assert json.loads(err)["error"] == "ParseError"


def test_missing_file_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--scenario", str(tmp_path / "x.json"), "--model", "full-truthful")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("solve", "--scenario", EX, "--model", "bogus"),
        ("solve", "--scenario", EX),
        ("sweep", "--scenario", EX, "--n-min", "3", "--n-max", "2", "--out", "x.csv"),
        ("sweep", "--scenario", EX, "--n-min", "0", "--n-max", "2", "--out", "x.csv"),
        ("verify", "--scenario", EX, "--tol", "0"),
        ("nonsense",),
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_sweep_writes_csv(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--scenario", EX, "--n-min", "1", "--n-max", "20", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 20
    assert (float(rows[0]["lambda_S"]), float(rows[0]["lambda_SN"])) == (5.5, 6.5)


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", EX, "--random-count", "20")
    assert code == 0
    assert out.rstrip().endswith("RESULT PASS")
    assert "does NOT hold" in out


def test_verify_detects_corrupted_welfare(capsys):
    code, out, _ = run(capsys, "verify", "--scenario", EX, "--random-count", "5", "--perturb-w-s", "1")
    assert code == 3
    assert "FAIL welfare inequality W_T >= W_S" in out
    assert "scenario N=2" in out


def test_verify_is_deterministic(capsys):
    argv = ("verify", "--scenario", EX, "--random-count", "10", "--seed", "42")
    assert run(capsys, *argv) == run(capsys, *argv)
