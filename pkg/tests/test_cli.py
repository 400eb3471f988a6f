import csv
import io
import json
import math
import os

import pytest

from bocross import cli
from bocross import radial_kernel as rk
from bocross.verify import CHECK_NAMES


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_fig6_table(tmp_path):
    code, out = run(tmp_path, "--command", "fig6")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 300
    assert list(rows[0]) == list(cli.TABLE_COLUMNS)
    assert float(rows[0]["rho"]) == 0.0
    assert float(rows[0]["phi_plus"]) == pytest.approx(1 / (2 * math.pi * math.sqrt(6)), rel=1e-14)
    assert rows[0]["wkb_plus"] == ""
    for row in rows:
        if float(row["rho"]) >= 12:
            env = float(row["envelope"])
            for c in ("plus", "minus"):
                assert abs(float(row[f"phi_{c}"]) - float(row[f"wkb_{c}"])) < 0.05 * env


def test_two_points_and_precision_digits(tmp_path):
    code, out = run(tmp_path, "--rho-min", "0.5", "--rho-max", "2", "--n", "2", "--precision", "20")
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    mantissa = lines[1].split(",")[1].split("e")[0].lstrip("-").replace(".", "")
    assert len(mantissa) == 20


def test_csv_and_json_carry_identical_numbers(tmp_path):
    args = ("--rho-min", "0.5", "--rho-max", "6", "--n", "5", "--log-grid")
    _, c = run(tmp_path, *args, "--format", "csv", name="a.csv")
    _, j = run(tmp_path, *args, "--format", "json", name="a.json")
    crow = read_csv(c)
    text = j.read_text()
    payload = json.loads(text)
    assert payload["meta"]["config"]["log_grid"] is True
    assert len(payload["rows"]) == len(crow)
    for name in cli.TABLE_COLUMNS:
        for cr in crow:
            if cr[name]:
                assert f'"{name}": {cr[name]}' in text


def test_output_is_deterministic_and_atomic(tmp_path):
    _, a = run(tmp_path, "--n", "4", "--rho-max", "3", name="a.csv")
    _, b = run(tmp_path, "--n", "4", "--rho-max", "3", name="b.csv")
    assert a.read_bytes() == b.read_bytes()
    assert sorted(os.listdir(tmp_path)) == ["a.csv", "b.csv"]


def test_env_precision(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.PRECISION_ENV, "18")
    code, out = run(tmp_path, "--n", "2", "--rho-min", "1", "--rho-max", "2", "--format", "json")
    assert code == 0
    assert json.loads(out.read_text())["meta"]["config"]["precision_digits"] == 18
    monkeypatch.setenv(cli.PRECISION_ENV, "lots")
    assert run(tmp_path, "--n", "2")[0] == 2


@pytest.mark.parametrize(
    "args",
    [
        ("--command", "scan", "--mu-list", "1e-4"),
        ("--command", "scan", "--mu-list", "1e-4,1e-5,1e-6,2e-6"),
        ("--m", "1"),
        ("--rho-min", "3", "--rho-max", "1"),
        ("--n", "1"),
        ("--precision", "8"),
        ("--log-grid", "--rho-min", "0"),
        ("--command", "tabulate", "--m=-1/2"),
    ],
)
def test_validation_errors_exit_2(tmp_path, args):
    assert run(tmp_path, *args)[0] == 2


def test_unknown_flag_value_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--command", "plot"])
    assert exc.value.code == 2


def test_runtime_error_exits_1(tmp_path):
    assert cli.main(["--n", "2", "--out", str(tmp_path / "missing" / "x.csv")]) == 1


@pytest.mark.parametrize("observable,expected", [("mixing", 1 / 6), ("amplitude", -0.25)])
def test_scan_defaults(tmp_path, observable, expected):
    code, out = run(tmp_path, "--command", "scan", "--observable", observable, "--format", "json")
    assert code == 0
    payload = json.loads(out.read_text())
    assert abs(payload["meta"]["fitted_exponent"] - expected) < 1e-3
    assert [r["mu"] for r in payload["rows"]] == [1e-4, 1e-5, 1e-6, 1e-7, 1e-8]


def test_scan_csv_columns(tmp_path):
    code, out = run(tmp_path, "--command", "scan", "--mu-list", "1e-3,1e-4,1e-5,1e-6")
    assert code == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(cli.SCAN_COLUMNS) and len(rows) == 4


def test_verify_report(tmp_path):
    code, out = run(tmp_path, "--command", "verify")
    report = json.loads(out.read_text())
    assert code == 0 and report["passed"]
    names = [c["name"] for c in report["checks"]]
    assert names == list(CHECK_NAMES) and len(set(names)) == len(names)
    assert all({"name", "measured", "threshold", "passed"} <= set(c) for c in report["checks"])


def test_verify_catches_prefactor_sign_flip(tmp_path, monkeypatch):
    orig = rk._coupling_prefactors
    monkeypatch.setattr(rk, "_coupling_prefactors", lambda m: (-orig(m)[0], orig(m)[1]))
    code, out = run(tmp_path, "--command", "verify")
    report = {c["name"]: c for c in json.loads(out.read_text())["checks"]}
    assert code == 1
    assert not report["residual.basis"]["passed"]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "bocross", "--n", "2", "--rho-max", "1"], capture_output=True, text=True, check=True
    )
    assert proc.stdout.splitlines()[0] == ",".join(cli.TABLE_COLUMNS)
