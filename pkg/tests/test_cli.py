import csv
import io
import json
import math
import subprocess
import sys

import pytest

from jacobi_moments.cli import run
from jacobi_moments.moments import MomentExpansion, moment_expansion
from jacobi_moments.partitions import ModelParams


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_moments_text():
    code, text = call("moments", "--m", "1", "--p", "2", "--d", "5", "--n", "1", "--times", "0")
    assert code == 0
    assert "2/5" in text and "3/5" in text
    assert any(line.split()[0] == "5" for line in text.splitlines() if line.strip())
    assert "M=1" in text


def test_moments_json_round_trip():
    code, text = call("moments", "--m", "2", "--p", "3", "--d", "6", "--n", "3", "--times", "0,0.1,1", "--format", "json")
    assert code == 0
    obj = json.loads(text)
    restored = MomentExpansion.from_json(obj)
    exact = moment_expansion(3, ModelParams(2, 3, 6))
    assert restored == exact
    for row in obj["values"]:
        assert abs(restored.evaluate(row["t"]) - row["value"]) <= 1e-15


@pytest.mark.parametrize("route", ["closed", "oracle", "4f3"])
def test_routes_agree(route):
    _, ref = call("moments", "--m", "3", "--p", "4", "--d", "9", "--n", "2", "--format", "csv")
    code, text = call("moments", "--m", "3", "--p", "4", "--d", "9", "--n", "2", "--route", route, "--format", "csv")
    assert code == 0 and text == ref


def test_moments_csv_headers():
    _, coeffs = call("moments", "--m", "1", "--p", "2", "--d", "5", "--n", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(coeffs)))
    assert rows[0] == ["rate", "coeff_num", "coeff_den"]
    assert rows[1] == ["0", "2", "5"] and rows[2] == ["5", "3", "5"]
    _, values = call("moments", "--m", "1", "--p", "2", "--d", "5", "--n", "1", "--times", "0,1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(values)))
    assert rows[0] == ["t", "value"] and float(rows[1][1]) == 1.0


def test_stationary():
    code, text = call("stationary", "--m", "1", "--p", "2", "--d", "5", "--n", "1", "--format", "json")
    assert code == 0
    assert json.loads(text)["stationary"] == "2/5"


def test_capacity_json_schema():
    code, text = call("capacity", "--m", "1", "--p", "1", "--d", "2", "--stationary", "--rho", "0.5", "--format", "json")
    assert code == 0
    obj = json.loads(text)
    assert set(obj) == {"rho", "t", "N", "value", "bound"}
    assert abs(obj["value"] - (3 * math.log(1.5) - 1)) <= obj["bound"]
    code, text = call("capacity", "--m", "1", "--p", "2", "--d", "5", "--t", "0,1", "--rho", "0.5", "--format", "json")
    assert code == 0 and len(json.loads(text)) == 2


def test_capacity_rho_one_note():
    code, text = call("capacity", "--m", "1", "--p", "2", "--d", "5", "--t", "1", "--rho", "1")
    assert code == 0 and "harmonic" in text


def test_mc_json_schema():
    code, text = call("mc", "--m", "1", "--p", "2", "--d", "5", "--t", "0.1", "--dt", "0.01", "--paths", "200", "--format", "json")
    assert code == 0
    obj = json.loads(text)
    assert {"estimate", "stderr", "paths", "dt"} <= set(obj)
    assert obj["paths"] == 200


def test_mc_capacity_text():
    code, text = call("mc", "--m", "1", "--p", "2", "--d", "5", "--t", "0.1", "--dt", "0.05", "--paths", "100", "--rho", "0.5")
    assert code == 0 and "exact" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["moments", "--m", "3", "--p", "2", "--d", "6", "--n", "1"],
        ["moments", "--m", "1", "--p", "2", "--d", "5", "--n", "0"],
        ["capacity", "--m", "1", "--p", "2", "--d", "5", "--stationary", "--rho", "2"],
        ["moments", "--m", "1", "--p", "2"],
        ["moments", "--m", "1", "--p", "2", "--d", "5", "--n", "3", "--route", "4f3"],
    ],
)
def test_usage_and_domain_errors(argv):
    assert call(*argv)[0] == 2


def test_calibrate_rejects_short_grid():
    assert call("calibrate", "--m", "1", "--p", "2", "--d", "5", "--t-grid", "0.1,0.2", "--paths", "10", "--dt", "0.05")[0] == 2


def test_verify_identity_suite():
    code, text = call("verify", "--suite", "identity")
    assert code == 0
    assert text.count("[PASS]") == len(text.strip().splitlines())


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jacobi_moments", "stationary", "--m", "1", "--p", "1", "--d", "2", "--n", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "1/3" in proc.stdout
