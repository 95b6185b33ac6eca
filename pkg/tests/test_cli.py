import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from kshcst import cli, core
from kshcst.errors import QuadratureError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_norms_circle_quadratic(capsys):
    code, out, err = run(["norms", "--group", "s1", "--h", "quadratic", "--tau2", "1",
                          "--lambda-max", "3"], capsys)
    assert code == 0
    table = rows(out)
    assert [r["lambda"] for r in table] == [str(n) for n in range(-3, 4)]
    assert all(abs(float(r["defect"])) < 1e-8 for r in table)
    assert list(table[0]) == ["group", "h_family", "h_params", "hbar", "tau1", "tau2", "lambda",
                              "h_lambda", "log_a2_shifted", "defect", "quad_err"]
    manifest = json.loads(err)
    assert set(manifest) == {"config", "version", "started_at", "rows_written", "max_quad_err"}
    assert manifest["rows_written"] == 7
    assert manifest["started_at"].endswith("+00:00")


def test_norms_su2_quadratic(capsys):
    code, out, _ = run(["norms", "--group", "su2", "--tau2", "2", "--lambda-max", "2"], capsys)
    assert code == 0
    assert all(abs(float(r["defect"])) < 1e-6 for r in rows(out))


def test_norms_grid_product(capsys):
    code, out, _ = run(["norms", "--h", "quartic:0.1", "--tau1", "0,1", "--tau2", "1,2",
                        "--hbar", "1,0.5"], capsys)
    table = rows(out)
    assert code == 0 and len(table) == 8
    # tau1 only enters as a phase
    assert table[0]["log_a2_shifted"] == table[1]["log_a2_shifted"]


@pytest.mark.parametrize("argv", [["norms", "--tau2", ","], ["norms", "--hbar", ""],
                                  ["norms", "--tau2", "-1"], ["norms", "--lambda-max", "-1"],
                                  ["norms", "--group", "b:2"], ["norms", "--h", "cubic"],
                                  ["norms", "--tau2", "x"], ["stardefect", "--group", "su2"],
                                  ["stardefect", "-N", "4", "--m", "3"], ["bogus"],
                                  ["norms", "--h", "radial:-0.5,1"]])
def test_config_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_numeric_failure_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise QuadratureError("integrand is nan", node=np.array([0.5]))
    monkeypatch.setattr(core, "a_lambda", boom)
    code, _, err = run(["norms", "--lambda-max", "1"], capsys)
    assert code == 3
    assert "lambda=-1" in err and "node=[0.5]" in err


def test_b1fit_circle(capsys):
    code, out, _ = run(["b1-fit", "--group", "s1", "--h", "quartic:0.1"], capsys)
    (row,) = rows(out)
    assert code == 0
    assert float(row["b1_closed"]) == pytest.approx(-0.075)
    assert float(row["b1_fit"]) == pytest.approx(-0.0372339663884036, rel=1e-7)
    assert float(row["laplace_gap"]) < 0.01


def test_b1fit_quadratic_zero(capsys):
    code, out, _ = run(["b1-fit", "--group", "s1", "--h", "quadratic"], capsys)
    (row,) = rows(out)
    assert abs(float(row["b1_fit"])) < 1e-10 and float(row["b1_closed"]) == 0.0


def test_b1fit_su2_has_no_closed_form(capsys):
    code, out, _ = run(["b1-fit", "--group", "su2", "--h", "quartic:0.1"], capsys)
    (row,) = rows(out)
    assert code == 0 and row["b1_closed"] == "" and row["rel_gap"] == ""
    assert float(row["b1_fit"]) < 0


def test_semiclassical(capsys):
    code, out, _ = run(["semiclassical", "--group", "s1", "--h", "quartic:0.1", "--tau2", "1",
                        "--hbar", "1,0.5,0.25,0.125", "--lambda-max", "0"], capsys)
    gaps = [float(r["abs_ratio_minus_1"]) for r in rows(out)]
    assert code == 0 and len(gaps) == 4
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_stardefect_quadratic(capsys):
    code, out, _ = run(["stardefect", "--group", "s1", "--h", "quadratic", "--tau2", "1",
                        "-N", "16"], capsys)
    table = rows(out)
    assert code == 0 and {r["m"] for r in table} == {"1", "2"}
    assert max(float(r["star_defect"]) for r in table) < 1e-8
    assert max(float(r["growth_defect"]) for r in table) < 1e-8


def test_covariance(capsys):
    code, out, _ = run(["covariance", "--h", "quartic:0.1", "--samples", "5", "-N", "8"], capsys)
    table = rows(out)
    assert code == 0 and len(table) == 5
    assert max(float(r["covariance_defect"]) for r in table) < 1e-12


def test_validate_ok_and_failure(capsys):
    code, out, _ = run(["validate", "--group", "su2", "--h", "quartic:0.1"], capsys)
    assert code == 0 and all(r["passed"] == "true" for r in rows(out))
    code, out, _ = run(["validate", "--group", "s1", "--h", "radial:-0.5,1"], capsys)
    assert code == 4
    assert {r["suite"] for r in rows(out) if r["passed"] == "false"} >= {"convexity_certificate"}


def test_reproducible_csv_and_manifest(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["norms", "--group", "su2", "--h", "quartic:0.1", "--lambda-max", "2",
                         "--tau2", "0.5,2", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    m0 = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    m1 = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    m0.pop("started_at"), m1.pop("started_at")
    m0["config"].pop("out"), m1["config"].pop("out")
    assert m0 == m1
    assert m0["rows_written"] == 6 and m0["max_quad_err"] < 1e-9
    assert m0["config"]["tau2"] == [0.5, 2.0]


def test_csv_round_trip_precision(capsys):
    _, out, _ = run(["norms", "--h", "quartic:0.1", "--lambda-max", "0"], capsys)
    (row,) = rows(out)
    value = core.a_lambda(core.rs.torus(1), core.cx.quartic(0.1), 0, core.QuantParams()).log_a2_shifted
    assert float(row["log_a2_shifted"]) == value


def test_json_format(capsys):
    code, out, _ = run(["norms", "--format", "json", "--lambda-max", "1"], capsys)
    data = json.loads(out)
    assert code == 0 and len(data) == 3 and data[1]["lambda"] == "0"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kshcst", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "kshcst" in proc.stdout
