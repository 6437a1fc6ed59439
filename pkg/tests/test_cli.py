import json
import subprocess
import sys

from rmlkit.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_census_mrd_cli(capsys):
    code, data = run_cli(capsys, "census", "mrd", "--q", "2", "--m", "4")
    assert code == 0
    assert data["exhaustive_count"] == 1344
    assert data["formula_value"] == 1344
    assert data["match"] is True
    assert data["density"]["decimal"].startswith("0.019155941")


def test_census_mrd_heavy_refused(capsys):
    code = main(["census", "mrd", "--q", "3", "--m", "4"])
    capsys.readouterr()
    assert code == 1


def test_census_one_weight_cli(capsys):
    code, data = run_cli(capsys, "census", "one-weight",
                         "--q", "2", "--m", "2", "--k", "2")
    assert code == 0
    assert data["exhaustive_count"] == data["formula_value"] == 112


def test_whitney_cli_flags_printed_formula_mismatch(capsys):
    code, data = run_cli(capsys, "whitney", "--i", "2", "--n", "4",
                         "--m", "3", "--q", "2", "--j", "1")
    assert code == 2  # the designated mismatch exit code
    assert data["per_j"]["1"]["brute_force"] == -225
    assert data["per_j"]["1"]["closed_formula"] == 360
    assert data["per_j"]["1"]["recursion"] == -225
    assert data["mismatch"] is True
    assert data["discrepancies"]


def test_whitney_cli_brute_only(capsys, tmp_path):
    code, data = run_cli(capsys, "whitney", "--i", "2", "--n", "4", "--m", "3",
                         "--q", "2", "--method", "brute", "--cache", str(tmp_path))
    assert code == 0
    assert data["whitney_first_kind"] == [1, -225, 11680, -89280, 77824]
    cache_file = tmp_path / "lattice_i2_n4_m3_q2.txt"
    assert cache_file.exists()
    # resumes from the cache (fast path; same numbers)
    code2, data2 = run_cli(capsys, "whitney", "--i", "2", "--n", "4", "--m", "3",
                           "--q", "2", "--method", "brute", "--cache", str(tmp_path))
    assert code2 == 0 and data2["whitney_first_kind"] == data["whitney_first_kind"]


def test_whitney_cli_closed_method(capsys):
    code, data = run_cli(capsys, "whitney", "--i", "2", "--n", "4", "--m", "3",
                         "--q", "2", "--method", "closed", "--j", "1")
    assert code == 0
    assert data["closed_formula"]["1"] == 360


def test_verify_hyperovals_cli(capsys):
    code, data = run_cli(capsys, "verify", "hyperovals", "--q", "4")
    assert code == 0
    assert data["prediction_match"] is True
    assert len(data["hyperovals_found"]) == 3


def test_verify_scattered_cli(capsys):
    code, data = run_cli(capsys, "verify", "scattered-mrd", "--q", "2", "--m", "4",
                         "--samples", "60", "--seed", "5")
    assert code == 0
    assert data["violations"] == 0
    assert data["samples"] == 60


def test_density_cli(capsys, tmp_path):
    csv_path = tmp_path / "table.csv"
    out_path = tmp_path / "out.json"
    code, data = run_cli(capsys, "density", "--family", "m4_mrd",
                         "--csv", str(csv_path), "--out", str(out_path))
    assert code == 0
    assert data["limit_check"]["limit_is_half"] is True
    assert csv_path.exists() and out_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert "density" in header


def test_census_out_file(capsys, tmp_path):
    out = tmp_path / "mrd.json"
    code, _ = run_cli(capsys, "census", "mrd", "--q", "2", "--m", "3",
                      "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["exhaustive_count"] == 24


def test_console_script_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "rmlkit.cli", "census",
                           "one-weight", "--q", "2", "--m", "2", "--k", "2",
                           "--mode", "formula"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["formula_value"] == 112
