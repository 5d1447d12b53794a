from __future__ import annotations

import csv
import io
import json
import shutil
import subprocess

import pytest

from mlkit import families as fam
from mlkit.cli import main, run


def run_json(*argv: str) -> tuple[dict, int]:
    text, status = run(list(argv))
    return json.loads(text), status


def failing(payload: dict) -> list[str]:
    return [c["id"] for c in payload["checks"] if c["status"] == "fail"]


def test_verify_family_passes():
    payload, status = run_json("verify-family", "--series", "E3", "--p", "1")
    assert status == 0 and payload["exit_status"] == 0
    assert payload["data"]["r_I"] == 2
    assert payload["data"]["spectrum"][0] == "-1/18"
    ids = [c["id"] for c in payload["checks"]]
    assert ids == sorted(ids)


def test_verify_family_subseries_runs_the_splitting_check():
    payload, status = run_json("verify-family", "--series", "Wsharp", "--p", "12")
    assert status == 0
    assert "Phi_m eigenlattice splits over B1 + B2" in [c["id"] for c in payload["checks"]]


def test_monodromy_command():
    payload, status = run_json("monodromy", "--series", "Q2_0")
    assert status == 0, failing(payload)


def test_triangle_z10_orders():
    payload, status = run_json("triangle", "--case", "Z10", "--samples", "5")
    assert status == 0, failing(payload)
    assert payload["data"]["orders"] == [2, 3, 14]


def test_triangle_s10_reports_extra_candidate():
    payload, status = run_json("triangle", "--case", "S10", "--samples", "3")
    assert status == 1
    assert failing(payload) == ["step 2 candidate list"]
    row = next(c for c in payload["checks"] if c["id"] == "step 2 candidate list")
    assert row["actual"] == [[1, 1], [2, 2], [2, 3]]


def test_spectra_both_methods():
    payload, status = run_json("spectra", "--family", "Q2_0", "--method", "both")
    assert status == 0
    spectra = payload["data"]["spectra"]
    assert spectra["weights"] == spectra["charpoly"]
    # the weights method is only defined for quadrangle families
    assert run(["spectra", "--family", "W", "--p", "3", "--method", "weights"])[1] == 2


def test_herm_table_and_pell():
    payload, status = run_json("herm-table", "--series", "Q2", "--r", "1")
    assert status == 0, failing(payload)
    payload, status = run_json("pell", "--m", "12", "--w", "2*p1*(p1+2)", "--height", "3")
    assert status == 0
    assert {"a": ["2", "1"], "c": ["1", "0"]} in payload["data"]["solutions"]


def test_gz_command():
    payload, status = run_json("gz", "--series", "Ssharp", "--count", "2", "--height", "50")
    assert status == 0, failing(payload)
    assert len(payload["data"]["elements"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["catalog"],
        ["verify-family", "--series", "X9"],
        ["verify-family", "--series", "W"],
        ["triangle", "--case", "A7"],
        ["pell", "--m", "12", "--w", "p1 +"],
        ["pell", "--m", "12", "--w", "2", "--height", "2"],
        ["gz", "--series", "W1_0"],
        ["verify-family", "--series", "E3", "--p", "1", "--digits", "2"],
        ["verify-family", "--series", "E3", "--p", "1", "--catalog", "/nonexistent/catalog.json"],
    ],
)
def test_usage_errors_exit_two(argv):
    text, status = run(argv)
    assert status == 2
    assert text.startswith("mlk: error:")


def test_failed_check_exits_one(tmp_path):
    catalog = json.loads(fam.catalog_text())
    rule = next(r for r in catalog["series"]["E3"]["action"] if "to" in r)
    key = next(iter(rule["to"]))
    rule["to"][key] += 1
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(catalog))
    payload, status = run_json("verify-family", "--series", "E3", "--p", "3", "--catalog", str(path))
    assert status == 1
    assert failing(payload) == ["monodromy action list"]
    # the override does not leak into later calls
    assert run(["verify-family", "--series", "E3", "--p", "3"])[1] == 0


def test_output_is_deterministic():
    argv = ["triangle", "--case", "Q20", "--samples", "4"]
    assert run(argv) == run(argv)
    other = run(argv + ["--seed", "7"])
    assert other[1] == 0


def test_csv_output():
    text, status = run(["spectra", "--family", "W1_0", "--format", "csv"])
    assert status == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["id", "status", "expected", "actual", "anchor"]
    assert all(row[1] == "pass" for row in rows[1:])


def test_digits_from_environment(monkeypatch):
    baseline = run(["triangle", "--case", "W10", "--samples", "1"])
    monkeypatch.setenv("MLK_DIGITS", "50")
    assert run(["triangle", "--case", "W10", "--samples", "1"])[1] == 0
    monkeypatch.setenv("MLK_DIGITS", "many")
    assert run(["triangle", "--case", "W10", "--samples", "1"])[1] == 2
    monkeypatch.delenv("MLK_DIGITS")
    assert run(["triangle", "--case", "W10", "--samples", "1"]) == baseline


def test_catalog_dump_roundtrip(tmp_path):
    text, status = run(["catalog", "--dump"])
    assert status == 0
    path = tmp_path / "copy.json"
    path.write_text(text)
    payload, status = run_json("verify-family", "--series", "Z", "--p", "2", "--catalog", str(path))
    assert status == 0 and payload["data"]["r_I"] == 2


def test_main_writes_streams(capsys):
    assert main(["spectra", "--family", "S1_0"]) == 0
    assert json.loads(capsys.readouterr().out)["exit_status"] == 0
    assert main(["catalog"]) == 2
    assert "catalog needs --dump" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("mlk") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["mlk", "triangle", "--case", "W10", "--samples", "2"], capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert json.loads(done.stdout)["data"]["orders"] == [2, 12, 12]
