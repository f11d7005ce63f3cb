import io
import json

import pytest

from currentcoh import catalog, formats
from currentcoh.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_oscillator_table(capsys):
    rc, out, _ = run(capsys, "cohomology", "catalog:oscillator", "--all")
    assert rc == 0
    assert "H      1     1     0     1     1" in out


def test_json_schema(capsys):
    rc, out, _ = run(capsys, "--format", "json", "cohomology", "catalog:heisenberg", "--p", "2")
    doc = json.loads(out)
    assert rc == 0 and doc["schema_version"] == 1 and doc["ok"] is True
    assert doc["results"]["H"] == 2
    assert doc["inputs"][0]["sha256"] == formats.fingerprint(catalog.heisenberg())
    assert doc["command"][0] == "--format" and "timing_s" in doc


def test_export_pipes_back(capsys, monkeypatch):
    rc, out, _ = run(capsys, "catalog", "export", "oscillator")
    assert rc == 0 and out == formats.dumps(catalog.oscillator())
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    rc, out2, _ = run(capsys, "cohomology", "-", "--all", "--module", "coadjoint")
    assert rc == 0 and "module coadjoint" in out2


def test_catalog_list(capsys):
    rc, out, _ = run(capsys, "catalog", "list")
    assert rc == 0 and "oscillator" in out and "trunc_poly" in out


def test_sequence_report(capsys):
    rc, out, _ = run(capsys, "current", "catalog:dual_numbers", "catalog:oscillator", "--sequence")
    assert rc == 0 and "dim H²(g) = 2 = 1 + 0 + 1" in out and "PASS" in out


def test_zusmanovich_failure_exit_code(capsys):
    rc, out, _ = run(capsys, "current", "catalog:dual_numbers", "catalog:oscillator", "--zusmanovich")
    assert rc == 1 and "FAIL" in out
    rc, _, _ = run(capsys, "current", "catalog:dual_numbers", "catalog:heisenberg", "--zusmanovich")
    assert rc == 0


def test_current_json_all_reports(capsys):
    rc, out, _ = run(capsys, "--format", "json", "current", "catalog:dual_numbers", "catalog:heisenberg",
                     "--h2", "--b2-check", "--sequence")
    doc = json.loads(out)
    assert rc == 0 and doc["results"]["b2_check"]["equal"] and doc["results"]["sequence"]["exactness_ok"]


@pytest.mark.parametrize("argv", [
    ("cohomology", "catalog:nope"),
    ("cohomology", "catalog:dual_numbers"),
    ("current", "catalog:oscillator", "catalog:oscillator"),
    ("cohomology", "/nonexistent.json"),
    ("catalog", "export"),
    ("verify", "main-sequence", "catalog:dual_numbers"),
])
def test_input_errors_exit_2(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2 and err.startswith("error:")


def test_size_guard(capsys):
    rc, _, err = run(capsys, "current", "catalog:trunc_poly:4", "catalog:abelian:17")
    assert rc == 2 and "--force" in err


def test_bad_file_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n "kind": "lie",\n "basis": ["x", "y"],\n "brackets": {"1,0": {"0": "1"}}\n}\n')
    rc, _, err = run(capsys, "cohomology", str(p))
    assert rc == 2 and f"{p}:4:" in err


@pytest.mark.parametrize("target", ["oscillator-table", "pelc", "lemma-1.1"],
                         ids=["oscillator-table", "pelc", "numbered-alias"])
def test_verify_targets(capsys, target):
    rc, out, _ = run(capsys, "verify", target)
    assert rc == 0 and "FAIL" not in out


def test_verify_pair_inputs(capsys):
    rc, out, _ = run(capsys, "--format", "json", "verify", "cocycle-criterion",
                     "catalog:dual_numbers", "catalog:oscillator")
    doc = json.loads(out)
    assert rc == 0 and "100/100 agree" in doc["results"]["suites"][0]["checks"][0]["detail"]
