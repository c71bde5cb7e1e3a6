import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from dimersep.chain import dump_spec
from dimersep.cli import main

from conftest import xy_dimer

SPECS = Path(__file__).resolve().parents[1] / "specs"


@pytest.fixture
def spec8(tmp_path):
    path = tmp_path / "n8.json"
    dump_spec(xy_dimer(8, 0.9, 0.25), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_sweep_writes_csv(capsys, spec8, tmp_path):
    out = tmp_path / "s.csv"
    code, summary = run(capsys, "sweep", "--spec", spec8, "--from", "0.05", "--to", "1.0", "--points", "25",
                        "--pairs", "1:2,2:4", "--csv", str(out))
    assert code == 0 and summary["rows"] == 25 and summary["gap_sign_changes"] == 4
    with open(out, newline="") as fh:
        lines = fh.read().split("\r\n")
    assert lines[0].startswith("# dimersep sweep schema v1")
    rows = list(csv.DictReader(lines[1:]))
    assert rows[0]["C_1_2"] and rows[0]["align_2_4"]


def test_transitions(capsys, spec8):
    code, rep = run(capsys, "transitions", "--spec", spec8, "--from", "0", "--to", "0.6", "--points", "200")
    assert code == 0 and rep["count"] == 4 and abs(rep["last_error"]) < 1e-10


def test_side_limits(capsys, spec8):
    code, out = run(capsys, "side-limits", "--spec", spec8, "--ray", "ratio:3")
    assert code == 0 and out["exact"]["minus"]["max_deviation"] < 1e-10
    assert "values" not in out["sides"]["below"]


def test_strong_field(capsys, spec8):
    code, rows = run(capsys, "strong-field", "--spec", spec8, "--b", "40,50")
    assert code == 0 and [r["b"] for r in rows] == [40.0, 50.0]


def test_factorize(capsys, spec8):
    code, out = run(capsys, "factorize", "--spec", spec8)
    assert code == 0 and out["residual"] < 1e-10 and out["rpa_max_bminus"] < 1e-12


def test_collective(capsys, spec8):
    code, out = run(capsys, "collective", "--spec", spec8, "--ray", "ratio:3", "--points", "20")
    assert code == 0 and out["backend"] == "collective" and out["pairs"] == ["1:2", "1:3", "2:4"]


def test_validate_exit_codes(capsys, tmp_path):
    code, rep = run(capsys, "validate", "--n-max", "2", "--draws", "2")
    assert code == 0 and rep["passed"]
    code, rep = run(capsys, "validate", "--n-max", "4", "--draws", "2", "--fault", "g-symmetry",
                    "--dump-dir", str(tmp_path))
    assert code == 1 and Path(rep["reproducer"]).exists()


def test_bad_input(capsys, spec8):
    assert main(["sweep", "--spec", spec8, "--ray", "bogus:1", "--points", "3"]) == 2
    assert "error" in capsys.readouterr().err


def test_presets_load():
    from dimersep.chain import load_spec
    names = sorted(p.name for p in SPECS.glob("*.json"))
    assert "dimer_chi09_alpha025.json" in names
    for p in SPECS.glob("*.json"):
        assert load_spec(p).n >= 2


def test_module_entry_point(spec8):
    res = subprocess.run([sys.executable, "-m", "dimersep", "factorize", "--spec", spec8],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["kind"] == "uniform"
