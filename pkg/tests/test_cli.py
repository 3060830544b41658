import csv
import io
import json
import subprocess
import sys

import pytest

from thermoshift.cli import run

GOLDEN = "poly:-1,-1,1@[1,2]"


@pytest.fixture(autouse=True)
def _cache(tmp_path, monkeypatch):
    monkeypatch.setenv("THERMOSHIFT_CACHE", str(tmp_path / "cache"))


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_lang_commands(capsys):
    code, out = out_of(capsys, ["lang", "expand", "--beta", "rational:5/2", "-n", "12"])
    assert code == 0 and out.out.strip() == "210111000011"
    code, out = out_of(capsys, ["lang", "count", "--beta", GOLDEN, "-n", "4"])
    assert code == 0 and out.out.strip() == "8"
    code, out = out_of(capsys, ["lang", "check", "--beta", GOLDEN, "0101"])
    assert code == 0 and out.out.strip() == "true"
    code, out = out_of(capsys, ["lang", "check", "--beta", GOLDEN, "0110"])
    assert code == 0 and out.out.strip() == "false"
    code, out = out_of(capsys, ["lang", "enum", "--beta", GOLDEN, "-n", "3"])
    assert code == 0 and len(out.out.split()) == 5


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# golden\nbeta = {GOLDEN}\nn = 3\n")
    code, out = out_of(capsys, ["lang", "count", "--config", str(cfg)])
    assert code == 0 and out.out.strip() == "5"
    # explicit flags win over the file
    code, out = out_of(capsys, ["lang", "count", "--config", str(cfg), "-n", "5"])
    assert out.out.strip() == "13"
    cfg.write_text("bogus = 1\n")
    assert run(["lang", "count", "--config", str(cfg), "-n", "2"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["lang", "count", "-n", "3"],
        ["lang", "count", "--beta", GOLDEN],
        ["equilibrium", "--beta", GOLDEN, "-n", "3"],
        ["lang", "count", "--beta", "rational:3", "-n", "3"],
        ["lang", "count", "--beta", "poly:-1,-1,1@[2,3]", "-n", "3"],
        ["kernel", "--beta", GOLDEN, "--window", "[0,1]", "--f", "nope"],
        ["pressure", "--beta", GOLDEN, "-n", "x"],
    ],
)
def test_invalid_input_exit_1(argv, capsys):
    assert run(argv) == 1


def test_budget_exit_2(capsys):
    assert run(["lang", "enum", "--beta", GOLDEN, "-n", "30", "--budget", "10"]) == 2


def test_kernel_report(capsys):
    code, out = out_of(
        capsys,
        ["kernel", "--beta", GOLDEN, "--f", "decay:geom:1,0.5", "--window", "[0,1]",
         "--point", '{"window":[0,2],"letters":[1,0,1]}'],
    )
    assert code == 0
    rep = json.loads(out.out)
    assert rep["schema"] == "thermoshift.report/1"
    assert rep["beta"]["spec"] == GOLDEN
    assert sum(rep["result"]["weights"]) == pytest.approx(1.0)


def test_pressure_csv(tmp_path, capsys):
    path = tmp_path / "p.csv"
    code, _ = out_of(capsys, ["pressure", "--beta", GOLDEN, "-n", "5", "--csv", str(path)])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert [int(r["n"]) for r in rows] == [1, 2, 3, 4, 5]


def test_equilibrium_out_file(tmp_path, capsys):
    path = tmp_path / "nu.json"
    code, _ = out_of(
        capsys, ["equilibrium", "--beta", "rational:5/2", "--target", "[0,1]", "-n", "4", "--out", str(path)]
    )
    assert code == 0
    # the measure itself is written so conformal-check --measure can read it back
    nu = json.loads(path.read_text())
    assert nu["window"] == [0, 1]
    assert sum(nu["weights"].values()) == pytest.approx(1.0)
    code, out = out_of(
        capsys,
        ["conformal-check", "--beta", "rational:5/2", "--window", "[0,1]", "--u", "10", "--v", "02",
         "-n", "0", "--measure", str(path)],
    )
    assert code == 0 and json.loads(out.out)["result"]["measure"] == str(path)


def test_reports_reproducible(capsys):
    argv = ["decay", "--beta", GOLDEN, "-n", "10"]
    run(argv)
    first = json.loads(capsys.readouterr().out)
    run(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("timestamp"), second.pop("timestamp")
    assert first == second


def test_probe_and_conformal(capsys):
    code, out = out_of(capsys, ["probe-markov", "--beta", GOLDEN, "--window", "[0,0]"])
    assert code == 0 and json.loads(out.out)["result"]["witness"] is not None
    code, out = out_of(
        capsys,
        ["conformal-check", "--beta", GOLDEN, "--f", "coord:0", "--window", "[0,0]",
         "--u", "0", "--v", "1", "-n", "3"],
    )
    assert code == 0
    assert "residual" in json.loads(out.out)["result"]


def test_margin_and_verify(capsys):
    code, out = out_of(capsys, ["margin", "--beta", GOLDEN, "-n", "6"])
    assert code == 0 and json.loads(out.out)["result"]["margin"] > 0
    code, out = out_of(capsys, ["verify", "--beta", GOLDEN, "--suite", "core", "-n", "8"])
    assert code == 0 and "[FAIL]" not in out.out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "thermoshift", "lang", "count", "--beta", GOLDEN, "-n", "6"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "21"
