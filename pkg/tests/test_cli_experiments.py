import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from haarlab import experiments as ex
from haarlab.cli import main
from haarlab.norms import BootstrapParams, bootstrap_constant

FAST = {"thm-neg-growth": {"N_max": 8}, "chirp-lowerbound": {"N": [12]},
        "coherent-p-infty": {"N": [8, 12]}, "biorthogonality": {}, "refinement-exact": {"count": 10},
        "noncomplete-demo": {"N_max": 8}}


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("thm-neg-growth", "frame-equivalence-sweep", "w1p-frame", "besov-equiv", "chirp-lowerbound",
                 "coherent-p-infty", "biorthogonality", "bootstrap-demo", "refinement-exact",
                 "noncomplete-demo"):
        assert name in out


def test_norm(capsys):
    assert main(["norm", "staircase", "--param", "N=4", "--mode", "dyadic", "--s", "1", "--p", "1",
                 "--q", "inf", "-J", "6"]) == 0
    r = json.loads(capsys.readouterr().out)
    assert r["value"] == 1.0 and r["exact"] == "1"
    assert main(["norm", '{"family": "hat", "j": 0, "mu": 0}', "--mode", "w1p", "--p", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 3.0


def test_norm_from_file(tmp_path, capsys):
    from haarlab.dyadic import indicator
    path = tmp_path / "f.json"
    path.write_text(json.dumps(indicator(0, 1).to_json()))
    assert main(["norm", str(path), "--mode", "bv"]) == 0
    assert json.loads(capsys.readouterr().out)["exact"] == "3"


def test_analyze(capsys, tmp_path):
    assert main(["analyze", "staircase", "--param", "N=3", "-J", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "j,mu,parity,value"
    assert lines[1:] == ["0,0,even,1", "1,0,even,1/2", "2,0,even,1/4"]
    out = tmp_path / "c.csv"
    assert main(["analyze", "hat", "--param", "j=0", "--param", "mu=0", "--kind", "frame", "--out", str(out)]) == 0
    assert "0,0,frame,1/4" in out.read_text()


@pytest.mark.parametrize("argv", [
    ["norm", "nosuchfamily"],
    ["norm", "staircase", "--param", "N=0"],
    ["norm", "staircase", "--param", "M=3"],
    ["norm", "staircase", "--param", "N"],
    ["norm", "staircase", "--param", "N=3", "--p", "0"],
    ["experiment", "nosuch"],
    ["experiment", "thm-neg-growth", "--param", "bogus=1"],
    ["experiment", "thm-neg-growth", "--param", "N_max=x"],
    ["experiment", "thm-neg-growth", "--json", "/nonexistent/cfg.json"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv + (["--out", str(tmp_path)] if argv[0] == "experiment" else [])) == 2


def test_experiment_exit_codes(tmp_path, capsys):
    assert main(["experiment", "coherent-p-infty", "--param", "N=[8]", "--out", str(tmp_path)]) == 0
    # an impossible threshold makes a check fail
    assert main(["experiment", "coherent-p-infty", "--param", "N=[8]", "--param", "c=2",
                 "--out", str(tmp_path)]) == 1
    assert "failed: central[N=8]" in capsys.readouterr().out


def test_experiment_outputs_and_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"N_max": 6}, "seed": 3}))
    assert main(["experiment", "thm-neg-growth", "--json", str(cfg), "--out", str(tmp_path), "--plot"]) == 1
    data = json.loads((tmp_path / "thm-neg-growth.json").read_text())
    assert data["seed"] == 3 and data["params"]["N_max"] == 6
    assert data["theorem"] == "staircase-gap"
    csv_text = (tmp_path / "thm-neg-growth.csv").read_text()
    assert csv_text.splitlines()[0].startswith("seed,p,s,N,")
    assert (tmp_path / "thm-neg-growth.svg").read_text().startswith("<svg")


@pytest.mark.parametrize("name", sorted(FAST))
def test_byte_identical_reruns(name, tmp_path):
    a = ex.run_experiment(name, FAST[name], 5)
    b = ex.run_experiment(name, FAST[name], 5)
    assert a.dumps() == b.dumps() and a.to_csv() == b.to_csv()
    a.write(tmp_path / "a")
    b.write(tmp_path / "b")
    for suffix in (".csv", ".json"):
        assert (tmp_path / "a" / f"{name}{suffix}").read_bytes() == (tmp_path / "b" / f"{name}{suffix}").read_bytes()


def test_refinement_has_no_violations():
    r = ex.run_experiment("refinement-exact", {}, 0)
    assert r.passed and r.summary["violations"] == 0


def test_bootstrap_seed_7():
    r = ex.run_experiment("bootstrap-demo", {"samples": 50, "J": 4}, 7)
    assert r.passed and r.summary["violations"] == 0
    C = bootstrap_constant(BootstrapParams((F(1, 2), 1, F(1, 2)), 1, 2))
    assert r.summary["cases"]["s=1,p=2"]["worst_ratio"] <= C


def test_parameter_validation():
    with pytest.raises(ex.ParameterError):
        ex.run_experiment("thm-neg-growth", {"N_max": "many"}, 0)
    with pytest.raises(ex.ParameterError):
        ex.run_experiment("nope", {}, 0)


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "haarlab.cli", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "bootstrap-demo" in out.stdout
