import json
import subprocess
import sys

import pytest

from inexact_dde.cli import main


def test_solve_lip_to_stdout(capsys):
    assert main(["solve", "--problem", "lip", "--tau", "1", "--n", "1", "--N", "2"]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert lines[0] == "j,k,t,y0"
    assert [l.split(",")[3] for l in lines[4:]] == ["1", "1.5", "2", "2", "2.5", "3.25"]


def test_solve_to_file(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["solve", "--problem", "f4", "--gamma", "0.225", "--N", "10", "--n", "1",
                 "--delta", "0.5", "--mode", "uniform", "--seed", "3", "-o", str(out)]) == 0
    text = out.read_text()
    assert "# mode: uniform" in text and "# seed: 3" in text


def test_envelope_grid(capsys):
    assert main(["envelope", "--kind", "grid", "--gamma", "0.5", "--j", "1", "--h", "0.01", "--delta", "0.04"]) == 0
    h, d, v = capsys.readouterr().out.strip().split(",")
    assert float(v) == pytest.approx(1.10344136151679587, rel=1e-12)


def test_envelope_lipschitz(capsys):
    assert main(["envelope", "--h", "0.01", "0.02", "--delta", "0.05"]) == 0
    vals = [float(l.split(",")[2]) for l in capsys.readouterr().out.splitlines()]
    assert vals == pytest.approx([0.06, 0.07])


def test_bad_input_exit_code(capsys):
    assert main(["solve", "--delta", "3"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ") and "delta" in err


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("delta = 1.5\n")
    assert main(["converge", "--config", str(cfg)]) == 2
    assert "noise.delta" in capsys.readouterr().err


@pytest.mark.parametrize("cmd,files", [
    ("converge", ["convergence.csv", "convergence_summary.csv", "convergence_fit.csv", "lip_1.svg"]),
    ("propagate", ["propagation.csv", "lip_1_cumulative.svg"]),
])
def test_sweep_writes_outputs(tmp_path, cmd, files):
    cfg = tmp_path / "c.txt"
    cfg.write_text("problems = lip\ndelta = 0, 0.1\nN = 20, 40\ntau = 1\nn = 2\ntrials = 2\nR = 4\n")
    out = tmp_path / "out"
    assert main([cmd, "--config", str(cfg), "--out", str(out), "--seed", "5"]) == 0
    for f in files:
        assert (out / f).is_file()
    timings = json.loads((out / f"timings_{cmd}.json").read_text())
    assert timings["failed_trajectories"] == 0 and len(timings["seconds_per_cell"]) == 2
    assert "# config.seed: 5" in (out / files[0]).read_text()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "inexact_dde", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "inexact-dde" in res.stdout
