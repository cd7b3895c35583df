import json
import shutil
import subprocess
import sys

import pytest

from crimedyn import cli
from crimedyn.experiments import TABLE4
from crimedyn.model import format_params


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = cli.main([*argv, "--out", str(out)])
    return code, out


def manifest(out):
    return [json.loads(line) for line in (out / "manifest.jsonl").read_text().splitlines()]


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "t4.params"
    path.write_text(format_params(TABLE4.params))
    return path


class TestCommands:
    def test_analyze_preset(self, tmp_path, capsys):
        code, out = run(tmp_path, "analyze", "--preset", "table4")
        assert code == 0
        data = json.loads((out / "analysis.json").read_text())
        assert data["regime"] == "unique-endemic"
        assert "MISMATCH" in capsys.readouterr().out
        (entry,) = manifest(out)
        assert entry["command"] == "analyze" and entry["preset"] == "table4"
        assert len(entry["warnings"]) == 1

    def test_analyze_positional_file(self, tmp_path, params_file):
        code, out = run(tmp_path, "analyze", str(params_file))
        assert code == 0
        assert manifest(out)[0]["inputs"]["beta"] == TABLE4.params.beta

    def test_simulate(self, tmp_path):
        code, out = run(tmp_path, "simulate", "--preset", "table3", "--t-end", "5", "--output-interval", "1")
        assert code == 0
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[0] == "t,S1,S2,C,R" and len(lines) == 7
        meta = json.loads((out / "trajectory.json").read_text())
        assert meta["seed"] == 0 and meta["config"]["output_interval"] == 1.0

    def test_simulate_y0(self, tmp_path):
        code, out = run(tmp_path, "simulate", "--preset", "table4", "--t-end", "1", "--y0", "1,2,3,4")
        assert code == 0
        assert (out / "trajectory.csv").read_text().splitlines()[1] == "0,1,2,3,4"

    def test_bifurcate_default(self, tmp_path):
        code, out = run(tmp_path, "bifurcate", "--preset", "backward_demo")
        assert code == 0
        assert len((out / "bifurcation.csv").read_text().splitlines()) == 282

    def test_bifurcate_other_parameter(self, tmp_path):
        code, out = run(tmp_path, "bifurcate", "--preset", "table4", "--vary", "alpha", "--range", "0:1e-3:11")
        assert code == 0
        assert (out / "bifurcation.csv").read_text().startswith("alpha,")

    def test_contour(self, tmp_path):
        code, out = run(tmp_path, "contour", "--preset", "table4", "--sigma-range", "0.1:0.8:4",
                        "--gamma-range", "0.1:0.9:3")
        assert code == 0
        assert len((out / "contour.csv").read_text().splitlines()) == 13

    def test_sweep(self, tmp_path):
        code, out = run(tmp_path, "sweep", "--preset", "table3", "--alphas", "1e-5,2e-5", "--t-end", "10",
                        "--output-interval", "5")
        assert code == 0
        meta = json.loads((out / "sweep.json").read_text())
        assert set(meta["terminal_C"]) == {"1e-05", "2e-05"}

    def test_sensitivity(self, tmp_path):
        code, out = run(tmp_path, "sensitivity", "--preset", "table4")
        assert code == 0
        assert (out / "sensitivity.csv").read_text().startswith("param,derived,finite_difference")
        assert len(manifest(out)[0]["warnings"]) == 3

    def test_preset(self, tmp_path):
        code, out = run(tmp_path, "preset", "--preset", "fig2", "--t-end", "5", "--output-interval", "1")
        assert code == 0
        summary = json.loads((out / "preset_summary.json").read_text())
        assert summary["preset"]["name"] == "fig2"

    def test_errata(self, tmp_path, capsys):
        code, out = run(tmp_path, "errata")
        assert code == 0
        assert "11 MISMATCH" in capsys.readouterr().out
        assert (out / "errata.json").exists()

    def test_svg(self, tmp_path):
        pytest.importorskip("matplotlib")
        code, out = run(tmp_path, "simulate", "--preset", "table4", "--t-end", "2", "--svg")
        assert code == 0
        assert (out / "trajectory.svg").read_text().lstrip().startswith("<?xml")


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [["simulate", "--preset", "table4", "--t-end", "0"], ["bogus"], ["analyze"],
         ["analyze", "--preset", "nope"], ["simulate", "--preset", "table4", "--seed", "-1"],
         ["bifurcate", "--preset", "table4", "--range", "1:0:5"], ["preset"],
         ["sweep", "--preset", "table4", "--alphas", "x"]],
    )
    def test_validation(self, tmp_path, argv):
        code, out = run(tmp_path, *argv)
        assert code == 2
        (entry,) = manifest(out)
        assert entry["exit_status"] == 2 and entry["error"].startswith("ParameterError")

    def test_missing_key(self, tmp_path):
        path = tmp_path / "bad.params"
        path.write_text("\n".join(line for line in format_params(TABLE4.params).splitlines()
                                  if not line.startswith("gamma")))
        code, out = run(tmp_path, "analyze", "--params", str(path))
        assert code == 2
        assert "gamma" in manifest(out)[0]["error"]

    def test_params_and_preset_conflict(self, tmp_path, params_file):
        assert run(tmp_path, "analyze", "--params", str(params_file), "--preset", "table4")[0] == 2

    def test_inadmissible(self, tmp_path):
        path = tmp_path / "q.params"
        path.write_text(format_params(TABLE4.params.replace(q=0.9999995)))
        code, out = run(tmp_path, "sensitivity", "--params", str(path))
        assert code == 3
        assert "inadmissible-perturbation" in manifest(out)[0]["error"]

    def test_numerical(self, tmp_path):
        code, out = run(tmp_path, "simulate", "--preset", "table4", "--rtol", "1e-30", "--atol", "1e-30")
        assert code == 4
        assert "step-underflow" in manifest(out)[0]["error"]


class TestManifest:
    def test_appends(self, tmp_path):
        run(tmp_path, "errata")
        run(tmp_path, "bogus")
        code, out = run(tmp_path, "analyze", "--preset", "table3")
        entries = manifest(out)
        assert [e["exit_status"] for e in entries] == [0, 2, 0]
        for e in entries:
            assert set(e) == {"command", "argv", "inputs", "preset", "seed", "outputs", "exit_status", "error",
                              "warnings", "version"}

    def test_outputs_listed(self, tmp_path):
        code, out = run(tmp_path, "analyze", "--preset", "table4")
        names = sorted(p.rsplit("/", 1)[-1] for p in manifest(out)[0]["outputs"])
        assert names == ["analysis.json", "analysis.txt"]


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [["simulate", "--preset", "table4", "--t-end", "20", "--seed", "5"],
         ["bifurcate", "--preset", "backward_demo"],
         ["sensitivity", "--preset", "table4"],
         ["contour", "--preset", "table4", "--sigma-range", "0.1:0.8:5", "--gamma-range", "0.1:0.9:5"]],
    )
    def test_byte_identical(self, tmp_path, argv):
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir()
        b.mkdir()
        run(a, *argv)
        run(b, *argv)
        files = sorted(p.name for p in (a / "out").iterdir() if p.name != "manifest.jsonl")
        assert files
        for name in files:
            assert (a / "out" / name).read_bytes() == (b / "out" / name).read_bytes(), name


def test_console_script(tmp_path):
    exe = shutil.which("crimedyn")
    cmd = [exe] if exe else [sys.executable, "-m", "crimedyn.cli"]
    proc = subprocess.run([*cmd, "analyze", "--preset", "table4", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "unique-endemic" in proc.stdout
    proc = subprocess.run([*cmd, "simulate", "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stderr.startswith("error:")
