import json

import pytest
from typer.testing import CliRunner

from kinetic1d.cli import app

WIDE = {"COLUMNS": "200"}

TINY = """
[scenario]
name = tiny

[grid]
L = 20
N = 100

[kernel.a]
mu = 1

[kernel.phi]
mu = 2

[initial]
variant = rectangle

[integration]
dt = 0.1
t_end = 1
"""

BLOWUP = """
[scenario]
name = blowup

[grid]
L = 20
N = 40

[kernel.a]
mu = 1

[kernel.b]
mu = 5

[initial]
variant = constant
n0 = 10

[integration]
dt = 2.5
t_end = 50
"""


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_list_presets(runner):
    result = runner.invoke(app, ["list-presets"], env=WIDE)
    assert result.exit_code == 0
    assert "fig1a" in result.output and "fig6d" in result.output


def test_run_writes_its_files(runner, tmp_path):
    scenario = write(tmp_path, "tiny.ini", TINY)
    out = tmp_path / "results"
    result = runner.invoke(app, ["run", scenario, "--out", str(out), "--quiet"], env=WIDE)
    assert result.exit_code == 0, result.output
    run_dir = out / "tiny"
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert (run_dir / "series.tsv").is_file()
    assert len(list(run_dir.glob("snapshot_*.tsv"))) == 2


def test_output_directory_from_the_environment(runner, tmp_path):
    scenario = write(tmp_path, "tiny.ini", TINY)
    env = {**WIDE, "KINETIC1D_OUTPUT": str(tmp_path / "env")}
    result = runner.invoke(app, ["run", scenario, "--quiet"], env=env)
    assert result.exit_code == 0, result.output
    assert (tmp_path / "env" / "tiny" / "manifest.json").is_file()


def test_invalid_scenario_exits_with_2(runner, tmp_path):
    scenario = write(tmp_path, "bad.ini", TINY + "\n[grid]\ncolour = red\n")
    result = runner.invoke(app, ["run", scenario, "--out", str(tmp_path)], env=WIDE)
    assert result.exit_code == 2
    assert "ScenarioError" in result.output

    result = runner.invoke(app, ["run", str(tmp_path / "nothing.ini")], env=WIDE)
    assert result.exit_code == 2


def test_divergence_exits_with_3_and_keeps_partial_output(runner, tmp_path):
    scenario = write(tmp_path, "blowup.ini", BLOWUP)
    result = runner.invoke(app, ["run", scenario, "--out", str(tmp_path), "--quiet"], env=WIDE)
    assert result.exit_code == 3
    manifest = json.loads((tmp_path / "blowup" / "manifest.json").read_text())
    assert manifest["status"] == "diverged"
    assert manifest["failed_step"] is not None


def test_window_cap_exits_with_4(runner, tmp_path):
    text = "[scenario]\npreset = fig5a\n[integration]\nt_end = 5\n[adaptive]\nmax_n = 200\n"
    scenario = write(tmp_path, "capped.ini", text)
    result = runner.invoke(app, ["run", scenario, "--out", str(tmp_path), "--quiet"], env=WIDE)
    assert result.exit_code == 4
    manifest = json.loads((tmp_path / "fig5a" / "manifest.json").read_text())
    assert manifest["status"] == "resource_limit"


def test_binary_scenario_exits_with_2(runner, tmp_path):
    path = tmp_path / "garbled.ini"
    path.write_bytes(b"\xff\xfe[grid]\n")
    result = runner.invoke(app, ["run", str(path), "--out", str(tmp_path)], env=WIDE)
    assert result.exit_code == 2
    assert "ScenarioError" in result.output


def test_compare_paths_refuses_coalescence(runner, tmp_path):
    scenario = write(tmp_path, "blowup.ini", BLOWUP)
    result = runner.invoke(app, ["compare-paths", scenario], env=WIDE)
    assert result.exit_code == 2
    assert "b = 0" in result.output


def test_sweep_errors_writes_tables(runner, tmp_path):
    scenario = write(tmp_path, "tiny.ini", TINY)
    out = tmp_path / "sweep"
    args = ["sweep-errors", scenario, "--h", "0.4", "--h", "0.2", "--dt", "0.2", "--dt", "0.1"]
    args += ["--ref-h", "0.2", "--ref-dt", "0.05", "--quadrature", "--out", str(out)]
    result = runner.invoke(app, args, env=WIDE)
    assert result.exit_code == 0, result.output
    for name in ("sweep.tsv", "slopes.tsv", "quadrature.tsv"):
        assert (out / name).is_file()
