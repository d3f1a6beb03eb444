import csv
import io
import os
import subprocess

import pytest

CLI = os.environ.get("TWOMODE_CLI", "twomode")


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("TWOMODE_JOBS", None)
    full_env.update(env or {})
    return subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env, timeout=240)


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l + "\n" for l in text.splitlines() if not l.startswith("#")))))


def test_phase_small_sweep():
    r = run("phase", "--sweep", "w:0.9:1.1:5", "--jobs", "2")
    assert r.returncode == 0, r.stderr
    assert r.stdout.startswith("# twomode ")
    table = rows(r.stdout)
    assert len(table) == 5
    assert float(table[0]["S_analytic"]) == 0.0
    assert all(t["converged"] == "1" for t in table)


def test_bits_flag_scales_entropy():
    nats = rows(run("phase", "--w", "1.1").stdout)[0]
    bits = rows(run("phase", "--w", "1.1", "--bits").stdout)[0]
    assert float(bits["S_analytic"]) == pytest.approx(float(nats["S_analytic"]) / 0.6931471805599453, rel=1e-14)


def test_dynamics_nu_prime_independence():
    a = rows(run("dynamics", "--time-points", "30", "--nu-prime", "0.5").stdout)
    b = rows(run("dynamics", "--time-points", "30", "--nu-prime", "5.0").stdout)
    assert [r["S_gaussian"] for r in a] == [r["S_gaussian"] for r in b]


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("model:\n  w: 1.1\nsweep: \"g:0.01:0.02:3\"\n")
    out = tmp_path / "out.csv"
    r = run("phase", "--config", str(cfg), "--g", "0.5", "--out", str(out), "--plot-script", str(tmp_path / "p.py"))
    assert r.returncode == 0, r.stderr
    table = rows(out.read_text())
    assert len(table) == 3
    assert (tmp_path / "p.py").read_text().startswith("import csv")


def test_jobs_env_does_not_change_bytes():
    one = run("phase", "--sweep", "w:0.95:1.1:6", env={"TWOMODE_JOBS": "1"})
    many = run("phase", "--sweep", "w:0.95:1.1:6", env={"TWOMODE_JOBS": "3"})
    assert one.returncode == 0 and one.stdout == many.stdout


@pytest.mark.parametrize(
    "args",
    [
        ["phase", "--omega", "abc"],
        ["phase", "--g", "-1"],
        ["phase", "--sweep", "ratio:0.5:1.5:10"],
        ["phase", "--cutoff", "-3"],
        ["sbf", "--lambda", "0"],
        ["dynamics", "--w", "0.5"],
        ["dynamics", "--sweep", "w:1:2:3"],
        ["phase", "--format", "json"],
        ["phase", "--config", "/nonexistent.yaml"],
        ["validate", "--level", "huge"],
        ["phase", "--no-such-flag"],
        [],
    ],
)
def test_config_errors_exit_2(args):
    r = run(*args)
    assert r.returncode == 2, (args, r.stdout, r.stderr)


def test_env_jobs_invalid_exit_2():
    assert run("phase", "--w", "1.0", env={"TWOMODE_JOBS": "0"}).returncode == 2


def test_config_error_reports_line(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("model:\n  omega: 1\n  g: fast\n")
    r = run("phase", "--config", str(cfg))
    assert r.returncode == 2
    assert "bad.yaml:3" in r.stderr and "model.g" in r.stderr


def test_version_and_help():
    assert run("--version").returncode == 0
    assert "phase" in run("--help").stdout
