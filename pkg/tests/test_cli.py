"""Command line entry points, run in-process through main()."""

import json
import subprocess
import sys

import numpy as np
import pytest

from mogauss import fileio
from mogauss.cli import EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_PRECONDITION, main
from mogauss.sphere import SphericalMeasure


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_measure_pullback_square(capsys):
    code, out, _ = run(capsys, "measure", "--kind", "pullback",
                       "--body", "square")
    assert code == EXIT_OK
    rows = [line.split() for line in out.strip().splitlines()
            if not line.startswith("#")]
    assert len(rows) == 4
    for row in rows:
        assert float(row[-1]) == pytest.approx(np.pi / 2, rel=1e-12)


def test_measure_tilde_builtin_theta(capsys):
    code, out, _ = run(capsys, "measure", "--kind", "tilde",
                       "--theta", "log-log", "--body", "square")
    assert code == EXIT_OK
    rows = [line.split() for line in out.strip().splitlines()
            if not line.startswith("#")]
    assert len(rows) == 4
    for row in rows:
        assert float(row[-1]) == pytest.approx(np.pi / 2, rel=1e-10)


def test_dual_volume_command(capsys):
    code, out, _ = run(capsys, "dual-volume", "--theta", "recip-square",
                       "--body", "square")
    assert code == EXIT_OK
    assert float(out.split()[-1]) == pytest.approx(4 * np.sqrt(2.0), rel=1e-10)


def test_entropy_command(capsys):
    code, out, _ = run(capsys, "entropy", "--body", "square")
    assert code == EXIT_OK
    assert float(out.split()[-1]) == pytest.approx(-1.4862762864052739,
                                                   rel=1e-9)


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify-function", "--function", "recip")
    assert code == EXIT_OK
    assert "Gd" in out and "Cd" in out


def test_bad_input_exit_code(capsys):
    code, _, err = run(capsys, "dual-volume", "--theta", "no-such-theta",
                       "--body", "square")
    assert code == EXIT_INPUT


def test_solve_round_trip(tmp_path, capsys):
    mu_path = tmp_path / "mu.json"
    th = 2 * np.pi * np.arange(4) / 4
    mu = SphericalMeasure.from_atoms(
        np.column_stack([np.cos(th), np.sin(th)]), np.ones(4))
    fileio.save_json(fileio.measure_to_json(mu), mu_path)

    out_path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "solve", "--theta", "recip-square",
                       "--mode", "gauss_image", "--mu", str(mu_path),
                       "--out", str(out_path))
    assert code == EXIT_OK
    obj = fileio.load_json(out_path)
    assert obj["status"] == "OK"
    h = [row[-1] for row in obj["body"]["support"]] \
        if isinstance(obj["body"]["support"][0], list) else obj["body"]["support"]
    assert np.allclose(h, 2 * np.sqrt(2) / np.pi, rtol=1e-8)

    # residual of the solved body against its own target
    body_path = tmp_path / "body.json"
    fileio.save_json(obj["body"], body_path)
    code, out, _ = run(capsys, "residual", "--theta", "recip-square",
                       "--body", str(body_path), "--mu", str(mu_path))
    assert code == EXIT_OK
    assert float(out.splitlines()[0].split()[-1]) <= 1e-6
    assert out.splitlines()[-1].endswith("4 of 4")

    csv_path = tmp_path / "sol.csv"
    code, _, _ = run(capsys, "export", str(out_path), "--out", str(csv_path))
    assert code == EXIT_OK
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 5


def test_solve_precondition_exit(tmp_path, capsys):
    th = np.linspace(0.2, np.pi - 0.2, 8)
    mu = SphericalMeasure.from_atoms(
        np.column_stack([np.cos(th), np.sin(th)]), np.ones(8))
    mu_path = tmp_path / "mu.json"
    fileio.save_json(fileio.measure_to_json(mu), mu_path)
    code, _, err = run(capsys, "solve", "--theta", "recip-square",
                       "--mode", "gauss_image", "--mu", str(mu_path))
    assert code == EXIT_PRECONDITION


def test_ma_residual_command(capsys):
    code, out, _ = run(capsys, "ma-residual", "--theta", "log-log",
                       "--body", "ball2", "--grid", "256")
    assert code == EXIT_OK


def test_verify_variation_command(tmp_path, capsys):
    out_path = tmp_path / "var.json"
    code, out, _ = run(capsys, "verify-variation", "--scenario", "default",
                       "--out", str(out_path))
    assert code == EXIT_OK
    obj = fileio.load_json(out_path)
    assert all(r["passed"] for r in obj["scenarios"])


def test_selftest(capsys):
    code, out, _ = run(capsys, "--selftest")
    assert code == EXIT_OK
    assert "PASS" in out and "FAIL" not in out


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys)
    assert code == EXIT_INPUT
    assert "mogauss" in out


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "mogauss.cli", "--selftest"],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
