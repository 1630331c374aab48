"""Tests for the command-line interface."""

import json
import math
import subprocess
import sys

import pytest

from trigzeros.cli import main


def test_simulate_exact_family_csv(capsys):
    rc = main(["simulate", "--ell", "1", "--n", "20", "--n", "30",
               "--trials", "8", "--seed", "3"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("n,m,r,trials,")
    assert lines[1].split(",")[:6] == ["20", "21", "0", "8", "0", "40"]
    assert lines[2].split(",")[:6] == ["30", "31", "0", "8", "0", "60"]


def test_simulate_json_to_file(tmp_path):
    out_path = tmp_path / "report.json"
    rc = main(["simulate", "--ell", "1", "--n", "20", "--trials", "4",
               "--format", "json", "--out", str(out_path)])
    assert rc == 0
    payload = json.loads(out_path.read_text())
    assert payload["config"]["dep"] == "periodic"  # inferred from --ell
    assert payload["rows"][0]["empirical_mean"] == 40.0


def test_simulate_config_file_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "dep = periodic\nell = 1\ndegrees = 20, 30\ntrials = 6\n"
        "master_seed = 9\n"
    )
    rc = main(["simulate", "--config", str(cfg), "--n", "40"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 2  # --n beat the config degrees
    assert lines[1].split(",")[0] == "40"
    assert lines[1].split(",")[3] == "6"  # trials came from the file


def test_simulate_failed_rows_exit_2(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("degrees = 30\ntrials = 2\nmax_doublings = 0\n")
    rc = main(["simulate", "--config", str(cfg)])
    assert rc == 2
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[1].split(",")[4] == "2"  # both trials unstable


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--ell", "0", "--n", "20"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["count", "--ell", "3", "--n", "299", "--r", "1"])
    assert exc.value.code == 1
    assert "remainder 0" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--what", "C"])  # missing --ell/--r
    assert exc.value.code == 1


def test_kacrice_matches_exact_value(capsys):
    rc = main(["kacrice", "--ell", "2", "--n", "199"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "n,random_part,deterministic,total,error_estimate,panels"
    cells = lines[1].split(",")
    expected = 198.0 + math.sqrt(199.0**2 + 1.0)
    assert float(cells[3]) == pytest.approx(expected, rel=1e-9)
    assert int(cells[2]) == 198


def test_kacrice_json(capsys):
    rc = main(["kacrice", "--n", "50", "--format", "json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["n"] == 50
    # iid polynomials have no forced zeros
    assert payload[0]["deterministic"] == 0
    assert payload[0]["total"] == pytest.approx(
        2 * math.sqrt(50 * 101 / 6), rel=1e-12
    )


def test_constants_shortcuts(capsys):
    assert main(["constants", "--what", "K", "--ell", "1"]) == 0
    assert "0.5" in capsys.readouterr().out
    assert main(["constants", "--what", "C", "--ell", "4", "--r", "0"]) == 0
    assert "1.0" in capsys.readouterr().out


def test_constants_identity(capsys):
    rc = main(["constants", "--what", "I", "--alpha", "0.9"])
    assert rc == 0
    out = capsys.readouterr().out
    quad, closed = (float(line.split("=")[1]) for line in out.strip().split("\n"))
    assert quad == pytest.approx(closed, rel=1e-7)


def test_count_with_root_dump(tmp_path, capsys):
    roots_path = tmp_path / "roots.csv"
    rc = main(["count", "--ell", "1", "--n", "25", "--seed", "12",
               "--dump-roots", str(roots_path)])
    assert rc == 0
    assert "count=50" in capsys.readouterr().out
    lines = roots_path.read_text().strip().split("\n")
    assert lines[0] == "index,x,residual"
    assert len(lines) == 51
    xs = [float(line.split(",")[1]) for line in lines[1:]]
    assert xs == sorted(xs)
    assert all(float(line.split(",")[2]) < 1e-6 for line in lines[1:])


def test_installed_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "trigzeros.cli", "simulate", "--ell", "1",
         "--n", "20", "--trials", "3"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("n,m,r,")
