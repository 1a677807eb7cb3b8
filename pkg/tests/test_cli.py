import math
import subprocess
import sys

import pytest

from casimirkt.cli import format_number, run


def test_vacuum(capsys):
    assert run(["vacuum"]) == 0
    assert capsys.readouterr().out == "F0*a^4,-0.0411234\n"


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    for cmd in ("vacuum", "eq", "noneq", "verify"):
        assert run([cmd, "--help"]) == 0
    assert "verify" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["eq", "--frobnicate"], ["eq", "--at-min", "2", "--at-max", "1"],
    ["eq", "--samples", "1"], ["noneq", "--abs-tol", "0"], ["noneq", "--workers", "0"],
    ["eq", "--at-min", "-1"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "usage" in captured.err


def test_eq_csv(tmp_path):
    out = tmp_path / "eq.csv"
    assert run(["eq", "--at-min", "0", "--at-max", "4", "--samples", "200", "--out", str(out)]) == 0
    data = out.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "x,value,err"
    assert len(lines) == 201
    x, value, err = lines[1].split(",")
    assert float(x) == 0 and float(value) == 1
    first = lines[2].split(",")
    assert len(first[1].replace("0.", "", 1).lstrip("0")) <= 12


def test_noneq_csv_is_reproducible(tmp_path, monkeypatch):
    monkeypatch.setenv("CASIMIR_WORKERS", "1")
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(["noneq", "--t-min", "0", "--t-max", "1", "--samples", "3", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = paths[0].read_text().splitlines()
    assert rows[0] == "x,value,err"
    assert float(rows[1].split(",")[1]) == pytest.approx(2.3200465, abs=1e-6)


def test_bad_worker_env(monkeypatch, capsys):
    monkeypatch.setenv("CASIMIR_WORKERS", "many")
    assert run(["noneq", "--samples", "2"]) == 2


def test_numeric_failure_exit_code(monkeypatch, caplog):
    import casimirkt.cli as cli

    def boom(*args, **kwargs):
        raise ArithmeticError("tolerance not met")

    monkeypatch.setattr(cli, "noneq_curve", boom)
    assert run(["noneq", "--samples", "2"]) == 1
    assert "tolerance not met" in caplog.text


def test_verify(capsys):
    assert run(["verify", "--seed", "42", "--samples", "200"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 6
    assert all('"passed": true' in line for line in out)
    assert run(["verify", "--seed", "42", "--samples", "200"]) == 0
    assert capsys.readouterr().out.splitlines() == out


def test_format_number():
    assert format_number(-math.pi**2 / 240) == "-0.0411233516712"
    assert format_number(0.0) == "0"
    assert format_number(1.0) == "1"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "casimirkt", "vacuum"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "F0*a^4,-0.0411234"
