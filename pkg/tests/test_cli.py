import io
import subprocess
import sys
from contextlib import redirect_stdout

import pytest

from entqkd.cli import HEADER, fmt, main


def run(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_bb84_summary():
    code, out = run("bb84")
    assert code == 0
    assert "info_per_bit=0.500000 qber=0.250000" in out
    assert "# seed=42" in out


def test_bb84_fraction():
    _, out = run("bb84", "--xi", "0.5")
    assert "info_per_bit=0.250000 qber=0.125000" in out


def test_bb84_bounds_table():
    _, out = run("bb84", "--bounds", "--points", "11")
    rows = data_lines(out)
    assert rows[0] == "q,ir_bound,incoherent_bound,six_state_bound"
    assert len(rows) == 12
    assert run("bounds", "--points", "11")[1].splitlines()[2:] == out.splitlines()[3:]


def test_sweep_small_grid(tmp_path):
    path = tmp_path / "s.csv"
    assert main(["sweep", "--steps", "2", "--out", str(path), "--threads", "1"]) == 0
    rows = data_lines(path.read_text())
    assert rows[0] == ",".join(HEADER)
    assert len(rows) == 1 + 8 * 6
    assert rows[1].startswith("0,0,0,ZZ,1,0.5,")


def test_sweep_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--steps", "3", "--out", str(a), "--threads", "1"])
    main(["sweep", "--steps", "3", "--out", str(b), "--threads", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_gate_eval():
    _, out = run("gate-eval", "--c1", "0", "--c2", "1.5707963267948966", "--c3", "0")
    assert "# best=ZZ" in out
    zz = [r for r in data_lines(out) if ",ZZ," in r][0].split(",")
    assert float(zz[5]) == pytest.approx(0.125)
    assert float(zz[8]) == pytest.approx(0.5)


def test_gate_eval_rejects_out_of_range():
    assert run("gate-eval", "--c1", "4", "--c2", "0", "--c3", "0")[0] != 0


def test_approx_fixed_alice():
    _, out = run("approx", "--alice-fixed", "1.228,0.848,-0.499,0.474")
    e = float([l for l in out.splitlines() if l.startswith("e_mm=")][0][5:])
    assert e == pytest.approx(0.673, abs=5e-3)
    _, out = run("approx", "--alice-fixed", "0,0,0,0")
    e = float([l for l in out.splitlines() if l.startswith("e_mm=")][0][5:])
    assert e == pytest.approx(0, abs=1e-6)


def test_approx_is_deterministic():
    args = ("approx", "--alice-fixed", "0.3,1.0,0.4,2.0", "--seed", "9")
    assert run(*args)[1] == run(*args)[1]


def test_epr_commands():
    _, out = run("epr")
    rows = data_lines(out)[1:]
    assert len(rows) == 4
    assert all(r.endswith(",0,2.0") for r in rows)
    _, out = run("epr", "--verify-bell")
    assert out.count("orthonormal=pass") == 4
    _, out = run("epr", "--show-corrections")
    assert "E01=[0,1;1,0]" in out


def test_reconcile_cascade():
    _, out = run("reconcile", "-n", "10000", "-p", "0.05")
    values = dict(l.split("=") for l in data_lines(out))
    assert int(values["residual_errors"]) == 0
    assert int(values["leaked_bits"]) >= 2864


def test_reconcile_noiseless():
    _, out = run("reconcile", "-p", "0")
    values = dict(l.split("=") for l in data_lines(out))
    assert int(values["passes_run"]) == 1
    assert int(values["leaked_bits"]) == -(-10000 // 73)
    assert int(values["residual_errors"]) == 0


def test_reconcile_simple_and_amplify():
    _, out = run("reconcile", "--simple", "-p", "0.1")
    assert "round=1 length=" in out
    _, out = run("reconcile", "--amplify")
    assert "amplified_length=5000" in out


def test_float_format():
    assert fmt(0.1 + 0.2) == "0.3"
    assert fmt(-0.0) == "0"
    assert fmt(3) == "3"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "entqkd", "bb84"], capture_output=True, text=True, check=True
    ).stdout
    assert "info_per_bit=0.500000" in out
