import json
import subprocess
import sys
from pathlib import Path

import pytest

from capcolor.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, main

GOLDEN = Path(__file__).parent / "data" / "table1_d3.csv"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_code_build(capsys):
    rc, out, _ = run(capsys, "code", "build", "--family", "ccc", "--d", "5")
    assert rc == EXIT_OK
    assert "n=39" in out.splitlines() and "qubit-count formula: 39 (ok)" in out


def test_code_build_json(tmp_path, capsys):
    path = tmp_path / "c.json"
    rc, _, _ = run(capsys, "code", "build", "--family", "rccc", "--d", "3", "--form", "T", "--out", str(path))
    doc = json.loads(path.read_text())
    assert rc == EXIT_OK and doc["n"] == 15


@pytest.mark.parametrize("argv", [
    ("code", "build", "--d", "4"),
    ("code", "build", "--family", "2d", "--form", "T"),
    ("verify", "--d", "3", "--t", "2"),
    ("table", "1", "--d", "5"),
    ("sim", "ftm", "--shots", "10"),
    ("code", "build", "--no-such-flag"),
    ("verify", "--config", "/nonexistent.json"),
])
def test_invalid_input_exits_1(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == EXIT_INPUT and "error" in err


def test_verify_pass(capsys):
    rc, out, _ = run(capsys, "verify", "--code", "ccc", "--d", "3", "--method", "both")
    assert rc == EXIT_OK
    assert out.splitlines() == ["ccc(3)-H nonflag t=1: PASS", "direct check: PASS", "F_2t scan: PASS"]


def test_verify_failure_prints_witness(capsys):
    rc, out, _ = run(capsys, "verify", "--code", "steane", "--circuits", "nonflag", "--method", "direct")
    assert rc == EXIT_FAIL
    assert out.splitlines()[2:] == [" witness (sector Z):", "  Y1 -> Z1", "  g1z@2:IY -> Z6Z7"]


def test_verify_budget(capsys):
    rc, _, err = run(capsys, "verify", "--code", "ccc", "--d", "5", "--budget", "100")
    assert rc == EXIT_RESOURCE and "partial verdict" in err


def test_verify_conditions_and_random_orderings(capsys):
    rc, out, _ = run(capsys, "verify", "--conditions", "--d", "5")
    assert rc == EXIT_OK and len(out.splitlines()) == 7
    rc, out, _ = run(capsys, "verify", "--theorem2", "--d", "3", "--random-orderings", "3", "--seed", "2")
    assert rc == EXIT_OK and out.count("PASS") == 4


def test_error_table_golden(capsys):
    rc, out, _ = run(capsys, "table", "1")
    assert rc == EXIT_OK and out == GOLDEN.read_text()


def test_qubit_count_table(tmp_path, capsys):
    path = tmp_path / "t3.json"
    rc, _, _ = run(capsys, "table", "qubits", "--d-max", "7", "--format", "json", "--out", str(path))
    rows = json.loads(path.read_text())
    assert rc == EXIT_OK and [r["d"] for r in rows] == [3, 5, 7] and rows[1]["ccc_data"] == 39


def test_sim_audit_and_trace(tmp_path, capsys):
    trace = tmp_path / "trace.jsonl"
    rc, out, _ = run(capsys, "sim", "ftec", "--d", "3", "--exhaustive", "--trace", str(trace))
    assert rc == EXIT_OK and out.startswith("PASS")
    recs = [json.loads(line) for line in trace.read_text().splitlines()]
    assert [r["round"] for r in recs] == [1, 2]


def test_sim_monte_carlo_noiseless(capsys):
    rc, out, _ = run(capsys, "sim", "ftec", "--shots", "100", "--p", "0", "--seed", "5")
    lines = out.splitlines()
    assert rc == EXIT_OK and lines[0] == "p,shots,failures,rate,ci_low,ci_high,seed"
    assert lines[1].startswith("0.0,100,0,0.0,0.0,")


def test_config_file_gives_byte_identical_outputs(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"shots": 3000, "p": [2e-3, 4e-3], "seed": 9}))
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.csv"
        assert run(capsys, "sim", "ftec", "--config", str(cfg), "--out", str(path))[0] == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].decode().count("\n") == 3 and b",9\n" in outs[0]
    # explicit flags override the file
    run(capsys, "sim", "ftec", "--config", str(cfg), "--seed", "10", "--out", str(tmp_path / "o.csv"))
    assert (tmp_path / "o.csv").read_text().splitlines()[1].endswith(",10")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "capcolor", "code", "build", "--family", "steane"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "n=7" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "capcolor", "verify", "--d", "6"], capture_output=True, text=True)
    assert proc.returncode == 1
