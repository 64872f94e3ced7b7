"""Command-line interface: output formats and exit codes."""

import json
import math
import subprocess
import sys

import pytest

from halleyquad.cli import main


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_legendre_two_point_csv(capsys):
    code, out, _ = run(["rule", "--family", "legendre", "--n", "2", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,node,weight"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["0", "1"]
    assert rows[0][1].startswith("-0.57735") and rows[1][1].startswith("0.57735")
    assert float(rows[0][2]) == 1.0 and float(rows[1][2]) == 1.0


def test_hermite_one_point(capsys):
    code, out, _ = run(["rule", "--family", "hermite", "--n", "1"], capsys)
    assert code == 0
    idx, node, weight = out.splitlines()[1].split(",")
    assert float(node) == 0.0
    assert node == "0"
    assert weight == "1.7724538509055161"


def test_unknown_family(capsys):
    code, _, err = run(["rule", "--family", "foo", "--n", "3"], capsys)
    assert code == 64
    assert "foo" in err


@pytest.mark.parametrize("args", [
    ["rule", "--family", "hermite", "--n", "0"],
    ["rule", "--family", "hermite", "--n", "x"],
    ["rule", "--family", "hermite"],
    ["rule", "--family", "hermite", "--n", "3", "--digits", "35"],
    ["rule", "--family", "hermite", "--n", "3", "--tol", "2"],
    ["frobnicate"],
])
def test_usage_errors(args, capsys):
    assert run(args, capsys)[0] == 64


def test_compute_failure(capsys):
    code, _, err = run(["rule", "--family", "hermite", "--n", "100000000"], capsys)
    assert code == 2
    assert "error" in err


def test_json_layout(capsys):
    code, out, _ = run(["rule", "--family", "hermite", "--n", "4", "--format", "json"], capsys)
    doc = json.loads(out)
    assert list(doc) == ["family", "n", "nodes", "weights", "stats"]
    assert list(doc["stats"]) == ["total_iters", "mean_iters"]
    assert doc["family"] == "hermite" and doc["n"] == 4 and len(doc["nodes"]) == 4


def test_digits(capsys):
    _, out, _ = run(["rule", "--family", "legendre", "--n", "3", "--digits", "5"], capsys)
    assert out.splitlines()[1] == "0,-0.77460,0.55556"
    _, out, _ = run(["rule", "--family", "legendre", "--n", "3", "--digits", "34"], capsys)
    node = out.splitlines()[1].split(",")[1]
    assert float(node) == -math.sqrt(0.6)


def test_deterministic_file_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["rule", "--family", "legendre", "--n", "37", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
    assert capsys.readouterr().out == ""


def test_batch_and_jobs(capsys):
    code, out, _ = run(["rule", "--family", "hermite,legendre", "--n", "3,4", "--jobs", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "family,n,index,node,weight"
    assert len(lines) == 1 + 3 + 4 + 3 + 4
    assert lines[1].startswith("hermite,3,0,")
    code, seq, _ = run(["rule", "--family", "hermite,legendre", "--n", "3,4"], capsys)
    assert seq == out


def test_check(capsys):
    code, out, err = run(["check", "--family", "hermite", "--n", "100"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,node_re,weight_re"
    assert len(lines) == 101
    node_re = [float(line.split(",")[1]) for line in lines[1:]]
    assert max(node_re) <= 1e-14
    assert "max node RE" in err


def test_check_over_cap(capsys):
    code, _, err = run(["check", "--family", "legendre", "--n", "10001"], capsys)
    assert code == 64
    assert "10000" in err


def test_check_json(capsys):
    code, out, _ = run(["check", "--family", "legendre", "--n", "20", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["max_node_re"] <= 1e-14 and len(doc["node_re"]) == 20


def test_check_fails_on_loose_tolerance(capsys):
    code, _, _ = run(["check", "--family", "hermite", "--n", "200", "--tol", "0.5"], capsys)
    assert code in (0, 2)


def test_stats(capsys):
    code, out, _ = run(["stats", "--family", "hermite", "--n", "100", "--scheme", "halley"], capsys)
    assert code == 0
    head, row = out.splitlines()
    assert head == "family,n,scheme,total_iters,mean_iters,sweep_steps,r_evals,wall_time_s"
    fields = row.split(",")
    assert fields[:3] == ["hermite", "100", "halley"]
    assert float(fields[4]) == int(fields[3]) / 50


def test_stats_json(capsys):
    _, out, _ = run(["stats", "--family", "legendre", "--n", "10", "--format", "json"], capsys)
    assert json.loads(out)[0]["n"] == 10


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "halleyquad", "rule", "--family", "foo", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 64
    res = subprocess.run([sys.executable, "-m", "halleyquad", "rule", "--family", "legendre", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.count("\n") == 3
