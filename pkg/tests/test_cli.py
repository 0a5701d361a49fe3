import json

import pytest

from equicyclic.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_piece_oracle_with_generators(capsys):
    code, out, _ = call(capsys, "piece", "-n", "27", "-c", "Z", "4 - L1 - L3")
    assert code == 0
    assert "= Z\n" in out and "generators: e4_0" in out


def test_piece_zero_is_burnside(capsys):
    code, out, _ = call(capsys, "piece", "-n", "6", "-c", "A", "--format", "json", "0")
    data = json.loads(out)
    assert code == 0 and data["group"] == {"rank": 4, "torsion": []}
    assert len(data["generators"]) == 4


def test_piece_both_match(capsys):
    code, out, _ = call(capsys, "piece", "-n", "27", "-c", "Z", "--method", "both", "2L1 - 2L3")
    assert code == 0
    assert "MATCH" in out and "Z + Z/3" in out


def test_piece_rectangle_csv_is_deterministic(capsys):
    argv = ("piece", "-n", "12", "-c", "Z", "--method", "both", "--format", "csv",
            "--range", "t=-2..2", "--range", "L2=-2..0", "0")
    code, out1, _ = call(capsys, *argv)
    _, out2, _ = call(capsys, *argv)
    assert code == 0 and out1 == out2
    lines = out1.strip().splitlines()
    assert len(lines) == 1 + 5 * 3
    assert "MISMATCH" not in out1


def test_parse_error_exit_2(capsys):
    code, _, err = call(capsys, "piece", "-n", "12", "2 + * L1")
    assert code == 2
    assert "^" in err


def test_closedform_out_of_cone_exit_3(capsys):
    code, _, err = call(capsys, "piece", "-n", "12", "-c", "Z", "--method", "closedform", "L1")
    assert code == 3
    assert "oracle" in err


def test_tau(capsys):
    code, out, _ = call(capsys, "tau", "-n", "12", "--format", "json", "L1 - L5")
    assert code == 0
    assert json.loads(out)["tau"]["1"] in (5, 7)


def test_mackey_formats(capsys):
    code, out, _ = call(capsys, "mackey", "-n", "15", "--method", "both", "L1 + L6 - 2L7")
    assert code == 0 and "MATCH" in out
    code, out, _ = call(capsys, "mackey", "-n", "6", "--format", "dot", "--", "-L1")
    assert code == 0 and out.startswith("digraph")
    code, out, _ = call(capsys, "mackey", "-n", "6", "--format", "json", "2 - L1")
    assert code == 0 and json.loads(out)["functor"]["n"] == 6


def test_box(capsys):
    code, out, _ = call(capsys, "box", "-n", "6", "A[1:5]", "A[1:5]")
    assert code == 0 and "tau" in out
    code, out, _ = call(capsys, "box", "-n", "2", "--format", "dot", "Z", "<Z>")
    assert code == 0 and "Z/2" in out


def test_geofix(capsys):
    code, out, _ = call(capsys, "geofix", "-n", "12", "--max-degree", "8", "--format", "json")
    data = json.loads(out)
    assert code == 0
    table = {r["degree"]: r for r in data["degrees"]}
    assert table[0]["formula"] == "Z"
    assert table[2]["formula"] == "Z/2 + Z/6" and table[2]["agree"]
    assert all(table[k]["formula"] == "0" for k in (1, 3, 5, 7))


def test_verify_box_unit(capsys):
    code, out, _ = call(capsys, "verify", "box-unit", "-n", "6")
    assert code == 0 and out.startswith("PASS")


def test_usage_error_exit_2(capsys):
    code, _, _ = call(capsys, "verify", "no-such-suite")
    assert code == 2
