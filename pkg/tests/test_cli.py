from __future__ import annotations

import csv
import io
import json

import pytest

from mfl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reps_text_and_json(capsys):
    code, out, _ = run(capsys, "reps")
    assert code == 0 and "std:n" in out and "cyc:5:5:i" in out
    code, out, _ = run(capsys, "reps", "--json")
    doc = json.loads(out)
    assert {"descriptor": "free:inf", "arity": "inf"} in doc["builtins"]
    assert any(g.startswith("F[n,m](d)") for g in doc["grammar"])


def test_invalid_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["reps", "--bogus"])
    assert info.value.code == 2


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--rep", "cyc:2:2:-1", "--expr", "s2 (I - Q) + R[1]",
                       "--vector", '{"word": []}')
    assert code == 0 and json.loads(out) == {'{"word":[]}': [-1.0, 0.0]}
    code, out, _ = run(capsys, "eval", "--rep", "std:2", "--expr", "s1 s1' + s2 s2'", "--vector", "7")
    assert json.loads(out) == {'{"int":7}': [1.0, 0.0]}


def test_functor(capsys):
    code, out, _ = run(capsys, "functor", "--to", "3", "--from", "2", "--rep", "std:2", "--vector", "0",
                       "--generator", "3")
    doc = json.loads(out)
    assert code == 0 and doc["out"] == {"phase": [1.0, 0.0], "label": {"int": 3}}
    code, out, _ = run(capsys, "functor", "--to", "2", "--from", "inf", "--rep", "free:inf",
                       "--vector", '{"word": [3]}', "--generator", "2")
    assert json.loads(out)["out"]["label"] == {"word": [4]}
    code, out, _ = run(capsys, "functor", "--to", "inf", "--from", "2", "--rep", "cyc:2:2:-1",
                       "--vector", '{"word": []}', "--generator", "5", "--adjoint")
    assert json.loads(out)["out"] is None


def test_closedform_compare(capsys):
    code, out, _ = run(capsys, "closedform", "--to", "2", "--from", "3", "--rep", "std:3", "--generator", "1",
                       "--vector", "5", "--compare")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "match" and doc["closed_form"]["label"] == {"int": 15}
    code, out, _ = run(capsys, "closedform", "--to", "4", "--from", "3", "--rep", "cyc:3:3:-1",
                       "--generator", "4", "--vector", '{"word": [1]}')
    assert code == 0 and json.loads(out)["case"] == {"tag": "II-b", "k0": 1, "j0": 2}


def test_table_json_matches_s2_squared(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, _, _ = run(capsys, "table", "--rep", "F[3,2](std:2)", "--generator", "3", "--depth", "3",
                     "--out", str(path))
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert code == 0 and doc["rep"] == "F[3,2](std:2)" and doc["gen"] == 3 and doc["adjoint"] is False
    for row in doc["rows"]:
        x = row["in"]["int"]
        assert row["out"] == {"phase": [1.0, 0.0], "label": {"int": 4 * x + 3}}


def test_table_free_inf_and_csv(capsys):
    code, out, _ = run(capsys, "table", "--rep", "free:inf", "--generator", "4", "--depth", "2")
    rows = json.loads(out)["rows"]
    assert all(r["out"]["label"]["word"] == [4] + r["in"]["word"] for r in rows)
    code, out, _ = run(capsys, "table", "--rep", "std:2", "--generator", "2", "--adjoint", "--depth", "2",
                       "--format", "csv")
    table = list(csv.reader(io.StringIO(out)))
    assert table[0] == ["in", "phase_re", "phase_im", "out"]
    assert table[1] == ['{"int":0}', "", "", ""]


def test_nested_tables_agree(capsys):
    _, a, _ = run(capsys, "table", "--rep", "F[2,3](F[3,4](std:4))", "--generator", "2", "--depth", "2")
    _, b, _ = run(capsys, "table", "--rep", "F[2,4](std:4)", "--generator", "2", "--depth", "2")
    assert json.loads(a)["rows"] == json.loads(b)["rows"]


def test_errors_exit_2(capsys):
    code, _, err = run(capsys, "eval", "--rep", "nope:2", "--expr", "s1", "--vector", "0")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "table", "--rep", "std:2", "--generator", "1", "--out", "/nonexistent/dir/t.json")
    assert code == 2 and "cannot write" in err
    code, _, _ = run(capsys, "eval", "--rep", "std:2", "--expr", "s1", "--vector", "{bad")
    assert code == 2


def test_verify_exit_codes_and_json(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--grid", "2,3", "--depth", "2", "--suite", "functor.composition",
                       "--json", str(path), "--quiet")
    assert code == 0 and out.startswith("pass ")
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["summary"]["fail"] == 0 and doc["reports"]
    args = ["verify", "--grid", "3,4", "--depth", "2", "--suite", "closedform.display.F43.s4.expanded"]
    code, out, _ = run(capsys, *args)
    assert code == 0 and "FINDING" in out
    code, _, _ = run(capsys, *args, "--strict-findings")
    assert code == 1


def test_strip_bound_env(capsys, monkeypatch):
    monkeypatch.setenv("MFL_MAX_STRIP_ITERS", "3")
    code, _, err = run(capsys, "eval", "--rep", "std:2", "--expr", "Q", "--vector", "255")
    assert code == 2 and "exceeded 3" in err
