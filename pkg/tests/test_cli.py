from __future__ import annotations

import json

import pytest

from twistlab.cli import main, parse_n_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_chain_n2_is_jordanian(capsys):
    code, out, err = run(capsys, "build", "--n", "2", "--twist", "chain")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "chain" and [f["name"] for f in doc["factors"]] == ["link:1"]
    assert "exp(Ĥ1⊗σ1,2)" in err


def test_build_sl4_p3(tmp_path, capsys):
    path = tmp_path / "p3.json"
    code, out, _ = run(capsys, "build", "--n", "4", "--twist", "sl4-p3", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["kind"] == "sl4-p3"
    assert [f["name"] for f in doc["factors"]] == ["quasi-jordanian:3", "link:2", "link:1"]
    assert "carrier:" in out


def test_build_rejects_wrong_n(capsys):
    code, _, err = run(capsys, "build", "--n", "5", "--twist", "sl4-p1")
    assert code == 2 and "n = 4" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify", "cocycle")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "build", "--n", "3", "--twist", "chain", "--xi", "1/0")[0] == 2
    assert run(capsys, "rep-check", "--n", "3", "--twist", "chain", "--t", "x")[0] == 2


def test_verify_cocycle_parabolic(capsys):
    code, out, _ = run(capsys, "verify", "cocycle", "--n", "4", "--twist", "parabolic", "--order", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"] == {"total": 1, "passed": 1, "failed": []}


def test_verify_corrupted_file_fails(tmp_path, capsys):
    path = tmp_path / "bad.json"
    assert run(capsys, "build", "--n", "3", "--twist", "chain", "--corrupt", "sign-flip", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", "cocycle", "--file", str(path))
    assert code == 1
    (rep,) = json.loads(out)["reports"]
    assert rep["status"] == "fail" and rep["stats"]["first_order"] == 2


def test_verify_relations_sl11(capsys):
    code, out, _ = run(capsys, "verify", "relations", "--n", "11", "--order", "3")
    assert code == 0
    assert json.loads(out)["summary"]["failed"] == []


def test_verify_other_checks(capsys):
    for check in ("counit", "qybe", "cybe", "carrier"):
        code, _, _ = run(capsys, "verify", check, "--n", "4", "--twist", "parabolic", "--order", "2")
        assert code == 0, check
    assert run(capsys, "verify", "lemma", "--n", "4", "--order", "2")[0] == 0


def test_audit(capsys):
    assert run(capsys, "audit", "--n", "2")[0] == 0
    code, out, _ = run(capsys, "audit", "--n", "4")
    assert code == 1
    checks = {r["check"]: r["status"] for r in json.loads(out)["reports"]}
    assert checks["(4k-property) as printed: 2H_{n-3,n-2}+Ĥ_{n-2}-Ĥ_{n-3} = 0"] == "fail"
    assert checks["Ĥ1-Ĥ2 = 2H_{3,4}"] == "pass"


def test_audit_range_table(capsys):
    code, _, err = run(capsys, "audit", "--n", "2..3", "--text")
    assert code == 0
    assert "n=2" in err and "n=3" in err


def test_rep_check(capsys):
    assert run(capsys, "rep-check", "--n", "11", "--twist", "parabolic", "--t", "1")[0] == 0
    assert run(capsys, "rep-check", "--n", "6", "--twist", "chain", "--t", "1/2")[0] == 0


def test_output_is_byte_identical(capsys):
    argv = ("verify", "cocycle", "--n", "3", "--twist", "chain", "--order", "3")
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert '"ms"' not in first
    assert '"ms"' in run(capsys, *argv, "--timings")[1]


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "verify", "cocycle", "--n", "4", "--twist", "parabolic", "--order", "3", "--budget", "50")
    assert code == 3 and "budget" in err


def test_parse_n_range():
    assert parse_n_range("3..6") == [3, 4, 5, 6]
    assert parse_n_range("4") == [4]
    with pytest.raises(Exception):
        parse_n_range("a..b")
