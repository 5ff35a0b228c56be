import json
import subprocess
import sys

import pytest

from bmcycles.cli import execute, main
from bmcycles.cycles import cycle_of
from bmcycles.groebner import Ideal
from bmcycles.hilbert import SubquotientModule
from bmcycles.modrep import character_principal_series, decompose
from bmcycles.poly import parse_ring


def run(*argv):
    code, payload, _ = execute(list(argv))
    return code, payload


def test_cycle_xy():
    code, out = run("cycle", "--ring", "F5[U,V,W,X,Y]", "--ideal", "X*Y", "--dim", "4")
    assert code == 0
    assert [(t["prime"], t["mult"]) for t in out["terms"]] == [(["X"], 1), (["Y"], 1)]
    R = parse_ring("F5[U,V,W,X,Y]")
    assert out == cycle_of(SubquotientModule.quotient(Ideal.parse(R, "X*Y")), 4).to_json()


def test_brauer_ps():
    code, out = run("brauer", "--p", "5", "--type", "ps", "--params", "1,0")
    assert code == 0 and out == {"sigma[0,1]": 1, "sigma[1,3]": 1}
    assert out == decompose(character_principal_series(1, 0, 5)).to_json()
    code, out = run("brauer", "--p", "3", "--type", "sym", "--params", "0,3", "--method", "oracle")
    assert out == {"sigma[0,1]": 1, "sigma[1,1]": 1}
    code, out = run("brauer", "--p", "5", "--type", "steinberg", "--twist", "2", "--method", "exact")
    assert out == {"sigma[2,4]": 1}


def test_hilbert_free_line():
    code, out = run("hilbert", "--ring", "Q[x]", "--ideal", "0")
    assert code == 0 and out["dim"] == 1 and out["e"] == 1


def test_other_commands():
    assert run("gb", "--ring", "Q[x,y]", "--ideal", "x - y^2, y - x^2", "--order", "lex")[1][
        "basis"] == ["-y^2 + x", "y^4 - y"]
    assert run("mult", "--ring", "Q[x,y]", "--ideal", "x^2, y", "--dim", "0")[1]["e"] == 2
    code, out = run("minprimes", "--ring", "Q[x,y,z]", "--ideal", "x*y, x*z")
    assert code == 0 and [c["prime"] for c in out["components"]] == [["x"], ["y", "z"]]
    assert run("check-assoc", "--ring", "Q[x,y]", "--ideal", "x*y")[0] == 0
    assert run("check-additivity", "--ring", "Q[x,y]", "--ideal", "x^2*y", "--outer", "x",
               "--dim", "1")[0] == 0
    assert run("cut", "--ring", "Q[x,y]", "--ideal", "x^2", "--f", "y", "--dim", "2")[1][
        "null_case"] is True
    code, out = run("product", "--ring", "Q[x]", "--ideal", "x^2", "--ring2", "Q[y]",
                    "--ideal2", "y^3", "--dim", "0", "--dim2", "0")
    assert code == 0 and out["e"] == 6


def test_weights_and_components():
    code, out = run("weights", "--p", "7", "--case", "split", "--m", "1", "--n", "4")
    assert out["weights"] == ["sigma[0,0]", "sigma[0,6]", "sigma[1,4]"] and not out["fallback"]
    code, out = run("weights", "--p", "5", "--case", "split", "--m", "1", "--n", "3",
                    "--components", '{"sigma[1,3]": {"a": 1}}')
    assert code == 1 and not out["report"]["conforms"]


def test_ledger_and_verify(tmp_path):
    code, out = run("ledger", "--input", '{"weights": ["a", "b"], "m": [[1,1],[0,1]], "e": [3,1]}')
    assert code == 0 and out == {"mu": [2, 1]}
    doc = {
        "p": 5,
        "rows": [
            {"lambda": [1, 0], "type": {"kind": "trivial"}, "value": {"c1": 1}},
            {"lambda": [0, 0], "type": {"kind": "ps", "params": [1, 0]}, "value": {"c1": 1, "c3": 1}},
        ],
        "C": {"sigma[0,1]": {"c1": 1}, "sigma[1,3]": {"c3": 1}},
    }
    path = tmp_path / "table.json"
    path.write_text(json.dumps(doc))
    code, out = run("bm-verify", "--input", str(path))
    assert code == 0 and out["ok"]
    doc["rows"][1]["value"] = {"c1": 1, "c3": 2}
    path.write_text(json.dumps(doc))
    code, out = run("bm-verify", "--input", str(path))
    assert code == 1 and out["violations"] == ["lambda=[0,0] type=ps(1,0)"]


def test_exit_codes():
    code, out = run("cycle", "--ring", "Q[x", "--ideal", "x", "--dim", "1")
    assert code == 2 and out["error"]["kind"] == "ParseError"
    code, out = run("hilbert", "--ring", "Q[x,y]", "--ideal", "x^2 + y")
    assert code == 2 and out["error"]["kind"] == "NotHomogeneous"
    code, out = run("cycle", "--ring", "Q[x]", "--ideal", "x")
    assert code == 2 and out["error"]["kind"] == "InputError"
    code, out = run("brauer", "--p", "5", "--type", "ps", "--params", "1,1")
    assert code == 2 and out["error"]["kind"] == "EqualCharacters"
    code, out = run("minprimes", "--ring", "Q[x,y,z]", "--ideal", "x^2 + y^2 + z^2")
    assert code == 2 and out["error"]["kind"] == "Unsplittable"


def test_resource_limit_exit(monkeypatch):
    monkeypatch.setenv("BMC_SPAIR_LIMIT", "1")
    code, out = run("gb", "--ring", "Q[x,y,z]", "--ideal", "x^2 - y*z, y^2 - x*z, z^2 - x*y + x")
    assert code == 3 and out["error"]["kind"] == "ResourceLimit"


def test_run_job(tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"command": "brauer", "options": {"p": 7, "type": "steinberg"}}))
    assert run("run", str(job)) == (0, {"sigma[0,6]": 1})
    job.write_text(json.dumps({"command": "ledger",
                               "input": {"weights": ["a"], "m": [[1]], "e": [{"c": 2}]}}))
    assert run("run", str(job)) == (0, {"mu": [{"c": 2}]})
    job.write_text(json.dumps({"command": "brauer", "options": {"p": 7}, "extra": 1}))
    code, out = run("run", str(job))
    assert code == 2 and out["error"]["kind"] == "SchemaError"
    job.write_text(json.dumps({"command": "brauer", "options": {"prime": 7}}))
    assert run("run", str(job))[0] == 2


def test_text_format(capsys):
    assert main(["weights", "--p", "5", "--case", "irreducible", "--m", "0", "--n", "1",
                 "--format", "text"]) == 0
    text = capsys.readouterr().out
    assert "weights:" in text and '"sigma[0,1]"' in text


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "bmcycles", *argv], capture_output=True,
                          text=True, check=False)


def test_subprocess_determinism():
    argv = ("cycle", "--ring", "F5[U,V,W,X,Y]", "--ideal", "X*Y", "--dim", "4")
    a, b = _cli(*argv), _cli(*argv)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert json.loads(a.stdout)["dim"] == 4


def test_subprocess_error_json():
    res = _cli("brauer", "--p", "4", "--type", "steinberg")
    assert res.returncode == 2
    assert set(json.loads(res.stdout)["error"]) == {"kind", "detail"}
