from __future__ import annotations

import json
import subprocess
import sys

import pytest

from supertrace.cli import main
from supertrace.freetrace import TraceExpression
from supertrace.identities import gen_CH, gen_T
from supertrace.qindex import QSeries, euler_function


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_identity_verify(capsys):
    code, out, _ = run(capsys, "identity", "verify", "--n", "2", "--e", "0", "--f", "3")
    assert code == 0
    assert out.splitlines()[0] == "zero"


def test_identity_verify_failure_exit(capsys):
    code, out, _ = run(capsys, "identity", "verify", "--n", "1", "--e", "0", "--f", "2", "--kind", "T", "--size", "2")
    assert code == 1
    assert out.startswith("nonzero")


def test_identity_gen_json_round_trip(capsys):
    code, out, _ = run(capsys, "identity", "gen", "--n", "2", "--e", "1", "--f", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    by_kind = {d["identity"]["kind"]: d for d in data}
    assert TraceExpression.from_json_terms(by_kind["T"]["terms"]) == gen_T(1, 2, 2)
    assert TraceExpression.from_json_terms(by_kind["CH"]["terms"]) == gen_CH(1, 2, 2)


def test_charges_table(capsys):
    code, out, _ = run(capsys, "charges", "--lmax", "7")
    assert code == 0
    dims = [line.split("dim=")[1] for line in out.splitlines() if line.startswith("l=")]
    assert dims[2:] == ["1/1", "1/1", "3/3", "6/6", "11/11"]


def test_index_text_and_json(capsys):
    code, out, _ = run(capsys, "index", "--n", "2", "--order", "8")
    assert code == 0 and out.strip() == "1 - q - q^2 + q^5 + q^7"
    code, out, _ = run(capsys, "index", "--n", "1", "--order", "6", "--format", "json")
    data = json.loads(out)
    assert QSeries([int(c) for c in data["coefficients"]], 6) == euler_function(6)


def test_small_commands(capsys):
    code, out, _ = run(capsys, "codim", "--m", "5", "--n", "2", "--format", "json")
    assert code == 0
    assert [r["codim"] for r in json.loads(out)] == [1, 2, 5, 14, 42]
    code, out, _ = run(capsys, "goodperms", "--m", "5", "--d", "3")
    assert code == 0 and "42" in out
    code, out, _ = run(capsys, "ranks", "--m", "3", "--n", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and {r["rank"] for r in data["rows"]} == {5}
    for cmd in (["deduce-11", "--n", "2"], ["dynkin", "--n", "2"], ["andrews", "--n", "2", "--order", "5"],
                ["series", "--mode", "invariants", "--n", "2", "--order", "6"]):
        code, _, _ = run(capsys, *cmd)
        assert code == 0, cmd


@pytest.mark.parametrize("argv", [
    ["ranks", "--m", "9", "--n", "2"],
    ["codim", "--m", "0", "--n", "2"],
    ["identity", "verify", "--n", "2", "--e", "1", "--f", "1"],
    ["nosuch"],
    ["index", "--n", "two", "--order", "3"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_force_warns(capsys):
    code, out, err = run(capsys, "charges", "--lmax", "9", "--force")
    assert code == 0
    assert err.startswith("warning: ell=9 exceeds the cap 8")
    assert "l=9" in out


@pytest.mark.parametrize("argv", [
    ["identity", "gen", "--n", "2", "--format", "json"],
    ["charges", "--lmax", "6", "--rank-at", "2", "--format", "json"],
])
def test_deterministic_across_threads(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv, "--threads", "3")
    assert a == b == c


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "supertrace", "codim", "--m", "3", "--n", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "5" in res.stdout
