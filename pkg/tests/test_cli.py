import json
import os

import pytest

from operad_forge.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run(capsys, monkeypatch, *args, threads=None):
    monkeypatch.chdir(ROOT)
    if threads is not None:
        monkeypatch.setenv("OPERAD_FORGE_THREADS", threads)
    else:
        monkeypatch.delenv("OPERAD_FORGE_THREADS", raising=False)
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines()]


def test_pbw_verify_sl2(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "pbw-verify", "inputs/sl2.spec", "--max-deg", "4",
                       "--format", "records")
    assert code == 0
    recs = records(out)
    assert recs[0]["kind"] == "header" and len(recs[0]["sha256"]) == 16
    assert all(r["ok"] for r in recs if r["kind"] == "verdict")


def test_deform_nonjacobi_obstructed(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "deform", "inputs/nonjacobi.spec", "--levels", "2")
    assert code == 1
    assert "Obstructed at level 2" in out


def test_hochschild_sg2_rank_two(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "hochschild", "inputs/sg2.spec", "--i", "1", "--j", "-1",
                       "--format", "records")
    assert code == 0
    table = next(r for r in records(out) if r["kind"] == "table")
    rank = table["columns"].index("rank")
    assert {row[rank] for row in table["rows"]} == {2}


@pytest.mark.parametrize("cmd,spec,extra", [
    ("operad-check", "operads.spec", ["--max-deg", "3"]),
    ("free-algebra", "free.spec", []),
    ("derivations", "sl2.spec", []),
    ("ext", "sg2.spec", ["--i", "2", "--j", "-1"]),
    ("koszul-check", "koszul3.spec", ["--max-deg", "3"]),
    ("deform", "heisenberg.spec", ["--levels", "2", "--max-deg", "3"]),
    ("pbw-deform", "solvable.spec", []),
    ("envelope", "dual.spec", []),
    ("envelope", "triangular.spec", []),
])
def test_commands_pass(capsys, monkeypatch, cmd, spec, extra):
    code, out, _ = run(capsys, monkeypatch, cmd, os.path.join("inputs", spec), *extra)
    assert code == 0, out
    assert out.startswith(f"operad-forge {cmd}\n")
    assert out.rstrip().splitlines()[-1].startswith("summary")


def test_failed_verdict_exits_one(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "operad-check", "inputs/perturbed.spec")
    assert code == 1
    assert ": fail" in out and "witness" in out


@pytest.mark.parametrize("args,needle", [
    (["pbw-verify", "inputs/bad_antisym.spec"], "E_ANTISYM"),
    (["pbw-verify", "inputs/bad_ring.spec"], "E_RING"),
    (["pbw-verify", "inputs/missing.spec"], "E_VALIDATE"),
    (["pbw-verify", "inputs/sl2.spec", "--max-deg", "99"], "E_VALIDATE"),
    (["pbw-verify", "inputs/sl2.spec", "--ring", "GF(6)"], "E_VALIDATE"),
    (["envelope", "inputs/operads.spec"], "needs"),
])
def test_input_errors_exit_two(capsys, monkeypatch, args, needle):
    code, out, err = run(capsys, monkeypatch, *args)
    assert code == 2
    assert needle in err and out == ""


def test_parse_error_location(capsys, monkeypatch, tmp_path):
    p = tmp_path / "broken.spec"
    p.write_text("ring QQ\nlie g {\n  basis e f\n  bracket e f = 2 * * e\n}\n")
    code, _, err = run(capsys, monkeypatch, "pbw-verify", str(p))
    assert code == 2 and "E_PARSE: line 4, column 21" in err


def test_usage_errors_exit_two(capsys, monkeypatch):
    assert run(capsys, monkeypatch, "nosuch", "inputs/sl2.spec")[0] == 2
    assert run(capsys, monkeypatch)[0] == 2


def test_thread_variable_validated(capsys, monkeypatch):
    for bad in ("0", "-2", "many"):
        code, _, err = run(capsys, monkeypatch, "pbw-verify", "inputs/sl2.spec", threads=bad)
        assert code == 2 and "OPERAD_FORGE_THREADS" in err


def test_out_file_matches_stdout(capsys, monkeypatch, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, monkeypatch, "envelope", "inputs/dual.spec", "--out", str(target))
    assert code == 0 and target.read_text() == out


def test_thread_counts_agree(capsys, monkeypatch):
    outs = {run(capsys, monkeypatch, "operad-check", "inputs/operads.spec", "--max-deg", "4",
                threads=t)[1] for t in ("1", "3")}
    assert len(outs) == 1
