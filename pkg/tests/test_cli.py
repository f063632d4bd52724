import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from protori.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, dumps, main, run
from protori.dsl import parse

GOLDEN = Path(__file__).parent / "golden"


def invoke(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    return code, capsys.readouterr().out


@pytest.mark.parametrize("name, code", [("solenoids", EXIT_OK), ("clipped", EXIT_INCONCLUSIVE),
                                        ("errors", EXIT_ERROR)])
def test_golden_scripts(name, code, capsys):
    got_code, out = invoke(["run", str(GOLDEN / f"{name}.pr")], capsys)
    assert got_code == code
    assert out == (GOLDEN / f"{name}.json").read_text()


def test_golden_findual(capsys, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    code, out = invoke(["findual", "check", "--seq", "sequences.txt"], capsys)
    assert code == EXIT_OK
    assert out == (GOLDEN / "findual.json").read_text()
    reports = [v["payload"] for v in json.loads(out)]
    assert reports[0]["short_exact"] and not reports[1]["short_exact"]


def test_output_is_byte_stable(capsys):
    src = str(GOLDEN / "clipped.pr")
    _, first = invoke(["run", src, "--seed", "3"], capsys)
    _, second = invoke(["run", src, "--seed", "3"], capsys)
    assert first == second


def test_documented_examples_in_process():
    script = parse(
        "a1 = aseq(pre=[], period=[10])\na2 = aseq(pre=[], period=[2, 5])\n"
        "group G = strands [({2:inf}, [1,0]), ({3:inf}, [0,1]), ({}, [1/5,1/5])]\n"
        "solenoid-iso a1 a2\ndecompose G --bound 8\n"
    )
    iso, dec = run(script)
    assert iso["status"] == "ok" and iso["payload"]["iso"] is True
    assert dec["status"] == "inconclusive" and dec["bound_used"] == 8
    assert dec["payload"]["torus_types"] == [] and dec["payload"]["remainder_rank"] == 2
    assert run(parse("")) == []


def test_stdin_and_empty(capsys, monkeypatch):
    code, out = invoke(["run", "-"], capsys, stdin="# nothing\n", monkeypatch=monkeypatch)
    assert code == EXIT_OK and json.loads(out) == []


def test_parse_error_exit_code(capsys, monkeypatch):
    code, out = invoke(["run"], capsys, stdin="t = {2:3,, 3:inf}\n", monkeypatch=monkeypatch)
    v = json.loads(out)
    assert code == EXIT_ERROR and v["status"] == "error"
    assert (v["payload"]["line"], v["payload"]["column"]) == (1, 10)


def test_subcommands(capsys, tmp_path):
    code, out = invoke(["solenoid", "iso", "aseq(pre=[], period=[10])", "aseq(pre=[], period=[2,5])"],
                       capsys)
    assert code == EXIT_OK and json.loads(out)["payload"]["iso"] is True
    code, out = invoke(["pair", "--aseq", "aseq(pre=[], period=[2])", "--q", "3/4", "--x", "[1,1]",
                        "--r", "1/2"], capsys)
    assert json.loads(out)["payload"]["angle"] == "7/8"
    code, out = invoke(["adic", "add", "--aseq", "aseq(pre=[2,3], period=[4])", "--prec", "3",
                        "[1,2,0]", "[1,1,0]"], capsys)
    assert json.loads(out)["payload"]["digits"] == [0, 1, 1]
    defs = tmp_path / "defs.pr"
    defs.write_text("group G = strands [({2:inf}, [1,0]), ({3:inf}, [0,1]), ({}, [1/5,1/5])]\n")
    code, out = invoke(["clipped", "G", "--bound", "8", "--defs", str(defs)], capsys)
    assert code == EXIT_INCONCLUSIVE and json.loads(out)["bound_used"] == 8
    code, out = invoke(["member", "G", "[1/10, 1/5]", "--defs", str(defs)], capsys)
    assert code == EXIT_OK and json.loads(out)["payload"]["member"] is False
    code, out = invoke(["dim", "G", "--defs", str(defs), "--format", "text"], capsys)
    assert code == EXIT_OK and "dim" in out and not out.lstrip().startswith("{")


def test_errors_become_verdicts(capsys):
    code, out = invoke(["solenoid", "type", "aseq(pre=[1], period=[5])"], capsys)
    assert code == EXIT_ERROR and json.loads(out)["status"] == "error"
    code, out = invoke(["member", "NOPE", "[1]"], capsys)
    assert code == EXIT_ERROR


def test_dumps_canonical():
    from fractions import Fraction

    from protori.arith import INF

    assert dumps({"b": Fraction(2, 4), "a": INF}) == '{\n  "a": "inf",\n  "b": "1/2"\n}'


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "protori.cli", "run", str(GOLDEN / "solenoids.pr")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "solenoids.json").read_text()
