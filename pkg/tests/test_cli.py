import io
import json

import pytest

from rmc.cli import run_command

PERM = "<X>;<Y>;<Z>;[X];[Z];[Y]"


def run(*argv):
    out = io.StringIO()
    code = run_command(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def perm(tmp_path):
    p = tmp_path / "perm.rmc"
    p.write_text(PERM + "\n")
    return str(p)


def test_run_permutation(perm):
    code, out = run("run", perm, "--mem", "_: [e,d,c]")
    assert code == 0
    assert out.splitlines()[0].startswith("_: [c,e,d]")


def test_run_closed_has_no_bindings():
    code, out = run("run", "-e", "E X Y Z." + PERM, "--mem", "_: [e,d,c]")
    assert (code, out) == (0, "_: [c,e,d]\n")


def test_dual(perm):
    assert run("dual", perm) == (0, "<Y>;<Z>;<X>;[Z];[Y];[X]\n")


def test_typecheck(tmp_path):
    p = tmp_path / "delta.rmc"
    p.write_text("E X.<X>;[X];[X]")
    assert run("typecheck", str(p)) == (0, "1 > 2\n")
    code, _ = run("typecheck", str(p), "--type", "2 > 1")
    assert code == 1


def test_json_output():
    code, out = run("run", "-e", "[c] + [d]", "--json")
    assert code == 0
    assert json.loads(out) == [
        {"memory": {"_": ["c"]}, "substitution": {}},
        {"memory": {"_": ["d"]}, "substitution": {}},
    ]


def test_no_results_exit_one():
    assert run("run", "-e", "<c>")[0] == 1


def test_parse_error_exit_two(capsys):
    code, _ = run("run", "-e", "[c")
    assert code == 2
    assert "expected" in capsys.readouterr().err


def test_usage_error_exit_two():
    assert run("frobnicate")[0] == 2
    assert run("run", "-e", "*", "--fuel", "0")[0] == 2


def test_equiv_verdicts():
    code, out = run("equiv", "-e", "<c>", "*", "--mem", "_: [c]")
    assert code == 1 and out.startswith("Counterexample")
    code, out = run("equiv", "-e", "[c]a;[d]b", "[d]b;[c]a", "--samples", "5")
    assert code == 0 and out.startswith("ConsistentUpToBudget")


def test_normalize():
    assert run("normalize", "-e", "E X.[c];<X>;[X]") == (0, "[c];*\n")


def test_star_budget_note(capsys):
    code, out = run("eval", "-e", "[c]^*", "--star-unfold", "2")
    assert code == 0 and out.splitlines() == ["_: [c,c]", "_: [c]", "ε"]
    assert "incomplete" in capsys.readouterr().err


def test_trace_ends_in_success():
    code, out = run("trace", "-e", "E X.<X>;[X];[X]", "--mem", "_: [c]")
    assert code == 0 and out.splitlines()[-1] == "success"


def test_denote():
    code, out = run("denote", "-e", "E X.<X>;[X];[X]", "--depth", "2", "--sig", "c/0,f/1")
    assert code == 0 and out.startswith("ConsistentUpToBudget")


def test_encode_turing(tmp_path):
    src = tmp_path / "succ.tm"
    src.write_text("tape: 11\nhead: 0\ninitial: i\nhalt: h\ni 1 -> i 1 R\ni 0 -> h 1 R\n")
    stem = tmp_path / "succ"
    assert run("encode", "turing", str(src), "-o", str(stem))[0] == 0
    mem = (tmp_path / "succ.mem").read_text().strip()
    code, out = run("run", str(tmp_path / "succ.rmc"), "--mem", mem, "--dedup")
    assert code == 0 and "q: [h]" in out and "l: [bot,1,1,1]" in out


def test_encode_regex_to_stdout(tmp_path):
    src = tmp_path / "r.re"
    src.write_text("(a|b)c")
    assert run("encode", "regex", str(src)) == (0, "([a] + [b]);[c]\n# memory: ε\n")


def test_deterministic_with_seed():
    argv = ("equiv", "-e", "E X.<X>;[X]", "*", "--samples", "8", "--seed", "3")
    assert run(*argv) == run(*argv)


def test_denote_on_given_input():
    code, out = run("denote", "-e", "E X.<X>;[X];[X]", "--input", "(f(c))", "--star", "3")
    assert (code, out) == (0, "_: [f(c),f(c)]\n")
    assert run("denote", "-e", "<c>", "--input", "d")[0] == 1
