import json

import pytest

from sessium.cli import main
from sessium.harness import load_case, run_corpus, simulate
from sessium.lts import build_graph
from sessium.relations import DEFAULT_BOUND, Bound, Verdict, strong_subsession, subsession
from sessium.typecheck import typecheck


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


def test_complete_example(capsys):
    code, out, _ = run(capsys, "complete", "--universe", "default.u", "?Int.1 | !Real.1")
    assert code == 1 and "complete: false" in out


def test_sub_example(capsys, T, u):
    code, doc = structured(capsys, "sub", "--bound", "4", "?Int.1", "?Int.1 + ?Bool.1")
    assert code == 1
    lib = subsession(T("?Int.1"), T("?Int.1 + ?Bool.1"), Bound(4), u)
    assert Verdict.from_dict(doc["result"]) == lib
    assert doc["result"]["evidence"]["tester"] == "!Bool.0 + !Int.1"


def test_typecheck_example(capsys):
    code, out, _ = run(capsys, "typecheck", "examples/seller_buyers.pi")
    assert code == 0 and "status: WellTyped" in out


def test_strong_sub_adapter(capsys, T, u):
    code, doc = structured(capsys, "sub", "--strong", "0", "!Int.0")
    assert code == 1
    assert Verdict.from_dict(doc["result"]) == strong_subsession(T("0"), T("!Int.0"), DEFAULT_BOUND, u)


def test_yes_exits_zero(capsys):
    assert run(capsys, "sub", "!Real.1", "!Int.1")[0] == 0
    assert run(capsys, "equiv", "0", "?Int.0")[0] == 0
    assert run(capsys, "viable", "?Int.1")[0] == 0
    assert run(capsys, "viable", "0")[0] == 1


def test_unknown_exit_depends_on_mode(capsys):
    s = "rec X. 1 (+) ?[?Int.!Bool.1].X"
    args = ("sub", "--strong", s, "(%s) | (%s)" % (s, s))
    assert run(capsys, *args)[0] == 3
    assert run(capsys, *args, "--mode", "permissive")[0] == 0


def test_typecheck_adapter(capsys, u):
    code, doc = structured(capsys, "typecheck", "persistent_server", "--mode", "permissive")
    lib = typecheck(load_case("persistent_server", u).process, {}, "permissive", DEFAULT_BOUND, u)
    assert code == 0 and doc["result"] == json.loads(json.dumps(lib.to_dict()))
    assert run(capsys, "typecheck", "persistent_server")[0] == 3
    code, doc = structured(capsys, "typecheck", "mixed_choice")
    assert code == 1 and doc["result"]["rule"] == "t-ext"


def test_lts_adapter(capsys, T, u):
    code, doc = structured(capsys, "lts", "!Int.1 | ?Int.1")
    assert code == 0 and doc["result"] == build_graph(T("!Int.1 | ?Int.1"), u).to_dict()


def test_simulate_adapter(capsys, u):
    code, doc = structured(capsys, "simulate", "primality", "--seed", "4", "--steps", "30")
    lib = simulate(load_case("primality", u).process, 30, 4, u)
    assert code == 0 and doc["result"] == lib.to_dict()


def test_check_commands(capsys):
    assert run(capsys, "check-sr", "seller_buyers", "--exhaustive")[0] == 0
    assert run(capsys, "check-sr", "nonviable", "--exhaustive", "--force")[0] == 1
    assert run(capsys, "check-progress", "primality")[0] == 0
    code, out, _ = run(capsys, "check-progress", "mixed_choice", "--channel", "a")
    assert code == 0 and "not ready on a" in out


def test_corpus_adapter(capsys, u):
    code, doc = structured(capsys, "corpus", "deadlock", "nonviable")
    assert code == 0
    assert doc["result"] == json.loads(json.dumps(run_corpus(u, DEFAULT_BOUND, ["deadlock", "nonviable"]).to_dict()))


def test_laws(capsys):
    code, doc = structured(capsys, "laws", "--random", "20")
    assert code == 0 and doc["result"]["contradictions"] == []


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", "rec X. !Int.X")[0] == 0
    f = tmp_path / "t.st"
    f.write_text("?Int.!Bool.1")
    code, doc = structured(capsys, "validate", str(f))
    assert code == 0 and doc["result"]["type"] == "?Int.!Bool.1"
    assert run(capsys, "validate", "seller_buyers.pi")[0] == 0


@pytest.mark.parametrize("argv", [
    ["validate", "?Int."],
    ["frobnicate"],
    ["sub", "1"],
    ["typecheck", "no_such_case"],
    ["complete", "--bound", "x,y", "1"],
    ["complete", "--universe", "/nope/missing.u", "1"],
    ["corpus", "no_such_case"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_is_structured(capsys):
    code, out, err = run(capsys, "validate", "?Int.", "--format", "structured")
    assert code == 2 and json.loads(err)["error"]["kind"] == "ParseError"


def test_custom_universe(capsys, tmp_path):
    f = tmp_path / "tiny.u"
    f.write_text("cell n\ncell m\ntype N = n\ntype M = n, m\ncarrier n = 1\ncarrier m = 2\n")
    assert run(capsys, "complete", "--universe", str(f), "?N.1 | !M.1")[0] == 1
    assert run(capsys, "complete", "--universe", str(f), "?M.1 | !N.1")[0] == 0


def test_structured_output_is_byte_identical(capsys):
    for argv in (["simulate", "seller_buyers", "--seed", "3"], ["typecheck", "primality"],
                 ["sub", "?Int.1", "?Int.1 + ?Bool.1"], ["check-sr", "primality", "--exhaustive"]):
        a = run(capsys, *argv, "--format", "structured")[1]
        b = run(capsys, *argv, "--format", "structured")[1]
        assert a == b


def test_timing_is_opt_in(capsys):
    _, doc = structured(capsys, "complete", "1")
    assert "timing" not in doc
    _, doc = structured(capsys, "complete", "1", "--timing")
    assert doc["timing"]["seconds"] >= 0
