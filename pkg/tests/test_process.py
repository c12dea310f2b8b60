import pytest

from sessium.harness import CORPUS_FILES, explore, load_case
from sessium.process import (
    IDLE, BinOp, BoundOut, EvalError, Ext, Lit, New, Par, Prefix, Repl, TAU, Var, eval_expr, free_names, label_bn, label_fn,
    parse_process, proc_steps, ready, substitute, tau_steps,
)
from sessium.sessiontypes import ParseError


@pytest.fixture(scope="module")
def P(u):
    return lambda text: parse_process(text, u)


def test_idle(P):
    assert P("0") is IDLE or P("0") == IDLE


def test_buyer2_prefixes(P):
    p = P("b?[y].y?(contrib:Int).y?[z].z!(address).z?(d:Date)")
    subjects = []
    while isinstance(p, Prefix):
        subjects.append(str(p.pi))
        p = p.cont
    assert subjects == ["b?[y]", "y?(contrib:Int)", "y?[z]", "z!(address())", "z?(d:Date)"]


def test_annotated_replication(P, T):
    p = P("*{server: rec X.(1 (+) ?[?Int.1].X)} server?[x:?Int.1].x?(n:Int)")
    assert isinstance(p, Repl)
    assert dict(p.ann) == {"server": T("rec X.(1 (+) ?[?Int.1].X)")}


@pytest.mark.parametrize("text,names", [
    ("0", set()),
    ("new c. a![c:1]", {"a"}),
    ("a!(3).b?(x:Int)", {"a", "b"}),
    ("a?[x].x!(3)", {"a"}),
])
def test_free_names(P, text, names):
    assert free_names(P(text)) == names


def test_substitution(P):
    assert substitute(P("x!(3)"), "x", "c") == P("c!(3)")
    assert substitute(P("c?[x].x!(3)"), "x", "d") == P("c?[x].x!(3)")
    body = P("b?[y].y?(contrib:Int).y?[z].z!(address).z?(d:Date)").cont
    assert substitute(body, "y", "d") == P("d?(contrib:Int).d?[z].z!(address).z?(d:Date)")


def test_substitution_avoids_capture(P):
    q = substitute(P("new d. x!(3).d!(1)"), "x", "d")
    assert "d" in free_names(q)
    (inner,) = [q] if isinstance(q, New) else []
    assert inner.name != "d"


def test_eval(u):
    assert eval_expr({"price": 30}, BinOp("/", Var("price"), Lit(2)), u) == 15
    assert eval_expr({}, Lit(True), u) is True
    from sessium.process import App
    assert eval_expr({}, App("isprime", (Lit(4),)), u) is False
    with pytest.raises(EvalError):
        eval_expr({}, Var("nope"), u)


def test_internal_choice_steps(P, u):
    steps = proc_steps(P("a!(1) (+) b!(2)"), u)
    assert (TAU, P("a!(1)")) in steps and (TAU, P("b!(2)")) in steps


def test_replication_unfolds(P, u):
    p = P("*a!(1)")
    assert proc_steps(p, u) == [(TAU, P("*a!(1) | a!(1)"))]


def test_scope_extrusion(P, u):
    p = P("new d. c![d:!Int.1].d!(3) | c?[x].x?(n:Int)")
    taus = tau_steps(p, u)
    assert taus == [P("new d. (d!(3) | d?(n:Int))")]
    (q,) = taus
    assert "d" not in free_names(q)


def test_extrusion_renames_clashing_binder(P, u):
    p = P("(new d. c![d:!Int.1].d!(3)) | c?[x].(x?(n:Int) | d!(5))")
    (q,) = tau_steps(p, u)
    assert "d" in free_names(q)  # the outer d stays free, the extruded one is renamed
    assert isinstance(q, New) and q.name != "d"


def test_bound_output_label(P, u):
    labs = [lab for lab, _ in proc_steps(P("new d. c![d:!Int.1].d!(3)"), u)]
    assert any(isinstance(lab, BoundOut) and label_bn(lab) == {"d"} for lab in labs)


def test_value_input_branches_over_carriers(P, u):
    steps = proc_steps(P("a?(x:Bool).b!(x)"), u)
    assert sorted(str(q) for _, q in steps) == ["b!(false)", "b!(true)"]


def test_external_choice(P, u):
    p = P("(a!(1) (+) a!(2)) + b?(x:Bool)")
    steps = proc_steps(p, u)
    taus = [q for lab, q in steps if lab is TAU]
    assert all(isinstance(q, Ext) for q in taus)  # τ inside a branch keeps the choice
    vis = [q for lab, q in steps if lab is not TAU]
    assert vis and all(q == IDLE for q in vis)  # a visible step discards the other branch


@pytest.mark.parametrize("text,c,want", [
    ("c!(3) | c?(x:Int)", "c", True),
    ("a!(3).c!(3)", "c", False),
    ("a!(3)", "c", True),
    ("c!(3) + c?(x:Int)", "c", True),
    ("c!(3) (+) c?(x:Int)", "c", False),
    ("*c!(3)", "c", False),
    ("new c. c!(3)", "c", True),
    ("a?(x:Int).b?(y:Bool) + b?(x:Int).a?(y:Bool)", "a", False),
    ("0", "c", True),
])
def test_ready(P, text, c, want):
    assert ready(P(text), c) is want


def test_parse_errors(u):
    for bad in ["a!(", "a?(x).0 |", "new . a!(1)", "*{a 1} a!(1)"]:
        with pytest.raises(ParseError):
            parse_process(bad, u)


@pytest.mark.parametrize("name", sorted(CORPUS_FILES))
def test_transitions_respect_free_names(u, name):
    doc = load_case(name, u)
    states, _, _ = explore(doc.process, u, max_states=200)
    for s in states[:60]:
        for lab, q in proc_steps(s, u):
            # a free input may receive a fresh name, which is free in the label
            assert q.fn <= s.fn | label_fn(lab) | label_bn(lab), (str(s), str(lab), str(q))
            if lab is TAU:
                assert q.fn <= s.fn


def test_structural_normalisation(P):
    assert P("a!(1) | 0 | b!(2)") == P("b!(2) | a!(1)")
    assert isinstance(P("a!(1) | b!(2)"), Par)
    assert P("new c. a!(1)") == P("a!(1)")
