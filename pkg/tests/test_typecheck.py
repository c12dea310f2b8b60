import pytest

from sessium.harness import CORPUS_FILES, load_case
from sessium.process import parse_process
from sessium.relations import DEFAULT_BOUND, Bound
from sessium.sessiontypes import ONE, pretty
from sessium.typecheck import (
    REJECTED, WARNINGS, WELL_TYPED, ExprError, MissingAnnotation, TExtShape, TInputSShape, TypingError,
    check_replication, check_restriction, env_viable, infer, typecheck,
)

B = DEFAULT_BOUND


@pytest.fixture(scope="module")
def P(u):
    return lambda text: parse_process(text, u)


def test_nil(P, u):
    assert infer({}, P("0"), u) == {}


def test_value_prefixes(P, u):
    env = infer({}, P("c?(x:Int).c!(x+1).d!(true)"), u)
    assert pretty(env["c"]) == "?Int.!Int.1" and pretty(env["d"]) == "!Bool.1"


def test_delegation_composes_in_parallel(P, u):
    env = infer({}, P("a![c:!Int.1].a![c:!Bool.1].c?(x:Int).c?(y:Bool)"), u)
    assert pretty(env["c"]) == "!Bool.1 | !Int.1 | ?Int.?Bool.1"


def test_external_choice_type(P, u):
    env = infer({}, P("a?(x:Int).b!(1) + a?(x:Bool)"), u)
    assert pretty(env["a"]) == "?Bool.1 + ?Int.1"
    assert pretty(env["b"]) == "!Int.1 (+) 1"


@pytest.mark.parametrize("text,t,want", [
    ("c", "?String.!Int.1 | !String.?Int.1", "Yes"),
    ("c", "1 | !Int.1", "No"),
    ("c", "1", "Yes"),
])
def test_check_restriction(T, u, text, t, want):
    assert check_restriction({text: T(t)}, text, u).tag == want


def test_check_replication(T, u):
    assert check_replication(ONE, None, B, u).yes
    s, entry = T("rec X.(1 (+) ?[?Int.!Bool.1].X)"), T("?[?Int.!Bool.1].1")
    assert strong_below(s, entry, u)
    assert check_replication(entry, s, B, u).unknown
    assert check_replication(T("?Int.1"), None, B, u).no


def strong_below(s, entry, u):
    from sessium.relations import strong_subsession
    return strong_subsession(s, entry, B, u).yes


def test_env_viable(T, u):
    assert env_viable({"a": T("![1].1 | ?[!Int.1].1")}, B, u).no
    eta = "?String.!Int.?Address.!Date.1"
    assert env_viable({"a": T("?[%s].1 | ![%s].1" % (eta, eta))}, B, u).yes
    assert env_viable({}, B, u).yes


def test_shape_errors(P, u):
    cases = [
        ("a?(x:Int) + b?(x:Int)", TExtShape),
        ("a!(1) + a!(1) | b!(1) + 0", TExtShape),
        ("a?[x].b!(1)", TInputSShape),
        ("a![c].c!(1)", MissingAnnotation),
        ("a!(true + 1)", ExprError),
    ]
    for text, exc in cases:
        with pytest.raises(exc):
            infer({}, P(text), u)
        rep = typecheck(P(text), {}, "strict", B, u)
        assert rep.status == REJECTED and rep.rule == exc.rule and rep.location


def test_seller_buyers_well_typed(u):
    rep = typecheck(load_case("seller_buyers", u).process, {}, "strict", B, u)
    assert rep.status == WELL_TYPED
    assert set(rep.restricted()) == {"c", "d"}


def test_deadlock_is_well_typed(u):
    rep = typecheck(load_case("deadlock", u).process, {}, "strict", B, u)
    assert rep.status == WELL_TYPED
    assert all(c.verdict.yes for c in rep.checks if c.rule == "t-res")


def test_persistent_server_modes(u):
    p = load_case("persistent_server", u).process
    strict, loose = typecheck(p, {}, "strict", B, u), typecheck(p, {}, "permissive", B, u)
    assert strict.status == REJECTED and loose.status == WARNINGS
    assert strict.rule == "t-bang"
    assert [c.verdict.tag for c in loose.checks if c.rule != "t-bang"] == ["Yes", "Yes"]


def test_report_serialises(u):
    rep = typecheck(load_case("primality", u).process, {}, "strict", B, u)
    d = rep.to_dict()
    assert d["status"] == WELL_TYPED
    assert {c["rule"] for c in d["checks"]} == {"t-res"}  # every channel is restricted
    assert d["env"] == {}
    assert "status: WellTyped" in rep.format_text()


def test_mode_is_validated(P, u):
    with pytest.raises(ValueError):
        typecheck(P("0"), {}, "lenient", B, u)


@pytest.mark.parametrize("name", sorted(CORPUS_FILES))
def test_free_names_are_typed(u, name):
    p = load_case(name, u).process
    try:
        env = infer({}, p, u)
    except TypingError:
        return
    assert p.fn <= set(env)


@pytest.mark.parametrize("name", sorted(CORPUS_FILES))
def test_deterministic_and_bound_monotone(u, name):
    p = load_case(name, u).process
    a = typecheck(p, {}, "strict", B, u).to_dict()
    assert typecheck(p, {}, "strict", B, u).to_dict() == a
    lo = typecheck(p, {}, "permissive", Bound(3, 2, 300), u).status
    hi = typecheck(p, {}, "permissive", B, u).status
    if WARNINGS not in (lo, hi):
        assert lo == hi
