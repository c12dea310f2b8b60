import pytest
from hypothesis import given, settings, strategies as st

from sessium.harness import corpus_types, random_type
from sessium.sessiontypes import (
    ONE, REC, ZERO, IllFormedType, InVal, OutVal, ParseError, ext, intc, par, parse_type, prefix, pretty,
    unfold, validate, var, weight,
)
from sessium.universe import Empty, Named, Singleton


def test_one_is_done(T):
    assert T("1") is ONE and T("0") is ZERO


def test_seller_projection(T):
    t = T("?String.!Int.?Address.!Date.1")
    assert pretty(t) == "?String.!Int.?Address.!Date.1"
    assert t.action == InVal(Named("String"))


def test_rec_has_one_prefix_on_the_loop(T):
    t = T("rec X. !Int.X")
    body = t.body
    assert body.action == OutVal(Named("Int"))
    assert body.cont is var(0)
    assert unfold(t).cont is t


def test_hash_consing_modulo_ac_and_units(T):
    assert T("?Int.1 + ?Bool.1") is T("?Bool.1 + ?Int.1")
    assert T("(!Int.1 | ?Bool.1) | 1") is T("?Bool.1 | !Int.1")
    assert T("!Int.1 + 0") is T("!Int.1")
    assert T("!Int.1 (+) (!Bool.1 (+) 1)") is intc(T("!Bool.1"), ONE, T("!Int.1"))


def test_contractivity_violation(T):
    assert any("contractivity" in p for p in validate(T("rec X. X + X")))


def test_finite_parallelism_violation(T):
    assert any("finite parallelism" in p for p in validate(T("rec X. (X | !Int.1)")))


def test_valid_recursion(T):
    assert validate(T("rec X. !Int.X")) == []


def test_unbound_variable_is_rejected(u):
    with pytest.raises((ParseError, IllFormedType)):
        parse_type("!Int.X", u)


@pytest.mark.parametrize("text", ["?Int.", "!Int.1 +", "(1", "?[1.1"])
def test_parse_errors(u, text):
    with pytest.raises(ParseError):
        parse_type(text, u)


@pytest.mark.parametrize("text,w", [("!Int.1", 0), ("?[!Int.1].1", 1), ("![?[!Bool.1].1].1", 2)])
def test_weight(T, text, w):
    assert weight(T(text)) == w


def test_weight_of_channel_prefix(T):
    rho, s = T("?[!Int.1].1"), T("![?[!Bool.1].1].1")
    from sessium.sessiontypes import InCh
    assert weight(prefix(InCh(rho), s)) == max(1 + weight(rho), weight(s))


def test_denote(u):
    assert u.denote(Empty()) == frozenset()
    assert u.denote(Named("Int")) == {"int"}
    assert u.denote(Singleton("abort")) == {"abort"}


def test_bt_subtype(u):
    assert u.bt_subtype(Named("Int"), Named("Real"))
    assert u.bt_subtype(Empty(), Named("Int"))
    assert not u.bt_subtype(Named("Int"), Named("Bool"))
    assert not u.bt_subtype(Named("Real"), Named("Int"))


def test_corpus_types_are_valid(u):
    ts = corpus_types(u)
    assert len(ts) > 10
    assert all(validate(t) == [] for t in ts)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_pretty_parse_round_trip(u, seed):
    import random
    t = random_type(random.Random(seed), 8, u)
    assert parse_type(pretty(t), u) is t


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_weight_monotone_under_subterms(u, seed):
    import random
    from sessium.sessiontypes import subterms
    t = random_type(random.Random(seed), 8, u)
    assert all(weight(s) <= weight(t) for s in subterms(t) if s.is_closed)


def test_rec_binds_rightmost(T):
    t = T("rec X. ?Int.X + !Bool.1")
    assert t.kind == REC
    assert pretty(ext(t, ONE)) == pretty(ext(ONE, t))
    assert par(ONE, ONE) is ONE
