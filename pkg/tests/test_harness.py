import random

import pytest

from sessium.harness import (
    BUDGET, CASES, STUCK, SUCCESS, explore, law_suite, load_case, progress_check, progress_sweep, random_type,
    run_corpus, simulate, subject_reduction_check,
)
from sessium.process import New, parse_process, tau_steps
from sessium.relations import Bound
from sessium.sessiontypes import validate


@pytest.fixture(scope="module")
def P(u):
    return lambda text: parse_process(text, u)


def test_deadlock_is_stuck_at_once(u):
    tr = simulate(load_case("deadlock", u).process, 10, 0, u)
    assert tr.status == STUCK and tr.steps == []


def test_replication_diverges(P, u):
    tr = simulate(P("*a!(1)"), 3, 0, u)
    assert tr.status == BUDGET and len(tr.steps) == 3
    assert str(tr.final) == "*a!(1) | a!(1) | a!(1) | a!(1)"


def test_seller_buyers_terminates(u):
    tr = simulate(load_case("seller_buyers", u).process, 20, 0, u)
    assert tr.status == SUCCESS
    assert "c" not in tr.final.fn and "d" not in tr.final.fn
    # a, title, price, b, contribution, delegation of c, address, date
    assert len(tr.steps) == 8


def test_simulation_is_reproducible(u):
    p = load_case("primality", u).process
    for seed in (0, 1, 2):
        assert simulate(p, 50, seed, u).to_dict() == simulate(p, 50, seed, u).to_dict()


def test_stuck_iff_no_tau(u):
    for name in sorted(CASES):
        tr = simulate(load_case(name, u).process, 30, 3, u)
        if tr.status in (STUCK, SUCCESS):
            assert tau_steps(tr.final, u) == []
        else:
            assert tau_steps(tr.final, u)


def test_snapshots(u):
    tr = simulate(load_case("seller_buyers", u).process, 3, 0, u, snapshots=True)
    assert len(tr.snapshots) == 4 and "env" in tr.snapshots[0]


def test_single_synchronisation_replay(P, u):
    p = P("new c. (c!(3) | c?(x:Int))")
    rep = subject_reduction_check(p, universe=u, exhaustive=True)
    assert rep.ok and rep.precondition and rep.transitions == 1


def test_nonviable_is_excluded_then_forced(u):
    p = load_case("nonviable", u).process
    rep = subject_reduction_check(p, universe=u, exhaustive=True)
    assert not rep.precondition and rep.ok
    forced = subject_reduction_check(p, universe=u, exhaustive=True, force=True)
    assert any("completeness No" in v for v in forced.violations)


def test_progress_trivial(P, u):
    rep = progress_check(P("c!(3) | c?(x:Int)"), "c", u)
    assert rep.precondition and rep.ok


def test_progress_shared_channel(u):
    p = load_case("primality", u).process
    states, _, _ = explore(p, u)
    # find a state where c is shared by the three components and all are ready
    checked = 0
    for s in states:
        inner = s
        while isinstance(inner, New):
            inner = inner.body
        if "c" in inner.fn:
            rep = progress_check(inner, "c", u)
            checked += rep.precondition
            assert rep.ok
    assert checked > 0


def test_progress_precondition_failure_is_not_a_counterexample(u):
    runs = progress_sweep(load_case("mixed_choice", u).process, u)
    assert runs and not any(r.violations for _, _, r in runs)
    assert not any(r.precondition for _, c, r in runs if c == "a")


def test_corpus(u):
    rep = run_corpus(u)
    assert [c.name for c in rep.cases] == sorted(CASES)
    assert rep.ok, rep.format_text()


def test_law_suite_small(u):
    rep = law_suite(universe=u, n_random=50)
    assert rep.ok, rep.format_text()
    assert rep.to_dict()["random_terms"] == 50


def test_random_types_are_small_and_valid(u):
    rng = random.Random(1)
    for _ in range(300):
        t = random_type(rng, 8, u)
        assert validate(t) == [] and t.is_closed
        assert _size(t) <= 8


def _size(t):
    return 1 + sum(_size(c) for c in t.children)
