import random
import time
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from sessium.harness import corpus_types, random_type
from sessium.lts import (
    SUCCESS, UndecidedSideCondition, build_graph, can_reach_success, is_complete, step_internal, step_visible,
    stuck_witness, success_enabled,
)
from sessium.sessiontypes import DONE, EXT, FAIL, INT, PAR, PREFIX, InVal, OutVal, par, payloads_of, unfold


def test_internal_choice_steps(T, u):
    assert set(step_internal(T("?Int.1 (+) !Bool.1"), u)) == {T("?Int.1"), T("!Bool.1")}


def test_output_commits_to_a_cell(T, u):
    (s,) = step_internal(T("!Int.1"), u)
    assert str(s) == "!<int>.1"


def test_maximal_reduction_reaches_a_dead_commitment(T, u):
    states = step_internal(T("?Int.1 | !Real.1"), u)
    dead = [s for s in states if "realx" in str(s)]
    assert len(dead) == 1
    assert step_internal(dead[0], u) == ()
    assert not success_enabled(dead[0], u)


def test_one_offers_success(T, u):
    assert step_visible(T("1"), u) == ((SUCCESS, T("1")),)
    assert (SUCCESS, T("1")) in step_visible(T("1 + ?Int.1"), u)


def test_graph_of_one(T, u):
    g = build_graph(T("1"), u)
    assert len(g.nodes) == 1 and g.n_edges == 0 and g.success[g.root]


def test_fair_loop_graph(T, u):
    g = build_graph(T("(rec X. ?Int.X) | (rec Y. !Int.Y)"), u)
    assert 0 < len(g.nodes) < 10
    assert not any(g.success.values())


def test_synchronisation_graph(T, u):
    g = build_graph(T("!Int.1 | ?Int.1"), u)
    assert g.root in g.nodes and T("1") in g.nodes and g.success[T("1")]
    assert any("!<int>" in str(n) for n in g.nodes)
    assert len(g.nodes) == 3


@pytest.mark.parametrize("text,want", [
    ("1", True),
    ("?Int.1 | !Real.1", False),
    ("(1 + ?Int.1) | (1 (+) !Int.1)", True),
    ("(rec X. ?Int.X) | (rec Y. !Int.Y)", False),
    ("?String.!Int.1 | !String.?Int.1", True),
    ("!Int.1", False),
    ("0", False),
])
def test_completeness_oracle(T, u, text, want):
    assert is_complete(T(text), u) is want


def test_stuck_witness(T, u):
    assert stuck_witness(T("1"), u) is None
    w = stuck_witness(T("?Int.1 | !Real.1"), u)
    assert not is_complete(w, u)


def test_graph_is_deterministic(T, u):
    t = T("?Int.(!Bool.1 + ?'abort'.1) | !Int.?Bool.1 | !Int.!'abort'.1")
    a, b = build_graph(t, u), build_graph(t, u)
    assert a.to_dict() == b.to_dict()
    assert a.format_text() == b.format_text()


def test_channel_payload_below_goes_through_relations(T, u):
    # ![ρ] meets ?[ρ'] with ρ ⋠ ρ' (here 1 ⋠ !Int.1): the pair collapses to 0
    t = T("![1].1 | ?[!Int.1].1")
    assert not is_complete(t, u)
    assert step_internal(t, u) == (T("0"),)
    assert step_internal(T("![!Int.1].1 | ?[!Int.1].1"), u) == (T("1"),)


def test_graph_of_big_corpus_type_is_fast(T, u):
    t = T("!Int.1 | !Int.1 | ?Bool.!'abort'.1 | ?Int.(!Bool.1 + ?'abort'.1) | ?Int.(!Bool.1 + ?'abort'.1)")
    t0 = time.perf_counter()
    build_graph(t, u)
    assert time.perf_counter() - t0 < 1.0


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_completeness_is_closed_under_internal_reduction(u, seed):
    t = random_type(random.Random(seed), 8, u)
    if is_complete(t, u):
        assert all(is_complete(n, u) for n in build_graph(t, u).nodes)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_par_success_iff_all_components(u, s1, s2):
    a, b = random_type(random.Random(s1), 5, u), random_type(random.Random(s2), 5, u)
    assert success_enabled(par(a, b), u) == (success_enabled(a, u) and success_enabled(b, u))


# ---------------------------------------------------------------------------
# value-level reference: labels are carrier values, not cells


def _vn(t):
    t = unfold(t)
    k = t.kind
    if k == DONE:
        return ("1",)
    if k == FAIL:
        return ("0",)
    if k == PREFIX:
        tag = "in" if isinstance(t.action, InVal) else "out?"
        return (tag, t.action.bt, t.cont)
    if k == INT:
        return ("int", tuple(sorted(t.children, key=lambda c: c.key)))
    if k == EXT:
        return ("ext", tuple(sorted((_vn(c) for c in t.children), key=repr)))
    comps = []
    for c in t.children:
        n = _vn(c)
        comps.extend(n[1] if n[0] == "par" else [n])
    return ("par", tuple(sorted(comps, key=repr)))


def _mkpar(cs):
    flat = []
    for c in cs:
        flat.extend(c[1] if c[0] == "par" else [c])
    return ("par", tuple(sorted(flat, key=repr)))


def _vis(s, u):
    tag = s[0]
    if tag == "1":
        return [("ok", s)]
    if tag == "in":
        return [(("?", v), _vn(s[2])) for v in u.values_of(s[1])]
    if tag == "out!":
        return [(("!", s[1]), _vn(s[2]))]
    if tag == "ext":
        return [x for b in s[1] for x in _vis(b, u)]
    if tag == "par":
        out = []
        vis = [_vis(c, u) for c in s[1]]
        for i, steps in enumerate(vis):
            out += [(lab, _mkpar(s[1][:i] + (n,) + s[1][i + 1:])) for lab, n in steps if lab != "ok"]
        if all(any(lab == "ok" for lab, _ in steps) for steps in vis):
            out.append(("ok", s))
        return out
    return []


def _int(s, u):
    tag = s[0]
    if tag == "int":
        return [_vn(c) for c in s[1]]
    if tag == "out?":
        return [("out!", v, s[2]) for v in u.values_of(s[1])]
    if tag == "ext":
        return [("ext", tuple(sorted(s[1][:i] + (n,) + s[1][i + 1:], key=repr)))
                for i, b in enumerate(s[1]) for n in _int(b, u)]
    if tag == "par":
        cs, out = s[1], []
        for i, c in enumerate(cs):
            out += [_mkpar(cs[:i] + (n,) + cs[i + 1:]) for n in _int(c, u)]
        vis = [_vis(c, u) for c in cs]
        for i in range(len(cs)):
            for j in range(len(cs)):
                if i == j:
                    continue
                for (li, ni) in vis[i]:
                    for (lj, nj) in vis[j]:
                        if li != "ok" and lj != "ok" and li[0] == "!" and lj[0] == "?" and li[1] == lj[1] \
                                and type(li[1]) is type(lj[1]):
                            rest = [c for k, c in enumerate(cs) if k not in (i, j)]
                            out.append(_mkpar(rest + [ni, nj]))
        return out
    return []


def reference_complete(t, u):
    start = _vn(t)
    seen, order, edges = {start}, [start], {}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        edges[s] = _int(s, u)
        for n in edges[s]:
            if n not in seen:
                seen.add(n)
                order.append(n)
                queue.append(n)
    good = {s for s in order if any(lab == "ok" for lab, _ in _vis(s, u))}
    changed = True
    while changed:
        changed = False
        for s in order:
            if s not in good and any(n in good for n in edges[s]):
                good.add(s)
                changed = True
    return len(good) == len(order)


def _value_level_ok(t):
    return not payloads_of(t) and "'" not in str(t)


def test_cell_abstraction_agrees_with_values_on_corpus(u):
    ts = [t for t in corpus_types(u) if _value_level_ok(t)]
    assert len(ts) >= 5
    for t in ts:
        assert is_complete(t, u) == reference_complete(t, u), str(t)


def test_cell_abstraction_agrees_with_values_on_random_terms(u):
    rng = random.Random(7)
    for _ in range(200):
        t = random_type(rng, 8, u)
        assert is_complete(t, u) == reference_complete(t, u), str(t)
