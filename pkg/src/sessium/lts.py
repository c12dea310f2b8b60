"""Labelled transition system of session types and the completeness check.

Value labels are abstracted to cells: an input ``?t`` offers one transition
per cell of ``t``; an output ``!t`` first commits internally to one cell
(``!<c>``) and then offers that cell.  Since continuations never depend on
the particular value inside a cell, this abstraction is exact.

Channel synchronisations need a subsession verdict on the exchanged payload
types.  Payloads have strictly smaller weight, so the recursion into
:mod:`sessium.relations` is well founded.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .sessiontypes import (
    DONE, EXT, FAIL, INT, ONE, PAR, PREFIX, REC, ZERO,
    InCh, InVal, OutCell, OutCh, OutVal, SessionType, ext, par, prefix, pretty, require_valid, unfold,
)
from .universe import TypeUniverse


class UndecidedSideCondition(Exception):
    """A channel synchronisation needs ``lhs ⪯ rhs`` but the verdict is Unknown."""

    def __init__(self, lhs, rhs, verdict=None):
        self.lhs, self.rhs, self.verdict = lhs, rhs, verdict
        super().__init__("cannot decide %s <= %s (needed by a channel synchronisation)" % (pretty(lhs), pretty(rhs)))


# labels are tuples: ("ok",), ("?", cell), ("!", cell), ("?[]", payload), ("![]", payload)
SUCCESS = ("ok",)


def format_label(lab) -> str:
    tag = lab[0]
    if tag == "ok":
        return "✓"
    if tag in ("?", "!"):
        return "%s<%s>" % (tag, lab[1])
    return "%s%s]" % (tag[:2], pretty(lab[1]))


def _label_key(lab):
    return (lab[0], lab[1].key if len(lab) > 1 and isinstance(lab[1], SessionType) else (lab[1] if len(lab) > 1 else ""))


def _payload_below(lhs, rhs, universe):
    from .relations import payload_below
    return payload_below(lhs, rhs, universe)


# ---------------------------------------------------------------------------
# one-step relations


@lru_cache(maxsize=1 << 17)
def _visible(s: SessionType, universe: TypeUniverse):
    s = unfold(s)
    k = s.kind
    if k == DONE:
        return ((SUCCESS, ONE),)
    if k in (FAIL, INT):
        return ()
    if k == PREFIX:
        a = s.action
        if isinstance(a, InVal):
            return tuple((("?", c), s.cont) for c in sorted(universe.denote(a.bt)))
        if isinstance(a, OutCell):
            return ((("!", a.cell), s.cont),)
        if isinstance(a, InCh):
            return ((("?[]", a.payload), s.cont),)
        if isinstance(a, OutCh):
            return ((("![]", a.payload), s.cont),)
        return ()  # OutVal: only the internal commitment
    out = []
    if k == EXT:
        for c in s.children:
            out.extend(_visible(c, universe))
    elif k == PAR:
        comps = s.children
        vis = [_visible(c, universe) for c in comps]
        for i, steps in enumerate(vis):
            for lab, nxt in steps:
                if lab is not SUCCESS:
                    out.append((lab, par(*comps[:i], nxt, *comps[i + 1:])))
        oks = [[n for lab, n in steps if lab is SUCCESS] for steps in vis]
        if all(oks):
            for combo in product(*oks):
                out.append((SUCCESS, par(*combo)))
    return _dedup_labelled(out)


def _dedup_labelled(pairs):
    seen, out = set(), []
    for lab, t in pairs:
        ident = (lab, t)
        if ident not in seen:
            seen.add(ident)
            out.append((lab, t))
    out.sort(key=lambda p: (_label_key(p[0]), p[1].key))
    return tuple(out)


@lru_cache(maxsize=1 << 17)
def _internal(s: SessionType, universe: TypeUniverse):
    s = unfold(s)
    k = s.kind
    out = []
    if k == INT:
        out.extend(s.children)
    elif k == PREFIX:
        if isinstance(s.action, OutVal):
            out.extend(prefix(OutCell(c), s.cont) for c in sorted(universe.denote(s.action.bt)))
    elif k == EXT:
        cs = s.children
        for i, c in enumerate(cs):
            for n in _internal(c, universe):
                out.append(ext(*cs[:i], n, *cs[i + 1:]))
    elif k == PAR:
        cs = s.children
        for i, c in enumerate(cs):
            for n in _internal(c, universe):
                out.append(par(*cs[:i], n, *cs[i + 1:]))
        vis = [_visible(c, universe) for c in cs]
        for i, j in product(range(len(cs)), repeat=2):
            if i == j:
                continue
            for lab, ni in vis[i]:
                if lab[0] == "!":
                    for lab2, nj in vis[j]:
                        if lab2 == ("?", lab[1]):
                            out.append(_replace2(cs, i, ni, j, nj))
                elif lab[0] == "![]":
                    for lab2, nj in vis[j]:
                        if lab2[0] == "?[]":
                            if _payload_below(lab[1], lab2[1], universe):
                                out.append(_replace2(cs, i, ni, j, nj))
                            else:
                                out.append(ZERO)
    seen, res = set(), []
    for t in out:
        if t not in seen:
            seen.add(t)
            res.append(t)
    res.sort(key=lambda t: t.key)
    return tuple(res)


def _replace2(cs, i, ni, j, nj):
    lst = list(cs)
    lst[i], lst[j] = ni, nj
    return par(*lst)


def step_internal(s: SessionType, universe: TypeUniverse) -> tuple:
    """Internal successors of ``s`` (deterministically ordered)."""
    return _internal(require_valid(s), universe)


def step_visible(s: SessionType, universe: TypeUniverse) -> tuple:
    """Visible ``(label, successor)`` pairs of ``s``."""
    return _visible(require_valid(s), universe)


@lru_cache(maxsize=1 << 17)
def _ok(s: SessionType) -> bool:
    # same answer as looking for a ✓ among the visible steps, without building them
    s = unfold(s)
    if s.kind == DONE:
        return True
    if s.kind == EXT:
        return any(_ok(c) for c in s.children)
    if s.kind == PAR:
        return all(_ok(c) for c in s.children)
    return False


def success_enabled(s: SessionType, universe: TypeUniverse = None) -> bool:
    return _ok(s)


# ---------------------------------------------------------------------------
# state graphs


@dataclass
class TypeStateGraph:
    root: SessionType
    nodes: list
    edges: dict = field(repr=False)
    success: dict = field(repr=False)

    @property
    def n_edges(self):
        return sum(len(v) for v in self.edges.values())

    def index(self):
        return {n: i for i, n in enumerate(self.nodes)}

    def to_dict(self) -> dict:
        idx = self.index()
        return {
            "root": pretty(self.root),
            "nodes": [{"id": i, "type": pretty(n), "success": self.success[n]} for i, n in enumerate(self.nodes)],
            "edges": [[idx[a], idx[b]] for a in self.nodes for b in self.edges[a]],
        }

    def format_text(self) -> str:
        idx = self.index()
        lines = ["%d nodes, %d internal edges" % (len(self.nodes), self.n_edges)]
        for i, n in enumerate(self.nodes):
            mark = " ✓" if self.success[n] else ""
            lines.append("  [%d]%s %s" % (i, mark, pretty(n)))
        for a in self.nodes:
            for b in self.edges[a]:
                lines.append("  %d -> %d" % (idx[a], idx[b]))
        return "\n".join(lines)


def build_graph(s: SessionType, universe: TypeUniverse) -> TypeStateGraph:
    """All states reachable from ``s`` by internal steps, breadth first."""
    require_valid(s)
    nodes, edges, seen = [], {}, {s}
    queue = deque([s])
    while queue:
        n = queue.popleft()
        nodes.append(n)
        succ = _internal(n, universe)
        edges[n] = succ
        for m in succ:
            if m not in seen:
                seen.add(m)
                queue.append(m)
    success = {n: success_enabled(n, universe) for n in nodes}
    return TypeStateGraph(s, nodes, edges, success)


def can_reach_success(graph: TypeStateGraph) -> set:
    """Nodes from which a success-enabled node is internally reachable."""
    preds = {n: [] for n in graph.nodes}
    for a in graph.nodes:
        for b in graph.edges[a]:
            preds[b].append(a)
    good = {n for n in graph.nodes if graph.success[n]}
    queue = deque(good)
    while queue:
        n = queue.popleft()
        for p in preds[n]:
            if p not in good:
                good.add(p)
                queue.append(p)
    return good


@lru_cache(maxsize=1 << 16)
def _complete(s, universe):
    g = build_graph(s, universe)
    return len(can_reach_success(g)) == len(g.nodes)


def is_complete(s: SessionType, universe: TypeUniverse) -> bool:
    """Every internally reachable state can still reach a ✓-enabled state."""
    return _complete(require_valid(s), universe)


def stuck_witness(s: SessionType, universe: TypeUniverse):
    """A reachable state that can no longer reach success, or ``None``."""
    g = build_graph(s, universe)
    good = can_reach_success(g)
    for n in g.nodes:
        if n not in good:
            return n
    return None
