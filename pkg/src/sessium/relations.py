"""Viability, subsession and strong subsession as three-valued analyses.

The fair-testing preorders have no known decision procedure, so every query
combines two sound half-procedures:

* a positive *law engine* that derives ``Yes`` from algebraic laws
  (each derivation is returned as a list of named steps), and
* a bounded *refutation* search that enumerates testers and returns ``No``
  together with a counterexample that replays through :func:`is_complete`.

When neither succeeds the verdict is ``Unknown`` and records the bound.
"""
from __future__ import annotations

import threading
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .lts import SUCCESS, UndecidedSideCondition, _internal, _visible, is_complete
from .sessiontypes import (
    DONE, EXT, FAIL, INT, ONE, PAR, PREFIX, REC, VAR, ZERO,
    InCh, InVal, OutCell, OutCh, OutVal, SessionType, actions_of, ext, intc, par, prefix,
    pretty, rebuild, rec, require_valid, unfold,
)
from .universe import TypeUniverse

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass(frozen=True)
class Bound:
    """Tester space limits: prefix depth, choice width, and testers examined."""

    depth: int = 4
    width: int = 2
    budget: int = 1500

    @classmethod
    def parse(cls, text: str) -> "Bound":
        parts = [int(p) for p in text.split(",")]
        names = ("depth", "width", "budget")
        return cls(**dict(zip(names, parts)))

    def to_dict(self):
        return {"depth": self.depth, "width": self.width, "budget": self.budget}


DEFAULT_BOUND = Bound()


@dataclass
class Verdict:
    tag: str
    evidence: dict = field(default_factory=dict)
    # witnesses as terms, for replay; not serialised
    terms: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def yes(self):
        return self.tag == YES

    @property
    def no(self):
        return self.tag == NO

    @property
    def unknown(self):
        return self.tag == UNKNOWN

    @property
    def definite(self):
        return self.tag != UNKNOWN

    def to_dict(self):
        return {"verdict": self.tag, "evidence": self.evidence}

    @classmethod
    def from_dict(cls, d):
        return cls(d["verdict"], d.get("evidence", {}))

    def __str__(self):
        ev = self.evidence
        if self.yes and "derivation" in ev:
            return "Yes (%s)" % "; ".join(ev["derivation"])
        if self.yes and "tester" in ev:
            return "Yes (tester %s)" % ev["tester"]
        if self.no and "context" in ev:
            return "No (context %s, tester %s)" % (ev["context"], ev["tester"])
        if self.no and "tester" in ev:
            return "No (tester %s)" % ev["tester"]
        if self.no and "stuck_state" in ev:
            return "No (doomed state %s)" % ev["stuck_state"]
        return self.tag


def _yes(derivation=None, **terms):
    ev = {"derivation": list(derivation)} if derivation is not None else {}
    for k, t in terms.items():
        ev[k] = pretty(t)
    return Verdict(YES, ev, terms)


def _no(**terms):
    return Verdict(NO, {k: pretty(t) for k, t in terms.items()}, terms)


def _unknown(bound, explored=0, reason=None):
    ev = {"bound": bound.to_dict(), "explored": explored}
    if reason:
        ev["reason"] = reason
    return Verdict(UNKNOWN, ev)


def conj(verdicts) -> Verdict:
    """Yes if all Yes, No if any No, otherwise Unknown."""
    verdicts = list(verdicts)
    for v in verdicts:
        if v.no:
            return v
    for v in verdicts:
        if v.unknown:
            return v
    return Verdict(YES, {"derivation": [d for v in verdicts for d in v.evidence.get("derivation", [])]})


# ---------------------------------------------------------------------------
# duals and tester alphabets


def _dual_action(a, universe):
    if isinstance(a, InVal):
        return OutVal(a.bt)
    if isinstance(a, OutVal):
        return InVal(a.bt)
    if isinstance(a, OutCell):
        return InVal(universe.name_for(frozenset([a.cell])))
    if isinstance(a, InCh):
        return OutCh(a.payload)
    return InCh(a.payload)


@lru_cache(maxsize=1 << 14)
def _dual(t, universe, swap):
    k = t.kind
    if k == FAIL:
        return ONE
    if k in (DONE, VAR):
        return t
    if k == PREFIX:
        return prefix(_dual_action(t.action, universe), _dual(t.cont, universe, swap))
    if k == REC:
        return rec(_dual(t.body, universe, swap))
    cs = [_dual(c, universe, swap) for c in t.children]
    if swap and k == EXT:
        return intc(*cs)
    if swap and k == INT:
        return ext(*cs)
    return rebuild(t, cs)


def dual(t: SessionType, universe: TypeUniverse, swap_choices: bool = False) -> SessionType:
    """Swap input/output (0 becomes 1); optionally also swap + and (+)."""
    return _dual(t, universe, swap_choices)


def _action_sort_key(a):
    if isinstance(a, (InCh, OutCh)):
        return (1, str(type(a).__name__), a.payload.key)
    return (0, str(type(a).__name__), str(a))


def tester_alphabet(terms, universe, same_polarity=False) -> list:
    """Actions a tester may use: duals of the actions occurring in ``terms``.

    Value actions over several cells also contribute their single-cell
    refinements, so testers can tell cells apart.
    """
    acts = []
    for t in terms:
        for a in actions_of(t):
            acts.append(a if same_polarity else _dual_action(a, universe))
    out, seen = [], set()

    def add(a):
        if a not in seen:
            seen.add(a)
            out.append(a)

    for a in sorted(set(acts), key=_action_sort_key):
        add(a)
    for a in sorted(set(acts), key=_action_sort_key):
        if isinstance(a, (InVal, OutVal)):
            cells = universe.denote(a.bt)
            if len(cells) > 1:
                for c in sorted(cells):
                    add(type(a)(universe.name_for(frozenset([c]))))
    return out


def enumerate_testers(alphabet, bound: Bound, leaves=(ZERO, ONE)):
    """Distinct testers over ``alphabet`` in order of increasing size.

    Grammar: leaves, ``a.T``, and binary ``+`` / ``(+)`` of testers, with
    prefix depth at most ``bound.depth`` and choice width at most
    ``bound.width``.
    """
    by_size = {}
    seen = set()

    def emit(t, d, size):
        if t in seen:
            return False
        seen.add(t)
        by_size.setdefault(size, []).append((t, d))
        return True

    for leaf in leaves:
        if emit(leaf, 0, 1):
            yield leaf
    size = 2
    max_size = 1
    while True:
        produced = False
        # prefixes
        for t, d in by_size.get(size - 1, ()):
            if d < bound.depth:
                for a in alphabet:
                    p = prefix(a, t)
                    if emit(p, d + 1, size):
                        produced = True
                        yield p
        # binary choices
        if bound.width >= 2:
            for s1 in range(1, size - 1):
                s2 = size - 1 - s1
                if s1 > s2:
                    break
                for i, (x, dx) in enumerate(by_size.get(s1, ())):
                    ys = by_size.get(s2, ())
                    for j, (y, dy) in enumerate(ys):
                        if s1 == s2 and j <= i:
                            continue
                        for op in (ext, intc):
                            c = op(x, y)
                            if c.kind in (EXT, INT) and len(c.children) > bound.width:
                                continue
                            if emit(c, max(dx, dy), size):
                                produced = True
                                yield c
        if produced:
            max_size = size
        elif size > 2 * max_size + 2:
            return
        size += 1


# ---------------------------------------------------------------------------
# viability


def _closure_doomed(s, universe):
    """A state that no environment can lead to success, or None.

    Explores the *optimistic* closure where every visible action of ``s`` is
    assumed to be matched.  If some state internally reachable from ``s``
    cannot reach a ✓-enabled state even so, ``s | ρ`` is incomplete for
    every ρ.
    """
    nodes, edges, seen = [], {}, {s}
    queue = deque([s])
    while queue:
        n = queue.popleft()
        nodes.append(n)
        succ = list(_internal(n, universe))
        succ.extend(m for lab, m in _visible(n, universe) if lab is not SUCCESS)
        edges[n] = succ
        for m in succ:
            if m not in seen:
                seen.add(m)
                queue.append(m)
    preds = {n: [] for n in nodes}
    for a in nodes:
        for b in edges[a]:
            preds[b].append(a)
    good = {n for n in nodes if any(lab is SUCCESS for lab, _ in _visible(n, universe))}
    queue = deque(good)
    while queue:
        n = queue.popleft()
        for p in preds[n]:
            if p not in good:
                good.add(p)
                queue.append(p)
    # states forced by internal moves alone
    queue, reach = deque([s]), {s}
    while queue:
        n = queue.popleft()
        if n not in good:
            return n
        for m in _internal(n, universe):
            if m not in reach:
                reach.add(m)
                queue.append(m)
    return None


@lru_cache(maxsize=1 << 14)
def _doomed(s, universe):
    return _closure_doomed(s, universe)


def _completes(s, rho, universe):
    try:
        return is_complete(par(s, rho), universe)
    except UndecidedSideCondition:
        return False


def find_completing_tester(s: SessionType, bound: Bound, universe: TypeUniverse):
    """A tester ρ with ``s | ρ`` complete, or None within the bound."""
    require_valid(s)
    return _find_tester(s, bound, universe)[0]


_cache_lock = threading.Lock()
_tester_cache = {}


def _find_tester(s, bound, universe):
    key = (s, bound, universe)
    hit = _tester_cache.get(key)
    if hit is not None:
        return hit
    res = _search_tester(s, bound, universe)
    with _cache_lock:
        _tester_cache[key] = res
    return res


def _search_tester(s, bound, universe):
    try:
        if _doomed(s, universe) is not None:
            return None, 0
    except UndecidedSideCondition:
        pass
    explored = 0
    tried = set()
    seeds = []
    try:
        if is_complete(s, universe):
            seeds.append(ONE)
    except UndecidedSideCondition:
        pass
    seeds += [dual(s, universe), dual(s, universe, swap_choices=True)]
    for rho in seeds:
        if rho in tried:
            continue
        tried.add(rho)
        explored += 1
        if _completes(s, rho, universe):
            return rho, explored
    for rho in enumerate_testers(tester_alphabet([s], universe), bound):
        if explored >= bound.budget:
            break
        if rho in tried:
            continue
        tried.add(rho)
        explored += 1
        if _completes(s, rho, universe):
            return rho, explored
    return None, explored


_viable_cache = {}


def is_viable(s: SessionType, bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None) -> Verdict:
    """Yes with a completing tester, No with a doomed state, or Unknown."""
    require_valid(s)
    key = (s, bound, universe)
    v = _viable_cache.get(key)
    if v is None:
        v = _is_viable(s, bound, universe)
        with _cache_lock:
            _viable_cache[key] = v
    return v


def _is_viable(s, bound, universe):
    try:
        doomed = _doomed(s, universe)
    except UndecidedSideCondition as exc:
        return _unknown(bound, 0, str(exc))
    if doomed is not None:
        return _no(stuck_state=doomed)
    rho, explored = _find_tester(s, bound, universe)
    if rho is not None:
        return _yes(None, tester=rho)
    return _unknown(bound, explored)


# ---------------------------------------------------------------------------
# law engine


@lru_cache(maxsize=1 << 15)
def normal_form(t: SessionType, universe: TypeUniverse) -> SessionType:
    """Rewrite with equalities valid for ≃ beyond the built-in AC/unit laws.

    ``!empty.η`` and ``?empty.η`` become ``0`` (they have no transitions);
    value inputs over the same cells inside ``+`` are merged
    (``?t.η + ?t.θ`` becomes ``?t.(η (+) θ)``).
    """
    k = t.kind
    if k in (FAIL, DONE, VAR):
        return t
    if k == PREFIX:
        a = t.action
        if isinstance(a, (InVal, OutVal)) and not universe.denote(a.bt):
            return ZERO
        return prefix(a, normal_form(t.cont, universe))
    if k == REC:
        return rec(normal_form(t.body, universe))
    cs = [normal_form(c, universe) for c in t.children]
    if k == EXT:
        groups, rest = {}, []
        for c in cs:
            if c.kind == PREFIX and isinstance(c.action, InVal):
                groups.setdefault(universe.denote(c.action.bt), []).append(c)
            else:
                rest.append(c)
        merged = []
        for cells in sorted(groups, key=lambda g: sorted(g)):
            grp = groups[cells]
            if len(grp) == 1:
                merged.append(grp[0])
            else:
                bt = min((g.action.bt for g in grp), key=str)
                merged.append(prefix(InVal(bt), intc(*(g.cont for g in grp))))
        return ext(*(merged + rest))
    return rebuild(t, cs)


def _remove_common(xs, ys):
    cx, cy = Counter(xs), Counter(ys)
    common = cx & cy
    rx = sorted((cx - common).elements(), key=lambda t: t.key)
    ry = sorted((cy - common).elements(), key=lambda t: t.key)
    return rx, ry


class Engine:
    """Goal-directed prover for ⊑ (strong) and ⪯ (weak).

    Derivations are finite (no coinduction); goals met again while being
    proved fail, which keeps every ``Yes`` sound.
    """

    MAX_DEPTH = 60

    def __init__(self, universe, bound=DEFAULT_BOUND, use_zero_laws=True):
        self.u = universe
        self.bound = bound
        self.use_zero_laws = use_zero_laws
        self.memo = {}
        self.active = set()

    def viable(self, t):
        return is_viable(t, self.bound, self.u).tag

    def _goal(self, rel, a, b, depth, fn):
        key = (rel, a, b)
        if key in self.memo:
            return self.memo[key]
        if key in self.active or depth > self.MAX_DEPTH:
            return None
        self.active.add(key)
        try:
            res = fn(a, b, depth + 1)
        finally:
            self.active.discard(key)
        if res is not None or not self.active:
            self.memo[key] = res
        return res

    # -- strong --------------------------------------------------------------

    def strong(self, a, b, depth=0):
        if a is b:
            return ["L2: %s ≃ %s (identical up to AC/unit laws)" % (pretty(a), pretty(b))]
        return self._goal("s", a, b, depth, self._strong)

    def _strong(self, a, b, depth):
        u = self.u
        na, nb = normal_form(a, u), normal_form(b, u)
        if na is nb:
            return ["L2/L3: %s and %s have the same normal form %s" % (pretty(a), pretty(b), pretty(na))]
        ua, ub = unfold(na), unfold(nb)
        if ua is ub:
            return ["unfold: %s and %s denote the same regular tree" % (pretty(a), pretty(b))]
        if self.use_zero_laws:
            if ub is ZERO and self.viable(ua) == NO:
                return ["P5.1: %s is not viable, hence below 0" % pretty(a)]
            if ua.kind == EXT and ONE in ua.children:
                rest = list(ua.children)
                rest.remove(ONE)
                if ext(*rest) is ub:
                    try:
                        if is_complete(ub, u):
                            return ["P5.2: %s is complete, hence 1 + it is below it" % pretty(ub)]
                    except UndecidedSideCondition:
                        pass
        if ua.kind == INT:
            if ub.kind == INT and not (Counter(ub.children) - Counter(ua.children)):
                return ["L1: %s ⊑ %s" % (pretty(ua), pretty(ub))]
            if ub in ua.children:
                return ["L1: %s ⊑ %s" % (pretty(ua), pretty(ub))]
            for c in ua.children:
                d = self.strong(c, ub, depth)
                if d is not None:
                    return ["L1: %s ⊑ %s" % (pretty(ua), pretty(c))] + d
        if ua.kind == EXT and ub.kind == EXT:
            d = self._match(ua.children, ub.children, self.strong, depth)
            if d is not None:
                return ["L5: +-precongruence on %s ⊑ %s" % (pretty(ua), pretty(ub))] + d
        d = self._weak_structural(ua, ub, depth)
        if d is not None and self.viable(ua) == YES:
            return d + ["viable lift: %s is viable, so ⪯ gives ⊑" % pretty(ua)]
        return None

    def _match(self, xs, ys, rel, depth):
        rx, ry = _remove_common(xs, ys)
        if len(rx) != len(ry) or len(rx) > 4:
            return None
        if not rx:
            return []
        for perm in permutations(ry):
            out = []
            for x, y in zip(rx, perm):
                d = rel(x, y, depth)
                if d is None:
                    break
                out.extend(d)
            else:
                return out
        return None

    # -- weak ----------------------------------------------------------------

    def weak(self, a, b, depth=0):
        if a is b:
            return ["L2: %s ≃ %s (identical up to AC/unit laws)" % (pretty(a), pretty(b))]
        return self._goal("w", a, b, depth, self._weak)

    def _weak(self, a, b, depth):
        d = self.strong(a, b, depth)
        if d is not None:
            return d
        if self.viable(a) == NO:
            return ["non-viable: %s is not viable, hence below every type" % pretty(a)]
        u = self.u
        return self._weak_structural(unfold(normal_form(a, u)), unfold(normal_form(b, u)), depth)

    def _weak_structural(self, a, b, depth):
        u = self.u
        if a.kind == PREFIX and b.kind == PREFIX:
            if a.action == b.action:
                d = self.weak(a.cont, b.cont, depth)
                if d is not None:
                    return ["L4: prefix %s preserves ⪯" % a.action] + d
            if isinstance(a.action, OutVal) and isinstance(b.action, OutVal):
                if u.denote(b.action.bt) <= u.denote(a.action.bt):
                    d = [] if a.cont is b.cont else self.weak(a.cont, b.cont, depth)
                    if d is not None:
                        return ["L6: %s ⪯ %s since %s ⊆ %s" % (a.action, b.action, b.action.bt, a.action.bt)] + d
        if a.kind == INT and b.kind == INT:
            d = self._match(a.children, b.children, self.weak, depth)
            if d is not None:
                return ["L4: (+)-precongruence on %s ⪯ %s" % (pretty(a), pretty(b))] + d
        if a.kind == INT:
            for c in a.children:
                d = self.weak(c, b, depth)
                if d is not None:
                    return ["L1: %s ⊑ %s" % (pretty(a), pretty(c))] + d
        if a.kind == PAR and b.kind == PAR:
            d = self._match(a.children, b.children, self.weak, depth)
            if d is not None:
                return ["L4: |-precongruence on %s ⪯ %s" % (pretty(a), pretty(b))] + d
        return None


_engines = {}


def engine(universe, bound=DEFAULT_BOUND, use_zero_laws=True) -> Engine:
    key = (universe, bound, use_zero_laws)
    e = _engines.get(key)
    if e is None:
        e = _engines.setdefault(key, Engine(universe, bound, use_zero_laws))
    return e


# ---------------------------------------------------------------------------
# refutation


def _refute_sub(lhs, rhs, bound, universe):
    """Tester completing ``lhs`` but not ``rhs``; returns (tester|None, explored)."""
    try:
        if _doomed(lhs, universe) is not None:
            return None, 0
    except UndecidedSideCondition:
        pass
    explored = 0
    seeds = [ONE, dual(lhs, universe), dual(lhs, universe, swap_choices=True)]
    candidates = _chain_unique(seeds, enumerate_testers(tester_alphabet([lhs, rhs], universe), bound))
    for rho in candidates:
        if explored >= bound.budget:
            break
        explored += 1
        if _completes(lhs, rho, universe) and _fails(rhs, rho, universe):
            return rho, explored
    return None, explored


def _fails(s, rho, universe):
    try:
        return not is_complete(par(s, rho), universe)
    except UndecidedSideCondition:
        return False


def _chain_unique(first, rest):
    seen = set()
    for t in first:
        if t not in seen:
            seen.add(t)
            yield t
    for t in rest:
        if t not in seen:
            seen.add(t)
            yield t


def _refute_strong(lhs, rhs, bound, universe):
    """Context ρ and tester σ with (lhs+ρ)|σ complete but (rhs+ρ)|σ not."""
    term_acts = tester_alphabet([lhs, rhs], universe, same_polarity=True)
    contexts = [ZERO]
    contexts += [prefix(a, ONE) for a in term_acts]
    contexts += [prefix(a, ZERO) for a in term_acts]
    contexts.append(ONE)
    ctx_ok = []
    for rho in contexts:
        left = ext(lhs, rho)
        try:
            if _doomed(left, universe) is not None:
                continue
        except UndecidedSideCondition:
            continue
        ctx_ok.append(rho)
    if not ctx_ok:
        return None, 0
    sigma_alpha = tester_alphabet([lhs, rhs] + ctx_ok, universe)
    sigmas = []
    seeds = [ONE]
    for t in (lhs, rhs):
        seeds += [dual(t, universe), dual(t, universe, swap_choices=True)]
    gen = _chain_unique(seeds, enumerate_testers(sigma_alpha, bound))
    explored = 0
    # the empty context alone first, then diagonal order over (context, tester) pairs
    if ctx_ok[0] is ZERO:
        for sigma in gen:
            sigmas.append(sigma)
            explored += 1
            if _completes(lhs, sigma, universe) and _fails(rhs, sigma, universe):
                return (ZERO, sigma), explored
            if explored >= bound.budget // 4:
                break
    diag = 0
    while explored < bound.budget:
        while len(sigmas) <= diag:
            nxt = next(gen, None)
            if nxt is None:
                break
            sigmas.append(nxt)
        progressed = False
        for i, rho in enumerate(ctx_ok):
            j = diag - i
            if j < 0:
                break
            if j >= len(sigmas):
                continue
            progressed = True
            sigma = sigmas[j]
            explored += 1
            if _completes(ext(lhs, rho), sigma, universe) and _fails(ext(rhs, rho), sigma, universe):
                return (rho, sigma), explored
            if explored >= bound.budget:
                break
        if not progressed and diag >= len(sigmas) + len(ctx_ok):
            break
        diag += 1
    return None, explored


# ---------------------------------------------------------------------------
# public queries

_query_cache = {}


def _cached(kind, args, fn):
    key = (kind,) + args
    v = _query_cache.get(key)
    if v is None:
        v = fn()
        with _cache_lock:
            _query_cache[key] = v
    return v


def subsession(lhs: SessionType, rhs: SessionType, bound: Bound = DEFAULT_BOUND,
               universe: TypeUniverse = None, use_zero_laws: bool = True) -> Verdict:
    """lhs ⪯ rhs: every tester completing lhs also completes rhs."""
    require_valid(lhs), require_valid(rhs)
    return _cached("sub", (lhs, rhs, bound, universe, use_zero_laws),
                   lambda: _subsession(lhs, rhs, bound, universe, use_zero_laws))


def _subsession(lhs, rhs, bound, universe, use_zero_laws):
    eng = engine(universe, bound, use_zero_laws)
    try:
        d = eng.weak(lhs, rhs)
    except UndecidedSideCondition:
        d = None
    if d is not None:
        return _yes(d)
    witness, explored = _refute_sub(lhs, rhs, bound, universe)
    if witness is not None:
        return _no(tester=witness)
    return _unknown(bound, explored)


def strong_subsession(lhs: SessionType, rhs: SessionType, bound: Bound = DEFAULT_BOUND,
                      universe: TypeUniverse = None, use_zero_laws: bool = True) -> Verdict:
    """lhs ⊑ rhs: lhs + ρ ⪯ rhs + ρ for every ρ."""
    require_valid(lhs), require_valid(rhs)
    return _cached("strong", (lhs, rhs, bound, universe, use_zero_laws),
                   lambda: _strong(lhs, rhs, bound, universe, use_zero_laws))


def _strong(lhs, rhs, bound, universe, use_zero_laws):
    eng = engine(universe, bound, use_zero_laws)
    try:
        d = eng.strong(lhs, rhs)
    except UndecidedSideCondition:
        d = None
    if d is not None:
        return _yes(d)
    witness, explored = _refute_strong(lhs, rhs, bound, universe)
    if witness is not None:
        return _no(context=witness[0], tester=witness[1])
    return _unknown(bound, explored)


def equivalent(lhs, rhs, bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None,
               strength: str = "weak") -> Verdict:
    """≈ (weak) or ≃ (strong) as the conjunction of both directions."""
    rel = subsession if strength == "weak" else strong_subsession
    fwd = rel(lhs, rhs, bound, universe)
    bwd = rel(rhs, lhs, bound, universe)
    if fwd.no or bwd.no:
        v = fwd if fwd.no else bwd
        ev = dict(v.evidence, direction="->" if fwd.no else "<-")
        return Verdict(NO, ev, v.terms)
    if fwd.yes and bwd.yes:
        return Verdict(YES, {"forward": fwd.evidence, "backward": bwd.evidence})
    return Verdict(UNKNOWN, {"forward": fwd.to_dict(), "backward": bwd.to_dict()})


def payload_below(lhs: SessionType, rhs: SessionType, universe: TypeUniverse) -> bool:
    """Two-valued ⪯ for channel synchronisations; Unknown raises."""
    if lhs is rhs:
        return True
    v = subsession(lhs, rhs, DEFAULT_BOUND, universe)
    if v.unknown:
        raise UndecidedSideCondition(lhs, rhs, v)
    return v.yes


def replay(v: Verdict, kind: str, lhs, rhs=None, universe=None) -> bool:
    """Re-check a No verdict's counterexample with the exact completeness test."""
    if not v.no:
        return True
    t = v.terms
    if kind == "viable":
        st = t["stuck_state"]
        return _closure_doomed(lhs, universe) is not None and st is not None
    if kind == "sub":
        rho = t["tester"]
        return is_complete(par(lhs, rho), universe) and not is_complete(par(rhs, rho), universe)
    if kind == "strong":
        rho, sigma = t["context"], t["tester"]
        return (is_complete(par(ext(lhs, rho), sigma), universe)
                and not is_complete(par(ext(rhs, rho), sigma), universe))
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# consistency harnesses


@dataclass
class ConsistencyReport:
    name: str
    subject: str
    verdicts: dict
    contradictions: list

    @property
    def ok(self):
        return not self.contradictions

    def to_dict(self):
        return {"check": self.name, "subject": self.subject, "verdicts": self.verdicts,
                "contradictions": self.contradictions}


def check_prop5(s: SessionType, bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None) -> ConsistencyReport:
    """Cross-check viability/completeness against ⊑ 0 and 1 + s ⊑ s.

    The strong-subsession side runs without the zero and unit laws so the two
    routes stay independent.
    """
    via = is_viable(s, bound, universe)
    below0 = strong_subsession(s, ZERO, bound, universe, use_zero_laws=False)
    complete = is_complete(s, universe)
    one_plus = strong_subsession(ext(ONE, s), s, bound, universe, use_zero_laws=False)
    bad = []
    if via.definite and below0.definite and via.no != below0.yes:
        bad.append("viability %s but s ⊑ 0 is %s" % (via.tag, below0.tag))
    if one_plus.definite and complete != one_plus.yes:
        bad.append("complete=%s but 1 + s ⊑ s is %s" % (complete, one_plus.tag))
    return ConsistencyReport("viability-vs-zero", pretty(s), {
        "viable": via.tag, "below_zero": below0.tag, "complete": complete, "one_plus_below": one_plus.tag,
    }, bad)


def check_thm6(lhs: SessionType, rhs: SessionType, bound: Bound = DEFAULT_BOUND,
               universe: TypeUniverse = None) -> ConsistencyReport:
    """lhs ⪯ rhs iff lhs ⊑ 0 or lhs ⊑ rhs, whenever the verdicts are definite."""
    sub = subsession(lhs, rhs, bound, universe, use_zero_laws=False)
    below0 = strong_subsession(lhs, ZERO, bound, universe, use_zero_laws=False)
    strong = strong_subsession(lhs, rhs, bound, universe, use_zero_laws=False)
    bad = []
    if sub.no and (below0.yes or strong.yes):
        bad.append("⪯ refuted but lhs ⊑ 0 or lhs ⊑ rhs derived")
    if sub.yes and below0.no and strong.no:
        bad.append("⪯ derived but both lhs ⊑ 0 and lhs ⊑ rhs refuted")
    return ConsistencyReport("weak-vs-strong", "%s vs %s" % (pretty(lhs), pretty(rhs)), {
        "sub": sub.tag, "below_zero": below0.tag, "strong": strong.tag,
    }, bad)


def clear_caches():
    """Drop memo tables (results are pure; this only frees memory)."""
    _tester_cache.clear()
    _viable_cache.clear()
    _query_cache.clear()
    _engines.clear()
