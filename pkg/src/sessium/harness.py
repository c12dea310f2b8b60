"""Executable replay of subject reduction and progress, the corpus, and the law suite.

Every run is a pure function of its inputs: random choices come from a
``random.Random(seed)`` and successor lists are sorted before sampling.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from importlib import resources

from .lts import is_complete
from .process import (
    Idle, New, Par, Prefix, Process, Repl, TAU, ExprTypeError, parse_document, parse_process, ready, tau_steps,
)
from .relations import (
    DEFAULT_BOUND, Bound, check_prop5, check_thm6, equivalent, is_viable, strong_subsession, subsession,
)
from .sessiontypes import (
    EXT, INT, ONE, PAR, PREFIX, REC, ZERO, InVal, OutVal, SessionType, ext, intc, is_valid, par, parse_type,
    prefix, pretty, rec, var,
)
from .typecheck import REJECTED, WARNINGS, WELL_TYPED, TypingError, _Ctx, _infer, env_viable, infer, typecheck
from .universe import Named, TypeUniverse

SUCCESS, STUCK, BUDGET = "Success", "Stuck", "StepBudgetExhausted"


# ---------------------------------------------------------------------------
# simulation


def _obligations(p: Process) -> bool:
    """Whether some action prefix is still pending outside replications."""
    if isinstance(p, Prefix):
        return True
    if isinstance(p, (Idle, Repl)):
        return False
    if isinstance(p, New):
        return _obligations(p.body)
    return any(_obligations(c) for c in p.children)


@dataclass
class SimulationTrace:
    initial: Process
    steps: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    status: str = STUCK
    seed: int = 0

    @property
    def final(self) -> Process:
        return self.steps[-1][1] if self.steps else self.initial

    def to_dict(self):
        d = {
            "initial": str(self.initial),
            "seed": self.seed,
            "status": self.status,
            "n_steps": len(self.steps),
            "steps": [{"label": str(lab), "state": str(q)} for lab, q in self.steps],
            "final": str(self.final),
        }
        if self.snapshots:
            d["snapshots"] = self.snapshots
        return d

    def format_text(self):
        lines = ["0: %s" % self.initial]
        for i, (lab, q) in enumerate(self.steps, 1):
            lines.append("%d: -%s-> %s" % (i, lab, q))
        lines.append("status: %s after %d steps" % (self.status, len(self.steps)))
        return "\n".join(lines)


def _snapshot(q, universe, bound):
    try:
        env = infer({}, q, universe, bound)
    except TypingError as exc:
        return {"error": exc.to_dict()}
    return {"env": {k: pretty(v) for k, v in sorted(env.items())}}


def simulate(p: Process, steps: int = 1000, seed: int = 0, universe: TypeUniverse = None,
             snapshots: bool = False, bound: Bound = DEFAULT_BOUND) -> SimulationTrace:
    """Seeded random run over τ-steps until stuck or out of budget."""
    rng = random.Random(seed)
    trace = SimulationTrace(p, seed=seed)
    if snapshots:
        trace.snapshots.append(_snapshot(p, universe, bound))
    cur = p
    for _ in range(steps):
        succ = tau_steps(cur, universe)
        if not succ:
            trace.status = STUCK if _obligations(cur) else SUCCESS
            return trace
        cur = succ[rng.randrange(len(succ))]
        trace.steps.append((TAU, cur))
        if snapshots:
            trace.snapshots.append(_snapshot(cur, universe, bound))
    trace.status = BUDGET if tau_steps(cur, universe) else (STUCK if _obligations(cur) else SUCCESS)
    return trace


def explore(p: Process, universe: TypeUniverse, max_states: int = 5000):
    """Breadth-first τ-graph of ``p``: (states in visit order, edges, truncated)."""
    seen = {p: 0}
    order, edges = [p], []
    queue = deque([p])
    truncated = False
    while queue:
        q = queue.popleft()
        for r in tau_steps(q, universe):
            edges.append((q, r))
            if r not in seen:
                if len(seen) >= max_states:
                    truncated = True
                    continue
                seen[r] = len(order)
                order.append(r)
                queue.append(r)
    return order, edges, truncated


# ---------------------------------------------------------------------------
# subject reduction


@dataclass
class ReplayReport:
    name: str
    precondition: bool
    precondition_detail: str = ""
    states: int = 0
    transitions: int = 0
    violations: list = field(default_factory=list)
    truncated: bool = False

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {"check": self.name, "precondition": self.precondition,
                "precondition_detail": self.precondition_detail, "states": self.states,
                "transitions": self.transitions, "truncated": self.truncated, "violations": self.violations}

    def format_text(self):
        if self.violations:
            verdict = "%d violation(s)" % len(self.violations)
        else:
            verdict = "ok" if self.precondition else "precondition not met, nothing to check"
        head = "%s: %s" % (self.name, verdict)
        lines = [head, ("  precondition: %s %s" % (self.precondition, self.precondition_detail)).rstrip(),
                 "  states: %d, transitions: %d%s" % (self.states, self.transitions,
                                                      " (truncated)" if self.truncated else "")]
        lines += ["  violation: %s" % v for v in self.violations]
        return "\n".join(lines)


def _residual(q, universe, bound):
    """Inferred environment of ``q`` and its restriction checks, or a typing error."""
    ctx = _Ctx(universe, bound)
    env = _infer({}, q, ctx)
    return env, [c for c in ctx.checks if c.rule == "t-res"]


def subject_reduction_check(p: Process, steps: int = 1000, seed: int = 0, universe: TypeUniverse = None,
                            exhaustive: bool = False, force: bool = False, bound: Bound = DEFAULT_BOUND,
                            max_states: int = 5000) -> ReplayReport:
    """After every τ-step: restricted channels stay complete and no entry is refuted ⊑."""
    report = ReplayReport("subject-reduction", True)
    try:
        env0, _ = _residual(p, universe, bound)
    except TypingError as exc:
        report.precondition, report.precondition_detail = False, "not typable: [%s] %s" % (exc.rule, exc)
        return report
    via = env_viable(env0, bound, universe)
    if not via.yes:
        report.precondition = False
        report.precondition_detail = "environment viability is %s" % via.tag
        if not force:
            return report
    if exhaustive:
        _, edges, report.truncated = explore(p, universe, max_states)
    else:
        trace = simulate(p, steps, seed, universe)
        states = [p] + [q for _, q in trace.steps]
        edges = list(zip(states, states[1:]))
    seen = set()
    for old, new in edges:
        seen.add(old), seen.add(new)
        report.transitions += 1
        try:
            env1, res = _residual(new, universe, bound)
        except (TypingError, ExprTypeError) as exc:
            report.violations.append("%s -> %s: residual not typable (%s)" % (old, new, exc))
            continue
        for c in res:
            if not c.verdict.yes:
                report.violations.append("%s: restricted %s has type %s, completeness %s"
                                         % (new, c.channel, pretty(c.channel_type), c.verdict.tag))
        for ch in sorted(env0):
            v = strong_subsession(env0[ch], env1.get(ch, ONE), bound, universe)
            if v.no:
                report.violations.append("%s: %s ⊑ %s refuted for %s"
                                         % (new, pretty(env0[ch]), pretty(env1.get(ch, ONE)), ch))
    report.states = len(seen) or 1
    return report


# ---------------------------------------------------------------------------
# progress


def _peel(p: Process):
    names = []
    while isinstance(p, New):
        names.append(p.name)
        p = p.body
    return p, names


def progress_check(p: Process, c: str, universe: TypeUniverse, bound: Bound = DEFAULT_BOUND) -> ReplayReport:
    """If ``c`` has a complete type and ``p`` is ready on ``c``, then ``c ∉ fn(p)`` or a τ-step exists."""
    report = ReplayReport("progress on %s" % c, True, states=1)
    if not ready(p, c):
        report.precondition, report.precondition_detail = False, "not ready on %s" % c
        return report
    try:
        env = infer({}, p, universe, bound)
    except TypingError as exc:
        report.precondition, report.precondition_detail = False, "not typable: [%s] %s" % (exc.rule, exc)
        return report
    t = env.get(c, ONE)
    if not is_complete(t, universe):
        report.precondition, report.precondition_detail = False, "type of %s is not complete" % c
        return report
    if c in p.fn and not tau_steps(p, universe):
        report.violations.append("%s is ready on %s with complete type %s but has no τ-step" % (p, c, pretty(t)))
    return report


def progress_sweep(p: Process, universe: TypeUniverse, bound: Bound = DEFAULT_BOUND, max_states: int = 200):
    """Progress check on every reachable state, for each top-level restricted or free channel.

    Divergent processes (replication) are cut off after ``max_states`` states.
    """
    states, _, _ = explore(p, universe, max_states)
    out = []
    for s in states:
        inner, names = _peel(s)
        for c in sorted(set(names) | set(inner.fn)):
            out.append((s, c, progress_check(inner, c, universe, bound)))
    return out


# ---------------------------------------------------------------------------
# corpus


CORPUS_FILES = {
    "seller_buyers": "the two-buyer system of the introduction",
    "primality": "multi-party session with two primality servers",
    "persistent_server": "persistent service provider",
    "nonviable": "non-viable environment breaking subject reduction",
    "mixed_choice": "external choice with mixed subjects",
    "double_delegation": "double delegation deadlocking in two steps",
    "deadlock": "well typed but deadlocked system",
}


def corpus_source(name: str) -> str:
    return resources.files("sessium").joinpath("data/corpus/%s.pi" % name).read_text(encoding="utf-8")


def load_case(name: str, universe: TypeUniverse):
    return parse_document(corpus_source(name), universe)


@dataclass
class Expectation:
    what: str
    expected: object
    actual: object

    @property
    def ok(self):
        return self.expected == self.actual

    def to_dict(self):
        return {"what": self.what, "expected": self.expected, "actual": self.actual, "ok": self.ok}


@dataclass
class CaseResult:
    name: str
    locus: str
    expectations: list = field(default_factory=list)

    @property
    def ok(self):
        return all(e.ok for e in self.expectations)

    def expect(self, what, expected, actual):
        self.expectations.append(Expectation(what, expected, actual))

    def to_dict(self):
        return {"case": self.name, "locus": self.locus, "ok": self.ok,
                "expectations": [e.to_dict() for e in self.expectations]}


@dataclass
class CorpusReport:
    cases: list

    @property
    def ok(self):
        return all(c.ok for c in self.cases)

    def to_dict(self):
        return {"ok": self.ok, "cases": [c.to_dict() for c in self.cases]}

    def format_text(self):
        lines = []
        for c in self.cases:
            lines.append("%s %s (%s)" % ("PASS" if c.ok else "FAIL", c.name, c.locus))
            for e in c.expectations:
                mark = "ok " if e.ok else "BAD"
                lines.append("   %s %s: expected %s, got %s" % (mark, e.what, e.expected, e.actual))
        return "\n".join(lines)


def _not_no(v):
    return "not No" if not v.no else "No"


def _case_seller_buyers(u, bound):
    r = CaseResult("seller_buyers", CORPUS_FILES["seller_buyers"])
    doc = load_case("seller_buyers", u)
    rep = typecheck(doc.process, {}, "strict", bound, u)
    r.expect("typecheck", WELL_TYPED, rep.status)
    d = doc.type_defs
    eta, theta, rho = d["eta"], d["theta"], d["rho"]
    want = {
        "a": parse_type("?[eta].1 | ![eta].1", u, d),
        "b": parse_type("![theta].1 | ?[theta].1", u, d),
        "c": par(eta, parse_type("!String.?Int.rho", u, d)),
        "d": par(theta, parse_type("!Int.![rho].1", u, d)),
    }
    got = dict(rep.env)
    got.update(rep.restricted())
    for ch, t in want.items():
        actual = got.get(ch, ONE)
        r.expect("type of %s ≃ %s" % (ch, pretty(t)), "not No", _not_no(equivalent(actual, t, bound, u, "strong")))
        r.expect("type of %s complete" % ch, True, is_complete(actual, u))
    sim = simulate(doc.process, 20, 0, u)
    r.expect("simulation (20 steps)", SUCCESS, sim.status)
    sr = subject_reduction_check(doc.process, universe=u, exhaustive=True, bound=bound)
    r.expect("subject reduction violations (exhaustive)", 0, len(sr.violations))
    return r


def _case_primality(u, bound):
    r = CaseResult("primality", CORPUS_FILES["primality"])
    doc = load_case("primality", u)
    rep = typecheck(doc.process, {}, "strict", bound, u)
    r.expect("typecheck", WELL_TYPED, rep.status)
    a = rep.restricted().get("a")
    want = parse_type("![eta].1 | ![eta].1 | ?[eta].1 | ?[eta].1", u, doc.type_defs)
    r.expect("type of a", pretty(want), pretty(a) if a is not None else None)
    sr = subject_reduction_check(doc.process, universe=u, exhaustive=True, bound=bound)
    r.expect("subject reduction violations (exhaustive)", 0, len(sr.violations))
    bad = [x for x in progress_sweep(doc.process, u, bound) if x[2].violations]
    r.expect("progress violations", 0, len(bad))
    return r


def _case_persistent(u, bound):
    r = CaseResult("persistent_server", CORPUS_FILES["persistent_server"])
    doc = load_case("persistent_server", u)
    rep = typecheck(doc.process, {}, "permissive", bound, u)
    r.expect("typecheck (permissive)", WARNINGS, rep.status)
    by_rule = {c.rule: c.verdict.tag for c in rep.checks}
    r.expect("annotation below entry", "Yes", by_rule.get("t-sub"))
    r.expect("self-composition check", "Unknown", by_rule.get("t-bang"))
    r.expect("viability", "Yes", by_rule.get("viability"))
    r.expect("typecheck (strict)", REJECTED, typecheck(doc.process, {}, "strict", bound, u).status)
    sim = simulate(doc.process, 3, 0, u)
    r.expect("replication unfoldings in 3 steps", 3, len(sim.steps))
    return r


def _case_nonviable(u, bound):
    r = CaseResult("nonviable", CORPUS_FILES["nonviable"])
    doc = load_case("nonviable", u)
    env = infer({}, doc.process, u, bound)
    r.expect("type of a", "![1].1 | ?[!Int.1].1", pretty(env.get("a", ONE)))
    r.expect("environment viability", "No", env_viable(env, bound, u).tag)
    r.expect("typecheck", REJECTED, typecheck(doc.process, {}, "strict", bound, u).status)
    sr = subject_reduction_check(doc.process, universe=u, exhaustive=True, bound=bound)
    r.expect("subject reduction precondition", False, sr.precondition)
    forced = subject_reduction_check(doc.process, universe=u, exhaustive=True, force=True, bound=bound)
    # the residual type 1 | !Int.1 is kept in unit-normal form, !Int.1
    r.expect("forced replay finds the incomplete residual", True,
             any("restricted c has type !Int.1" in v for v in forced.violations))
    return r


def _case_mixed(u, bound):
    r = CaseResult("mixed_choice", CORPUS_FILES["mixed_choice"])
    doc = load_case("mixed_choice", u)
    rep = typecheck(doc.process, {}, "strict", bound, u)
    r.expect("typecheck", REJECTED, rep.status)
    r.expect("failing rule", "t-ext", rep.rule)
    inner, _ = _peel(doc.process)
    pc = progress_check(inner, "a", u, bound)
    r.expect("progress precondition on a", False, pc.precondition)
    r.expect("progress violations", 0, len(pc.violations))
    return r


def _case_double(u, bound):
    r = CaseResult("double_delegation", CORPUS_FILES["double_delegation"])
    doc = load_case("double_delegation", u)
    env = infer({}, doc.proc_defs["P"], u, bound)
    r.expect("type of c in P", "!Bool.1 | !Int.1 | ?Int.?Bool.1", pretty(env.get("c", ONE)))
    r.expect("type of a in P", "![!Int.1].![!Bool.1].1", pretty(env.get("a", ONE)))
    rep = typecheck(doc.process, {}, "strict", bound, u)
    r.expect("typecheck of P | Q", REJECTED, rep.status)
    r.expect("failing rule", "t-inputS", rep.rule)
    sim = simulate(doc.process, 10, 0, u)
    stuck = parse_process("c?(x:Int).c?(y:Bool) | c!(true).c!(3)", u)
    r.expect("simulation status", STUCK, sim.status)
    r.expect("τ-steps to the stuck state", 2, len(sim.steps))
    r.expect("stuck state", str(stuck), str(sim.final))
    c_type = infer({}, sim.final, u, bound).get("c", ONE)
    r.expect("type of c when stuck", "!Bool.!Int.1 | ?Int.?Bool.1", pretty(c_type))
    r.expect("that type is complete", False, is_complete(c_type, u))
    return r


def _case_deadlock(u, bound):
    r = CaseResult("deadlock", CORPUS_FILES["deadlock"])
    doc = load_case("deadlock", u)
    rep = typecheck(doc.process, {}, "strict", bound, u)
    r.expect("typecheck", WELL_TYPED, rep.status)
    sim = simulate(doc.process, 10, 0, u)
    r.expect("simulation status", STUCK, sim.status)
    r.expect("τ-steps", 0, len(sim.steps))
    return r


CASES = {
    "deadlock": _case_deadlock,
    "double_delegation": _case_double,
    "mixed_choice": _case_mixed,
    "nonviable": _case_nonviable,
    "persistent_server": _case_persistent,
    "primality": _case_primality,
    "seller_buyers": _case_seller_buyers,
}


def run_corpus(universe: TypeUniverse, bound: Bound = DEFAULT_BOUND, names=None) -> CorpusReport:
    """Run every corpus case (sorted by name) against its expected outcomes."""
    names = sorted(names or CASES)
    return CorpusReport([CASES[n](universe, bound) for n in names])


# ---------------------------------------------------------------------------
# laws


@dataclass
class LawResult:
    name: str
    expected: str
    actual: str
    detail: str = ""

    @property
    def ok(self):
        if self.expected == "not No":
            return self.actual != "No"
        return self.expected == self.actual

    def to_dict(self):
        return {"law": self.name, "expected": self.expected, "actual": self.actual,
                "ok": self.ok, "detail": self.detail}


@dataclass
class LawReport:
    laws: list
    consistency: list
    n_random: int

    @property
    def contradictions(self):
        return [c for c in self.consistency if not c.ok]

    @property
    def ok(self):
        return all(x.ok for x in self.laws) and not self.contradictions

    def to_dict(self):
        return {
            "ok": self.ok,
            "laws": [x.to_dict() for x in self.laws],
            "consistency_checks": len(self.consistency),
            "random_terms": self.n_random,
            "contradictions": [c.to_dict() for c in self.contradictions],
        }

    def format_text(self):
        lines = ["%s %s: expected %s, got %s%s" % ("PASS" if x.ok else "FAIL", x.name, x.expected, x.actual,
                                                 " (%s)" % x.detail if x.detail else "") for x in self.laws]
        lines.append("consistency: %d checks over corpus and %d random terms, %d contradictions"
                     % (len(self.consistency), self.n_random, len(self.contradictions)))
        lines += ["  %s: %s" % (c.subject, "; ".join(c.contradictions)) for c in self.contradictions]
        return "\n".join(lines)


def random_type(rng: random.Random, max_size: int = 8, universe: TypeUniverse = None) -> SessionType:
    """A closed, well-formed, payload-free type with at most ``max_size`` constructors."""
    bts = [Named("Int"), Named("Bool"), Named("Real")]

    def gen(size, depth, guarded, in_par):
        # returns (term, constructors used)
        choices = ["0", "1"]
        if size >= 2:
            choices.append("pre")
        if size >= 3:
            choices += ["+", "(+)", "|"]
        if size >= 2 and not in_par:
            choices.append("rec")
        if depth and guarded and not in_par:
            choices.append("var")
        k = rng.choice(choices)
        if k == "0":
            return ZERO, 1
        if k == "1":
            return ONE, 1
        if k == "var":
            return var(rng.randrange(depth)), 1
        if k == "pre":
            act = (InVal if rng.random() < 0.5 else OutVal)(rng.choice(bts))
            t, n = gen(size - 1, depth, True, in_par)
            return prefix(act, t), n + 1
        if k == "rec":
            t, n = gen(size - 1, depth + 1, False, in_par)
            return rec(t), n + 1
        left = rng.randint(1, size - 2)
        a, na = gen(left, depth, guarded, in_par or k == "|")
        b, nb = gen(size - 1 - na, depth, guarded, in_par or k == "|")
        op = {"+": ext, "(+)": intc, "|": par}[k]
        return op(a, b), na + nb + 1

    while True:
        t, _ = gen(rng.randint(1, max_size), 0, False, False)
        if t.is_closed and is_valid(t):
            return t


def _law(name, expected, v, detail=""):
    return LawResult(name, expected, v.tag if hasattr(v, "tag") else str(v), detail or _evidence_text(v))


def _evidence_text(v):
    if not hasattr(v, "evidence"):
        return ""
    ev = v.evidence
    if "context" in ev:
        return "context %s, tester %s" % (ev["context"], ev["tester"])
    if "tester" in ev:
        return "tester %s" % ev["tester"]
    return ""


def corpus_types(universe: TypeUniverse) -> list:
    """Closed session types occurring in the corpus (environment entries and definitions)."""
    out = {}
    for name in sorted(CORPUS_FILES):
        doc = load_case(name, universe)
        for t in doc.type_defs.values():
            out.setdefault(t.key, t)
        try:
            rep = typecheck(doc.process, {}, "permissive", DEFAULT_BOUND, universe)
        except Exception:  # corpus cases that fail to type still contribute definitions
            continue
        for t in list(rep.env.values()) + [c.channel_type for c in rep.checks if c.channel_type is not None]:
            out.setdefault(t.key, t)
    return [out[k] for k in sorted(out)]


def law_suite(bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None, n_random: int = 1000,
              seed: int = 0, random_bound: Bound = Bound(2, 2, 30),
              corpus_bound: Bound = Bound(3, 2, 300)) -> LawReport:
    """Law instances plus the viability/zero and weak/strong consistency sweep."""
    u = universe
    T = lambda s: parse_type(s, u)  # noqa: E731
    laws = []
    # completeness oracle
    for s, want in [("1", True), ("?Int.1 | !Real.1", False), ("(rec X. ?Int.X) | (rec Y. !Int.Y)", False),
                    ("(1 + ?Int.1) | (1 (+) !Int.1)", True)]:
        laws.append(LawResult("complete(%s)" % s, str(want), str(is_complete(T(s), u))))
    # L1: η (+) θ ⊑ η
    for a, b in [("!Int.1", "?Bool.1"), ("1", "0"), ("?Int.1 + ?Bool.1", "!Int.0")]:
        laws.append(_law("L1 (%s) (+) (%s) ⊑ %s" % (a, b, a), "Yes", strong_subsession(intc(T(a), T(b)), T(a), bound, u)))
    laws.append(_law("L6 !Real.1 ⪯ !Int.1", "Yes", subsession(T("!Real.1"), T("!Int.1"), bound, u)))
    v = subsession(T("?Int.1"), T("?Int.1 + ?Bool.1"), bound, u)
    laws.append(_law("?Int.1 ⪯ ?Int.1 + ?Bool.1 refuted", "No", v))
    laws.append(LawResult("  witness is !Int.1 + !Bool.0", "True",
                          str(v.no and v.terms.get("tester") is T("!Int.1 + !Bool.0"))))
    v = strong_subsession(T("?Int.1"), T("?Int.1 + ?Bool.1"), bound, u)
    laws.append(_law("?Int.1 ⊑ ?Int.1 + ?Bool.1 refuted", "No", v))
    laws.append(_law("0 ⊑ !Int.0 refuted", "No", strong_subsession(ZERO, T("!Int.0"), bound, u)))
    laws.append(_law("0 ≈ !Int.0 (weak only)", "Yes", equivalent(ZERO, T("!Int.0"), bound, u, "weak")))
    eta, theta = T("!Bool.1"), T("?Int.1")
    laws.append(_law("L3 ?Int.η + ?Int.θ ≃ ?Int.(η (+) θ)", "Yes",
                     equivalent(ext(prefix(InVal(Named("Int")), eta), prefix(InVal(Named("Int")), theta)),
                                prefix(InVal(Named("Int")), intc(eta, theta)), bound, u, "strong")))
    laws.append(_law("expansion !Int.1 | !Bool.1 ≈ !Int.!Bool.1 + !Bool.!Int.1", "not No",
                     equivalent(T("!Int.1 | !Bool.1"), T("!Int.!Bool.1 + !Bool.!Int.1"), bound, u, "weak")))
    laws.append(LawResult("(1 (+) !Int.1) completes (1 + ?Int.1)", "True",
                          str(is_complete(par(T("1 (+) !Int.1"), T("1 + ?Int.1")), u))))
    ctypes = corpus_types(u)
    laws.append(LawResult("0 neutral for + over %d corpus types" % len(ctypes), "True",
                          str(all(equivalent(ext(ZERO, t), t, bound, u, "strong").yes for t in ctypes))))
    laws.append(LawResult("1 neutral for | over %d corpus types" % len(ctypes), "True",
                          str(all(equivalent(par(ONE, t), t, bound, u, "strong").yes for t in ctypes))))
    # consistency sweep
    consistency = []
    for t in ctypes:
        consistency.append(check_prop5(t, corpus_bound, u))
    rng = random.Random(seed)
    rand = [random_type(rng, 8, u) for _ in range(n_random)]
    for i, t in enumerate(rand):
        consistency.append(check_prop5(t, random_bound, u))
        consistency.append(check_thm6(t, rand[(i + 1) % len(rand)], random_bound, u))
    return LawReport(laws, consistency, n_random)
