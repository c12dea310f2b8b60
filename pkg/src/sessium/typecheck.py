"""Syntax-directed typing of processes by projection onto channels.

Inference walks the process once and builds a session environment
(channel to session type); absent channels implicitly have type ``1``.
Subsumption is applied only at fixed join points (choices, annotated
channel inputs, replication annotations), and each such step is recorded
so the derivation can be audited.  Side conditions are discharged as
verdicts: restrictions use the exact completeness check, replication and
annotations use strong subsession.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lts import UndecidedSideCondition, is_complete, stuck_witness
from .process import (
    CIn, COut, Ext, Idle, Int, New, Par, Prefix, Process, Repl, VIn, VOut, ExprTypeError, expr_type, show,
)
from .relations import DEFAULT_BOUND, NO, UNKNOWN, YES, Bound, Verdict, conj, is_viable, strong_subsession
from .sessiontypes import ONE, InCh, InVal, OutCh, OutVal, ext, intc, par, prefix, pretty
from .universe import TypeUniverse

WELL_TYPED = "WellTyped"
REJECTED = "Rejected"
WARNINGS = "WellTypedWithWarnings"


def _loc(p: Process, width: int = 72) -> str:
    s = show(p)
    return s if len(s) <= width else s[: width - 3] + "..."


class TypingError(Exception):
    """A typing rule cannot be applied; carries the rule name and location."""

    rule = "typing"

    def __init__(self, message, location=""):
        self.location = location
        super().__init__(message)

    def to_dict(self):
        return {"rule": self.rule, "message": str(self), "location": self.location}


class TExtShape(TypingError):
    rule = "t-ext"


class TInputSShape(TypingError):
    rule = "t-inputS"


class MissingAnnotation(TypingError):
    rule = "t-outputS"


class ExprError(TypingError):
    rule = "t-output"


@dataclass
class Check:
    """A discharged side condition."""

    rule: str
    channel: str
    goal: str
    verdict: Verdict
    location: str = ""
    channel_type: object = None

    def to_dict(self):
        d = {"rule": self.rule, "channel": self.channel, "goal": self.goal,
             "verdict": self.verdict.tag, "evidence": self.verdict.evidence, "location": self.location}
        if self.channel_type is not None:
            d["type"] = pretty(self.channel_type)
        return d


@dataclass
class TypeReport:
    env: dict
    checks: list = field(default_factory=list)
    status: str = WELL_TYPED
    reason: str | None = None
    rule: str | None = None
    location: str | None = None
    derivation: list = field(default_factory=list)

    @property
    def well_typed(self):
        return self.status != REJECTED

    def restricted(self) -> dict:
        """Type of every restricted channel, by name (later scopes win)."""
        return {c.channel: c.channel_type for c in self.checks if c.rule == "t-res"}

    def to_dict(self):
        return {
            "status": self.status,
            "reason": self.reason,
            "rule": self.rule,
            "location": self.location,
            "env": {k: pretty(v) for k, v in sorted(self.env.items())},
            "checks": [c.to_dict() for c in self.checks],
            "derivation": list(self.derivation),
        }

    def format_text(self) -> str:
        lines = ["status: %s" % self.status]
        if self.reason:
            lines.append("reason: [%s] %s" % (self.rule, self.reason))
            if self.location:
                lines.append("at: %s" % self.location)
        lines.append("environment:")
        for k, v in sorted(self.env.items()):
            lines.append("  %s : %s" % (k, pretty(v)))
        if self.checks:
            lines.append("checks:")
            for c in self.checks:
                lines.append("  %-10s %-4s %s  => %s" % (c.rule, c.channel, c.goal, c.verdict))
        return "\n".join(lines)


class _Ctx:
    def __init__(self, universe, bound):
        self.u = universe
        self.bound = bound
        self.checks = []
        self.derivation = []


def _join(envs, combine):
    keys = sorted(set().union(*(e.keys() for e in envs)))
    out = {}
    for k in keys:
        ts = [e.get(k, ONE) for e in envs]
        out[k] = ts[0] if all(t is ts[0] for t in ts) else combine(*ts)
    return out


def _infer(gamma, p, ctx):
    u = ctx.u
    if isinstance(p, Idle):
        return {}
    if isinstance(p, Prefix):
        pi = p.pi
        if isinstance(pi, VIn):
            env = dict(_infer({**gamma, pi.var: pi.bt}, p.cont, ctx))
            env[pi.subj] = prefix(InVal(pi.bt), env.get(pi.subj, ONE))
            return env
        if isinstance(pi, VOut):
            try:
                t = expr_type(gamma, pi.expr, u)
            except (ExprTypeError, ValueError) as exc:
                raise ExprError(str(exc), _loc(p)) from None
            env = dict(_infer(gamma, p.cont, ctx))
            env[pi.subj] = prefix(OutVal(t), env.get(pi.subj, ONE))
            return env
        if isinstance(pi, CIn):
            extra = p.cont.fn - {pi.var}
            if extra:
                raise TInputSShape("continuation of channel input on %s uses %s besides %s"
                                   % (pi.subj, ", ".join(sorted(extra)), pi.var), _loc(p))
            inner = _infer(gamma, p.cont, ctx)
            inferred = inner.get(pi.var, ONE)
            rho = inferred
            if pi.ann is not None:
                rho = pi.ann
                if pi.ann is not inferred:
                    v = strong_subsession(pi.ann, inferred, ctx.bound, u)
                    ctx.checks.append(Check("t-inputS", pi.var, "%s ⊑ %s" % (pretty(pi.ann), pretty(inferred)),
                                            v, _loc(p)))
                    ctx.derivation.append("t-sub at t-inputS: %s lowered to its annotation" % pi.var)
            return {pi.subj: prefix(InCh(rho), ONE)}
        if isinstance(pi, COut):
            if pi.ann is None:
                raise MissingAnnotation("delegation of %s on %s needs a session type annotation"
                                        % (pi.obj, pi.subj), _loc(p))
            env = dict(_infer(gamma, p.cont, ctx))
            env[pi.obj] = par(env.get(pi.obj, ONE), pi.ann)
            env[pi.subj] = prefix(OutCh(pi.ann), env.get(pi.subj, ONE))
            return env
    if isinstance(p, Ext):
        subjects = set()
        for c in p.children:
            if not isinstance(c, Prefix):
                raise TExtShape("branch %s of an external choice is not prefixed" % _loc(c, 40), _loc(p))
            subjects.add(c.pi.subj)
        if len(subjects) != 1:
            raise TExtShape("external choice branches have different subjects %s"
                            % ", ".join(sorted(subjects)), _loc(p))
        (s,) = subjects
        envs = [_infer(gamma, c, ctx) for c in p.children]
        env = _join([{k: v for k, v in e.items() if k != s} for e in envs], intc)
        env[s] = ext(*(e.get(s, ONE) for e in envs))
        if len(env) > 1:
            ctx.derivation.append("t-sub at t-ext: other channels joined with (+)")
        return env
    if isinstance(p, Int):
        envs = [_infer(gamma, c, ctx) for c in p.children]
        ctx.derivation.append("t-sub at t-int: pointwise (+) of branch environments")
        return _join(envs, intc)
    if isinstance(p, Par):
        return _join([_infer(gamma, c, ctx) for c in p.children], par)
    if isinstance(p, Repl):
        body = _infer(gamma, p.body, ctx)
        ann = dict(p.ann)
        env = {}
        for ch in sorted(set(body) | set(ann)):
            entry = body.get(ch, ONE)
            s = ann.get(ch, entry)
            if ch in ann:
                v = strong_subsession(s, entry, ctx.bound, u)
                ctx.checks.append(Check("t-sub", ch, "%s ⊑ %s" % (pretty(s), pretty(entry)), v, _loc(p)))
                ctx.derivation.append("t-sub at t-bang: %s lowered to its annotation" % ch)
            v = strong_subsession(s, par(s, s), ctx.bound, u)
            ctx.checks.append(Check("t-bang", ch, "%s ⊑ %s | %s" % (pretty(s), pretty(s), pretty(s)), v, _loc(p)))
            env[ch] = s
        return env
    if isinstance(p, New):
        env = dict(_infer(gamma, p.body, ctx))
        t = env.pop(p.name, ONE)
        try:
            v = check_restriction({p.name: t}, p.name, u)
        except UndecidedSideCondition as exc:
            v = Verdict(UNKNOWN, {"reason": str(exc)})
        ctx.checks.append(Check("t-res", p.name, "%s complete" % pretty(t), v, _loc(p), t))
        return env
    raise TypeError(p)


def infer(gamma: dict, p: Process, universe: TypeUniverse, bound: Bound = DEFAULT_BOUND) -> dict:
    """Session environment of ``p`` (side conditions are not enforced here)."""
    return _infer(dict(gamma or {}), p, _Ctx(universe, bound))


def check_restriction(env: dict, c: str, universe: TypeUniverse) -> Verdict:
    """Exact: the type of a restricted channel must be complete."""
    t = env.get(c, ONE)
    if is_complete(t, universe):
        return Verdict(YES, {"derivation": ["%s is complete" % pretty(t)]})
    return Verdict(NO, {"stuck_state": pretty(stuck_witness(t, universe))})


def check_replication(entry, annotation=None, bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None) -> Verdict:
    """``S ⊑ entry`` and ``S ⊑ S | S`` with ``S`` the annotation, or the entry itself."""
    if annotation is None:
        return strong_subsession(entry, par(entry, entry), bound, universe)
    return conj([strong_subsession(annotation, entry, bound, universe),
                 strong_subsession(annotation, par(annotation, annotation), bound, universe)])


def env_viable(env: dict, bound: Bound = DEFAULT_BOUND, universe: TypeUniverse = None) -> Verdict:
    """Every type in the environment is viable."""
    vs = []
    for ch in sorted(env):
        v = is_viable(env[ch], bound, universe)
        vs.append(Verdict(v.tag, dict(v.evidence, channel=ch), v.terms))
    return conj(vs)


def typecheck(p: Process, gamma: dict = None, mode: str = "strict", bound: Bound = DEFAULT_BOUND,
              universe: TypeUniverse = None) -> TypeReport:
    """Infer, discharge every side condition, and classify the process."""
    if mode not in ("strict", "permissive"):
        raise ValueError("mode must be strict or permissive")
    ctx = _Ctx(universe, bound)
    try:
        env = _infer(dict(gamma or {}), p, ctx)
    except TypingError as exc:
        return TypeReport({}, ctx.checks, REJECTED, str(exc), exc.rule, exc.location, ctx.derivation)
    for ch in sorted(env):
        v = is_viable(env[ch], bound, universe)
        ctx.checks.append(Check("viability", ch, "%s viable" % pretty(env[ch]), v, "", env[ch]))
    report = TypeReport(env, ctx.checks, WELL_TYPED, derivation=ctx.derivation)
    failed = [c for c in ctx.checks if c.verdict.no]
    undecided = [c for c in ctx.checks if c.verdict.unknown]
    if failed:
        c = failed[0]
        report.status, report.rule, report.location = REJECTED, c.rule, c.location
        report.reason = "%s fails on %s: %s" % (c.rule, c.channel, c.goal)
    elif undecided:
        c = undecided[0]
        report.rule, report.location = c.rule, c.location
        report.reason = "%s undecided on %s: %s" % (c.rule, c.channel, c.goal)
        report.status = REJECTED if mode == "strict" else WARNINGS
    return report
