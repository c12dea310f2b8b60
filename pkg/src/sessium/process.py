"""Processes: syntax, expressions, substitution, transitions and readiness.

Terms are immutable and kept in a light normal form: parallel
compositions and choices are flattened and their operands sorted, idle
components of ``|`` are dropped, and restrictions of names that do not
occur free are removed.  Two states of a simulation that differ only by
these laws therefore compare equal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .sessiontypes import ParseError, SessionType, TokenStream, TypeParser, pretty as pretty_type
from .universe import TypeUniverse, UniverseError, format_value, parse_literal


class EvalError(ValueError):
    """Expression evaluation failed (no value, so no transition)."""


class ExprTypeError(ValueError):
    """Expression is not well typed."""


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Val:
    """A basic value used as a message."""

    value: object

    def __str__(self):
        return format_value(self.value)


@dataclass(frozen=True)
class Lit:
    value: object

    def __str__(self):
        return format_value(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def __str__(self):
        return "%s%s%s" % (_expr_operand(self.left, self.op, False), self.op, _expr_operand(self.right, self.op, True))


@dataclass(frozen=True)
class App:
    fun: str
    args: tuple

    def __str__(self):
        return "%s(%s)" % (self.fun, ", ".join(str(a) for a in self.args))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _expr_operand(e, op, right):
    if isinstance(e, BinOp) and (_PREC[e.op] < _PREC[op] or (right and _PREC[e.op] == _PREC[op])):
        return "(%s)" % e
    return str(e)


def expr_vars(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, BinOp):
        return expr_vars(e.left) | expr_vars(e.right)
    if isinstance(e, App):
        return set().union(*(expr_vars(a) for a in e.args)) if e.args else set()
    return set()


def _subst_expr(e, x, value):
    if isinstance(e, Var):
        return Lit(value) if e.name == x else e
    if isinstance(e, BinOp):
        return BinOp(e.op, _subst_expr(e.left, x, value), _subst_expr(e.right, x, value))
    if isinstance(e, App):
        return App(e.fun, tuple(_subst_expr(a, x, value) for a in e.args))
    return e


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def eval_expr(env: dict, e, universe: TypeUniverse):
    """Evaluate ``e`` under ``env`` (variable to value)."""
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError("unbound variable %s" % e.name) from None
    if isinstance(e, BinOp):
        a, b = eval_expr(env, e.left, universe), eval_expr(env, e.right, universe)
        if not (_is_number(a) and _is_number(b)):
            raise EvalError("arithmetic on non-numbers in %s" % e)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:
            raise EvalError("division by zero in %s" % e)
        if isinstance(a, int) and isinstance(b, int):
            return a // b
        return a / b
    if isinstance(e, App):
        f = universe.functions.get(e.fun)
        if f is None:
            raise EvalError("unknown function %s" % e.fun)
        args = tuple(eval_expr(env, a, universe) for a in e.args)
        try:
            return f.table[args]
        except KeyError:
            raise EvalError("%s is undefined on %s" % (e.fun, ", ".join(map(format_value, args)))) from None
    raise TypeError(e)


def eval(env: dict, e, universe: TypeUniverse):  # noqa: A001 - mirrors e ⇓ v
    return eval_expr(env, e, universe)


def _numeric_cells(universe):
    return {c for c in universe.cells if _is_number(universe.carriers[c][0])}


def expr_type(gamma: dict, e, universe: TypeUniverse):
    """Basic type of ``e`` under ``gamma`` (variable to basic type)."""
    if isinstance(e, Lit):
        try:
            return universe.type_of_value(e.value)
        except UniverseError as exc:
            raise ExprTypeError(str(exc)) from None
    if isinstance(e, Var):
        try:
            return gamma[e.name]
        except KeyError:
            raise ExprTypeError("unbound variable %s" % e.name) from None
    if isinstance(e, BinOp):
        cells = universe.denote(expr_type(gamma, e.left, universe)) | universe.denote(expr_type(gamma, e.right, universe))
        if not cells <= _numeric_cells(universe):
            raise ExprTypeError("operands of %s are not numeric" % e)
        return universe.name_for(frozenset(cells))
    if isinstance(e, App):
        f = universe.functions.get(e.fun)
        if f is None:
            raise ExprTypeError("unknown function %s" % e.fun)
        if len(f.params) != len(e.args):
            raise ExprTypeError("%s expects %d arguments" % (e.fun, len(f.params)))
        for a, p in zip(e.args, f.params):
            t = expr_type(gamma, a, universe)
            if not universe.bt_subtype(t, p):
                raise ExprTypeError("argument %s of %s has type %s, expected %s" % (a, e.fun, t, p))
        return f.result
    raise TypeError(e)


# ---------------------------------------------------------------------------
# processes


@dataclass(frozen=True)
class VIn:
    subj: str
    var: str
    bt: object

    def __str__(self):
        return "%s?(%s:%s)" % (self.subj, self.var, self.bt)


@dataclass(frozen=True)
class VOut:
    subj: str
    expr: object

    def __str__(self):
        return "%s!(%s)" % (self.subj, self.expr)


@dataclass(frozen=True)
class CIn:
    subj: str
    var: str
    ann: SessionType | None = None

    def __str__(self):
        if self.ann is None:
            return "%s?[%s]" % (self.subj, self.var)
        return "%s?[%s:%s]" % (self.subj, self.var, pretty_type(self.ann))


@dataclass(frozen=True)
class COut:
    subj: str
    obj: str
    ann: SessionType | None = None

    def __str__(self):
        if self.ann is None:
            return "%s![%s]" % (self.subj, self.obj)
        return "%s![%s:%s]" % (self.subj, self.obj, pretty_type(self.ann))


class Process:
    """Base class; see the constructors below."""

    @cached_property
    def key(self) -> str:
        return show(self)

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return self.key

    def __repr__(self):
        return "Process(%s)" % self.key

    @cached_property
    def fn(self) -> frozenset:
        return frozenset(_fn(self))


@dataclass(frozen=True, repr=False)
class Idle(Process):
    pass


@dataclass(frozen=True, repr=False)
class Prefix(Process):
    pi: object
    cont: Process


@dataclass(frozen=True, repr=False)
class Repl(Process):
    body: Process
    ann: tuple = ()  # sorted (channel, SessionType) pairs


@dataclass(frozen=True, repr=False)
class Ext(Process):
    children: tuple


@dataclass(frozen=True, repr=False)
class Int(Process):
    children: tuple


@dataclass(frozen=True, repr=False)
class Par(Process):
    children: tuple


@dataclass(frozen=True, repr=False)
class New(Process):
    name: str
    body: Process


IDLE = Idle()


def _flat(cls, ps):
    out = []
    for p in ps:
        if isinstance(p, cls):
            out.extend(p.children)
        else:
            out.append(p)
    return out


def par(*ps) -> Process:
    cs = sorted((p for p in _flat(Par, ps) if not isinstance(p, Idle)), key=lambda p: p.key)
    if not cs:
        return IDLE
    return cs[0] if len(cs) == 1 else Par(tuple(cs))


def ext(*ps) -> Process:
    cs = sorted(_flat(Ext, ps), key=lambda p: p.key)
    return cs[0] if len(cs) == 1 else Ext(tuple(cs))


def intc(*ps) -> Process:
    cs = sorted(_flat(Int, ps), key=lambda p: p.key)
    return cs[0] if len(cs) == 1 else Int(tuple(cs))


def new(name: str, body: Process) -> Process:
    return New(name, body) if name in body.fn else body


def repl(body: Process, ann=None) -> Process:
    items = tuple(sorted((ann or {}).items()))
    return Repl(body, items)


def subj(pi) -> str:
    return pi.subj


# -- free and bound names ------------------------------------------------------


def _fn(p) -> set:
    if isinstance(p, Idle):
        return set()
    if isinstance(p, Prefix):
        pi, rest = p.pi, set(p.cont.fn)
        if isinstance(pi, (VIn,)):
            pass
        elif isinstance(pi, CIn):
            rest.discard(pi.var)
        elif isinstance(pi, COut):
            rest.add(pi.obj)
        return rest | {pi.subj}
    if isinstance(p, Repl):
        return set(p.body.fn)
    if isinstance(p, New):
        return set(p.body.fn) - {p.name}
    return set().union(*(c.fn for c in p.children))


def free_names(p: Process) -> set:
    """Free channel names (and free channel variables) of ``p``."""
    return set(p.fn)


def bound_names(p: Process) -> set:
    """Names bound by restrictions anywhere in ``p``."""
    if isinstance(p, Prefix):
        return bound_names(p.cont)
    if isinstance(p, Repl):
        return bound_names(p.body)
    if isinstance(p, New):
        return {p.name} | bound_names(p.body)
    if isinstance(p, (Ext, Int, Par)):
        return set().union(*(bound_names(c) for c in p.children))
    return set()


def fresh_name(base: str, avoid) -> str:
    stem = re.sub(r"\d+$", "", base) or "n"
    i = 1
    while "%s%d" % (stem, i) in avoid:
        i += 1
    return "%s%d" % (stem, i)


# -- substitution --------------------------------------------------------------


def substitute(p: Process, x: str, m) -> Process:
    """``p{m/x}``: ``m`` is a channel name (str) or a :class:`Val`."""
    if isinstance(m, Val):
        return _subst_value(p, x, m.value)
    return _subst_name(p, x, m)


def _subst_value(p, x, v):
    if isinstance(p, Idle):
        return p
    if isinstance(p, Prefix):
        pi = p.pi
        if isinstance(pi, VOut):
            return Prefix(VOut(pi.subj, _subst_expr(pi.expr, x, v)), _subst_value(p.cont, x, v))
        if isinstance(pi, VIn) and pi.var == x:
            return p
        if isinstance(pi, CIn) and pi.var == x:
            return p
        return Prefix(pi, _subst_value(p.cont, x, v))
    if isinstance(p, Repl):
        return Repl(_subst_value(p.body, x, v), p.ann)
    if isinstance(p, New):
        return p if p.name == x else New(p.name, _subst_value(p.body, x, v))
    return _rebuild(p, [_subst_value(c, x, v) for c in p.children])


def _rebuild(p, cs):
    if isinstance(p, Par):
        return par(*cs)
    if isinstance(p, Ext):
        return ext(*cs)
    return intc(*cs)


def _ren(u, x, d):
    return d if u == x else u


def _subst_name(p, x, d):
    if x not in p.fn:
        return p
    if isinstance(p, Prefix):
        pi = p.pi
        if isinstance(pi, VIn):
            npi = VIn(_ren(pi.subj, x, d), pi.var, pi.bt)
            return Prefix(npi, p.cont if pi.var == x else _subst_name(p.cont, x, d))
        if isinstance(pi, VOut):
            return Prefix(VOut(_ren(pi.subj, x, d), pi.expr), _subst_name(p.cont, x, d))
        if isinstance(pi, CIn):
            npi = CIn(_ren(pi.subj, x, d), pi.var, pi.ann)
            if pi.var == x:
                return Prefix(npi, p.cont)
            cont = p.cont
            if pi.var == d:  # the binder would capture d
                y = fresh_name(pi.var, cont.fn | {d, x})
                npi = CIn(npi.subj, y, pi.ann)
                cont = _subst_name(cont, pi.var, y)
            return Prefix(npi, _subst_name(cont, x, d))
        return Prefix(COut(_ren(pi.subj, x, d), _ren(pi.obj, x, d), pi.ann), _subst_name(p.cont, x, d))
    if isinstance(p, Repl):
        ann = {_ren(u, x, d): s for u, s in p.ann}
        return repl(_subst_name(p.body, x, d), ann)
    if isinstance(p, New):
        if p.name == d:
            y = fresh_name(d, p.body.fn | {x, d} | bound_names(p.body))
            return New(y, _subst_name(_subst_name(p.body, d, y), x, d))
        return New(p.name, _subst_name(p.body, x, d))
    return _rebuild(p, [_subst_name(c, x, d) for c in p.children])


def rename_bound(p: Process, name: str, avoid) -> Process:
    """Alpha-rename every restriction of ``name`` inside ``p`` away from ``avoid``."""
    if name not in bound_names(p):
        return p
    if isinstance(p, Prefix):
        return Prefix(p.pi, rename_bound(p.cont, name, avoid))
    if isinstance(p, Repl):
        return Repl(rename_bound(p.body, name, avoid), p.ann)
    if isinstance(p, New):
        body = rename_bound(p.body, name, avoid)
        if p.name != name:
            return New(p.name, body)
        y = fresh_name(name, set(avoid) | body.fn | bound_names(body))
        return New(y, _subst_name(body, name, y))
    return _rebuild(p, [rename_bound(c, name, avoid) for c in p.children])


# ---------------------------------------------------------------------------
# transitions

# internal transition records:
#   ("tau", p')
#   ("out", c, m, p', extruded)          m is a name or Val; extruded is a name or None
#   ("in", c, x, kind, bt, cont, ctx)    receiving m gives ctx(cont{m/x}); kind "val" | "chan"


@dataclass(frozen=True)
class Tau:
    def __str__(self):
        return "τ"


@dataclass(frozen=True)
class FreeIn:
    chan: str
    msg: object

    def __str__(self):
        return "%s?%s" % (self.chan, self.msg)


@dataclass(frozen=True)
class FreeOut:
    chan: str
    msg: object

    def __str__(self):
        return "%s!%s" % (self.chan, self.msg)


@dataclass(frozen=True)
class BoundOut:
    chan: str
    name: str

    def __str__(self):
        return "%s!(%s)" % (self.chan, self.name)


TAU = Tau()


def label_fn(lab) -> set:
    if isinstance(lab, (FreeIn, FreeOut)):
        return {lab.chan} | ({lab.msg} if isinstance(lab.msg, str) else set())
    if isinstance(lab, BoundOut):
        return {lab.chan}
    return set()


def label_bn(lab) -> set:
    return {lab.name} if isinstance(lab, BoundOut) else set()


def _ident(q):
    return q


def _trans(p: Process, universe: TypeUniverse) -> list:
    if isinstance(p, Idle):
        return []
    if isinstance(p, Prefix):
        pi = p.pi
        if isinstance(pi, VIn):
            return [("in", pi.subj, pi.var, "val", pi.bt, p.cont, _ident)]
        if isinstance(pi, CIn):
            return [("in", pi.subj, pi.var, "chan", None, p.cont, _ident)]
        if isinstance(pi, VOut):
            try:
                v = eval_expr({}, pi.expr, universe)
            except EvalError:
                return []
            return [("out", pi.subj, Val(v), p.cont, None)]
        return [("out", pi.subj, pi.obj, p.cont, None)]
    if isinstance(p, Repl):
        return [("tau", par(p, p.body))]
    if isinstance(p, Int):
        return [("tau", c) for c in p.children]
    if isinstance(p, Ext):
        out = []
        cs = p.children
        for i, c in enumerate(cs):
            for t in _trans(c, universe):
                if t[0] == "tau":
                    out.append(("tau", ext(*cs[:i], t[1], *cs[i + 1:])))
                else:
                    out.append(t)
        return out
    if isinstance(p, New):
        d = p.name
        out = []
        for t in _trans(p.body, universe):
            if t[0] == "tau":
                out.append(("tau", new(d, t[1])))
            elif t[0] == "out":
                _, c, m, q, extr = t
                if c == d or extr == d:
                    continue
                if m == d:
                    out.append(("out", c, d, q, d))
                else:
                    out.append(("out", c, m, new(d, q), extr))
            else:
                _, c, x, kind, bt, cont, ctx = t
                if c == d:
                    continue
                out.append(("in", c, x, kind, bt, cont, _wrap_new(d, ctx)))
        return out
    if isinstance(p, Par):
        return _par_trans(p, universe)
    raise TypeError(p)


def _wrap_new(d, ctx):
    return lambda q: new(d, ctx(q))


def _wrap_par(others, ctx):
    return lambda q: par(*others, ctx(q))


def _accepts(kind, bt, m, universe):
    if kind == "chan":
        return isinstance(m, str)
    if not isinstance(m, Val):
        return False
    try:
        return universe.cell_of(m.value) in universe.denote(bt)
    except UniverseError:
        return False


def _par_trans(p, universe):
    cs = p.children
    all_fn = p.fn
    per = [_trans(c, universe) for c in cs]
    out = []
    for i, ts in enumerate(per):
        others = cs[:i] + cs[i + 1:]
        others_fn = frozenset().union(*(o.fn for o in others)) if others else frozenset()
        for t in ts:
            if t[0] == "tau":
                out.append(("tau", par(*others, t[1])))
            elif t[0] == "out":
                _, c, m, q, extr = t
                if extr is not None and extr in others_fn:
                    y = fresh_name(extr, all_fn | bound_names(p))
                    q, m, extr = _subst_name(q, extr, y), y, y
                out.append(("out", c, m, par(*others, q), extr))
            else:
                _, c, x, kind, bt, cont, ctx = t
                out.append(("in", c, x, kind, bt, cont, _wrap_par(others, ctx)))
    # synchronisations
    for i, ts in enumerate(per):
        for t in ts:
            if t[0] != "out":
                continue
            _, c, m, q, extr = t
            for j, cj in enumerate(cs):
                if j == i:
                    continue
                rest = [cs[k] for k in range(len(cs)) if k not in (i, j)]
                rest_fn = frozenset().union(*(o.fn for o in rest)) if rest else frozenset()
                m2, q2, extr2 = m, q, extr
                if extr2 is not None and (extr2 in cj.fn or extr2 in rest_fn):
                    y = fresh_name(extr2, all_fn | bound_names(p))
                    q2, m2, extr2 = _subst_name(q2, extr2, y), y, y
                receiver = cj
                if isinstance(m2, str) and m2 in bound_names(receiver):
                    receiver = rename_bound(receiver, m2, all_fn | {m2})
                inputs = per[j] if receiver is cj else _trans(receiver, universe)
                for u in inputs:
                    if u[0] != "in" or u[1] != c:
                        continue
                    _, _, x, kind, bt, cont, ctx = u
                    if not _accepts(kind, bt, m2, universe):
                        continue
                    rj = ctx(substitute(cont, x, m2))
                    if extr2 is not None:
                        out.append(("tau", par(*rest, new(extr2, par(q2, rj)))))
                    else:
                        out.append(("tau", par(*rest, q2, rj)))
    return out


def tau_steps(p: Process, universe: TypeUniverse) -> list:
    """Distinct τ-successors of ``p``, sorted by their printed form."""
    seen = {}
    for t in _trans(p, universe):
        if t[0] == "tau":
            seen.setdefault(t[1].key, t[1])
    return [seen[k] for k in sorted(seen)]


def proc_steps(p: Process, universe: TypeUniverse) -> list:
    """All transitions of ``p`` as ``(label, successor)`` pairs.

    Value inputs are enumerated over the carriers of their type; channel
    inputs over the free names of ``p`` plus one fresh name.
    """
    out = []
    for t in _trans(p, universe):
        if t[0] == "tau":
            out.append((TAU, t[1]))
        elif t[0] == "out":
            _, c, m, q, extr = t
            out.append((BoundOut(c, extr) if extr is not None else FreeOut(c, m), q))
    fresh = fresh_name("n", p.fn | bound_names(p))
    names = sorted(p.fn) + [fresh]
    for t in _trans(p, universe):
        if t[0] != "in":
            continue
        _, c, x, kind, bt, cont, ctx = t
        if kind == "val":
            for v in universe.values_of(bt):
                out.append((FreeIn(c, Val(v)), ctx(substitute(cont, x, Val(v)))))
    for d in names:
        q = rename_bound(p, d, p.fn | {d}) if d in bound_names(p) else p
        for t in _trans(q, universe):
            if t[0] == "in" and t[3] == "chan":
                _, c, x, kind, bt, cont, ctx = t
                out.append((FreeIn(c, d), ctx(substitute(cont, x, d))))
    uniq = {}
    for lab, q in out:
        uniq.setdefault((str(lab), q.key), (lab, q))
    return [uniq[k] for k in sorted(uniq)]


def is_stuck(p: Process, universe: TypeUniverse) -> bool:
    return not tau_steps(p, universe)


# ---------------------------------------------------------------------------
# readiness


def ready(p: Process, c: str) -> bool:
    """``p`` is ready on ``c``: it does not use ``c`` or every branch is prefixed on it."""
    if c not in p.fn:
        return True
    if isinstance(p, Prefix):
        return p.pi.subj == c
    if isinstance(p, (Ext, Par)):
        return all(ready(q, c) for q in p.children)
    if isinstance(p, New):
        return p.name != c and ready(p.body, c)
    return False


# ---------------------------------------------------------------------------
# printing


_PLEVEL = {Int: 1, Ext: 2, Par: 3}


def show(p: Process, need: int = 0) -> str:
    if isinstance(p, Idle):
        return "0"
    if isinstance(p, Prefix):
        s = str(p.pi) if isinstance(p.cont, Idle) else "%s.%s" % (p.pi, show(p.cont, 4))
        return s
    if isinstance(p, Repl):
        ann = ""
        if p.ann:
            ann = "{%s} " % ", ".join("%s: %s" % (u, pretty_type(s)) for u, s in p.ann)
        return "*%s%s" % (ann, show(p.body, 4))
    if isinstance(p, New):
        s = "new %s. %s" % (p.name, show(p.body, 0))
        return s if need == 0 else "(%s)" % s
    lvl = _PLEVEL[type(p)]
    sym = {Int: " (+) ", Ext: " + ", Par: " | "}[type(p)]
    s = sym.join(show(c, lvl + 1) for c in p.children)
    return s if need <= lvl else "(%s)" % s


# ---------------------------------------------------------------------------
# parsing

_KEYWORDS = {"new", "rec", "type", "proc", "empty"}


class ProcessParser:
    """Recursive descent over the shared token stream."""

    def __init__(self, ts: TokenStream, universe: TypeUniverse, type_defs=None, proc_defs=None):
        self.ts = ts
        self.universe = universe
        self.types = TypeParser(ts, universe, {} if type_defs is None else type_defs)
        self.proc_defs = proc_defs if proc_defs is not None else {}

    def parse(self, bound=()):
        return self.int_expr(set(bound))

    def int_expr(self, vs):
        parts = [self.ext_expr(vs)]
        while self.ts.at("(+)"):
            self.ts.next()
            parts.append(self.ext_expr(vs))
        return parts[0] if len(parts) == 1 else intc(*parts)

    def ext_expr(self, vs):
        parts = [self.par_expr(vs)]
        while self.ts.at("+"):
            self.ts.next()
            parts.append(self.par_expr(vs))
        return parts[0] if len(parts) == 1 else ext(*parts)

    def par_expr(self, vs):
        parts = [self.pre_expr(vs)]
        while self.ts.at("|"):
            self.ts.next()
            parts.append(self.pre_expr(vs))
        return parts[0] if len(parts) == 1 else par(*parts)

    def _session_type(self):
        return self.types.parse()

    def pre_expr(self, vs):
        ts = self.ts
        t = ts.peek()
        if t[0] == "sym" and t[1] == "*":
            ts.next()
            ann = {}
            if ts.at("{"):
                ts.next()
                while not ts.at("}"):
                    u = ts.ident()[1]
                    ts.expect(":")
                    ann[u] = self._session_type()
                    if ts.at(","):
                        ts.next()
                        continue
                    break
                ts.expect("}")
            return repl(self.pre_expr(vs), ann)
        if t[0] == "ident" and t[1] == "new":
            ts.next()
            name = ts.ident()[1]
            ts.expect(".")
            return new(name, self.int_expr(vs - {name}))
        if t[0] == "ident" and t[1] not in _KEYWORDS and ts.peek(1)[1] in ("?", "!", "?[", "![") \
                and ts.peek(1)[0] == "sym":
            return self.prefixed(vs)
        return self.atom(vs)

    def _cont(self, vs):
        if self.ts.at("."):
            self.ts.next()
            return self.pre_expr(vs)
        return IDLE

    def prefixed(self, vs):
        ts = self.ts
        u = ts.ident()[1]
        kind, op, pos = ts.next()
        if op == "?":
            ts.expect("(")
            x = ts.ident()[1]
            ts.expect(":")
            bt = self.types.basic_type()
            ts.expect(")")
            return Prefix(VIn(u, x, bt), self._cont(vs | {x}))
        if op == "!":
            ts.expect("(")
            e = self.expr(vs)
            ts.expect(")")
            return Prefix(VOut(u, e), self._cont(vs))
        if op == "?[":
            x = ts.ident()[1]
            ann = None
            if ts.at(":"):
                ts.next()
                ann = self._session_type()
            ts.expect("]")
            return Prefix(CIn(u, x, ann), self._cont(vs - {x}))
        v = ts.ident()[1]
        ann = None
        if ts.at(":"):
            ts.next()
            ann = self._session_type()
        ts.expect("]")
        return Prefix(COut(u, v, ann), self._cont(vs))

    def atom(self, vs):
        kind, val, pos = self.ts.next()
        if kind == "num" and val == "0":
            return IDLE
        if kind == "sym" and val == "(":
            p = self.int_expr(vs)
            self.ts.expect(")")
            return p
        if kind == "ident" and val in self.proc_defs:
            return self.proc_defs[val]
        raise ParseError("unexpected %r in process" % (val or "end of input"), pos, self.ts.text)

    # expressions: sums of products of factors

    def expr(self, vs):
        e = self.term(vs)
        while self.ts.at("+") or self.ts.at("-"):
            op = self.ts.next()[1]
            e = BinOp(op, e, self.term(vs))
        return e

    def term(self, vs):
        e = self.factor(vs)
        while self.ts.at("*") or self.ts.at("/"):
            op = self.ts.next()[1]
            e = BinOp(op, e, self.factor(vs))
        return e

    def factor(self, vs):
        ts = self.ts
        kind, val, pos = ts.next()
        if kind == "sym" and val == "(":
            e = self.expr(vs)
            ts.expect(")")
            return e
        if kind == "sym" and val == "-":
            inner = self.factor(vs)
            if isinstance(inner, Lit) and _is_number(inner.value):
                return Lit(-inner.value)
            return BinOp("-", Lit(0), inner)
        if kind in ("num", "str"):
            return Lit(parse_literal(val))
        if kind == "ident":
            if val in ("true", "false"):
                return Lit(val == "true")
            if ts.at("("):
                ts.next()
                args = []
                if not ts.at(")"):
                    args.append(self.expr(vs))
                    while ts.at(","):
                        ts.next()
                        args.append(self.expr(vs))
                ts.expect(")")
                if val not in self.universe.functions:
                    raise ParseError("unknown function %s" % val, pos, ts.text)
                return App(val, tuple(args))
            if val in vs:
                return Var(val)
            f = self.universe.functions.get(val)
            if f is not None and not f.params:
                return App(val, ())
            if val in self.universe.singletons:
                return Lit(val)
            return Var(val)
        raise ParseError("expected an expression, found %r" % (val or "end of input"), pos, ts.text)


def _strip_comments(text: str) -> str:
    out = []
    for line in text.splitlines():
        # '#' outside quotes starts a comment
        m = re.match(r"""((?:[^#"']|"[^"]*"|'[^']*')*)""", line)
        out.append(m.group(1) if m else line)
    return "\n".join(out)


@dataclass
class ProcessFile:
    """A parsed ``.pi`` document."""

    process: Process
    type_defs: dict
    proc_defs: dict


def parse_document(text: str, universe: TypeUniverse) -> ProcessFile:
    """Parse ``type N = S;`` and ``proc N = P;`` definitions followed by a process."""
    ts = TokenStream(_strip_comments(text))
    type_defs, proc_defs = {}, {}
    parser = ProcessParser(ts, universe, type_defs, proc_defs)
    while ts.at("type") or ts.at("proc"):
        kw = ts.next()[1]
        name = ts.ident()[1]
        ts.expect("=")
        if kw == "type":
            type_defs[name] = parser.types.parse()
        else:
            proc_defs[name] = parser.parse()
        ts.expect(";")
    p = parser.parse()
    if ts.peek()[0] != "eof":
        raise ts.error("trailing input")
    return ProcessFile(p, type_defs, proc_defs)


def parse_process(text: str, universe: TypeUniverse, type_defs=None) -> Process:
    """Parse a process; definitions may precede it (see :func:`parse_document`)."""
    if type_defs:
        ts = TokenStream(_strip_comments(text))
        parser = ProcessParser(ts, universe, dict(type_defs))
        p = parser.parse()
        if ts.peek()[0] != "eof":
            raise ts.error("trailing input")
        return p
    return parse_document(text, universe).process


__all__ = [
    "App", "BinOp", "BoundOut", "CIn", "COut", "EvalError", "ExprTypeError", "Ext", "FreeIn", "FreeOut",
    "IDLE", "Idle", "Int", "Lit", "New", "Par", "Prefix", "Process", "ProcessFile", "Repl", "TAU", "Tau",
    "VIn", "VOut", "Val", "Var", "bound_names", "eval", "eval_expr", "expr_type", "ext", "free_names",
    "fresh_name", "intc", "is_stuck", "label_bn", "label_fn", "new", "par", "parse_document", "parse_process",
    "proc_steps", "ready", "repl", "rename_bound", "show", "subj", "substitute", "tau_steps",
]
