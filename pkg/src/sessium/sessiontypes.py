"""Session type terms: representation, surface syntax, well-formedness.

Terms are hash-consed: structurally equal terms are the same Python object,
so ``is``/``==`` is structural equality and terms can key caches cheaply.
Recursion uses ``rec`` binders with de Bruijn indices; a closed term with
binders denotes the regular tree obtained by unfolding them.  External
choice, internal choice and parallel composition are n-ary, flattened and
sorted (associativity, commutativity), with ``0`` dropped from ``+`` and
``1`` dropped from ``|``.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache

from .universe import Cells, EMPTY, Empty, Named, Singleton, TypeUniverse, parse_literal


class ParseError(ValueError):
    def __init__(self, msg, pos=None, text=None):
        self.pos = pos
        where = ""
        if pos is not None:
            where = " at offset %d" % pos
            if text is not None:
                where += " (near %r)" % text[pos:pos + 12]
        super().__init__(msg + where)


class IllFormedType(ValueError):
    """Operation requires a well-formed type."""


# ---------------------------------------------------------------------------
# actions


@dataclass(frozen=True)
class InVal:
    bt: object

    def __str__(self):
        return "?%s" % (self.bt,)


@dataclass(frozen=True)
class OutVal:
    bt: object

    def __str__(self):
        return "!%s" % (self.bt,)


@dataclass(frozen=True)
class OutCell:
    """Output already committed to one cell (reduct of an ``OutVal``)."""

    cell: str

    def __str__(self):
        return "!<%s>" % self.cell


@dataclass(frozen=True)
class InCh:
    payload: "SessionType"

    def __str__(self):
        return "?[%s]" % (self.payload,)


@dataclass(frozen=True)
class OutCh:
    payload: "SessionType"

    def __str__(self):
        return "![%s]" % (self.payload,)


def _action_key(a) -> str:
    if isinstance(a, (InCh, OutCh)):
        return ("?[" if isinstance(a, InCh) else "![") + a.payload.key + "]"
    return str(a)


# ---------------------------------------------------------------------------
# terms

FAIL, DONE, PREFIX, EXT, INT, PAR, REC, VAR = "fail", "done", "prefix", "ext", "int", "par", "rec", "var"

_table = {}
_lock = threading.Lock()


class SessionType:
    """Interned session type term.  Build with the module-level constructors."""

    __slots__ = ("kind", "action", "children", "index", "key", "free", "size", "__weakref__")

    def __repr__(self):
        return "SessionType(%s)" % self

    def __str__(self):
        return pretty(self)

    def __lt__(self, other):
        return self.key < other.key

    # convenient views

    @property
    def cont(self):
        return self.children[0]

    @property
    def body(self):
        return self.children[0]

    @property
    def is_closed(self):
        return not self.free

    def __reduce__(self):
        return (_rebuild, (self.kind, self.action, self.children, self.index))


def _rebuild(kind, action, children, index):
    return _mk(kind, action, children, index)


def _mk(kind, action=None, children=(), index=None):
    ident = (kind, action, children, index)
    t = _table.get(ident)
    if t is not None:
        return t
    t = SessionType()
    t.kind, t.action, t.children, t.index = kind, action, children, index
    if kind == FAIL:
        t.key, t.free, t.size = "0", frozenset(), 1
    elif kind == DONE:
        t.key, t.free, t.size = "1", frozenset(), 1
    elif kind == VAR:
        t.key, t.free, t.size = "#%d" % index, frozenset([index]), 1
    elif kind == PREFIX:
        c = children[0]
        t.key = _action_key(action) + "." + c.key
        t.free, t.size = c.free, c.size + 1
    elif kind == REC:
        b = children[0]
        t.key = "rec." + b.key
        t.free = frozenset(i - 1 for i in b.free if i > 0)
        t.size = b.size + 1
    else:
        sym = {EXT: "+", INT: "(+)", PAR: "|"}[kind]
        t.key = sym + "(" + ",".join(c.key for c in children) + ")"
        t.free = frozenset().union(*(c.free for c in children))
        t.size = 1 + sum(c.size for c in children)
    with _lock:
        return _table.setdefault(ident, t)


ZERO = _mk(FAIL)
ONE = _mk(DONE)


def prefix(action, cont: SessionType) -> SessionType:
    return _mk(PREFIX, action, (cont,))


def _nary(kind, unit, ts):
    flat = []
    for t in ts:
        if t.kind == kind:
            flat.extend(t.children)
        elif t is not unit:
            flat.append(t)
    if not flat:
        if unit is None:
            raise ValueError("empty internal choice")
        return unit
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda c: c.key)
    return _mk(kind, None, tuple(flat))


def ext(*ts) -> SessionType:
    """External choice; ``0`` is its unit."""
    return _nary(EXT, ZERO, ts)


def intc(*ts) -> SessionType:
    """Internal choice."""
    return _nary(INT, None, ts)


def par(*ts) -> SessionType:
    """Parallel composition; ``1`` is its unit."""
    return _nary(PAR, ONE, ts)


def var(i: int) -> SessionType:
    return _mk(VAR, None, (), i)


def rec(body: SessionType) -> SessionType:
    """``rec`` binder over de Bruijn index 0; vacuous binders vanish."""
    if 0 not in body.free:
        return _shift_down(body, 0)
    return _mk(REC, None, (body,))


def rebuild(t: SessionType, children) -> SessionType:
    """Same head constructor as ``t`` over new children (renormalised)."""
    k = t.kind
    if k == PREFIX:
        return prefix(t.action, children[0])
    if k == EXT:
        return ext(*children)
    if k == INT:
        return intc(*children)
    if k == PAR:
        return par(*children)
    if k == REC:
        return rec(children[0])
    return t


@lru_cache(maxsize=1 << 16)
def _shift_down(t, depth):
    # remove a binder at `depth` whose variable does not occur
    if not t.free:
        return t
    if t.kind == VAR:
        return var(t.index - 1) if t.index > depth else t
    if t.kind == REC:
        return rec(_shift_down(t.body, depth + 1))
    return rebuild(t, [_shift_down(c, depth) for c in t.children])


@lru_cache(maxsize=1 << 16)
def _subst(t, depth, repl):
    if not t.free:
        return t
    if t.kind == VAR:
        if t.index == depth:
            return repl
        return var(t.index - 1) if t.index > depth else t
    if t.kind == REC:
        return _mk(REC, None, (_subst(t.body, depth + 1, repl),))
    return rebuild(t, [_subst(c, depth, repl) for c in t.children])


@lru_cache(maxsize=1 << 16)
def unfold(t: SessionType) -> SessionType:
    """Unfold top-level ``rec`` binders until the head is a constructor."""
    seen = 0
    while t.kind == REC:
        t = _subst(t.body, 0, t)
        seen += 1
        if seen > 10_000:
            raise IllFormedType("non-contractive recursion")
    return t


# ---------------------------------------------------------------------------
# traversal helpers


def subterms(t: SessionType, payloads=False):
    """All distinct subterms reachable by structure (and unfolding)."""
    out, stack, seen = [], [t], set()
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        out.append(s)
        stack.extend(s.children)
        if payloads and s.kind == PREFIX and isinstance(s.action, (InCh, OutCh)):
            stack.append(s.action.payload)
    return out


def actions_of(t: SessionType) -> list:
    """Distinct actions occurring in ``t`` (not inside payloads), sorted."""
    acts = {s.action for s in subterms(t) if s.kind == PREFIX}
    return sorted(acts, key=_action_key)


def payloads_of(t: SessionType) -> list:
    ps = {s.action.payload for s in subterms(t) if s.kind == PREFIX and isinstance(s.action, (InCh, OutCh))}
    return sorted(ps, key=lambda p: p.key)


# ---------------------------------------------------------------------------
# well-formedness


def validate(t: SessionType) -> list:
    """Violations of contractivity / finite parallelism, as readable strings.

    Regularity holds by construction (finitely many subterms).  Channel
    payloads are checked recursively.
    """
    problems = []
    _validate(t, [], problems, set())
    return problems


def _binder_name(depth):
    names = "XYZWUV"
    return names[depth % 6] + (str(depth // 6) if depth >= 6 else "")


def _validate(t, stack, problems, done_payloads):
    # returns (unguarded free vars, free vars under a parallel composition)
    k = t.kind
    if k == VAR:
        return {t.index}, set()
    if k in (FAIL, DONE):
        return set(), set()
    if k == PREFIX:
        a = t.action
        if isinstance(a, (InCh, OutCh)) and a.payload not in done_payloads:
            done_payloads.add(a.payload)
            for p in validate(a.payload):
                problems.append("in payload %s: %s" % (pretty(a.payload), p))
        _, under_par = _validate(t.cont, stack, problems, done_payloads)
        return set(), under_par
    if k == REC:
        ug, up = _validate(t.body, stack + [t], problems, done_payloads)
        name = _binder_name(_depth_hint(stack))
        if 0 in ug:
            problems.append("contractivity: recursion variable %s reachable without an action prefix in %s"
                            % (name, pretty(t, depth=_depth_hint(stack))))
        if 0 in up:
            problems.append("finite parallelism: recursion variable %s occurs under a parallel composition in %s"
                            % (name, pretty(t, depth=_depth_hint(stack))))
        return {i - 1 for i in ug if i > 0}, {i - 1 for i in up if i > 0}
    ug, up = set(), set()
    for c in t.children:
        cu, cp = _validate(c, stack, problems, done_payloads)
        ug |= cu
        up |= cp
        if k == PAR:
            up |= c.free
    return ug, up


def _depth_hint(stack):
    return len(stack)


def is_valid(t: SessionType) -> bool:
    return not validate(t)


@lru_cache(maxsize=1 << 14)
def _checked(t):
    return not validate(t)


def require_valid(t: SessionType) -> SessionType:
    if not t.is_closed:
        raise IllFormedType("open session type %s" % t)
    if not _checked(t):
        raise IllFormedType("ill-formed session type: %s" % "; ".join(validate(t)))
    return t


@lru_cache(maxsize=1 << 14)
def weight(t: SessionType) -> int:
    """Nesting depth of channel payload types (0 without channel prefixes)."""
    w = 0
    for s in subterms(t):
        if s.kind == PREFIX and isinstance(s.action, (InCh, OutCh)):
            w = max(w, 1 + weight(s.action.payload))
    return w


def check_universe(t: SessionType, universe: TypeUniverse) -> SessionType:
    """Raise if ``t`` mentions basic types unknown to ``universe``."""
    for s in subterms(t, payloads=True):
        if s.kind == PREFIX and isinstance(s.action, (InVal, OutVal)):
            universe.denote(s.action.bt)
        elif s.kind == PREFIX and isinstance(s.action, OutCell) and s.action.cell not in universe.cells:
            raise ValueError("unknown cell %s" % s.action.cell)
    return t


# ---------------------------------------------------------------------------
# pretty printing

_LEVEL = {INT: 1, EXT: 2, PAR: 3, PREFIX: 4}


def pretty(t: SessionType, depth: int = 0) -> str:
    """Surface syntax; ``parse_type(pretty(t)) is t``."""
    return _pp(t, depth, 0)


def _pp(t, depth, need):
    k = t.kind
    if k == FAIL:
        return "0"
    if k == DONE:
        return "1"
    if k == VAR:
        return _binder_name(depth - 1 - t.index)
    if k == REC:
        s = "rec %s. %s" % (_binder_name(depth), _pp(t.body, depth + 1, 0))
        return s if need == 0 else "(" + s + ")"
    if k == PREFIX:
        a = t.action
        if isinstance(a, (InCh, OutCh)):
            head = ("?[" if isinstance(a, InCh) else "![") + _pp(a.payload, 0, 0) + "]"
        else:
            head = str(a)
        s = head + "." + _pp(t.cont, depth, _LEVEL[PREFIX])
        return s
    lvl = _LEVEL[k]
    sym = {EXT: " + ", INT: " (+) ", PAR: " | "}[k]
    s = sym.join(_pp(c, depth, lvl + 1) for c in t.children)
    return s if need <= lvl else "(" + s + ")"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<oplus>\(\+\)|⊕)
  | (?P<sym>!\[|\?\[|!<|[!?.|+()\[\]{}<>,=;:*/-])
  | (?P<str>'[^']*'|"[^"]*")
  | (?P<num>-?\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
""", re.VERBOSE)


def tokenize(text: str):
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], pos, text)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "oplus":
                kind, val = "sym", "(+)"
            toks.append((kind, val, pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class TokenStream:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, val, k=0):
        t = self.peek(k)
        return t[0] in ("sym", "ident") and t[1] == val

    def expect(self, val):
        t = self.next()
        if t[1] != val or t[0] not in ("sym", "ident"):
            raise ParseError("expected %r, found %r" % (val, t[1] or "end of input"), t[2], self.text)
        return t

    def ident(self):
        t = self.next()
        if t[0] != "ident":
            raise ParseError("expected identifier, found %r" % (t[1] or "end of input"), t[2], self.text)
        return t

    def error(self, msg):
        t = self.peek()
        return ParseError(msg, t[2], self.text)


_KEYWORDS = {"rec", "empty", "new"}


class TypeParser:
    """Recursive-descent parser for session types over a token stream."""

    def __init__(self, ts: TokenStream, universe: TypeUniverse | None = None, defs=None):
        self.ts = ts
        self.universe = universe
        self.defs = {} if defs is None else defs
        self.outer = []

    def parse(self, env=()):
        return self.int_expr(list(env))

    def int_expr(self, env):
        parts = [self.ext_expr(env)]
        while self.ts.at("(+)"):
            self.ts.next()
            parts.append(self.ext_expr(env))
        return parts[0] if len(parts) == 1 else intc(*parts)

    def ext_expr(self, env):
        parts = [self.par_expr(env)]
        while self.ts.at("+"):
            self.ts.next()
            parts.append(self.par_expr(env))
        return parts[0] if len(parts) == 1 else ext(*parts)

    def par_expr(self, env):
        parts = [self.pre_expr(env)]
        while self.ts.at("|"):
            self.ts.next()
            parts.append(self.pre_expr(env))
        return parts[0] if len(parts) == 1 else par(*parts)

    def pre_expr(self, env):
        t = self.ts.peek()
        if t[0] == "sym" and t[1] in ("!", "?", "![", "?[", "!<"):
            action = self.action(env)
            self.ts.expect(".")
            return prefix(action, self.pre_expr(env))
        return self.atom(env)

    def action(self, env):
        kind, val, pos = self.ts.next()
        if val in ("![", "?["):
            self.outer.append(env)
            try:
                payload = self.int_expr([])
            finally:
                self.outer.pop()
            self.ts.expect("]")
            return InCh(payload) if val == "?[" else OutCh(payload)
        if val == "!<":
            cell = self.ts.ident()[1]
            self.ts.expect(">")
            if self.universe is not None and cell not in self.universe.cells:
                raise ParseError("unknown cell %s" % cell, pos, self.ts.text)
            return OutCell(cell)
        bt = self.basic_type()
        return InVal(bt) if val == "?" else OutVal(bt)

    def basic_type(self):
        kind, val, pos = self.ts.next()
        if kind == "ident" and val == "empty":
            bt = EMPTY
        elif kind == "ident":
            bt = Named(val)
        elif kind == "str":
            bt = Singleton(parse_literal(val))
        elif kind == "sym" and val == "{":
            cells = [self.ts.ident()[1]]
            while self.ts.at(","):
                self.ts.next()
                cells.append(self.ts.ident()[1])
            self.ts.expect("}")
            bt = Cells(frozenset(cells))
        else:
            raise ParseError("expected a basic type, found %r" % (val or "end of input"), pos, self.ts.text)
        if self.universe is not None:
            try:
                self.universe.denote(bt)
            except ValueError as exc:
                raise ParseError(str(exc), pos, self.ts.text) from None
        return bt

    def atom(self, env):
        kind, val, pos = self.ts.next()
        if kind == "num" and val in ("0", "1"):
            return ZERO if val == "0" else ONE
        if kind == "sym" and val == "(":
            t = self.int_expr(env)
            self.ts.expect(")")
            return t
        if kind == "ident" and val == "rec":
            name = self.ts.ident()[1]
            self.ts.expect(".")
            body = self.int_expr([name] + env)
            return rec(body)
        if kind == "ident" and val not in _KEYWORDS:
            if val in env:
                return var(env.index(val))
            if val in self.defs:
                return self.defs[val]
            if any(val in names for names in self.outer):
                raise ParseError("recursion variable %s occurs inside a channel payload" % val, pos, self.ts.text)
            raise ParseError("unbound type variable %s" % val, pos, self.ts.text)
        raise ParseError("unexpected %r" % (val or "end of input"), pos, self.ts.text)


def parse_type(text: str, universe: TypeUniverse | None = None, defs=None) -> SessionType:
    """Parse surface syntax.  Unknown basic types raise when a universe is given."""
    ts = TokenStream(text)
    t = TypeParser(ts, universe, defs).parse()
    if ts.peek()[0] != "eof":
        raise ts.error("trailing input")
    return t


def st(text: str, universe=None, defs=None) -> SessionType:
    """Parse and require well-formedness."""
    return require_valid(parse_type(text, universe, defs))
