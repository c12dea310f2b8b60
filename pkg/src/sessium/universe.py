"""Finite universe of basic values and basic types.

Basic types are modelled as unions of pairwise-disjoint *cells*.  A cell is
an atomic class of values that no basic type can split, so any question
about value types (membership, inclusion, emptiness) reduces to finite set
operations on cell names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


class UniverseError(ValueError):
    """Raised for malformed universe configurations or unknown names."""


# ---------------------------------------------------------------------------
# basic type expressions


@dataclass(frozen=True)
class Named:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Singleton:
    literal: object

    def __str__(self):
        return "'%s'" % self.literal


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class Cells:
    """Explicit cell set; produced by analyses, printed as ``{a,b}``."""

    cells: frozenset

    def __str__(self):
        return "{%s}" % ",".join(sorted(self.cells))


BasicTypeExpr = (Named, Singleton, Empty, Cells)
EMPTY = Empty()


# ---------------------------------------------------------------------------
# values


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    return '"%s"' % v


_NUM = re.compile(r"-?\d+(\.\d+)?$")


def parse_literal(token: str):
    """Parse a literal as written in universe files and processes."""
    token = token.strip()
    if token == "true":
        return True
    if token == "false":
        return False
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        return token[1:-1]
    if _NUM.match(token):
        return float(token) if "." in token else int(token)
    raise UniverseError("not a literal: %r" % token)


@dataclass(frozen=True)
class FunSig:
    name: str
    params: tuple
    result: object
    table: dict = field(hash=False, compare=False)


@dataclass(frozen=True, eq=False)
class TypeUniverse:
    """Declared cells, named types, singletons, carriers and function tables.

    Instances hash by identity so they can key analysis caches.
    """

    cells: tuple
    named_types: dict
    singletons: dict
    carriers: dict
    functions: dict = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.cells)
        if len(known) != len(self.cells):
            raise UniverseError("duplicate cell declaration")
        for name, cs in self.named_types.items():
            if not cs <= known:
                raise UniverseError("type %s uses undeclared cells %s" % (name, sorted(cs - known)))
        for lit, c in self.singletons.items():
            if c not in known:
                raise UniverseError("singleton %r placed in undeclared cell %s" % (lit, c))
        for c, values in self.carriers.items():
            if c not in known:
                raise UniverseError("carrier for undeclared cell %s" % c)
            if not values:
                raise UniverseError("carrier of cell %s is empty" % c)
        for c in known:
            if c not in self.carriers:
                raise UniverseError("cell %s has no carrier values" % c)
        lookup = {}
        for c in self.cells:
            for v in self.carriers[c]:
                lookup[(type(v), v)] = c
        for lit, c in self.singletons.items():
            lookup[(type(lit), lit)] = c
        object.__setattr__(self, "_value_cells", lookup)

    # -- basic types -------------------------------------------------------

    def denote(self, bt) -> frozenset:
        if isinstance(bt, Empty):
            return frozenset()
        if isinstance(bt, Named):
            try:
                return self.named_types[bt.name]
            except KeyError:
                raise UniverseError("unknown basic type %s" % bt.name) from None
        if isinstance(bt, Singleton):
            try:
                return frozenset([self.singletons[bt.literal]])
            except KeyError:
                raise UniverseError("undeclared singleton %r" % (bt.literal,)) from None
        if isinstance(bt, Cells):
            unknown = bt.cells - set(self.cells)
            if unknown:
                raise UniverseError("unknown cells %s" % sorted(unknown))
            return bt.cells
        raise TypeError("not a basic type expression: %r" % (bt,))

    def bt_subtype(self, a, b) -> bool:
        return self.denote(a) <= self.denote(b)

    def check_bt(self, bt):
        self.denote(bt)
        return bt

    def name_for(self, cells: frozenset):
        """Most readable expression denoting exactly ``cells``."""
        if not cells:
            return EMPTY
        for name, cs in self.named_types.items():
            if cs == cells:
                return Named(name)
        if len(cells) == 1:
            (c,) = cells
            for lit, sc in self.singletons.items():
                if sc == c:
                    return Singleton(lit)
        return Cells(frozenset(cells))

    # -- values ------------------------------------------------------------

    def cell_of(self, v) -> str:
        c = self._value_cells.get((type(v), v))
        if c is not None:
            return c
        # computed numbers fall into the first cell carrying numbers of their kind
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            integral = isinstance(v, int) or v.is_integer()
            for cell in self.cells:
                sample = self.carriers[cell][0]
                if isinstance(sample, bool) or not isinstance(sample, (int, float)):
                    continue
                if integral == isinstance(sample, int):
                    return cell
        raise UniverseError("value %s belongs to no declared cell" % format_value(v))

    def type_of_value(self, v):
        c = self.cell_of(v)
        for lit, sc in self.singletons.items():
            if sc == c:
                return Singleton(lit)
        best = None
        for name, cs in self.named_types.items():
            if c in cs and (best is None or len(cs) < len(self.named_types[best])):
                best = name
        return Named(best) if best else Cells(frozenset([c]))

    def values_of(self, bt) -> list:
        out = []
        for c in self.cells:
            if c in self.denote(bt):
                out.extend(self.carriers[c])
        return out


# ---------------------------------------------------------------------------
# configuration files

_LINE_CELL = re.compile(r"cell\s+(\w+)$")
_LINE_TYPE = re.compile(r"type\s+(\w+)\s*=\s*(.*)$")
_LINE_SINGLETON = re.compile(r"singleton\s+('[^']*'|\"[^\"]*\")\s+in\s+(\w+)$")
_LINE_CARRIER = re.compile(r"carrier\s+(\w+)\s*=\s*(.*)$")
_LINE_FUN = re.compile(r"fun\s+(\w+)\s*\(([^)]*)\)\s*->\s*(\S+)\s*\{(.*)\}$")


def _split_values(text: str) -> list:
    # commas inside quotes are part of the literal
    return [t for t in re.findall(r"\"[^\"]*\"|'[^']*'|[^,\s][^,]*", text) if t.strip()]


def _parse_bt_name(tok: str):
    tok = tok.strip()
    if tok == "empty":
        return EMPTY
    if tok.startswith("'"):
        return Singleton(parse_literal(tok))
    return Named(tok)


def parse_universe(text: str) -> TypeUniverse:
    """Parse the line-oriented universe format.

    ::

        cell int
        type Int = int
        singleton 'abort' in abort
        carrier int = 0, 1, 2
        fun half(Int) -> Int { 2 -> 1; 4 -> 2 }

    ``#`` starts a comment.
    """
    cells, named, singletons, carriers, funs = [], {}, {}, {}, {}
    pending_funs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if m := _LINE_CELL.match(line):
                cells.append(m.group(1))
            elif m := _LINE_TYPE.match(line):
                named[m.group(1)] = frozenset(c.strip() for c in m.group(2).split(",") if c.strip())
            elif m := _LINE_SINGLETON.match(line):
                singletons[parse_literal(m.group(1))] = m.group(2)
            elif m := _LINE_CARRIER.match(line):
                carriers[m.group(1)] = tuple(parse_literal(v) for v in _split_values(m.group(2)))
            elif m := _LINE_FUN.match(line):
                pending_funs.append(m)
            else:
                raise UniverseError("unrecognised declaration")
        except UniverseError as exc:
            raise UniverseError("line %d: %s" % (lineno, exc)) from None
    for m in pending_funs:
        name = m.group(1)
        params = tuple(_parse_bt_name(p) for p in m.group(2).split(",") if p.strip())
        result = _parse_bt_name(m.group(3))
        table = {}
        for entry in m.group(4).split(";"):
            if not entry.strip():
                continue
            lhs, _, rhs = entry.partition("->")
            lhs = lhs.strip()
            if lhs in ("", "()"):
                args = ()
            else:
                args = tuple(parse_literal(a) for a in _split_values(lhs.strip("()")))
            if len(args) != len(params):
                raise UniverseError("fun %s: entry %r has wrong arity" % (name, entry.strip()))
            table[args] = parse_literal(rhs)
        funs[name] = FunSig(name, params, result, table)
    u = TypeUniverse(tuple(cells), named, singletons, carriers, funs)
    for f in funs.values():
        for bt in f.params + (f.result,):
            u.denote(bt)
    return u


def load_universe(path) -> TypeUniverse:
    return parse_universe(Path(path).read_text(encoding="utf-8"))


_DEFAULT = None


def default_universe() -> TypeUniverse:
    """The shipped universe covering every worked example."""
    global _DEFAULT
    if _DEFAULT is None:
        text = resources.files("sessium").joinpath("data/default.u").read_text(encoding="utf-8")
        _DEFAULT = parse_universe(text)
    return _DEFAULT
