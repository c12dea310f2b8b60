"""Session types with fair-testing semantics and a π-calculus typechecker."""
from .lts import UndecidedSideCondition, TypeStateGraph, build_graph, is_complete, stuck_witness
from .process import Process, parse_document, parse_process, proc_steps, ready, tau_steps
from .relations import (
    DEFAULT_BOUND, NO, UNKNOWN, YES, Bound, Verdict, check_prop5, check_thm6, dual, equivalent, is_viable,
    strong_subsession, subsession,
)
from .sessiontypes import IllFormedType, ParseError, SessionType, parse_type, pretty, unfold
from .typecheck import REJECTED, WARNINGS, WELL_TYPED, TypeReport, TypingError, typecheck
from .universe import TypeUniverse, default_universe, load_universe, parse_universe

__all__ = [
    "UndecidedSideCondition", "TypeStateGraph", "build_graph", "is_complete", "stuck_witness",
    "Process", "parse_document", "parse_process", "proc_steps", "ready", "tau_steps",
    "DEFAULT_BOUND", "NO", "UNKNOWN", "YES", "Bound", "Verdict", "check_prop5", "check_thm6", "dual",
    "equivalent", "is_viable", "strong_subsession", "subsession",
    "IllFormedType", "ParseError", "SessionType", "parse_type", "pretty", "unfold",
    "REJECTED", "WARNINGS", "WELL_TYPED", "TypeReport", "TypingError", "typecheck",
    "TypeUniverse", "default_universe", "load_universe", "parse_universe",
]
__version__ = "0.1.0"
