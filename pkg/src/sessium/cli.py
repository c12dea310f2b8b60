"""``sessium``: command-line front end.

Each subcommand is a thin adapter over one library call.  ``--format
structured`` prints one JSON document per invocation (keys sorted, so two
runs with the same inputs are byte-identical; wall-clock timing is added
only with ``--timing``).

Exit codes: 0 success or Yes, 1 No / Rejected / corpus mismatch,
2 usage or parse error, 3 undecided side condition in strict mode.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .harness import (
    CASES, CORPUS_FILES, corpus_source, law_suite, progress_check, progress_sweep, run_corpus, simulate,
    subject_reduction_check, _peel,
)
from .lts import UndecidedSideCondition, build_graph, is_complete, stuck_witness
from .process import EvalError, ExprTypeError, parse_document
from .relations import Bound, equivalent, is_viable, strong_subsession, subsession
from .sessiontypes import IllFormedType, ParseError, parse_type, pretty
from .typecheck import REJECTED, typecheck
from .universe import UniverseError, default_universe, load_universe, parse_universe

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    universe: str | None = None
    bound: Bound = Bound()
    mode: str = "strict"
    seed: int = 0
    steps: int = 1000
    format: str = "text"
    timing: bool = False


def _bound(text):
    try:
        b = Bound.parse(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError("expected N[,W[,BUDGET]], got %r" % text) from None
    if b.depth < 0 or b.width < 1 or b.budget < 1:
        raise argparse.ArgumentTypeError("bound components must be positive")
    return b


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--universe", metavar="FILE", help="universe config (.u); default: the packaged default.u")
    p.add_argument("--bound", type=_bound, default=Bound(), metavar="N[,W]",
                   help="tester depth and choice width (default 4,2)")
    p.add_argument("--mode", choices=("strict", "permissive"), default="strict")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=1000, help="step budget for simulation")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--timing", action="store_true", help="add wall-clock timing to the output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="sessium", description="Session-type analysis and π-calculus typechecking.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    cmd("validate", "parse a session type (or a .pi file) and report its normal form").add_argument("term")
    cmd("lts", "internal state graph of a session type").add_argument("type")
    cmd("complete", "decide completeness of a session type").add_argument("type")
    cmd("viable", "search for a completing tester").add_argument("type")
    for name, what in (("sub", "subsession"), ("equiv", "equivalence")):
        p = cmd(name, "bounded %s check" % what)
        p.add_argument("lhs")
        p.add_argument("rhs")
        p.add_argument("--strong", action="store_true", help="use the precongruence for external choice")
    cmd("typecheck", "infer and check a process (.pi file or corpus case)").add_argument("process")
    p = cmd("simulate", "seeded random run of a process")
    p.add_argument("process")
    p.add_argument("--snapshots", action="store_true", help="re-infer the environment after every step")
    p = cmd("check-sr", "replay subject reduction along τ-steps")
    p.add_argument("process")
    p.add_argument("--exhaustive", action="store_true", help="explore every reachable state")
    p.add_argument("--force", action="store_true", help="replay even if the environment is not viable")
    p = cmd("check-progress", "replay progress on reachable states")
    p.add_argument("process")
    p.add_argument("--channel", help="check a single channel of the initial state")
    p = cmd("corpus", "run the bundled corpus against its expected outcomes")
    p.add_argument("cases", nargs="*", help="case names (default: all)")
    p = cmd("laws", "subsession law instances and the consistency sweep")
    p.add_argument("--random", type=int, default=1000, help="random terms in the consistency sweep")
    return ap


# ---------------------------------------------------------------------------
# input resolution


def resolve_universe(path):
    if path is None:
        return default_universe()
    f = Path(path)
    if f.exists():
        return load_universe(f)
    packaged = resources.files("sessium").joinpath("data", f.name)
    if packaged.is_file():
        return parse_universe(packaged.read_text(encoding="utf-8"))
    raise UsageError("universe file not found: %s" % path)


def _type_text(arg):
    f = Path(arg)
    if f.suffix == ".st" and f.is_file():
        return f.read_text(encoding="utf-8")
    return arg


def _process_source(arg):
    """File path, or the name of a bundled corpus case (with or without directory and .pi)."""
    f = Path(arg)
    if f.is_file():
        return f.read_text(encoding="utf-8")
    stem = f.name[:-3] if f.name.endswith(".pi") else f.name
    if stem in CORPUS_FILES:
        return corpus_source(stem)
    raise UsageError("no such process file or corpus case: %s" % arg)


def _load_process(arg, u):
    return parse_document(_process_source(arg), u).process


def _verdict_exit(v, mode):
    if v.yes:
        return EXIT_OK
    if v.no:
        return EXIT_NO
    return EXIT_UNDECIDED if mode == "strict" else EXIT_OK


# ---------------------------------------------------------------------------
# commands; each returns (document, text, exit code)


def _validate(a, u):
    if a.term.endswith(".pi"):
        doc = parse_document(_process_source(a.term), u)
        d = {"valid": True, "kind": "process", "process": str(doc.process),
             "type_defs": {k: pretty(v) for k, v in sorted(doc.type_defs.items())}}
        return d, "valid process: %s" % doc.process, EXIT_OK
    t = parse_type(_type_text(a.term), u)
    return {"valid": True, "kind": "session type", "type": pretty(t)}, "valid: %s" % pretty(t), EXIT_OK


def _lts(a, u):
    g = build_graph(parse_type(_type_text(a.type), u), u)
    return g.to_dict(), g.format_text(), EXIT_OK


def _complete(a, u):
    t = parse_type(_type_text(a.type), u)
    ok = is_complete(t, u)
    d = {"type": pretty(t), "complete": ok}
    text = "complete: %s" % str(ok).lower()
    if not ok:
        d["stuck_state"] = pretty(stuck_witness(t, u))
        text += "\nstuck state: %s" % d["stuck_state"]
    return d, text, EXIT_OK if ok else EXIT_NO


def _verdict_doc(v, **inputs):
    d = dict(inputs)
    d.update(v.to_dict())
    return d


def _viable(a, u):
    t = parse_type(_type_text(a.type), u)
    v = is_viable(t, a.bound, u)
    return _verdict_doc(v, type=pretty(t)), "viable: %s" % v, _verdict_exit(v, a.mode)


def _sub(a, u):
    lhs, rhs = parse_type(_type_text(a.lhs), u), parse_type(_type_text(a.rhs), u)
    fn = strong_subsession if a.strong else subsession
    v = fn(lhs, rhs, a.bound, u)
    rel = "⊑" if a.strong else "⪯"
    text = "%s %s %s: %s" % (pretty(lhs), rel, pretty(rhs), v)
    return _verdict_doc(v, lhs=pretty(lhs), rhs=pretty(rhs), strong=a.strong), text, _verdict_exit(v, a.mode)


def _equiv(a, u):
    lhs, rhs = parse_type(_type_text(a.lhs), u), parse_type(_type_text(a.rhs), u)
    v = equivalent(lhs, rhs, a.bound, u, "strong" if a.strong else "weak")
    rel = "≃" if a.strong else "≈"
    text = "%s %s %s: %s" % (pretty(lhs), rel, pretty(rhs), v)
    return _verdict_doc(v, lhs=pretty(lhs), rhs=pretty(rhs), strong=a.strong), text, _verdict_exit(v, a.mode)


def _typecheck(a, u):
    rep = typecheck(_load_process(a.process, u), {}, a.mode, a.bound, u)
    code = EXIT_OK
    if rep.status == REJECTED:
        undecided_only = rep.checks and not any(c.verdict.no for c in rep.checks) and rep.rule in {
            c.rule for c in rep.checks if c.verdict.unknown}
        code = EXIT_UNDECIDED if undecided_only else EXIT_NO
    return rep.to_dict(), rep.format_text(), code


def _simulate(a, u):
    tr = simulate(_load_process(a.process, u), a.steps, a.seed, u, a.snapshots, a.bound)
    return tr.to_dict(), tr.format_text(), EXIT_OK


def _check_sr(a, u):
    rep = subject_reduction_check(_load_process(a.process, u), a.steps, a.seed, u, a.exhaustive, a.force, a.bound)
    return rep.to_dict(), rep.format_text(), EXIT_OK if rep.ok else EXIT_NO


def _check_progress(a, u):
    p = _load_process(a.process, u)
    if a.channel:
        inner, _ = _peel(p)
        rep = progress_check(inner, a.channel, u, a.bound)
        return rep.to_dict(), rep.format_text(), EXIT_OK if rep.ok else EXIT_NO
    runs = progress_sweep(p, u, a.bound)
    checked = [r for _, _, r in runs if r.precondition]
    bad = [v for _, _, r in runs for v in r.violations]
    d = {"states_channels": len(runs), "preconditions_met": len(checked), "violations": bad,
         "precondition_failures": sorted({"%s: %s" % (c, r.precondition_detail)
                                          for _, c, r in runs if not r.precondition})}
    text = "\n".join(["progress: %d state/channel pairs, %d meet the preconditions, %d violation(s)"
                      % (len(runs), len(checked), len(bad))] + ["  violation: %s" % v for v in bad])
    return d, text, EXIT_NO if bad else EXIT_OK


def _corpus(a, u):
    unknown = [c for c in a.cases if c not in CASES]
    if unknown:
        raise UsageError("unknown corpus case(s): %s (known: %s)" % (", ".join(unknown), ", ".join(sorted(CASES))))
    rep = run_corpus(u, a.bound, a.cases or None)
    return rep.to_dict(), rep.format_text(), EXIT_OK if rep.ok else EXIT_NO


def _laws(a, u):
    rep = law_suite(a.bound, u, a.random, a.seed)
    return rep.to_dict(), rep.format_text(), EXIT_OK if rep.ok else EXIT_NO


COMMANDS = {
    "validate": _validate, "lts": _lts, "complete": _complete, "viable": _viable, "sub": _sub,
    "equiv": _equiv, "typecheck": _typecheck, "simulate": _simulate, "check-sr": _check_sr,
    "check-progress": _check_progress, "corpus": _corpus, "laws": _laws,
}


def _emit(a, doc, text, stream):
    if a.format == "structured":
        stream.write(json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stream.write(text + "\n")


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    t0 = time.perf_counter()
    try:
        u = resolve_universe(a.universe)
        result, text, code = COMMANDS[a.command](a, u)
    except (UsageError, ParseError, IllFormedType, UniverseError, OSError) as exc:
        _emit(a, {"command": a.command, "error": {"kind": type(exc).__name__, "message": str(exc)}},
              "error: %s" % exc, sys.stderr)
        return EXIT_USAGE
    except (ExprTypeError, EvalError) as exc:
        _emit(a, {"command": a.command, "error": {"kind": type(exc).__name__, "message": str(exc)}},
              "error: %s" % exc, sys.stderr)
        return EXIT_NO
    except UndecidedSideCondition as exc:
        code = EXIT_UNDECIDED if a.mode == "strict" else EXIT_OK
        _emit(a, {"command": a.command, "error": {"kind": "UndecidedSideCondition", "message": str(exc)}},
              "undecided: %s" % exc, sys.stderr if code else sys.stdout)
        return code
    doc = {"command": a.command, "result": result, "exit_code": code,
           "config": {"bound": a.bound.to_dict(), "mode": a.mode, "seed": a.seed, "steps": a.steps}}
    if a.timing:
        elapsed = time.perf_counter() - t0
        doc["timing"] = {"seconds": round(elapsed, 6)}
        text += "\n(%.3f s)" % elapsed
    _emit(a, doc, text, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
