"""Command-line front end.

Exit status: 0 on success or equivalence, 1 when a pair is distinguished,
2 on any error (bad usage, syntax, typing, evaluation).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .core.parser import ParseError, main_definition, parse_program
from .core.terms import Term, show
from .core.types import Type, show_type
from .core.typing import TypeCheckError, TypeEnv, type_eq, typecheck
from .evaluator import EvalError, evaluate
from .monads import MONADS, MonadError, all_op_symbols, get_monad, show_mval
from .oracle import cross_check, ctx_equiv, default_seed, random_pairs
from .prelude import Pair
from .rts import ConfigType
from .traces import DISTINGUISHED, show_trace, trace_equiv, trace_set


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Program:
    path: str
    term: Term
    type: Type
    hints: tuple[Type, ...]


def corpus_dir() -> Path:
    return Path(str(resources.files("lambang") / "corpus"))


def _resolve_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    shipped = corpus_dir() / name
    if shipped.exists():
        return shipped
    raise UsageError(f"no such file: {name}")


def _parse(path: Path, ops):
    try:
        return parse_program(path.read_text(encoding="utf-8"), ops)
    except ParseError as err:
        raise UsageError(f"{path}: {err}") from None


def load(name: str, monad: str | None = None) -> Program:
    """Parse a ``.lam`` file, expand its definitions and typecheck every one."""
    path = _resolve_path(name)
    ops = get_monad(monad).signature if monad else all_op_symbols()
    defs = _parse(path, ops)
    hints = tuple(d.type for d in defs)
    for d in defs:
        try:
            typecheck(TypeEnv(), d.term, d.type, hints)
        except TypeCheckError as err:
            raise TypeCheckError(f"{path}:{d.line}: definition {d.name!r}: {err}") from None
    main = main_definition(defs)
    if main.term.is_value:
        raise TypeCheckError(f"{path}:{main.line}: the main definition {main.name!r} must be a computation")
    return Program(str(path), main.term, main.type, hints)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_check(args) -> int:
    path = _resolve_path(args.file)
    ops = get_monad(args.monad).signature if args.monad else all_op_symbols()
    defs = _parse(path, ops)
    hints = tuple(d.type for d in defs)
    rows = []
    for d in defs:
        try:
            typecheck(TypeEnv(), d.term, d.type, hints)
        except TypeCheckError as err:
            raise TypeCheckError(f"{path}:{d.line}: definition {d.name!r}: {err}") from None
        rows.append({"name": d.name, "type": show_type(d.type), "term": show(d.term)})
    _emit(args, {"file": str(path), "ok": True, "definitions": rows},
          "\n".join(f"ok  {r['name']} : {r['type']}" for r in rows))
    return 0


def cmd_eval(args) -> int:
    prog = load(args.file, args.monad)
    m = get_monad(args.monad)
    res = evaluate(prog.term, args.fuel, m)
    payload = {"result": m.to_json(res.value, show), "fuel": res.fuel_used,
               "stabilized": res.stabilized}
    _emit(args, payload, f"{show_mval(m, res.value, show)}\n"
          f"(fuel {res.fuel_used}, {'stable' if res.stabilized else 'not yet stable'} at fuel + 1)")
    return 0


def cmd_traces(args) -> int:
    prog = load(args.file, args.monad)
    alpha = ConfigType((), (prog.type,), True)
    ops = get_monad(args.monad).signature
    traces = list(trace_set(alpha, args.depth, args.ctx_size, ops))
    _emit(args, {"type": str(alpha), "traces": [[str(a) for a in t] for t in traces]},
          "\n".join(show_trace(t) for t in traces))
    return 0


def _same_type(a: Program, b: Program) -> None:
    if not type_eq(a.type, b.type):
        raise TypeCheckError(f"{a.path} has type {show_type(a.type)} but "
                             f"{b.path} has type {show_type(b.type)}")


def cmd_trace_equiv(args) -> int:
    a, b = load(args.file_a, args.monad), load(args.file_b, args.monad)
    alpha = ConfigType((), (a.type,), True)
    beta = ConfigType((), (b.type,), True)
    rep = trace_equiv(a.term, b.term, args.depth, args.ctx_size, args.fuel, args.monad,
                      alpha=alpha, beta=beta)
    _emit(args, rep.to_json(args.monad), rep.describe(args.monad))
    return 1 if rep.verdict == DISTINGUISHED else 0


def cmd_ctx_equiv(args) -> int:
    a, b = load(args.file_a, args.monad), load(args.file_b, args.monad)
    _same_type(a, b)
    rep = ctx_equiv(a.term, b.term, args.ctx_size, args.fuel, args.monad,
                    tau=a.type, hints=a.hints + b.hints)
    _emit(args, rep.to_json(args.monad), rep.describe(args.monad))
    return 1 if rep.verdict == DISTINGUISHED else 0


def _corpus_pairs(directory: str, monad: str) -> list[Pair]:
    root = Path(directory)
    if not root.is_dir():
        raise UsageError(f"--corpus expects a directory of NAME_L.lam / NAME_R.lam files: {directory}")
    pairs = []
    for left in sorted(root.glob("*_L.lam")):
        right = left.with_name(left.name[:-len("_L.lam")] + "_R.lam")
        if not right.exists():
            continue
        a, b = load(str(left), monad), load(str(right), monad)
        _same_type(a, b)
        pairs.append(Pair(left.name[:-len("_L.lam")], a.term, b.term, a.type, a.hints + b.hints))
    if not pairs:
        raise UsageError(f"no NAME_L.lam / NAME_R.lam pairs in {directory}")
    return pairs


def cmd_cross_check(args) -> int:
    if args.corpus:
        pairs = _corpus_pairs(args.corpus, args.monad)
    else:
        seed = default_seed() if args.seed is None else args.seed
        pairs = random_pairs(args.count, seed, args.term_size, ops=get_monad(args.monad).signature)
    rep = cross_check(pairs, args.depth, args.ctx_size, args.oracle_size, args.fuel, args.monad)
    summary = rep.summary()
    detail = []
    for r in rep.results:
        detail.append({"name": r.pair.name, "lhs": show(r.pair.lhs), "rhs": show(r.pair.rhs),
                       "trace": r.trace.verdict, "ctx": r.ctx.verdict,
                       "enlarged": None if r.enlarged is None else r.enlarged.verdict})
    lines = [f"{k}: {v}" for k, v in summary.items()]
    for r in rep.violations:
        lines.append(f"VIOLATION {r.pair.name}: {show(r.pair.lhs)}  vs  {show(r.pair.rhs)}")
        lines.append(f"  context: {show(r.ctx.context)}")
        if r.enlarged is not None:
            lines.append(f"  enlarged trace bounds: {r.enlarged.verdict}")
    for r in rep.trace_only:
        lines.append(f"trace-only {r.pair.name}: context bound too small to separate")
    _emit(args, {"summary": summary, "pairs": detail}, "\n".join(lines))
    return 1 if rep.violations else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambang", description=(
        "Linear call-by-value lambda calculus with effects: typecheck, evaluate, "
        "and compare programs by traces or by contexts."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, monad_default: str | None = "dist"):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if monad_default is None:
            sp.add_argument("--monad", choices=sorted(MONADS), default=None,
                            help="restrict operations to this monad's signature")
        else:
            sp.add_argument("--monad", choices=sorted(MONADS), default=monad_default)

    def nonneg(s: str) -> int:
        v = int(s)
        if v < 0:
            raise argparse.ArgumentTypeError("must be non-negative")
        return v

    sp = sub.add_parser("check", help="parse and typecheck a .lam file")
    sp.add_argument("file")
    common(sp, None)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("eval", help="evaluate the main definition")
    sp.add_argument("file")
    sp.add_argument("--fuel", type=nonneg, default=100)
    common(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("traces", help="list the traces of the main definition")
    sp.add_argument("file")
    sp.add_argument("--depth", type=nonneg, default=3)
    sp.add_argument("--ctx-size", type=nonneg, default=3)
    common(sp)
    sp.set_defaults(fn=cmd_traces)

    for name, fn in (("trace-equiv", cmd_trace_equiv), ("ctx-equiv", cmd_ctx_equiv)):
        what = "trace" if name == "trace-equiv" else "contextual"
        sp = sub.add_parser(name, help=f"bounded {what} equivalence of two files")
        sp.add_argument("file_a")
        sp.add_argument("file_b")
        if name == "trace-equiv":
            sp.add_argument("--depth", type=nonneg, default=6)
            sp.add_argument("--ctx-size", type=nonneg, default=3)
        else:
            sp.add_argument("--ctx-size", type=nonneg, default=7)
        sp.add_argument("--fuel", type=nonneg, default=50)
        common(sp)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("cross-check", help="compare trace and context verdicts on a corpus")
    sp.add_argument("--corpus", help="directory of NAME_L.lam / NAME_R.lam pairs; "
                                     "random pairs when omitted")
    sp.add_argument("--seed", type=int, default=None, help="defaults to $LAMBANG_SEED or 0")
    sp.add_argument("--count", type=nonneg, default=200)
    sp.add_argument("--term-size", type=nonneg, default=6)
    sp.add_argument("--depth", type=nonneg, default=5)
    sp.add_argument("--ctx-size", type=nonneg, default=3)
    sp.add_argument("--oracle-size", type=nonneg, default=6)
    sp.add_argument("--fuel", type=nonneg, default=40)
    common(sp)
    sp.set_defaults(fn=cmd_cross_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ParseError, TypeCheckError, MonadError, EvalError) as err:
        print(f"lambang: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
