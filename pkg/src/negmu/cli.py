"""negmu command line: infer, reduce, translate, check, fuzz.

Exit status 0 on success, 1 when a term is untypeable or a property fails,
2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .bridges import lmu as lmu_bridge
from .bridges import nlm as nlm_bridge
from .harness import DEFAULT_COUNTS, SUITES, run_suite
from .generate import GenConfig
from .infer import (
    EMPTY, Untypeable, check, judgement_dict, judgement_text, parse_context,
    principal_typing,
)
from .parser import ParseError, parse_conclusion, parse_term, print_term
from .reduction import Strategy, normalize

OK, FAIL, USAGE = 0, 1, 2
_EXTENSIONS = {".l": "l", ".lmu": "lmu", ".nlm": "nlm"}


class _Usage(Exception):
    pass


def _source(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.file in (None, "-"):
        return sys.stdin.read()
    with open(args.file, encoding="utf-8") as fh:
        return fh.read()


def _dialect(args) -> str:
    if args.dialect:
        return args.dialect
    if args.file and args.file != "-":
        return _EXTENSIONS.get(os.path.splitext(args.file)[1], "l")
    return "l"


def _host_term(text, dialect):
    """Parse in the dialect and return a host term (λμ terms are embedded)."""
    if dialect == "lmu":
        return lmu_bridge.embed_lmu(lmu_bridge.parse_lmu(text))
    if dialect == "nlm":
        raise _Usage("this command works on host or λμ terms; translate nlm input first")
    return parse_term(text)


def _emit(args, text, payload):
    print(json.dumps(payload, ensure_ascii=False) if args.json else text)


def cmd_infer(args) -> int:
    dialect, text = _dialect(args), _source(args)
    try:
        if dialect == "lmu":
            j = lmu_bridge.lmu_typing(lmu_bridge.parse_lmu(text))
            _emit(args, j.to_text(), {"ok": True, **judgement_dict(
                j.host_context(), lmu_bridge.embed_lmu(j.term), j.type)})
            return OK
        if dialect == "nlm":
            t = nlm_bridge.parse_nlm(text)
            ty = nlm_bridge.typecheck_nlm(t)
            if ty is None:
                raise Untypeable("no typing exists")
        else:
            t = parse_term(text)
            ty = principal_typing(t)
    except Untypeable as e:
        _emit(args, f"untypeable: {e}", {"ok": False, "reason": str(e)})
        return FAIL
    _emit(args, judgement_text(ty.context, t, ty.conclusion),
          {"ok": True, **judgement_dict(ty.context, t, ty.conclusion)})
    return OK


def cmd_reduce(args) -> int:
    t = _host_term(_source(args), _dialect(args))
    trace = normalize(t, args.strategy, args.fuel, args.seed, record=args.trace)
    if args.trace:
        print(trace.to_json())
    elif args.json:
        print(json.dumps({"normal_form": print_term(trace.final),
                          "fuel_exhausted": trace.fuel_exhausted}, ensure_ascii=False))
    else:
        print(print_term(trace.final))
    if trace.fuel_exhausted:
        print(f"fuel exhausted after {args.fuel} steps", file=sys.stderr)
        return FAIL
    return OK


def cmd_translate(args) -> int:
    t = nlm_bridge.parse_nlm(_source(args))
    try:
        out = nlm_bridge.translate(t, check_types=args.check_types)
    except nlm_bridge.TranslationError as e:
        _emit(args, f"cannot translate: {e}", {"ok": False, "reason": str(e)})
        return FAIL
    _emit(args, print_term(out), {"ok": True, "term": print_term(out),
                                  "names": nlm_bridge.ul(t)})
    return OK


def cmd_check(args) -> int:
    t = _host_term(_source(args), _dialect(args))
    g = parse_context(args.context) if args.context else EMPTY
    expected = parse_conclusion(args.type)
    ok = check(g, t, expected)
    _emit(args, "pass" if ok else "fail",
          {"ok": ok, **judgement_dict(g, t, expected)})
    return OK if ok else FAIL


def cmd_fuzz(args) -> int:
    counts = {}
    if args.n is not None:
        counts = {args.suite: args.n}
        if args.suite == "confluence":
            counts["diamond"] = min(args.n, DEFAULT_COUNTS["diamond"])
    rep = run_suite(args.suite, GenConfig(seed=args.seed, counts=counts))
    print(rep.to_json(indent=2) if args.json else rep.table())
    return OK if rep.ok else FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="negmu", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp, dialects=("l", "lmu", "nlm")):
        sp.add_argument("file", nargs="?", help="input file; stdin when absent or '-'")
        sp.add_argument("-e", "--expr", help="term given inline instead of a file")
        sp.add_argument("--dialect", choices=dialects,
                        help="source dialect; defaults from the file extension, else l")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = with_input(sub.add_parser("infer", help="print the principal typing"))
    sp.set_defaults(run=cmd_infer)

    sp = with_input(sub.add_parser("reduce", help="normalise a term"), ("l", "lmu"))
    sp.add_argument("--strategy", choices=[Strategy.LO, Strategy.RI, Strategy.RANDOM],
                    default=Strategy.LO)
    sp.add_argument("--fuel", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=None, help="seed for --strategy random")
    sp.add_argument("--trace", action="store_true", help="emit the step trace as JSON")
    sp.set_defaults(run=cmd_reduce)

    sp = with_input(sub.add_parser("translate", help="translate an nlm term into the host"),
                    ("nlm",))
    sp.add_argument("--check-types", action="store_true",
                    help="refuse terms whose typing puts bottom inside a type")
    sp.set_defaults(run=cmd_translate)

    sp = with_input(sub.add_parser("check", help="check a term against a type"), ("l", "lmu"))
    sp.add_argument("--context", default="", help="e.g. \"x:p1, 'a:~p2\"")
    sp.add_argument("--type", required=True, help="expected type, or # for bottom")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("fuzz", help="run a property suite")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=None, help="number of trials")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(run=cmd_fuzz)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.run(args)
    except (ParseError, lmu_bridge.NotInFragment, _Usage) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
