"""``hottloop`` command line: check files, normalize expressions, wind loops."""
from __future__ import annotations

import argparse
import sys

from . import api, stdlib
from .checker import CheckFailed, Environment, TypeCheckError, check_module
from .normalizer import DEFAULT_BUDGET, BudgetExceeded
from .syntax import Diagnostic, ParseError, parse_module

EXIT_OK, EXIT_TYPE, EXIT_PARSE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


def _report(diag: Diagnostic) -> None:
    print(diag.format(), file=sys.stderr)


def run_check(files: list[str], verbose: bool = False) -> int:
    env = Environment.kernel()
    code = EXIT_OK
    for f in files:
        try:
            with open(f, encoding="utf-8", errors="replace") as fh:
                text = fh.read()
        except OSError as e:
            print(f"{f}: error: cannot open: {e.strerror}", file=sys.stderr)
            code = max(code, EXIT_IO)
            continue
        try:
            decls = parse_module(text, f)
        except ParseError as e:
            _report(e.diagnostic)
            code = max(code, EXIT_PARSE)
            continue
        on_ok = (lambda name: print(f"ok {name}")) if verbose else None
        try:
            env = check_module(env, decls, file=f, on_ok=on_ok)
        except CheckFailed as e:
            for d in e.diagnostics:
                _report(d)
            env = e.env
            code = max(code, EXIT_TYPE)
        except BudgetExceeded as e:
            print(f"{f}: error: {e}", file=sys.stderr)
            code = max(code, EXIT_BUDGET)
    return code


def run_normalize(expr: str, compute_mode: bool = False, budget: int = DEFAULT_BUDGET,
                  prelude: bool = True) -> int:
    try:
        env = stdlib.environment() if prelude else Environment.kernel()
        nf, ty = api.evaluate(expr, env, compute_mode, budget)
    except ParseError as e:
        _report(e.diagnostic)
        return EXIT_PARSE
    except TypeCheckError as e:
        _report(e.diagnostic)
        return EXIT_TYPE
    except BudgetExceeded as e:
        print(f"<expr>: error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    print(api.show_value(nf, ty, env))
    return EXIT_OK


def run_winding(word: str, budget: int = DEFAULT_BUDGET) -> int:
    try:
        n = api.winding(word, budget=budget)
    except ValueError as e:
        print(f"<word>: error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(f"<word>: error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    print(n)
    return EXIT_OK


def _budget(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hottloop", description="A small checker for homotopy type theory.")
    sub = p.add_subparsers(dest="command", required=True)

    ck = sub.add_parser("check", help="type-check .hott files in order")
    ck.add_argument("files", nargs="+", metavar="FILE")
    ck.add_argument("-v", "--verbose", action="store_true", help="print 'ok NAME' per definition")

    nm = sub.add_parser("normalize", help="normalize an expression against the standard library")
    nm.add_argument("-e", "--expr", required=True, metavar="EXPR")
    nm.add_argument("-c", "--compute", action="store_true", help="enable the compute-mode path rules")
    nm.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET, metavar="N")
    nm.add_argument("--no-prelude", action="store_true", help="do not load the standard library")

    wd = sub.add_parser("winding", help="winding number of a loop word")
    wd.add_argument("word", metavar="WORD")
    wd.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET, metavar="N")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    match args.command:
        case "check":
            return run_check(args.files, args.verbose)
        case "normalize":
            return run_normalize(args.expr, args.compute, args.budget, not args.no_prelude)
        case "winding":
            return run_winding(args.word, args.budget)
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
