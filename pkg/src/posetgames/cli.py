"""Command line interface: ``posetgames <command> ...``.

Exit codes: 0 success, 1 usage error, 2 parse/format error, 3 solver
budget exceeded, 4 property-suite failure.
"""

from __future__ import annotations

import argparse
import sys

from . import checks
from .constructions import Variant, and_game, negate, or_game
from .formula import (
    FormulaSyntaxError,
    UnboundVariable,
    compile_formula,
    compiled_size_report,
    parse,
    parse_assignment,
)
from .oracle import random_poset
from .poset import FormatError, component_masks, dumps, label_text, load
from .solver import DEFAULT_MAX_POSITIONS, BudgetExceeded, SolveBudget, grundy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_BUDGET = 3
EXIT_CHECK = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return value


def _read(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_nim(args) -> int:
    p = _read(args.file)
    report = grundy(p, SolveBudget(args.budget))
    move = "none" if report.winning_move is None else report.winning_move
    print(
        f"grundy={report.grundy} winner={report.winner} winning_move={move} "
        f"positions={report.positions_explored}"
    )
    return EXIT_OK


def cmd_negate(args) -> int:
    g = _read(args.input)
    out, trace = negate(g, args.variant)
    comments = trace.comments()
    comments += [f"prov: {v} {label_text(label)}" for v, label in enumerate(out.provenance)]
    _emit(dumps(out, comments), args.output)
    return EXIT_OK


def cmd_or(args) -> int:
    _emit(dumps(or_game(_read(args.a), _read(args.b))), args.output)
    return EXIT_OK


def cmd_and(args) -> int:
    _emit(dumps(and_game(_read(args.a), _read(args.b), args.variant)), args.output)
    return EXIT_OK


def cmd_compile(args) -> int:
    if (args.formula is None) == (args.file is None):
        raise UsageError("give exactly one of FORMULA or --file")
    if args.file is not None:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        text = args.formula
    try:
        asn = parse_assignment(args.assign or "")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    f = parse(text)
    game = compile_formula(f, asn, args.variant)
    comments = [f"formula: {text}", f"variant: {args.variant}"]
    if args.report:
        table = compiled_size_report(f, asn, args.variant)
        comments += [f"size: {path}\t{size}\t{sub}" for path, sub, size in table]
        if args.output is not None:
            print("path\tsize\tformula")
            for path, sub, size in table:
                print(f"{path}\t{size}\t{sub}")
    _emit(dumps(game, comments), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    results = checks.run_all(
        max_n=args.max_n,
        samples=args.samples,
        seed=args.seed,
        budget=SolveBudget(args.budget),
    )
    failed = [r.name for r in results if not r.passed]
    print(f"suites={len(results)} passed={len(results) - len(failed)} failed={len(failed)}")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_gen(args) -> int:
    p = random_poset(args.n, args.seed, args.density)
    comments = [f"gen: n={args.n} seed={args.seed} density={args.density!r}"]
    _emit(dumps(p, comments), args.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    p = _read(args.file)
    print(f"n={p.n} relations={p.relation_count} components={len(component_masks(p))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="posetgames", description="Solve, negate and compile poset games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def variant_flag(p):
        p.add_argument(
            "--variant",
            type=Variant,
            choices=list(Variant),
            default=Variant.PROCEDURE,
            help="negation loop extent (default: procedure)",
        )

    p = sub.add_parser("nim", help="nim-value, winner and winning move of a poset file")
    p.add_argument("file")
    p.add_argument("--budget", type=_positive, default=DEFAULT_MAX_POSITIONS,
                   help="maximum memoized positions")
    p.set_defaults(func=cmd_nim)

    p = sub.add_parser("negate", help="write a game with the opposite winner")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    variant_flag(p)
    p.set_defaults(func=cmd_negate)

    for name, func, help_text in (
        ("or", cmd_or, "first player wins iff they win A or B"),
        ("and", cmd_and, "first player wins iff they win A and B"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("-o", "--output")
        variant_flag(p)
        p.set_defaults(func=func)

    p = sub.add_parser("compile", help="compile a Boolean formula to a poset game")
    p.add_argument("formula", nargs="?")
    p.add_argument("-f", "--file", help="read the formula from a file")
    p.add_argument("--assign", help="variable values, e.g. x=1,y=0")
    p.add_argument("-o", "--output")
    p.add_argument("--report", action="store_true", help="per-subformula size table")
    variant_flag(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="run every property suite")
    p.add_argument("--max-n", type=int, choices=range(0, 7), default=5, metavar="N")
    p.add_argument("--samples", type=_non_negative, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=DEFAULT_MAX_POSITIONS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="seeded random poset")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--density", type=_probability, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="vertex, relation and component counts")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, UnboundVariable) as exc:
        print(f"posetgames: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, FormulaSyntaxError) as exc:
        print(f"posetgames: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except BudgetExceeded as exc:
        print(f"posetgames: error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
