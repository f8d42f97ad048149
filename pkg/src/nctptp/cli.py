"""Command-line driver: parse, check, embed, translate, expand, oracle.

Exit codes are a stable contract: 0 success, 1 parse error, 2 logic
specification error, 3 unsupported construct (embedding/translation), 4
resource bound exceeded.  Verdicts are reported as single SZS status lines;
bounded verdicts carry a `% Bound:` comment.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from .embedding import convert_classical, embed_problem, translate_problem
from .logic_spec import (
    CheckedProblem,
    SpecError,
    SpecErrorKind,
    check_problem,
)
from .oracle.decide import decide
from .oracle.models import OracleError, OracleResourceError
from .parser import ParseError, parse_file
from .printer import print_problem, print_unit

INCLUDE_ROOT_ENV = "TPTP"


def _include_root(args) -> Optional[str]:
    if args.include_root:
        return args.include_root
    return os.environ.get(INCLUDE_ROOT_ENV) or None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _warn(warnings, filename: str) -> None:
    for warning in warnings:
        print(f"% warning: {filename}: {warning}", file=sys.stderr)


def _checked(args) -> CheckedProblem:
    problem = parse_file(args.input, include_root=_include_root(args))
    checked = check_problem(problem, filename=args.input)
    _warn(checked.warnings, args.input)
    return checked


def cmd_parse(args) -> int:
    problem = parse_file(args.input, include_root=_include_root(args))
    if args.format == "ast":
        text = "\n".join(repr(u) for u in problem) + "\n"
    else:
        text = print_problem(problem)
    _emit(text, args.out)
    return 0


def cmd_check(args) -> int:
    _checked(args)
    print(f"% SZS status Success for {args.input}")
    return 0


def cmd_embed(args) -> int:
    checked = _checked(args)
    if checked.semantics is None:
        units, warnings = convert_classical(checked.units)
        _warn(warnings, args.input)
        header = ["% Classical problem; dialect normalized to THF."]
    else:
        output = embed_problem(checked, filename=args.input)
        units, header = output.units, output.header
    text = print_problem(units, header)
    _emit(text, args.out)
    if args.out and args.out != "-":
        print(f"% SZS status Success for {args.input}")
    else:
        print(f"% SZS status Success for {args.input}", file=sys.stderr)
    return 0


def cmd_translate(args) -> int:
    checked = _checked(args)
    units, warnings = translate_problem(checked, filename=args.input)
    _warn(warnings, args.input)
    header = ["% First-order relational translation."]
    logic_unit = checked.logic_unit
    if logic_unit is not None and logic_unit.raw:
        header.append("% Originating logic specification:")
        header.extend("%    " + line for line in logic_unit.raw.splitlines())
    _emit(print_problem(units, header), args.out)
    if args.out and args.out != "-":
        print(f"% SZS status Success for {args.input}")
    else:
        print(f"% SZS status Success for {args.input}", file=sys.stderr)
    return 0


def _file_header(path: str) -> list[str]:
    """Leading comment block of a problem file (Status lines live here)."""
    header = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            stripped = line.rstrip("\n")
            if stripped.strip() == "" or stripped.lstrip().startswith("%"):
                header.append(stripped)
            else:
                break
    while header and header[-1].strip() == "":
        header.pop()
    return header


def cmd_expand(args) -> int:
    problem = parse_file(args.input, include_root=_include_root(args))
    specs = [u for u in problem if u.is_logic()]
    if not specs:
        raise SpecError(SpecErrorKind.MISSING_LOGIC_SPEC,
                        "generator file contains no logic specification",
                        None, args.input)
    names = [u.name for u in specs]
    if len(set(names)) != len(names):
        raise SpecError(SpecErrorKind.DUPLICATE_LOGIC_SPEC,
                        "generator file repeats a specification name",
                        None, args.input)
    rest = [u for u in problem if not u.is_logic()]
    out_dir = args.out_dir or os.path.dirname(os.path.abspath(args.input))
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.basename(args.input)
    stem = base[:-len(".p")] if base.endswith(".p") else os.path.splitext(base)[0]
    header = _file_header(args.input)
    written = []
    for spec in specs:
        path = os.path.join(out_dir, f"{stem}.{spec.name}.p")
        chunks = list(header)
        if chunks:
            chunks.append("")
        chunks.append(f"% Expanded from {base} for logic specification "
                      f"'{spec.name}'.")
        chunks.append("")
        for unit in [spec] + rest:
            chunks.append(unit.raw if unit.raw else print_unit(unit))
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(chunks) + "\n")
        written.append(path)
        print(path)
    return 0


def cmd_oracle(args) -> int:
    checked = _checked(args)
    bounds = (args.max_worlds, args.max_domain)
    try:
        verdict = decide(checked, bounds=bounds,
                         frame_as_premises=args.frame_as_premises,
                         clause_budget=args.clause_budget,
                         filename=args.input)
    except OracleResourceError as exc:
        print(f"% SZS status Unknown for {args.input}")
        print(f"% Resource: {exc}")
        return 4
    print(f"% SZS status {verdict.status} for {args.input}")
    print(f"% Bound: worlds={bounds[0]} domain={bounds[1]}")
    if verdict.note:
        print(f"% Note: {verdict.note}")
    if verdict.witness is not None:
        print("% Witness:")
        for line in verdict.witness.describe().splitlines():
            print(f"%   {line}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nctptp",
        description="Toolkit for the TPTP non-classical languages TXN/THN")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("input", help="input problem file")
        p.add_argument("--include-root", default=None,
                       help=f"include resolution root (default ${INCLUDE_ROOT_ENV})")
        if out:
            p.add_argument("--out", default=None,
                           help="output file (default stdout)")

    p = sub.add_parser("parse", help="parse and reprint a problem")
    common(p)
    p.add_argument("--format", choices=("tptp", "ast"), default="tptp")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", help="validate the logic specification")
    common(p, out=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("embed", help="compile to classical THF")
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("translate",
                       help="first-order relational translation "
                            "(propositional fragment)")
    common(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("expand", help="expand a generator file")
    common(p, out=False)
    p.add_argument("--out-dir", default=None,
                   help="output directory (default: input's directory)")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle", help="bounded Kripke-model verdict")
    common(p, out=False)
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-domain", type=int, default=4)
    p.add_argument("--clause-budget", type=int, default=2_000_000,
                   help="grounding size cap before giving up with Unknown")
    p.add_argument("--frame-as-premises", action="store_true",
                   help="treat frame conditions as premises instead of "
                            "model constraints")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(exc.diagnostic(), file=sys.stderr)
        return 1
    except SpecError as exc:
        print(exc.diagnostic(), file=sys.stderr)
        if exc.kind is SpecErrorKind.UNSUPPORTED_CONSTRUCT:
            return 3
        return 2
    except OracleResourceError as exc:
        print(f"% resource bound exceeded: {exc}", file=sys.stderr)
        return 4
    except OracleError as exc:
        print(f"% not supported by the oracle: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
