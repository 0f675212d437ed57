"""Command-line front door.

Subcommands:

* ``analyze``: sign-analyze a WHILE program and print the per-point result.
* ``laws``:    run a fixture's law suite and report each law.
* ``gtc``:     type-check a gradual term and print its type.
* ``tables``:  dump the abstract operator tables with optimality diffs,
  optionally rendering them (plus the value lattice) as figures.

Output is byte-identical for identical inputs, flags, and seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import gradual, parity, signs
from . import whilelang as wl
from .galois import LawReport, best_abstraction, product_gc
from .order import DomainError, IntWindow, LatticeError

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_ANALYSIS = 2
EXIT_ILL_TYPED = 3

_LAW_DOMAINS = ("parity", "parity+", "sign", "env", "gradual")


def _read_source(args: argparse.Namespace) -> str:
    if args.expr is not None:
        return args.expr
    if args.input is None:
        raise SystemExit("error: provide a source file, '-' for stdin, or -e EXPR")
    if args.input == "-":
        return sys.stdin.read()
    return Path(args.input).read_text()


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        src = _read_source(args)
        program = wl.parse(src)
    except wl.ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = signs.analyze(program, max_states=args.fuel or None)
    except wl.AnalysisError as err:
        print(f"analysis error: {err}", file=sys.stderr)
        return EXIT_ANALYSIS
    if args.format == "json":
        print(_dump_json(result.to_json_dict()))
    else:
        for p in sorted(result.points):
            env = ", ".join(f"{v}: {s}" for v, s in result.points[p].to_dict().items())
            print(f"point {p:>3}  {result.commands.get(p, ''):<32} {{{env}}}")
        env = ", ".join(f"{v}: {s}" for v, s in result.final.to_dict().items())
        print(f"final: {{{env}}}")
        print(f"pruned unreachable successors: {result.pruned_unreachable}")
    return EXIT_OK


def _suite_for(domain: str, window: IntWindow, depth: int,
               seed: int) -> list[LawReport]:
    if domain == "parity":
        return parity.law_suite(window, seed=seed)
    if domain == "parity+":
        return parity.law_suite(window, extended=True, seed=seed)
    if domain == "sign":
        return signs.law_suite(window, seed=seed)
    if domain == "env":
        return signs.env_law_suite(window, seed=seed)
    if domain == "gradual":
        return gradual.law_suite(depth, seed=seed)
    raise ValueError(domain)


def cmd_laws(args: argparse.Namespace) -> int:
    if args.domain not in _LAW_DOMAINS:
        print(f"error: unknown domain {args.domain!r} "
              f"(expected one of {', '.join(_LAW_DOMAINS)})", file=sys.stderr)
        return EXIT_PARSE
    window = IntWindow(args.window)
    reports = _suite_for(args.domain, window, args.depth, args.seed)
    if args.format == "json":
        print(_dump_json({
            "domain": args.domain,
            "window": args.window,
            "reports": [r.to_json_dict() for r in reports],
        }))
    else:
        for r in reports:
            print(r.summary())
        failed = sum(not r.passed for r in reports)
        if failed:
            print(f"{failed} of {len(reports)} laws fail")
        else:
            print(f"all {len(reports)} laws pass")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_PARSE


def cmd_gtc(args: argparse.Namespace) -> int:
    try:
        src = _read_source(args)
        term = gradual.parse_term(src)
    except gradual.TermParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        ty = gradual.typecheck_gradual(term)
    except gradual.IllTyped as err:
        print(f"ill-typed: {err}", file=sys.stderr)
        return EXIT_ILL_TYPED
    if args.format == "json":
        print(_dump_json({"type": str(ty)}))
    else:
        print(str(ty))
    return EXIT_OK


def _op_tables(window: IntWindow) -> dict[str, dict]:
    gc = signs.sign_gc(window)
    paired = product_gc(gc, gc)
    out_gc = signs.sign_gc(signs.wide_window(window))
    ops = {}
    for op in ("+", "-", "*", "/"):
        best = best_abstraction(signs.aop_kleisli(op, window, signs.wide_window(window)),
                                paired, out_gc)
        table = {}
        optimal = {}
        for s1 in signs.SIGNS:
            for s2 in signs.SIGNS:
                table[(s1, s2)] = signs.abs_aop(op, s1, s2)
                optimal[(s1, s2)] = best((s1, s2))
        ops[op] = {"table": table, "best": optimal}
    return ops


def cmd_tables(args: argparse.Namespace) -> int:
    window = IntWindow(args.window)
    ops = _op_tables(window)
    if args.format == "json":
        payload = {"window": args.window, "ops": {}}
        for op, data in ops.items():
            payload["ops"][op] = {
                "table": {f"{s1},{s2}": v for (s1, s2), v in data["table"].items()},
                "diffs": [
                    {"s1": s1, "s2": s2, "actual": v, "best": data["best"][(s1, s2)]}
                    for (s1, s2), v in sorted(data["table"].items())
                    if v != data["best"][(s1, s2)]
                ],
            }
        print(_dump_json(payload))
    else:
        for op, data in ops.items():
            print(f"# abstract {op}  (window {args.window})")
            print("\t" + "\t".join(signs.SIGNS))
            for s1 in signs.SIGNS:
                print(s1 + "\t" + "\t".join(data["table"][(s1, s2)]
                                            for s2 in signs.SIGNS))
            diffs = [(s1, s2) for s1 in signs.SIGNS for s2 in signs.SIGNS
                     if data["table"][(s1, s2)] != data["best"][(s1, s2)]]
            if diffs:
                print(f"# non-optimal cells at window {args.window}:")
                for s1, s2 in diffs:
                    print(f"#   {s1} {op} {s2} = {data['table'][(s1, s2)]}"
                          f" (best {data['best'][(s1, s2)]})")
            else:
                print("# every cell matches the best abstraction")
            print()
    if args.plot_dir is not None:
        from . import figures
        plot_dir = Path(args.plot_dir)
        plot_dir.mkdir(parents=True, exist_ok=True)
        names = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
        written = []
        for op, data in ops.items():
            path = plot_dir / f"table_{names[op]}.png"
            figures.save_table_figure(
                f"abstract {op} (window {args.window})",
                signs.SIGNS, signs.SIGNS, data["table"], data["best"], path)
            written.append(path)
        written.append(figures.save_hasse_figure(
            signs.sign_domain(), plot_dir / "sign_lattice.png",
            title="sign lattice"))
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galcheck",
        description="Law-checked abstract interpretation at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--window", type=int, default=8,
                       help="integer window bound for finite checks (default 8)")
        p.add_argument("--fuel", type=int, default=10000,
                       help="state budget for bounded exploration (default 10000)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampled suites (default 0)")
        p.add_argument("--format", choices=("text", "json"), default=default_format,
                       help=f"output format (default {default_format})")

    p = sub.add_parser("analyze", help="sign-analyze a WHILE program")
    p.add_argument("input", nargs="?", help="source file, or - for stdin")
    p.add_argument("-e", "--expr", help="inline source text")
    common(p, "json")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("laws", help="run a fixture's law suite")
    p.add_argument("domain", help=f"one of: {', '.join(_LAW_DOMAINS)}")
    p.add_argument("--depth", type=int, default=2,
                   help="type depth bound for the gradual fixture (default 2)")
    common(p, "text")
    p.set_defaults(fn=cmd_laws)

    p = sub.add_parser("gtc", help="type-check a gradual term")
    p.add_argument("input", nargs="?", help="source file, or - for stdin")
    p.add_argument("-e", "--expr", help="inline source text")
    common(p, "text")
    p.set_defaults(fn=cmd_gtc)

    p = sub.add_parser("tables", help="dump abstract operator tables with diffs")
    p.add_argument("--plot-dir", help="also render the tables as figures here")
    common(p, "text")
    p.set_defaults(fn=cmd_tables)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.window < 1:
        print("error: --window must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    if args.fuel < 0:
        print("error: --fuel must be nonnegative", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.fn(args)
    except (DomainError, LatticeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ANALYSIS


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
