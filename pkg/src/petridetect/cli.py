"""Command-line driver.

Exit codes: 0 every requested property holds, 1 some property fails,
2 usage or parse error, 3 assumptions violated or a budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .detectability import PERIODIC, STRONG, XM_LITERAL, XM_PER_CYCLE, check_lpn
from .errors import (
    BudgetExceededError,
    InapplicableAssumptionsError,
    ParseError,
    UnsupportedStructureError,
)
from .fixtures import FIXTURES, fixture_text
from .io import emit_dot, parse_net, report_json
from .net import reachability_graph
from .oracle import oracle_periodic_strong_detectability, oracle_strong_detectability

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_INAPPLICABLE = 0, 1, 2, 3
FIXTURE_PREFIX = "fixture:"

_PROPERTIES = {"strong": (STRONG,), "periodic": (PERIODIC,), "both": (STRONG, PERIODIC)}
_ORACLES = {STRONG: oracle_strong_detectability, PERIODIC: oracle_periodic_strong_detectability}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="petridetect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="decide detectability of a net file")
    check.add_argument("file", help=f"net file, or {FIXTURE_PREFIX}<name> for a bundled example")
    check.add_argument("--property", choices=sorted(_PROPERTIES), default="both")
    check.add_argument("--emit-dot", metavar="DIR", help="write net, rg, verifier and brg DOT files")
    check.add_argument("--oracle", action="store_true", help="cross-check with the observer oracle")
    check.add_argument("--json", action="store_true", help="print a JSON report")
    check.add_argument("--node-budget", type=int, metavar="N")
    check.add_argument("--cycle-budget", type=int, metavar="N")
    check.add_argument("--xm-semantics", choices=[XM_PER_CYCLE, XM_LITERAL], default=XM_PER_CYCLE)
    check.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")

    sub.add_parser("fixtures", help="list bundled example nets")
    return parser


def _load(source: str):
    if source.startswith(FIXTURE_PREFIX):
        name = source[len(FIXTURE_PREFIX):]
        if name not in FIXTURES:
            raise FileNotFoundError(f"no bundled fixture {name!r}")
        return parse_net(fixture_text(name))
    return parse_net(Path(source).read_text(encoding="utf-8"))


def _write_dot(directory: str, lpn, vn, brg, node_budget) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / "net.dot").write_text(emit_dot(lpn), encoding="utf-8")
    (out / "verifier.dot").write_text(emit_dot(vn), encoding="utf-8")
    (out / "brg.dot").write_text(emit_dot(brg), encoding="utf-8")
    try:
        rg = reachability_graph(lpn, node_budget)
    except BudgetExceededError:
        return
    (out / "rg.dot").write_text(emit_dot(rg, lpn), encoding="utf-8")


def _text_report(name: str, reports) -> str:
    lines = [f"net: {name}"]
    for r in reports:
        lines.append(f"{r.property}: {'holds' if r.verdict else 'fails'}")
        if r.witness is not None:
            w = r.witness
            lines.append(f"  cycle: {' '.join(x.name for x in w.cycle.states)} ({''.join(w.cycle.labels)})")
            lines.append(f"  word:  {' '.join(w.word) or '(empty)'}")
            lines.append(f"  state: {w.state.name}")
        if "oracle" in r.stats:
            lines.append(f"  oracle: {'holds' if r.stats['oracle'] else 'fails'}")
        for msg in r.warnings:
            lines.append(f"  warning: {msg}")
    s = reports[0].stats
    lines.append(
        f"stats: brg {s['brg_states']} states / {s['brg_edges']} edges, "
        f"vn-rg {s.get('vn_rg_nodes')} nodes, rg {s.get('rg_nodes')} nodes"
    )
    return "\n".join(lines) + "\n"


def _run_check(args) -> int:
    try:
        lpn = _load(args.file)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"petridetect: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"petridetect: {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    t0 = time.perf_counter()
    try:
        vn, brg, reports = check_lpn(
            lpn,
            _PROPERTIES[args.property],
            xm_semantics=args.xm_semantics,
            node_budget=args.node_budget,
            cycle_budget=args.cycle_budget,
        )
    except (InapplicableAssumptionsError, BudgetExceededError, UnsupportedStructureError) as exc:
        if args.json:
            sys.stdout.write(report_json({"net": args.file, "error": str(exc), "reports": []}))
        else:
            print(f"petridetect: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    elapsed = time.perf_counter() - t0

    if args.oracle:
        for r in reports:
            r.stats["oracle"] = _ORACLES[r.property](lpn, args.node_budget)
            if r.stats["oracle"] != r.verdict:
                r.warnings.append("oracle disagrees with the BRG verdict")
    if args.timings:
        for r in reports:
            r.stats["seconds"] = round(elapsed, 6)
    if args.emit_dot:
        _write_dot(args.emit_dot, lpn, vn, brg, args.node_budget)

    if args.json:
        sys.stdout.write(report_json({"net": args.file, "reports": [r.to_dict() for r in reports]}))
    else:
        sys.stdout.write(_text_report(args.file, reports))
    return EXIT_HOLDS if all(r.verdict for r in reports) else EXIT_FAILS


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.command == "fixtures":
        print("\n".join(FIXTURES))
        return EXIT_HOLDS
    for flag in ("node_budget", "cycle_budget"):
        value = getattr(args, flag)
        if value is not None and value < 1:
            print(f"petridetect: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_USAGE
    return _run_check(args)


if __name__ == "__main__":
    sys.exit(main())
