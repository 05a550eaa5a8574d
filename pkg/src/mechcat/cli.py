"""Command-line entry point: ``mechcat enumerate | analyze | verify-tables``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from mechcat.canon import canonical_form
from mechcat.catalog import to_dot, write_class_table, write_records
from mechcat.core import classify, encode_matrix, format_matrix, parse_matrix
from mechcat.mobility import effective_dof, idle_spins, kutzbach_dof
from mechcat.pipeline import PipelineConfig, apply_filters, run, summarize
from mechcat.screwcheck import DEFAULT_RANK_TOL, DEFAULT_TRIALS, analyze
from mechcat.tables import PUBLISHED, compare
from mechcat.topology import LinkGraph, cycle_basis


class UsageError(Exception):
    pass


def _links(text: str) -> tuple[int, ...]:
    try:
        links = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad link list {text!r}") from None
    if not links or any(not 3 <= n <= 6 for n in links):
        raise argparse.ArgumentTypeError("links must be in 3..6")
    return links


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _workers(shards: int) -> int:
    # MECHCAT_THREADS, when set, overrides this inside pipeline.run
    return min(shards, os.cpu_count() or 1)


def _add_screw_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=_positive, default=DEFAULT_TRIALS)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mechcat", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate manipulators and write a catalog")
    p.add_argument("--links", type=_links, required=True, help="comma list, e.g. 3,4,5")
    p.add_argument("--dof", type=_positive, required=True)
    p.add_argument("--out", help="catalog path (.catalog)")
    p.add_argument("--summary", help="class table path (.csv)")
    p.add_argument("--dof-mode", choices=("kutzbach", "numeric"), default="kutzbach")
    p.add_argument("--shards", type=_positive, default=1)
    _add_screw_flags(p)

    p = sub.add_parser("analyze", help="full criterion trace for one matrix")
    p.add_argument("matrix", help='row text, e.g. "L1 R O; R L2 R; O R L3"')
    p.add_argument("--dof", type=_positive, default=1)
    p.add_argument("--dot", action="store_true", help="also print the DOT graph")
    _add_screw_flags(p)

    p = sub.add_parser("verify-tables", help="reproduce the published class tables")
    p.add_argument("--only", action="append", choices=[t.name for t in PUBLISHED])
    p.add_argument("--shards", type=_positive, default=1)
    return parser


def cmd_enumerate(args) -> int:
    cfg = PipelineConfig(
        links=args.links,
        target_dof=args.dof,
        dof_mode=args.dof_mode,
        trials=args.trials,
        rank_tol=args.rank_tol,
        shards=args.shards,
        workers=_workers(args.shards),
    )
    entries, stats = run(cfg)
    if args.out:
        write_records(entries, args.out)
    summary = summarize(entries)
    if args.summary:
        write_class_table(summary, args.summary)
    for line in stats.lines():
        print(line)
    for label, count in summary:
        print(f"  {label}: {count}")
    return 0


def cmd_analyze(args) -> int:
    try:
        m = parse_matrix(args.matrix)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = PipelineConfig(links=(m.n,), target_dof=args.dof, trials=args.trials,
                         rank_tol=args.rank_tol)
    index = encode_matrix(m)
    trace = apply_filters(m, cfg, index, full=True)
    for crit, ok in trace.verdicts:
        print(f"{crit:>18}: {'PASS' if ok else 'FAIL'}")
    g = LinkGraph.from_matrix(m)
    basis = cycle_basis(g)
    mob = analyze(g, basis, index, args.trials, args.rank_tol)
    print(f"kutzbach: {kutzbach_dof(g)}, numeric: {mob.numeric_dof}")
    print(f"idle spins: {idle_spins(g)}, effective dof: {effective_dof(g)}")
    if trace.verdicts and dict(trace.verdicts).get("path-coverage", True):
        print(f"ee twist rank: {mob.ee_rank}")
    else:
        print("ee twist rank: n/a (base and end-effector disconnected)")
    print(f"class: {classify(m).label}")
    print(f"canonical: {format_matrix(canonical_form(m))}")
    print(f"verdict: {'ACCEPT' if trace.accepted else 'REJECT (' + trace.first_failure + ')'}")
    if args.dot:
        print(to_dot(m), end="")
    return 0


def cmd_verify_tables(args) -> int:
    ok = True
    for table in PUBLISHED:
        if args.only and table.name not in args.only:
            continue
        cfg = PipelineConfig(links=table.links, target_dof=table.dof, shards=args.shards,
                             workers=_workers(args.shards))
        entries, _ = run(cfg)
        check = compare(table, summarize(entries))
        print(f"{table.name} (links {','.join(map(str, table.links))}, dof {table.dof}): "
              f"{'MATCH' if check.ok else 'MISMATCH'}")
        for line in check.diff_lines():
            print(line)
        for problem in check.problems:
            print(f"  ! {problem}")
        ok &= check.ok
    return 0 if ok else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "verify-tables": cmd_verify_tables,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mechcat: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mechcat: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
