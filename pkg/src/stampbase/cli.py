"""Command-line front end: ranges, predicate checks, enumeration, tables.

Exit codes follow one convention everywhere: 0 for success (and for
predicates that hold), 1 for a requested predicate that is false, 2 for
usage, parse or precondition problems, 3 for an exceeded node budget.
Table output is assembled in full before anything is written, so a budget
abort never leaves a partial table behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .basis import Basis, BasisError, PreconditionError, basis_range, is_p_basis
from .extension import is_extensible, periodic_scan, stohr_sequence
from .optimize import best_segments, maximal_symmetricisable, range_table
from .search import (
    BudgetExceededError,
    classify,
    enumerate_p_bases,
    maxima_record,
    range_comparison_stats,
    run_enumeration,
    tail_distribution,
)
from .symmetric import is_symmetricisable, is_symmetricisable_plus

DEFAULT_P_MAX = 14
DEFAULT_K_MAX = 40


@dataclass(frozen=True)
class RunConfig:
    threads: int = 1
    node_budget: int | None = None
    checkpoint_path: str | None = None
    output_format: str = "csv"
    verify_periods: int = 3


def _threads_default() -> int:
    env = os.environ.get("STAMPBASE_THREADS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _pct(x: float) -> str:
    return f"{x:.1f}"


def cmd_range(args) -> int:
    result = basis_range(Basis.parse(args.basis))
    print(f"n={result.n} admissible={'true' if result.admissible else 'false'}")
    return 0


def cmd_check(args) -> int:
    basis = Basis.parse(args.basis)
    p = args.p
    if not (args.p_basis or args.extensible or args.symmetricisable or args.profile):
        print("error: nothing to check; pass at least one predicate flag",
              file=sys.stderr)
        return 2
    report: dict = {"basis": list(basis.elements), "p": p}
    predicates = []
    if args.p_basis:
        verdict = is_p_basis(basis, p)
        report["p_basis"] = verdict
        predicates.append(verdict)
    if args.extensible:
        ext = is_extensible(basis, p)
        report["extension"] = ext.to_json_dict()
        predicates.append(ext.extensible)
    if args.symmetricisable or args.profile:
        # a p-element basis is treated as a p-basis plus one free element
        if basis.k == p:
            sym = is_symmetricisable_plus(basis, p)
        else:
            sym = is_symmetricisable(basis, p)
        report["symmetricisability"] = sym.to_json_dict()
        if args.symmetricisable:
            predicates.append(sym.symmetricisable)
    print(json.dumps(report))
    return 0 if all(predicates) else 1


def cmd_enumerate(args) -> int:
    summary = run_enumeration(
        p=args.p,
        mode=args.mode,
        classify_records=args.classify,
        out_path=args.out,
        out_stream=sys.stdout,
        checkpoint_path=args.checkpoint,
        resume=args.resume,
        checkpoint_every=args.checkpoint_every,
        threads=args.threads,
        node_budget=args.node_budget,
    )
    print(json.dumps(summary))
    return 0


def _table_census(p_max, k_max, threads, budget):
    rows, prev = [], None
    for p in range(3, p_max + 1):
        n_p = enumerate_p_bases(p, node_budget=budget)
        ratio = "" if prev is None else f"{n_p / prev:.2f}"
        rows.append([p, n_p, ratio])
        prev = n_p
    return ["p", "n_p", "ratio"], rows


def _table_comparison(p_max, k_max, threads, budget):
    rows = []
    for p in range(3, p_max + 1):
        st = range_comparison_stats(p, node_budget=budget)
        total = st.below + st.equal + st.above
        rows.append([
            p,
            st.below, _pct(100 * st.below / total),
            st.equal, _pct(100 * st.equal / total),
            st.above, _pct(100 * st.above / total),
        ])
    return (
        ["p", "below", "below_pct", "equal", "equal_pct", "above", "above_pct"],
        rows,
    )


def _table_classification(p_max, k_max, threads, budget):
    rows = []
    for p in range(5, p_max + 1):
        st = classify(p, threads=threads, node_budget=budget)
        rows.append([p, st.n_p, st.n_e, st.n_s, _pct(st.pct_e), _pct(st.pct_s)])
    return ["p", "n_p", "n_e", "n_s", "pct_e", "pct_s"], rows


def _maxima_rows(p_max, mode, budget):
    rows = []
    for p in range(5, p_max + 1):
        mset = maximal_symmetricisable(p, mode, node_budget=budget)
        for basis in mset.bases:
            rows.append([p, mset.tail, " ".join(map(str, basis.elements))])
    return ["p", "tail", "basis"], rows


def _table_maximal_plain(p_max, k_max, threads, budget):
    return _maxima_rows(p_max, "plain", budget)


def _table_maximal_plus(p_max, k_max, threads, budget):
    return _maxima_rows(p_max, "plus", budget)


def _build_range_table(p_max, k_max, mode, budget):
    ps = list(range(5, p_max + 1))
    return range_table(ps, k_max, mode=mode, node_budget=budget)


def _range_rows(table):
    header = ["k", "p", "range"]
    rows = [
        [k, p, table.entries[(k, p)]]
        for (k, p) in sorted(table.entries)
    ]
    return header, rows


def _range_rows_wide(table):
    ps = table.ps()
    header = ["k"] + [str(p) for p in ps]
    rows = []
    for k in table.ks():
        rows.append([k] + [table.entries.get((k, p), "") for p in ps])
    return header, rows


def _segment_rows(table):
    seg = best_segments(table)
    return ["k_min", "k_max", "range", "p"], [list(row) for row in seg.rows]


def _table_distribution(p_max, k_max, threads, budget):
    dist = tail_distribution(p_max, node_budget=budget)
    return ["tail", "n_p", "n_e", "n_s"], [list(row) for row in dist.rows]


def _table_maxima(p_max, k_max, threads, budget):
    rows = []
    for p in range(5, p_max + 1):
        rec = maxima_record(p, node_budget=budget)
        rows.append([p, rec.v1, rec.v2,
                     f"{rec.ratio_v1:.2f}", f"{rec.ratio_v2:.2f}"])
    return ["p", "v1", "v2", "v1_over_p", "v2_over_v1"], rows


def _chart_series(p_max, which, budget):
    dist = tail_distribution(p_max, node_budget=budget)
    if which == 12:
        return ["tail", "n_p"], [[t, n_p] for t, n_p, _, _ in dist.rows]
    if which == 13:
        return ["tail", "n_e", "n_s"], [[t, n_e, n_s] for t, _, n_e, n_s in dist.rows]
    if which == 14:
        return ["tail", "pct_e"], [
            [t, _pct(100 * n_e / n_p if n_p else 0.0)]
            for t, n_p, n_e, _ in dist.rows
        ]
    return ["tail", "pct_s"], [
        [t, _pct(100 * n_s / n_e if n_e else 0.0)]
        for t, _, n_e, n_s in dist.rows
    ]


def cmd_tables(args) -> int:
    which = args.which
    p_max, k_max = args.p_max, args.k_max
    threads, budget = args.threads, args.node_budget
    if args.format == "wide" and which not in (5, 8):
        print("error: wide format applies to the range tables (5 and 8) only",
              file=sys.stderr)
        return 2
    if which in (5, 6):
        table = _build_range_table(p_max, k_max, "plain", budget)
        if which == 5:
            header, rows = (
                _range_rows_wide(table) if args.format == "wide"
                else _range_rows(table)
            )
        else:
            header, rows = _segment_rows(table)
    elif which in (8, 9):
        table = _build_range_table(p_max, k_max, "plus", budget)
        if which == 8:
            header, rows = (
                _range_rows_wide(table) if args.format == "wide"
                else _range_rows(table)
            )
        else:
            header, rows = _segment_rows(table)
    elif which in (12, 13, 14, 15):
        header, rows = _chart_series(p_max, which, budget)
    else:
        builder = {
            1: _table_census,
            2: _table_comparison,
            3: _table_classification,
            4: _table_maximal_plain,
            7: _table_maximal_plus,
            10: _table_distribution,
            11: _table_maxima,
        }[which]
        header, rows = builder(p_max, k_max, threads, budget)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stohr(args) -> int:
    basis = Basis.parse(args.basis)
    if args.scan_period:
        report = periodic_scan(basis, args.max_terms, args.verify_periods)
        if report is None:
            print("null")
            return 1
        print(json.dumps(report.to_json_dict()))
        return 0
    seq = stohr_sequence(basis, args.count)
    if seq.terms:
        print(",".join(map(str, seq.terms)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stampbase",
        description="2-stamp additive bases: ranges, p-bases, extremal tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_range = sub.add_parser("range", help="range and admissibility of a basis")
    p_range.add_argument("basis", help="comma-separated elements, e.g. 1,3,4,6,11")
    p_range.set_defaults(func=cmd_range)

    p_check = sub.add_parser("check", help="decision procedures for one basis")
    p_check.add_argument("basis")
    p_check.add_argument("p", type=int)
    p_check.add_argument("--p-basis", action="store_true", dest="p_basis")
    p_check.add_argument("--extensible", action="store_true")
    p_check.add_argument("--symmetricisable", action="store_true")
    p_check.add_argument("--profile", action="store_true",
                         help="include the closure admissibility profile")
    p_check.set_defaults(func=cmd_check)

    p_enum = sub.add_parser("enumerate", help="stream all p-bases as JSONL")
    p_enum.add_argument("p", type=int)
    p_enum.add_argument("--mode", choices=("plain", "plus"), default="plain")
    p_enum.add_argument("--classify", action="store_true",
                        help="attach extensible/symmetricisable flags")
    p_enum.add_argument("--out", help="record file (default: stdout)")
    p_enum.add_argument("--checkpoint", help="checkpoint file for resumable runs")
    p_enum.add_argument("--resume", action="store_true",
                        help="continue from the checkpoint file")
    p_enum.add_argument("--checkpoint-every", type=int, default=5000,
                        dest="checkpoint_every", metavar="NODES")
    p_enum.add_argument("--threads", type=int, default=_threads_default())
    p_enum.add_argument("--node-budget", type=int, default=None,
                        dest="node_budget")
    p_enum.set_defaults(func=cmd_enumerate)

    p_tables = sub.add_parser("tables", help="emit a census or extremal table")
    p_tables.add_argument("which", type=int, choices=range(1, 16),
                          help="table number")
    p_tables.add_argument("--p-max", type=int, default=DEFAULT_P_MAX,
                          dest="p_max")
    p_tables.add_argument("--k-max", type=int, default=DEFAULT_K_MAX,
                          dest="k_max")
    p_tables.add_argument("--format", choices=("csv", "wide"), default="csv")
    p_tables.add_argument("--out")
    p_tables.add_argument("--threads", type=int, default=_threads_default())
    p_tables.add_argument("--node-budget", type=int, default=None,
                          dest="node_budget")
    p_tables.set_defaults(func=cmd_tables)

    p_stohr = sub.add_parser("stohr", help="greedy continuation of a basis")
    p_stohr.add_argument("basis")
    p_stohr.add_argument("--count", type=int, default=10,
                         help="number of greedy terms to print")
    p_stohr.add_argument("--scan-period", action="store_true",
                         dest="scan_period",
                         help="report periodicity of the greedy increments")
    p_stohr.add_argument("--max-terms", type=int, default=200, dest="max_terms")
    p_stohr.add_argument("--verify-periods", type=int, default=3,
                         dest="verify_periods")
    p_stohr.set_defaults(func=cmd_stohr)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BasisError, PreconditionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BudgetExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
