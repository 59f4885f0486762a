"""Command-line front end.

Usage:
    python -m ngspread.cli verify-ng --n 6
    python -m ngspread.cli verify-qspread --n 7 --jobs 4
    python -m ngspread.cli bound-table --n-min 3 --n-max 40 --output csv
    python -m ngspread.cli search-local --mode ng --n 12 --starts 20 --seed 1
    python -m ngspread.cli graphon-check theorem34
    python -m ngspread.cli graphon-check relation --n 10 --samples 100
    python -m ngspread.cli graphon-check cutnorm U.json W.json
    python -m ngspread.cli diag --graph g.g6 --epsilon 0.1

Reports go to stdout, logs and errors to stderr. Exit codes: 0 success, 1 numeric failure,
2 usage error, 3 conjecture disagreement (a finding).
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import structlog

from ngspread.config import settings
from ngspread.core import graphon, search, spectral
from ngspread.core.enumeration import Objective
from ngspread.core.graph import MAX_ORDER
from ngspread.errors import EXIT_FINDING, EXIT_OK, SpectralToolkitError, exit_code_for
from ngspread.logging_config import setup_logging
from ngspread.models import Invocation, OutputFormat, Subcommand
from ngspread.services.graph_io import load_graph, load_step_graphon
from ngspread.services.reporting import render_csv, render_json, report_header

logger = structlog.get_logger(__name__)

RELATION_TOL = 1e-9

# (payload, csv rows, csv columns, exit code)
Outcome = Tuple[Any, List[Dict[str, Any]], Optional[List[str]], int]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--jobs", type=int, default=settings.jobs, help="worker processes for exhaustive scans")
    common.add_argument("--seed", type=int, default=0, help="seed echoed into the report header")
    common.add_argument("--log-level", default=None, help="overrides LOG_LEVEL for this run")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="ngspread",
        description="Nordhaus-Gaddum spectral radius sums and signless Laplacian spread toolkit.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)

    ng = commands.add_parser(Subcommand.VERIFY_NG.value, parents=[common], help="exhaustive NG maximizers")
    ng.add_argument("--n", type=int, required=True)
    ng.add_argument("--full-scan", action="store_true", help="scan every mask instead of half plus complements")
    ng.add_argument("--allow-n8", action="store_true", help="permit n = 8 (2^28 graphs)")

    qs = commands.add_parser(Subcommand.VERIFY_QSPREAD.value, parents=[common], help="exhaustive Q-spread extremes")
    qs.add_argument("--n", type=int, required=True)
    qs.add_argument("--allow-n8", action="store_true")

    table = commands.add_parser(Subcommand.BOUND_TABLE.value, parents=[common], help="closed-form bound table")
    table.add_argument("--n-min", type=int, required=True)
    table.add_argument("--n-max", type=int, required=True)

    local = commands.add_parser(Subcommand.SEARCH_LOCAL.value, parents=[common], help="eigenvector-guided search")
    local.add_argument("--mode", choices=[o.value for o in Objective], required=True)
    local.add_argument("--n", type=int, required=True)
    local.add_argument("--starts", type=int, default=10)
    local.add_argument("--max-steps", type=int, default=1000)
    local.add_argument("--clone", action="store_true", help="also use neighbourhood-clone moves (ng mode)")
    local.add_argument("--traces", action="store_true", help="include every trace in the JSON report")

    check = commands.add_parser(Subcommand.GRAPHON_CHECK.value, help="step-graphon checks")
    checks = check.add_subparsers(dest="check", required=True)
    checks.add_parser("theorem34", parents=[common], help="limit graphon spectrum")
    relation = checks.add_parser("relation", parents=[common], help="lambda_1(G) against n mu(W_G)")
    relation.add_argument("--n", type=int, required=True)
    relation.add_argument("--samples", type=int, default=100)
    cut = checks.add_parser("cutnorm", parents=[common], help="cut norm and cut-distance bound of two graphons")
    cut.add_argument("files", nargs=2, metavar="FILE")
    trend = checks.add_parser("trend", parents=[common], help="cut-distance bounds of CS_{n,n/3} to the limit")
    trend.add_argument("--orders", type=int, nargs="+", default=[6, 12, 24])

    diag = commands.add_parser(Subcommand.DIAG.value, parents=[common], help="eigenvector partition and structural predicates on one graph")
    diag.add_argument("--graph", required=True, metavar="FILE", help="graph6 or JSON edge-list file")
    diag.add_argument("--epsilon", type=float, default=settings.default_epsilon)

    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> Dict[str, Any]:
    """Check every flag against its subcommand and return the typed flag map."""
    if args.jobs < 1:
        parser.error(f"--jobs must be at least 1, got {args.jobs}")
    command = Subcommand(args.subcommand)

    if command in (Subcommand.VERIFY_NG, Subcommand.VERIFY_QSPREAD):
        cap = search.ENUMERATION_MAX_ORDER if args.allow_n8 else min(settings.scan_cap, search.ENUMERATION_MAX_ORDER)
        if not 3 <= args.n <= cap:
            hint = " (use --allow-n8)" if args.n == search.ENUMERATION_MAX_ORDER else ""
            parser.error(f"--n must be in [3, {cap}], got {args.n}{hint}")
        flags: Dict[str, Any] = {"n": args.n, "allow_n8": args.allow_n8}
        if command == Subcommand.VERIFY_NG:
            flags["full_scan"] = args.full_scan
        return flags

    if command == Subcommand.BOUND_TABLE:
        if not 2 <= args.n_min <= MAX_ORDER:
            parser.error(f"--n-min must be in [2, {MAX_ORDER}], got {args.n_min}")
        if not args.n_min <= args.n_max <= MAX_ORDER:
            parser.error(f"--n-max must be in [{args.n_min}, {MAX_ORDER}], got {args.n_max}")
        return {"n_min": args.n_min, "n_max": args.n_max}

    if command == Subcommand.SEARCH_LOCAL:
        low = 3 if args.mode == Objective.QSPREAD.value else 2
        if not low <= args.n <= MAX_ORDER:
            parser.error(f"--n must be in [{low}, {MAX_ORDER}] for mode {args.mode}, got {args.n}")
        if args.starts < 1:
            parser.error(f"--starts must be positive, got {args.starts}")
        if args.max_steps < 0:
            parser.error(f"--max-steps must be non-negative, got {args.max_steps}")
        if args.clone and args.mode != Objective.NG.value:
            parser.error("--clone applies to --mode ng only")
        return {
            "mode": args.mode,
            "n": args.n,
            "starts": args.starts,
            "max_steps": args.max_steps,
            "clone": args.clone,
            "traces": args.traces,
        }

    if command == Subcommand.GRAPHON_CHECK:
        flags = {"check": args.check}
        if args.check == "relation":
            if not 1 <= args.n <= MAX_ORDER:
                parser.error(f"--n must be in [1, {MAX_ORDER}], got {args.n}")
            if args.samples < 1:
                parser.error(f"--samples must be positive, got {args.samples}")
            flags.update(n=args.n, samples=args.samples)
        elif args.check == "cutnorm":
            for name in args.files:
                if not Path(name).is_file():
                    parser.error(f"FILE not found: {name}")
            flags["files"] = list(args.files)
        elif args.check == "trend":
            bad = [n for n in args.orders if n < 3 or n % 3 or n > MAX_ORDER]
            if bad:
                parser.error(f"--orders must be multiples of 3 in [3, {MAX_ORDER}], got {bad}")
            flags["orders"] = list(args.orders)
        return flags

    if not args.epsilon > 0:
        parser.error(f"--epsilon must be positive, got {args.epsilon}")
    if not Path(args.graph).is_file():
        parser.error(f"--graph file not found: {args.graph}")
    return {"graph": args.graph, "epsilon": args.epsilon}


def parse_invocation(argv: Optional[Sequence[str]] = None) -> Invocation:
    """Parse and validate a command line; usage errors exit with status 2."""
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = _validate(parser, args)
    return Invocation(
        subcommand=Subcommand(args.subcommand),
        flags=flags,
        output=OutputFormat(args.output),
        seed=args.seed,
        jobs=args.jobs,
        log_level=args.log_level,
    )


def _verification_rows(label: str, verification) -> List[Dict[str, Any]]:
    result = verification.result
    return [
        {
            "check": label,
            "n": result.n,
            "best_value": result.best_value,
            "expected_value": verification.expected_value,
            "graph6": item.graph6,
            "edges": len(item.edges),
            "holds": verification.holds,
        }
        for item in result.maximizers
    ]


def _run_verify_ng(inv: Invocation) -> Outcome:
    flags = inv.flags
    verification = search.verify_ng(
        flags["n"], full_scan=flags["full_scan"], jobs=inv.jobs, allow_n8=flags["allow_n8"] or None
    )
    code = EXIT_OK if verification.holds else EXIT_FINDING
    return verification, _verification_rows("ng_max", verification), None, code


def _run_verify_qspread(inv: Invocation) -> Outcome:
    flags = inv.flags
    maximum, minimum = search.verify_qspread(flags["n"], jobs=inv.jobs, allow_n8=flags["allow_n8"] or None)
    rows = _verification_rows("qspread_max", maximum) + _verification_rows("qspread_min", minimum)
    code = EXIT_OK if maximum.holds and minimum.holds else EXIT_FINDING
    return {"maximum": maximum, "minimum": minimum}, rows, None, code


def _run_bound_table(inv: Invocation) -> Outcome:
    rows = spectral.bound_table(inv.flags["n_min"], inv.flags["n_max"])
    columns = ["n", "residue", "bound", "omega_star", "p_cs", "gap"]
    return rows, [row.model_dump() for row in rows], columns, EXIT_OK


def _run_search_local(inv: Invocation) -> Outcome:
    flags = inv.flags
    summary = search.search_many(
        flags["n"],
        Objective(flags["mode"]),
        flags["starts"],
        seed=inv.seed,
        max_steps=flags["max_steps"],
        use_clone=flags["clone"],
        keep_traces=flags["traces"],
    )
    rows = [
        {"start": i, "seed": inv.seed + i, "fixpoint_value": value, "steps": steps}
        for i, (value, steps) in enumerate(zip(summary.fixpoint_values, summary.steps))
    ]
    code = EXIT_OK if summary.within_bound else EXIT_FINDING
    return summary, rows, None, code


def _run_graphon_check(inv: Invocation) -> Outcome:
    check = inv.flags["check"]
    if check == "theorem34":
        report = graphon.theorem34_report()
        rows = [{"quantity": "mu", "value": report.mu}, {"quantity": "mu_bar", "value": report.mu_bar}]
        rows += [{"quantity": f"f{i + 1}", "value": x} for i, x in enumerate(report.f)]
        rows += [{"quantity": f"g{i + 1}", "value": x} for i, x in enumerate(report.g)]
        return report, rows, None, EXIT_OK if report.matches else EXIT_FINDING

    if check == "relation":
        rows = graphon.relation_sweep(inv.flags["n"], inv.flags["samples"], seed=inv.seed)
        worst = max(row.gap for row in rows)
        code = EXIT_OK if worst <= RELATION_TOL else EXIT_FINDING
        return rows, [row.model_dump() for row in rows], ["n", "mu", "n_mu", "lambda1", "gap"], code

    if check == "trend":
        trend = graphon.convergence_trend(inv.flags["orders"], jobs=inv.jobs)
        rows = [{"n": n, "delta_cut_upper": d} for n, d in trend]
        decreasing = all(b < a for (_, a), (_, b) in zip(trend, trend[1:]))
        return {"trend": rows, "decreasing": decreasing}, rows, None, EXIT_OK

    u, w = (load_step_graphon(name) for name in inv.flags["files"])
    norm = graphon.cut_norm_result(graphon.common_refinement_diff(u, w), jobs=inv.jobs, seed=inv.seed)
    delta = graphon.delta_cut_upper(u, w, jobs=inv.jobs)
    row = {
        "cut_norm": norm.value,
        "exact": norm.exact,
        "delta_cut_upper": delta.value,
        "identity_fallback": delta.identity_fallback,
        "truncated": delta.truncated,
    }
    return {"cut_norm": norm, "delta_cut": delta}, [row], None, EXIT_OK


def _run_diag(inv: Invocation) -> Outcome:
    g = load_graph(inv.flags["graph"])
    report = spectral.asymptotic_diagnostics(g, inv.flags["epsilon"])
    row: Dict[str, Any] = {
        "n": report.n,
        "edge_count": report.edge_count,
        "q1": report.q1,
        "qn": report.qn,
        "S": report.partition.S,
        "T": report.partition.T,
        "deviation": report.deviation,
    }
    row.update(report.flags)
    return report, [row], None, EXIT_OK


RUNNERS = {
    Subcommand.VERIFY_NG: _run_verify_ng,
    Subcommand.VERIFY_QSPREAD: _run_verify_qspread,
    Subcommand.BOUND_TABLE: _run_bound_table,
    Subcommand.SEARCH_LOCAL: _run_search_local,
    Subcommand.GRAPHON_CHECK: _run_graphon_check,
    Subcommand.DIAG: _run_diag,
}


def execute(inv: Invocation, stdout: Optional[TextIO] = None) -> int:
    """Run the invocation and write its report; nothing is written on an error path."""
    stdout = stdout or sys.stdout
    try:
        payload, rows, columns, code = RUNNERS[inv.subcommand](inv)
    except SpectralToolkitError as e:
        logger.error("Run failed", subcommand=inv.subcommand.value, error=str(e))
        return exit_code_for(e)

    if inv.output == OutputFormat.CSV:
        text = render_csv(rows, columns)
    else:
        text = render_json(report_header(inv), payload)
    stdout.write(text)
    stdout.flush()
    if code == EXIT_FINDING:
        logger.warning("Finding reported", subcommand=inv.subcommand.value)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    inv = parse_invocation(argv)
    setup_logging(level=inv.log_level)
    logger.info("Invocation parsed", subcommand=inv.subcommand.value, seed=inv.seed, jobs=inv.jobs)
    return execute(inv)


if __name__ == "__main__":
    sys.exit(main())
