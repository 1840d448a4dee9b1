"""CLI for feasimap - Bayesian search for feasible spaces of expensive constraints."""

import argparse
import dataclasses
import os
import platform
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .acquisition import AcquisitionKind
from .adapters.model_codec import save_surrogate
from .campaign.grid import emit_grid, regular_fit, write_grid
from .campaign.models import RunKey
from .campaign.report import compare, render_report
from .campaign.runner import execute_run, run_campaign
from .problems import binomial_standard_error, get_problem, monte_carlo_rho
from .runtime import build_runtime, configure_logging
from .search import LHS_ONLY

EXIT_ABORTED_RUNS = 2


def _csv_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _method_name(value: str) -> str:
    return LHS_ONLY if value == LHS_ONLY else AcquisitionKind.parse(value).value


def cmd_version(args: argparse.Namespace, rt: Any = None) -> int:
    """Print version information."""
    py_version = f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"
    plat = platform.system().lower()
    commit = os.environ.get("GIT_SHA", "unknown")
    print(f"feasimap {__version__} (python {py_version} / platform {plat} / commit {commit})")
    return 0


def cmd_run(args: argparse.Namespace, rt: Any) -> int:
    """Run (or resume) a full campaign."""
    overrides: dict[str, Any] = {}
    if args.problems:
        overrides["problems"] = _csv_list(args.problems)
    if args.methods:
        overrides["methods"] = [_method_name(m) for m in _csv_list(args.methods)]
    if args.reps is not None:
        overrides["reps"] = args.reps
    if args.master_seed is not None:
        overrides["master_seed"] = args.master_seed
    cfg = dataclasses.replace(rt.config, **overrides)
    cfg.validate()

    outcome = run_campaign(cfg)
    if not args.quiet:
        print(f"Runs executed: {outcome.executed}")
        print(f"Runs skipped (already finished): {outcome.skipped}")
        print(f"Runs aborted: {len(outcome.aborted)}")
        print(f"Summary: {rt.store.summary_path}")
    return EXIT_ABORTED_RUNS if outcome.aborted else 0


def cmd_search(args: argparse.Namespace, rt: Any) -> int:
    """Run a single (problem, method, rep) and store its artifacts."""
    cfg = rt.config
    if args.master_seed is not None:
        cfg = dataclasses.replace(cfg, master_seed=args.master_seed)
    key = RunKey(get_problem(args.problem).id, _method_name(args.method), args.rep)
    record = execute_run(cfg, key, rt.store.root)

    if not args.quiet:
        print(f"{key.label}: {record.status}")
        if record.diagnostic:
            print(f"Diagnostic: {record.diagnostic}")
        print(f"Evaluations: {record.evaluations}")
        print(f"Informedness: {record.informedness:.6f}")
        print(f"Trace: {rt.store.trace_path(key.problem, key.method, key.rep)}")
    return EXIT_ABORTED_RUNS if record.status == "aborted" else 0


def cmd_grid(args: argparse.Namespace, rt: Any) -> int:
    """Write predictions of a stored model over a regular grid."""
    out = args.grid_file or rt.store.root / f"grid-{args.problem}.csv"
    rows = emit_grid(args.problem, args.model, args.resolution, out)
    if not args.quiet:
        print(f"Wrote {rows} rows to {out}")
    return 0


def cmd_compare(args: argparse.Namespace, rt: Any) -> int:
    """Rank methods per problem from a campaign directory."""
    methods = [_method_name(m) for m in _csv_list(args.methods)] if args.methods else None
    report = compare(args.dir, methods=methods, alpha=args.alpha)
    print(render_report(report))
    if not args.quiet:
        print(f"\nWrote {args.dir / 'report.csv'}")
    return 0


def cmd_rho(args: argparse.Namespace, rt: Any) -> int:
    """Monte Carlo estimate of the feasible volume percentage."""
    spec = get_problem(args.problem)
    rho = monte_carlo_rho(spec, args.samples, args.seed)
    se = binomial_standard_error(rho, args.samples)
    z = (rho - spec.reference_rho) / se if se > 0 else 0.0
    print(
        f"{spec.id}: rho = {rho:.4f} % (se {se:.4f}); "
        f"reference {spec.reference_rho:.4f} %, z = {z:+.2f}"
    )
    return 0


def cmd_demo(args: argparse.Namespace, rt: Any) -> int:
    """Fit the 1-D two-sine problem on evenly spaced samples and emit its grid."""
    spec = get_problem("demo1d")
    surrogate = regular_fit(spec.id, args.samples, args.seed)
    out_dir = rt.store.root / "demo"
    model_path = out_dir / "model.json"
    grid_path = out_dir / "grid.csv"
    save_surrogate(surrogate, model_path)
    write_grid(spec, surrogate, args.resolution, grid_path)
    if not args.quiet:
        print(f"Model: {model_path}")
        print(f"Grid: {grid_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feasimap", description="Feasible-space search with Gaussian process surrogates"
    )
    parser.add_argument("--version", action="store_true", help="Show version information")
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Path to config file (default: search cwd/feasimap.toml)",
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Output directory (overrides config and FEASIMAP_OUT)",
    )
    parser.add_argument("--workers", type=int, default=None, help="Worker processes")
    parser.add_argument("-q", "--quiet", action="store_true", help="Minimize output")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    subparsers = parser.add_subparsers(dest="cmd", required=False)

    # run command
    parser_run = subparsers.add_parser("run", help="Run or resume a campaign")
    parser_run.add_argument("config_file", nargs="?", type=Path, help="Campaign TOML file")
    parser_run.add_argument("--problems", help="Comma-separated problem ids")
    parser_run.add_argument("--methods", help="Comma-separated methods")
    parser_run.add_argument("--reps", type=int, default=None, help="Repetitions per cell")
    parser_run.add_argument("--master-seed", dest="master_seed", type=int, default=None)

    # search command
    parser_search = subparsers.add_parser("search", help="Run a single search")
    parser_search.add_argument("problem", help="Problem id")
    parser_search.add_argument("method", help="Acquisition or lhs-only")
    parser_search.add_argument("--rep", type=int, default=0, help="Repetition index")
    parser_search.add_argument("--master-seed", dest="master_seed", type=int, default=None)

    # grid command
    parser_grid = subparsers.add_parser("grid", help="Emit a prediction grid (n <= 2)")
    parser_grid.add_argument("problem", help="Problem id (demo1d or g24)")
    parser_grid.add_argument("model", type=Path, help="Model JSON file")
    parser_grid.add_argument("resolution", type=int, help="Points per axis")
    parser_grid.add_argument(
        "--file", dest="grid_file", type=Path, default=None, help="Output CSV path"
    )

    # compare command
    parser_compare = subparsers.add_parser("compare", help="Best/equivalent method report")
    parser_compare.add_argument("dir", type=Path, help="Campaign output directory")
    parser_compare.add_argument("--methods", help="Comma-separated methods that must be present")
    parser_compare.add_argument("--alpha", type=float, default=0.05, help="Family-wise alpha")

    # rho command
    parser_rho = subparsers.add_parser("rho", help="Monte Carlo feasible volume")
    parser_rho.add_argument("problem", help="Problem id")
    parser_rho.add_argument("samples", type=int, help="Uniform samples (>= 10000)")
    parser_rho.add_argument("--seed", type=int, default=0)

    # demo command
    parser_demo = subparsers.add_parser("demo", help="Regular-interval fit of the 1-D demo")
    parser_demo.add_argument("--samples", type=int, default=8, help="Evenly spaced samples")
    parser_demo.add_argument("--resolution", type=int, default=200, help="Grid points")
    parser_demo.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: list[str] | None = None) -> None:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Handle --version flag (doesn't require runtime)
    if args.version:
        sys.exit(cmd_version(args))

    if not args.cmd:
        parser.print_help()
        sys.exit(1)

    configure_logging(-1 if args.quiet else 1 if args.verbose else 0)

    handlers = {
        "run": cmd_run,
        "search": cmd_search,
        "grid": cmd_grid,
        "compare": cmd_compare,
        "rho": cmd_rho,
        "demo": cmd_demo,
    }
    handler = handlers[args.cmd]

    try:
        rt = build_runtime(
            config_path=getattr(args, "config_file", None) or args.config,
            output_dir=args.out,
            workers=args.workers,
        )
        exit_code = handler(args, rt)
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(1)
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
