"""Summary tables and the best/equivalent method report."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from ..adapters.fs_store import CampaignStore
from ..adapters.tables import fmt, read_rows, write_rows
from ..errors import InputError
from ..evaluation import beaten_by, best_and_equivalents, median_mad
from .models import InformednessRow, ReportRow, SummaryRow

logger = logging.getLogger(__name__)

INFORMEDNESS_HEADER = ["problem", "method", "rep", "status", "informedness"]
SUMMARY_HEADER = [
    "problem",
    "method",
    "median_informedness",
    "mad",
    "n_runs",
    "n_aborted",
    "p_vs_best",
    "equivalent_to_best",
]
REPORT_HEADER = ["problem", "method", "median", "mad", "flag", "beaten_by", "p_value"]


def _num(value: float | None) -> str:
    if value is None or math.isnan(value):
        return ""
    return fmt(value)


def _parse(text: str) -> float:
    return float(text) if text else math.nan


def save_informedness(rows: Sequence[InformednessRow], path: Path) -> None:
    write_rows(
        path,
        INFORMEDNESS_HEADER,
        ([r.problem, r.method, r.rep, r.status, _num(r.informedness)] for r in rows),
    )


def load_informedness(path: Path) -> list[InformednessRow]:
    try:
        return [
            InformednessRow(
                problem=rec["problem"],
                method=rec["method"],
                rep=int(rec["rep"]),
                status=rec["status"],
                informedness=_parse(rec["informedness"]),
            )
            for rec in read_rows(path)
        ]
    except KeyError as exc:
        raise InputError(f"{path} is missing column {exc}") from None


def _per_problem(
    rows: Sequence[InformednessRow],
) -> dict[str, dict[str, dict[int, float]]]:
    table: dict[str, dict[str, dict[int, float]]] = {}
    for row in rows:
        table.setdefault(row.problem, {}).setdefault(row.method, {})[row.rep] = row.informedness
    return table


def _aligned(
    by_method: dict[str, dict[int, float]], methods: Sequence[str]
) -> dict[str, np.ndarray]:
    """Scores per method over the union of reps; a rep a method lacks is NaN."""
    reps = sorted({rep for m in methods for rep in by_method[m]})
    return {m: np.array([by_method[m].get(rep, math.nan) for rep in reps]) for m in methods}


def summarise(rows: Sequence[InformednessRow], alpha: float = 0.05) -> list[SummaryRow]:
    """
    One row per (problem, method), in first-seen order; NaN scores are excluded.

    Each problem's methods are ranked with ``best_and_equivalents`` at ``alpha``.
    """
    groups: dict[tuple[str, str], list[InformednessRow]] = {}
    for row in rows:
        groups.setdefault((row.problem, row.method), []).append(row)

    rankings = {}
    for problem, by_method in _per_problem(rows).items():
        values = _aligned(by_method, list(by_method))
        if any(np.isfinite(v).any() for v in values.values()):
            rankings[problem] = best_and_equivalents(values, alpha)

    summary = []
    for (problem, method), members in groups.items():
        values = [r.informedness for r in members if not math.isnan(r.informedness)]
        excluded = len(members) - len(values)
        if excluded:
            logger.warning(
                "%s/%s: %d of %d reps have undefined informedness and are excluded",
                problem,
                method,
                excluded,
                len(members),
            )
        median, mad = median_mad(values) if values else (math.nan, math.nan)
        ranking = rankings.get(problem)
        p_value: float | None = None
        equivalent = False
        if ranking is not None:
            if method == ranking.best:
                equivalent = True
            else:
                p_value = ranking.results[method].p_value
                equivalent = method in ranking.equivalent
        summary.append(
            SummaryRow(
                problem=problem,
                method=method,
                median_informedness=median,
                mad=mad,
                n_runs=len(members),
                n_aborted=sum(r.status == "aborted" for r in members),
                p_vs_best=p_value,
                equivalent_to_best=equivalent,
            )
        )
    return summary


def save_summary(rows: Sequence[SummaryRow], path: Path) -> None:
    write_rows(
        path,
        SUMMARY_HEADER,
        (
            [
                r.problem,
                r.method,
                _num(r.median_informedness),
                _num(r.mad),
                r.n_runs,
                r.n_aborted,
                _num(r.p_vs_best),
                "true" if r.equivalent_to_best else "false",
            ]
            for r in rows
        ),
    )


def load_summary(path: Path) -> list[SummaryRow]:
    try:
        return [
            SummaryRow(
                problem=rec["problem"],
                method=rec["method"],
                median_informedness=_parse(rec["median_informedness"]),
                mad=_parse(rec["mad"]),
                n_runs=int(rec["n_runs"]),
                n_aborted=int(rec["n_aborted"]),
                p_vs_best=float(rec["p_vs_best"]) if rec["p_vs_best"] else None,
                equivalent_to_best=rec["equivalent_to_best"] == "true",
            )
            for rec in read_rows(path)
        ]
    except KeyError as exc:
        raise InputError(f"{path} is missing column {exc}") from None


def build_report(
    rows: Sequence[InformednessRow],
    methods: Sequence[str] | None = None,
    alpha: float = 0.05,
) -> list[ReportRow]:
    """
    Rank methods per problem.

    Every problem must carry every method (``methods`` or, by default, the union
    seen in ``rows``); a missing method raises InputError. Scores are aligned by
    rep so paired tests compare matched initial designs.
    """
    table = _per_problem(rows)
    if not table:
        raise InputError("No informedness rows to compare")
    wanted = list(methods) if methods else list(dict.fromkeys(r.method for r in rows))

    report = []
    for problem, by_method in table.items():
        missing = [m for m in wanted if m not in by_method]
        if missing:
            raise InputError(f"Problem {problem} is missing method(s): {', '.join(missing)}")
        values = _aligned(by_method, wanted)
        ranking = best_and_equivalents(values, alpha)
        beaten = beaten_by(values, alpha)
        for method in wanted:
            finite = values[method][np.isfinite(values[method])]
            median, mad = median_mad(finite) if finite.size else (math.nan, math.nan)
            if method == ranking.best:
                flag, p_value = "best", None
            else:
                flag = "equivalent" if method in ranking.equivalent else ""
                p_value = ranking.results[method].p_value
            report.append(
                ReportRow(problem, method, median, mad, flag, beaten[method], p_value)
            )
    return report


def save_report(rows: Sequence[ReportRow], path: Path) -> None:
    write_rows(
        path,
        REPORT_HEADER,
        (
            [r.problem, r.method, _num(r.median), _num(r.mad), r.flag, r.beaten_by, _num(r.p_value)]
            for r in rows
        ),
    )


def render_report(rows: Sequence[ReportRow]) -> str:
    """
    Problems as rows, methods as columns, ``median (MAD)`` per cell.

    ``*`` marks the best median, ``=`` a method not significantly worse than it;
    the bracketed number counts the methods that beat the cell significantly.
    """
    methods = list(dict.fromkeys(r.method for r in rows))
    problems = list(dict.fromkeys(r.problem for r in rows))
    cells = {(r.problem, r.method): r for r in rows}

    def cell(row: ReportRow | None) -> str:
        if row is None:
            return "-"
        if math.isnan(row.median):
            return "n/a"
        mark = {"best": "*", "equivalent": "="}.get(row.flag, " ")
        return f"{row.median:.4f} ({row.mad:.1e}){mark}[{row.beaten_by}]"

    grid = [["problem"] + methods]
    grid += [[p] + [cell(cells.get((p, m))) for m in methods] for p in problems]
    widths = [max(len(line[i]) for line in grid) for i in range(len(grid[0]))]
    return "\n".join(
        "  ".join(text.ljust(width) for text, width in zip(line, widths)).rstrip()
        for line in grid
    )


def compare(
    root: Path, methods: Sequence[str] | None = None, alpha: float = 0.05
) -> list[ReportRow]:
    """Read ``informedness.csv`` under ``root``, write ``report.csv`` next to it."""
    store = CampaignStore(root)
    rows = load_informedness(store.informedness_path)
    report = build_report(rows, methods, alpha)
    save_report(report, store.report_path)
    logger.info("Wrote %s", store.report_path)
    return report
