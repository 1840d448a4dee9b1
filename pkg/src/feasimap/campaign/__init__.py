"""Campaign orchestration: runs, persistence, reports and plotting grids."""

from .grid import emit_grid, regular_fit
from .models import RunKey, RunRecord
from .report import build_report, compare, render_report
from .runner import execute_run, run_campaign

__all__ = [
    "RunKey",
    "RunRecord",
    "build_report",
    "compare",
    "emit_grid",
    "execute_run",
    "regular_fit",
    "render_report",
    "run_campaign",
]
