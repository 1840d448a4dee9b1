"""Data models for campaign bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from ..core.model import ConfusionMatrix, RunStatus


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True, order=True)
class RunKey:
    """One (problem, method, rep) cell of a campaign."""

    problem: str
    method: str
    rep: int

    @property
    def label(self) -> str:
        return f"{self.problem}/{self.method}/rep-{self.rep:02d}"


@dataclass
class RunRecord:
    """Outcome of a single run, stored as run.yaml next to its trace."""

    key: RunKey
    status: RunStatus = "completed"
    diagnostic: str | None = None
    confusion: ConfusionMatrix | None = None
    informedness: float = math.nan
    evaluations: int = 0
    wallclock: float = 0.0
    search_seconds: float = 0.0
    model: str | None = None
    config_echo: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        cm = self.confusion
        return {
            "problem": self.key.problem,
            "method": self.key.method,
            "rep": self.key.rep,
            "status": self.status,
            "diagnostic": self.diagnostic,
            "confusion": None
            if cm is None
            else {"tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn},
            # YAML has no portable NaN
            "informedness": None if math.isnan(self.informedness) else self.informedness,
            "evaluations": self.evaluations,
            "wallclock_seconds": round(self.wallclock, 3),
            "search_seconds": round(self.search_seconds, 3),
            "model": self.model,
            "config": self.config_echo,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunRecord:
        cm = data.get("confusion")
        informedness = data.get("informedness")
        return cls(
            key=RunKey(str(data["problem"]), str(data["method"]), int(data["rep"])),
            status="aborted" if data.get("status") == "aborted" else "completed",
            diagnostic=data.get("diagnostic"),
            confusion=None if cm is None else ConfusionMatrix(**{k: int(cm[k]) for k in cm}),
            informedness=math.nan if informedness is None else float(informedness),
            evaluations=int(data.get("evaluations", 0)),
            wallclock=float(data.get("wallclock_seconds", 0.0)),
            search_seconds=float(data.get("search_seconds", 0.0)),
            model=data.get("model"),
            config_echo=dict(data.get("config") or {}),
        )


@dataclass
class ManifestEntry:
    """A finished run; its presence means the run is never recomputed."""

    problem: str
    method: str
    rep: int
    status: RunStatus = "completed"
    finished_at: str = field(default_factory=_now)

    @property
    def key(self) -> RunKey:
        return RunKey(self.problem, self.method, self.rep)


@dataclass
class CampaignManifest:
    """Append-only list of finished runs, written by the scheduling process only."""

    version: int = 1
    created_at: str = field(default_factory=_now)
    master_seed: int = 0
    entries: list[ManifestEntry] = field(default_factory=list)

    def finished(self) -> set[RunKey]:
        return {entry.key for entry in self.entries}

    def record(self, key: RunKey, status: RunStatus) -> None:
        self.entries = [e for e in self.entries if e.key != key]
        self.entries.append(ManifestEntry(key.problem, key.method, key.rep, status))


@dataclass(frozen=True)
class InformednessRow:
    """Long-format per-rep score, the input of ``compare``."""

    problem: str
    method: str
    rep: int
    status: str
    informedness: float


@dataclass(frozen=True)
class SummaryRow:
    """
    Median and MAD of informedness over the finite reps of one (problem, method).

    ``p_vs_best`` is the one-sided p-value of the best method beating this one;
    None on the best row itself, which counts as equivalent to itself.
    """

    problem: str
    method: str
    median_informedness: float
    mad: float
    n_runs: int
    n_aborted: int
    p_vs_best: float | None = None
    equivalent_to_best: bool = False


@dataclass(frozen=True)
class ReportRow:
    problem: str
    method: str
    median: float
    mad: float
    flag: str  # "best" | "equivalent" | ""
    beaten_by: int
    p_value: float | None = None
