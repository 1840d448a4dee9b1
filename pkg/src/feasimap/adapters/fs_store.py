from pathlib import Path
from typing import Any

import yaml


def atomic_write_text(path: Path, contents: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    tmp_path.write_text(contents, encoding="utf-8")
    tmp_path.replace(path)


def save_yaml(data: dict[str, Any], path: Path) -> None:
    atomic_write_text(path, yaml.safe_dump(data, sort_keys=False, allow_unicode=True))


def load_yaml(path: Path) -> dict[str, Any]:
    loaded = yaml.safe_load(path.read_text(encoding="utf-8"))
    return loaded if isinstance(loaded, dict) else {}


class CampaignStore:
    """
    On-disk layout of a campaign:

        <root>/manifest.json
        <root>/summary.csv, informedness.csv, report.csv
        <root>/runs/<problem>/<method>/rep-XX/{trace.csv, model.json, run.yaml}
    """

    def __init__(self, root: Path):
        self.root = root

    def run_dir(self, problem: str, method: str, rep: int) -> Path:
        return self.root / "runs" / problem / method / f"rep-{rep:02d}"

    def trace_path(self, problem: str, method: str, rep: int) -> Path:
        return self.run_dir(problem, method, rep) / "trace.csv"

    def model_path(self, problem: str, method: str, rep: int) -> Path:
        return self.run_dir(problem, method, rep) / "model.json"

    def record_path(self, problem: str, method: str, rep: int) -> Path:
        return self.run_dir(problem, method, rep) / "run.yaml"

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    @property
    def summary_path(self) -> Path:
        return self.root / "summary.csv"

    @property
    def informedness_path(self) -> Path:
        return self.root / "informedness.csv"

    @property
    def report_path(self) -> Path:
        return self.root / "report.csv"

    def list_traces(self) -> list[Path]:
        runs = self.root / "runs"
        if not runs.exists():
            return []
        return sorted(runs.glob("*/*/rep-*/trace.csv"))
