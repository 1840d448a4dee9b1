"""
Campaign execution: every (problem, method, rep) run, scored and persisted.

Runs are independent and may go to a process pool. Only the scheduling process
touches the manifest; a run listed there is never recomputed.
"""

from __future__ import annotations

import json
import logging
import time
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..adapters.fs_store import CampaignStore, atomic_write_text, load_yaml, save_yaml
from ..adapters.model_codec import save_surrogate
from ..adapters.tables import save_trace_csv
from ..config import CampaignConfig
from ..core.model import ConfusionMatrix
from ..core.utils import derive_seed
from ..evaluation import confusion_matrix, informedness
from ..feasibility import MultiSurrogate, classify
from ..problems import ProblemSpec, get_problem, true_labels
from ..sampling import SamplePlan, uniform_random
from ..search import SearchConfig, run_search
from .models import CampaignManifest, InformednessRow, ManifestEntry, RunKey, RunRecord
from .report import save_informedness, save_summary, summarise

logger = logging.getLogger(__name__)


@dataclass
class CampaignOutcome:
    records: list[RunRecord] = field(default_factory=list)
    executed: int = 0
    skipped: int = 0

    @property
    def aborted(self) -> list[RunRecord]:
        return [r for r in self.records if r.status == "aborted"]


def campaign_keys(cfg: CampaignConfig) -> list[RunKey]:
    return [
        RunKey(problem, method, rep)
        for problem in cfg.problems
        for method in cfg.methods
        for rep in range(cfg.reps)
    ]


def search_config(cfg: CampaignConfig, key: RunKey) -> SearchConfig:
    n = get_problem(key.problem).dimension
    return SearchConfig(
        problem_id=key.problem,
        acquisition=key.method,
        init_samples=max(cfg.search.init_multiplier * n, 2),
        budget=cfg.budget_multiplier * n,
        rep_index=key.rep,
        master_seed=cfg.master_seed,
        acq_eval_multiplier=cfg.acq_eval_multiplier,
        initial_sigma=cfg.optimizer.initial_sigma,
        max_restarts=cfg.optimizer.max_restarts,
        popsize_factor=cfg.optimizer.popsize_factor,
        gp_restarts=cfg.gp.restarts,
        jitter_start=cfg.gp.jitter_start,
        jitter_max=cfg.gp.jitter_max,
        pbe_entropy_floor=cfg.acquisition.pbe_entropy_floor,
        pbe_positive_entropy=cfg.acquisition.pbe_positive_entropy,
        duplicate_tolerance=cfg.search.duplicate_tolerance,
    )


def validation_set(spec: ProblemSpec, samples: int, master_seed: int, rep: int) -> np.ndarray:
    """Uniform points shared by every method of one (problem, rep)."""
    seed = derive_seed(master_seed, spec.id, rep, "validation")
    return uniform_random(SamplePlan(samples, spec.dimension, spec.bounds, seed))


def score(
    surrogate: MultiSurrogate, spec: ProblemSpec, points: np.ndarray
) -> tuple[ConfusionMatrix, float]:
    """Confusion matrix and informedness of the surrogate's classification of ``points``."""
    cm = confusion_matrix(np.asarray(classify(surrogate, points)), true_labels(spec, points))
    return cm, informedness(cm)


def execute_run(cfg: CampaignConfig, key: RunKey, root: Path) -> RunRecord:
    """Run, score and persist one cell. Never raises for a failed search."""
    started = time.perf_counter()
    store = CampaignStore(root)
    spec = get_problem(key.problem)
    config = search_config(cfg, key)
    logger.info("Starting %s", key.label)

    result = run_search(config)
    trace = result.trace
    save_trace_csv(trace, store.trace_path(*_parts(key)))

    record = RunRecord(
        key=key,
        status=trace.status,
        diagnostic=trace.diagnostic,
        evaluations=len(trace),
        search_seconds=trace.wallclock,
        config_echo=config.echo(),
    )
    if result.surrogate is not None:
        model_path = store.model_path(*_parts(key))
        save_surrogate(result.surrogate, model_path)
        trace.model_path = model_path.name
        if trace.status == "completed":
            points = validation_set(spec, cfg.validation_samples, cfg.master_seed, key.rep)
            record.confusion, record.informedness = score(result.surrogate, spec, points)

    record.model = trace.model_path
    record.wallclock = time.perf_counter() - started
    save_yaml(record.to_dict(), store.record_path(*_parts(key)))
    logger.info(
        "Finished %s: %s, informedness %.4f, %.1fs",
        key.label,
        record.status,
        record.informedness,
        record.wallclock,
    )
    return record


def _parts(key: RunKey) -> tuple[str, str, int]:
    return key.problem, key.method, key.rep


def save_manifest(manifest: CampaignManifest, path: Path) -> None:
    data = {
        "version": manifest.version,
        "created_at": manifest.created_at,
        "master_seed": manifest.master_seed,
        "entries": [
            {
                "problem": e.problem,
                "method": e.method,
                "rep": e.rep,
                "status": e.status,
                "finished_at": e.finished_at,
            }
            for e in manifest.entries
        ],
    }
    atomic_write_text(path, json.dumps(data, indent=2))


def load_manifest(path: Path) -> CampaignManifest:
    with path.open("r", encoding="utf-8") as f:
        data = json.load(f)
    manifest = CampaignManifest(
        version=data.get("version", 1),
        created_at=data.get("created_at", ""),
        master_seed=int(data.get("master_seed", 0)),
    )
    for entry in data.get("entries", []):
        manifest.entries.append(
            ManifestEntry(
                problem=entry["problem"],
                method=entry["method"],
                rep=int(entry["rep"]),
                status="aborted" if entry.get("status") == "aborted" else "completed",
                finished_at=entry.get("finished_at", ""),
            )
        )
    return manifest


def _open_manifest(store: CampaignStore, master_seed: int) -> CampaignManifest:
    if not store.manifest_path.exists():
        return CampaignManifest(master_seed=master_seed)
    manifest = load_manifest(store.manifest_path)
    if manifest.master_seed != master_seed:
        logger.warning(
            "Manifest in %s was written with master_seed %d, config has %d; "
            "finished runs are reused as-is",
            store.root,
            manifest.master_seed,
            master_seed,
        )
    return manifest


def _resumable(store: CampaignStore, key: RunKey) -> RunRecord | None:
    path = store.record_path(*_parts(key))
    if not (path.exists() and store.trace_path(*_parts(key)).exists()):
        return None
    return RunRecord.from_dict(load_yaml(path))


def _dispatch(
    cfg: CampaignConfig, keys: list[RunKey], root: Path
) -> Iterator[RunRecord]:
    if cfg.workers <= 1 or len(keys) <= 1:
        for key in keys:
            yield execute_run(cfg, key, root)
        return
    with ProcessPoolExecutor(max_workers=min(cfg.workers, len(keys))) as pool:
        futures = [pool.submit(execute_run, cfg, key, root) for key in keys]
        for future in as_completed(futures):
            yield future.result()


def informedness_rows(records: Iterable[RunRecord]) -> list[InformednessRow]:
    return [
        InformednessRow(r.key.problem, r.key.method, r.key.rep, r.status, r.informedness)
        for r in records
    ]


def run_campaign(cfg: CampaignConfig) -> CampaignOutcome:
    """
    Execute every missing run of the campaign and rewrite the summary tables.

    Re-running with the same config reuses every run named in the manifest, so an
    interrupted campaign resumes to the same artifacts.
    """
    cfg.validate()
    root = cfg.output_dir
    store = CampaignStore(root)
    root.mkdir(parents=True, exist_ok=True)
    manifest = _open_manifest(store, cfg.master_seed)
    finished = manifest.finished()

    outcome = CampaignOutcome()
    by_key: dict[RunKey, RunRecord] = {}
    pending = []
    for key in campaign_keys(cfg):
        previous = _resumable(store, key) if key in finished else None
        if previous is None:
            pending.append(key)
        else:
            by_key[key] = previous
            outcome.skipped += 1
    if outcome.skipped:
        logger.info("Resuming: %d finished runs skipped", outcome.skipped)
    logger.info("%d runs to execute with %d worker(s)", len(pending), cfg.workers)

    for record in _dispatch(cfg, pending, root):
        by_key[record.key] = record
        manifest.record(record.key, record.status)
        save_manifest(manifest, store.manifest_path)
        outcome.executed += 1

    outcome.records = [by_key[key] for key in campaign_keys(cfg)]
    rows = informedness_rows(outcome.records)
    save_informedness(rows, store.informedness_path)
    save_summary(summarise(rows), store.summary_path)
    if outcome.aborted:
        logger.warning("%d run(s) aborted; see their run.yaml", len(outcome.aborted))
    return outcome

