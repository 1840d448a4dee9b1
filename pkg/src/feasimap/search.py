"""
Sequential Bayesian search for the feasible space of one problem.

LHS initial design, then per iteration: refit one GP per constraint, maximise
the acquisition with CMA-ES, evaluate the chosen point, augment the data.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgError

from .acquisition import AcquisitionKind, make_acquisition
from .core.model import Dataset, RunTrace, TraceRow
from .core.utils import derive_seed, make_rng
from .errors import FeasimapError, InputError, NumericalError
from .feasibility import MultiSurrogate
from .gp.surrogate import FitConfig, fit
from .optimizer import OptimizerConfig, maximize
from .problems import EvaluationLedger, ProblemSpec, evaluate_constraints, get_problem
from .sampling import SamplePlan, latin_hypercube

logger = logging.getLogger(__name__)

LHS_ONLY = "lhs-only"
DUPLICATE_STEP = 1e-6
_GUARD_ATTEMPTS = 100
_RETRY_JITTER_MAX = 1e-2


@dataclass(frozen=True)
class SearchConfig:
    problem_id: str
    acquisition: str = "pbe"
    init_samples: int | None = None
    budget: int | None = None
    rep_index: int = 0
    master_seed: int = 0
    acq_eval_multiplier: int = 5000
    initial_sigma: float = 0.3
    max_restarts: int = 9
    popsize_factor: float = 2.0
    gp_restarts: int = 10
    jitter_start: float = 1e-10
    jitter_max: float = 1e-4
    pbe_entropy_floor: float | None = None
    pbe_positive_entropy: bool = True
    duplicate_tolerance: float = 1e-8

    @property
    def problem(self) -> ProblemSpec:
        return get_problem(self.problem_id)

    @property
    def method(self) -> str:
        if self.acquisition == LHS_ONLY:
            return LHS_ONLY
        return AcquisitionKind.parse(self.acquisition).value

    @property
    def initial_size(self) -> int:
        """n by default, but never fewer than the two points a GP fit needs."""
        if self.init_samples is not None:
            return self.init_samples
        return max(self.problem.dimension, 2)

    @property
    def total_budget(self) -> int:
        if self.budget is not None:
            return self.budget
        return 11 * self.problem.dimension

    def validate(self) -> None:
        get_problem(self.problem_id)
        if self.acquisition != LHS_ONLY:
            AcquisitionKind.parse(self.acquisition)
        if self.initial_size < 1:
            raise InputError(f"init_samples must be >= 1, got {self.initial_size}")
        if self.total_budget < self.initial_size:
            raise InputError(
                f"budget {self.total_budget} is smaller than init_samples {self.initial_size}"
            )
        if self.acq_eval_multiplier < 1:
            raise InputError("acq_eval_multiplier must be >= 1")

    def echo(self) -> dict[str, object]:
        data: dict[str, object] = asdict(self)
        data["init_samples"] = self.initial_size
        data["budget"] = self.total_budget
        return data


class SearchResult(NamedTuple):
    surrogate: MultiSurrogate | None
    trace: RunTrace


def _seed(config: SearchConfig, *purpose: object) -> int:
    return derive_seed(config.master_seed, config.problem_id, config.rep_index, *purpose)


def initial_design(config: SearchConfig) -> np.ndarray:
    """LHS shared by every model-based method on the same (problem, rep)."""
    spec = config.problem
    plan = SamplePlan(config.initial_size, spec.dimension, spec.bounds, _seed(config, "init"))
    return latin_hypercube(plan)


def fit_surrogate(
    config: SearchConfig, inputs: np.ndarray, outputs: np.ndarray, iteration: int
) -> MultiSurrogate:
    """One GP per constraint; seeds depend only on (problem, rep, method, iteration, constraint)."""
    spec = config.problem
    models = []
    for index in range(spec.num_constraints):
        fit_config = FitConfig(
            seed=_seed(config, config.method, "fit", iteration, index),
            restarts=config.gp_restarts,
            bounds=spec.bounds,
            jitter_start=config.jitter_start,
            jitter_max=config.jitter_max,
        )
        data = Dataset(inputs, outputs[:, index])
        try:
            models.append(fit(data, fit_config))
        except NumericalError:
            logger.warning(
                "GP fit failed for %s constraint %d at iteration %d; retrying up to jitter %.0e",
                spec.id,
                index,
                iteration,
                _RETRY_JITTER_MAX,
            )
            retry = FitConfig(
                seed=fit_config.seed,
                restarts=fit_config.restarts,
                bounds=fit_config.bounds,
                jitter_start=fit_config.jitter_start,
                jitter_max=_RETRY_JITTER_MAX,
            )
            models.append(fit(data, retry))
    return MultiSurrogate.build(models, spec.thresholds)


def duplicate_guard(
    x_candidate: np.ndarray,
    existing: np.ndarray,
    tolerance: float,
    bounds: tuple[tuple[float, ...], tuple[float, ...]],
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Nudge ``x_candidate`` off any existing point closer than ``tolerance`` (unit-cube distance).

    The perturbed point is re-checked against the full set and stays in bounds.
    """
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    x = np.asarray(x_candidate, dtype=float)
    if existing.size == 0:
        return x
    unit_existing = (np.atleast_2d(existing) - lo) / (hi - lo)
    u = (x - lo) / (hi - lo)

    def too_close(point: np.ndarray) -> bool:
        return bool(np.min(np.linalg.norm(unit_existing - point, axis=1)) < tolerance)

    if not too_close(u):
        return x
    for _ in range(_GUARD_ATTEMPTS):
        u = np.clip(u + rng.uniform(-DUPLICATE_STEP, DUPLICATE_STEP, size=u.shape), 0.0, 1.0)
        if not too_close(u):
            break
    else:
        logger.warning("Duplicate guard gave up after %d attempts", _GUARD_ATTEMPTS)
    return lo + u * (hi - lo)


def _optimizer_config(config: SearchConfig, iteration: int) -> OptimizerConfig:
    spec = config.problem
    return OptimizerConfig(
        bounds=spec.bounds,
        seed=_seed(config, config.method, "acq", iteration),
        max_evals=config.acq_eval_multiplier * spec.dimension,
        initial_sigma=config.initial_sigma,
        max_restarts=config.max_restarts,
        popsize_factor=config.popsize_factor,
    )


def _utility(
    config: SearchConfig, surrogate: MultiSurrogate, log_domain: bool = False
) -> Callable[[np.ndarray], np.ndarray]:
    return make_acquisition(
        config.method,
        surrogate,
        config.pbe_entropy_floor,
        positive=config.pbe_positive_entropy,
        log_domain=log_domain,
    )


def _evaluate_row(
    spec: ProblemSpec,
    ledger: EvaluationLedger,
    iteration: int,
    x: np.ndarray,
    acq_value: float | None,
    started: float,
) -> TraceRow:
    g = evaluate_constraints(spec, x, ledger)
    return TraceRow(
        iteration=iteration,
        x=np.asarray(x, dtype=float),
        g=g,
        acq_value=acq_value,
        phase="init" if acq_value is None else "seq",
        wallclock=time.perf_counter() - started,
    )


def run_search(config: SearchConfig) -> SearchResult:
    """
    Run one search to its budget.

    GP or optimizer failures abort the run; the trace up to that point is kept with
    status ``aborted`` and a diagnostic.
    """
    config.validate()
    if config.method == LHS_ONLY:
        return run_lhs_baseline(config)

    spec = config.problem
    budget = config.total_budget
    ledger = EvaluationLedger(cap=budget)
    trace = RunTrace(spec.id, config.method, config.rep_index, config_echo=config.echo())
    surrogate: MultiSurrogate | None = None

    for i, x in enumerate(initial_design(config)):
        trace.rows.append(_evaluate_row(spec, ledger, i, x, None, time.perf_counter()))

    iteration = len(trace)
    try:
        while iteration < budget:
            started = time.perf_counter()
            surrogate = fit_surrogate(config, trace.inputs, trace.outputs, iteration)
            utility = _utility(config, surrogate)
            result = maximize(
                _utility(config, surrogate, log_domain=True), _optimizer_config(config, iteration)
            )
            guard_rng = make_rng(_seed(config, config.method, "guard", iteration))
            x = duplicate_guard(
                result.x, trace.inputs, config.duplicate_tolerance, spec.bounds, guard_rng
            )
            acq_value = float(utility(x[None, :])[0])
            trace.rows.append(_evaluate_row(spec, ledger, iteration, x, acq_value, started))
            iteration += 1
        surrogate = fit_surrogate(config, trace.inputs, trace.outputs, iteration)
    except (FeasimapError, LinAlgError, ValueError) as exc:
        trace.status = "aborted"
        trace.diagnostic = f"iteration {iteration}: {type(exc).__name__}: {exc}"
        logger.warning(
            "Run %s/%s/rep-%02d aborted at %s",
            spec.id,
            config.method,
            config.rep_index,
            trace.diagnostic,
        )

    return SearchResult(surrogate, trace)


def run_lhs_baseline(config: SearchConfig) -> SearchResult:
    """LHS of the full budget on an independent stream, then one fit on all of it."""
    spec = config.problem
    budget = config.total_budget
    ledger = EvaluationLedger(cap=budget)
    trace = RunTrace(spec.id, LHS_ONLY, config.rep_index, config_echo=config.echo())
    plan = SamplePlan(budget, spec.dimension, spec.bounds, _seed(config, "lhs-baseline"))
    for i, x in enumerate(latin_hypercube(plan)):
        trace.rows.append(_evaluate_row(spec, ledger, i, x, None, time.perf_counter()))

    surrogate: MultiSurrogate | None = None
    try:
        surrogate = fit_surrogate(config, trace.inputs, trace.outputs, budget)
    except (FeasimapError, LinAlgError, ValueError) as exc:
        trace.status = "aborted"
        trace.diagnostic = f"final fit: {type(exc).__name__}: {exc}"
        logger.warning(
            "Run %s/%s/rep-%02d aborted at %s",
            spec.id,
            LHS_ONLY,
            config.rep_index,
            trace.diagnostic,
        )
    return SearchResult(surrogate, trace)


def replay_acquisition(config: SearchConfig, trace: RunTrace, iteration: int) -> float:
    """Recompute the acquisition value logged at ``iteration`` from the trace prefix."""
    if iteration < 0 or iteration >= len(trace):
        raise InputError(f"Iteration {iteration} outside trace of length {len(trace)}")
    row = trace.rows[iteration]
    if row.acq_value is None:
        raise InputError(f"Iteration {iteration} is part of the initial design")
    prefix = trace.rows[:iteration]
    inputs = np.array([r.x for r in prefix])
    outputs = np.array([r.g for r in prefix])
    surrogate = fit_surrogate(config, inputs, outputs, iteration)
    utility = _utility(config, surrogate)
    return float(utility(np.asarray(row.x)[None, :])[0])
