"""
BIPOP restart driver around pycma's ask/tell CMA-ES, maximising a batch
objective over a box.

Search runs in the unit hypercube; candidates are mapped to the box before
each objective call. Every candidate evaluation counts against the budget.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import cma
import numpy as np

from .core.ports import BatchObjective
from .core.utils import check_bounds, make_rng
from .errors import InputError

logger = logging.getLogger(__name__)

EVALS_PER_DIMENSION = 5000


@dataclass(frozen=True)
class OptimizerConfig:
    bounds: tuple[tuple[float, ...], tuple[float, ...]]
    seed: int
    max_evals: int | None = None
    initial_sigma: float = 0.3
    max_restarts: int = 9
    popsize_factor: float = 2.0
    max_resamples: int = 10

    @property
    def dimension(self) -> int:
        return len(self.bounds[0])

    @property
    def budget(self) -> int:
        if self.max_evals is not None:
            return self.max_evals
        return EVALS_PER_DIMENSION * self.dimension


@dataclass(frozen=True)
class OptimizationResult:
    x: np.ndarray
    value: float
    evals_used: int
    restarts: int
    popsizes: tuple[int, ...] = field(default=())


def default_popsize(dimension: int) -> int:
    """
    Examples:
        >>> default_popsize(2)
        6
        >>> default_popsize(15)
        12
    """
    return 4 + int(np.floor(3.0 * np.log(dimension)))


class _Incumbent:
    def __init__(self, dimension: int) -> None:
        self.x = np.full(dimension, 0.5)
        self.value = -np.inf
        self.seen = False

    def update(self, unit_points: np.ndarray, values: np.ndarray) -> None:
        i = int(np.argmax(values))
        if not self.seen or values[i] > self.value:
            self.x = unit_points[i].copy()
            self.value = float(values[i])
            self.seen = True


def _sample_in_box(es: cma.CMAEvolutionStrategy, max_resamples: int) -> np.ndarray:
    """One generation, resampling out-of-box candidates before clipping them."""
    candidates = [np.asarray(c, dtype=float) for c in es.ask()]
    for i, c in enumerate(candidates):
        tries = 0
        while tries < max_resamples and (np.any(c < 0.0) or np.any(c > 1.0)):
            c = np.asarray(es.ask(1)[0], dtype=float)
            tries += 1
        candidates[i] = np.clip(c, 0.0, 1.0)
    return np.array(candidates)


def _run_cma(
    f: BatchObjective,
    lo: np.ndarray,
    hi: np.ndarray,
    x0: np.ndarray,
    sigma: float,
    popsize: int,
    seed: int,
    eval_cap: int,
    max_resamples: int,
    incumbent: _Incumbent,
) -> int:
    """Single CMA-ES run; returns the evaluations it used (never more than ``eval_cap``)."""
    opts = {
        "popsize": popsize,
        "seed": seed,
        "verbose": -9,
        "verb_log": 0,
        "verb_disp": 0,
        "maxfevals": eval_cap,
    }
    used = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        es = cma.CMAEvolutionStrategy(x0, sigma, opts)
        while not es.stop() and eval_cap - used >= popsize:
            unit = _sample_in_box(es, max_resamples)
            values = np.asarray(f(lo + unit * (hi - lo)), dtype=float).reshape(-1)
            used += unit.shape[0]
            incumbent.update(unit, values)
            es.tell(list(unit), list(-values))
    return used


def maximize(f: BatchObjective, config: OptimizerConfig) -> OptimizationResult:
    """
    Maximise ``f`` over the configured box with BIPOP restarts.

    The restart loop is driven here rather than through ``cma.fmin(bipop=True)``,
    which can neither resample-then-clip candidates nor cap evaluations across
    restarts.

    Args:
        f: Pure batch objective, (k, n) points in box units -> (k,) finite values
        config: Bounds, seed and budget

    Returns:
        Best evaluated point, its value, evaluations used and restart bookkeeping
    """
    lo, hi = check_bounds(np.asarray(config.bounds[0]), np.asarray(config.bounds[1]))
    n = lo.shape[0]
    budget = config.budget
    popsize0 = default_popsize(n)
    if budget < popsize0:
        raise InputError(f"Budget {budget} is below the population size {popsize0}")

    rng = make_rng(config.seed)
    incumbent = _Incumbent(n)
    evals = 0
    small_used = 0
    large_used = 0
    large_runs = 0
    popsizes: list[int] = []

    for run in range(config.max_restarts + 1):
        sigma = config.initial_sigma
        if run > 0 and small_used < large_used:
            ceiling = config.popsize_factor**large_runs
            popsize = int(np.floor(popsize0 * ceiling ** (rng.uniform() ** 2)))
            sigma *= 0.01 ** rng.uniform()
            regime = "small"
        elif run > 0:
            large_runs += 1
            popsize = int(popsize0 * config.popsize_factor**large_runs)
            regime = "large"
        else:
            popsize = popsize0
            regime = "small"

        remaining = budget - evals
        if remaining < popsize:
            break
        x0 = rng.uniform(0.0, 1.0, size=n)
        seed = int(rng.integers(1, 2**31 - 1))
        used = _run_cma(
            f, lo, hi, x0, sigma, popsize, seed, remaining, config.max_resamples, incumbent
        )
        evals += used
        popsizes.append(popsize)
        if regime == "small":
            small_used += used
        else:
            large_used += used
        logger.debug(
            "CMA-ES %s run %d: popsize=%d evals=%d best=%.6g",
            regime,
            run,
            popsize,
            used,
            incumbent.value,
        )

    return OptimizationResult(
        x=lo + incumbent.x * (hi - lo),
        value=float(incumbent.value),
        evals_used=evals,
        restarts=max(len(popsizes) - 1, 0),
        popsizes=tuple(popsizes),
    )
