"""Dense prediction grids over low-dimensional problems, for external plotting."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..adapters.model_codec import load_surrogate
from ..adapters.tables import fmt, write_rows
from ..core.model import Dataset
from ..core.utils import derive_seed
from ..errors import InputError
from ..feasibility import MultiSurrogate, joint_predict, prob_feasible
from ..gp.surrogate import FitConfig, fit
from ..problems import ProblemSpec, evaluate_constraints, get_problem, true_labels

logger = logging.getLogger(__name__)

MAX_GRID_DIMENSION = 2


def grid_points(spec: ProblemSpec, resolution: int) -> np.ndarray:
    """``resolution`` points per axis, endpoints included; the last axis varies fastest."""
    if spec.dimension > MAX_GRID_DIMENSION:
        raise InputError(
            f"Grids are only produced for problems with n <= {MAX_GRID_DIMENSION}; "
            f"{spec.id} has n = {spec.dimension}"
        )
    if resolution < 2:
        raise InputError(f"resolution must be >= 2, got {resolution}")
    lo, hi = spec.box()
    axes = [np.linspace(lo[d], hi[d], resolution) for d in range(spec.dimension)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def grid_header(dimension: int, num_constraints: int) -> list[str]:
    return (
        [f"x_{i}" for i in range(dimension)]
        + [f"mu_{j}" for j in range(num_constraints)]
        + [f"sigma_{j}" for j in range(num_constraints)]
        + ["p_feasible", "predicted_label", "true_label"]
    )


def write_grid(spec: ProblemSpec, surrogate: MultiSurrogate, resolution: int, out: Path) -> int:
    if surrogate.dimension != spec.dimension:
        raise InputError(
            f"Model has dimension {surrogate.dimension}, {spec.id} has {spec.dimension}"
        )
    if surrogate.num_constraints != spec.num_constraints:
        raise InputError(
            f"Model has {surrogate.num_constraints} constraints, {spec.id} has "
            f"{spec.num_constraints}"
        )
    points = grid_points(spec, resolution)
    jp = joint_predict(surrogate, points)
    p = np.clip(np.asarray(prob_feasible(jp)), 0.0, 1.0)
    truth = true_labels(spec, points)
    rows = (
        [fmt(v) for v in points[i]]
        + [fmt(v) for v in jp.means[i]]
        + [fmt(v) for v in jp.stds[i]]
        + [fmt(p[i]), int(p[i] > 0.5), int(truth[i])]
        for i in range(points.shape[0])
    )
    write_rows(out, grid_header(spec.dimension, spec.num_constraints), rows)
    logger.info("Wrote %d grid rows to %s", points.shape[0], out)
    return int(points.shape[0])


def emit_grid(problem_id: str, model_file: Path, resolution: int, out: Path) -> int:
    """
    Predict a trained model over a regular grid of ``problem_id``'s box.

    Returns:
        Number of grid rows written (resolution ** n)
    """
    spec = get_problem(problem_id)
    if spec.dimension > MAX_GRID_DIMENSION:
        raise InputError(f"Problem {problem_id} has n = {spec.dimension}; grids need n <= 2")
    return write_grid(spec, load_surrogate(model_file), resolution, out)


def regular_fit(problem_id: str, samples: int, seed: int = 0) -> MultiSurrogate:
    """Fit one GP per constraint on ``samples`` evenly spaced points (1-D problems only)."""
    spec = get_problem(problem_id)
    if spec.dimension != 1:
        raise InputError(
            f"Regular-interval fits are 1-D only; {problem_id} has n = {spec.dimension}"
        )
    if samples < 2:
        raise InputError(f"samples must be >= 2, got {samples}")
    lo, hi = spec.box()
    inputs = np.linspace(lo[0], hi[0], samples)[:, None]
    outputs = np.array([evaluate_constraints(spec, x) for x in inputs])
    models = [
        fit(
            Dataset(inputs, outputs[:, index]),
            FitConfig(seed=derive_seed(seed, problem_id, "regular", index), bounds=spec.bounds),
        )
        for index in range(spec.num_constraints)
    ]
    return MultiSurrogate.build(models, spec.thresholds)
