"""
Multi-surrogate feasibility model: one independent GP per constraint.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

from .core.model import JointPrediction
from .errors import InputError
from .gp.surrogate import GpModel, predict

DEGENERATE_STD = 1e-12


@dataclass(frozen=True)
class MultiSurrogate:
    models: tuple[GpModel, ...]
    thresholds: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.models) == 0:
            raise InputError("MultiSurrogate needs at least one model")
        if len(self.models) != len(self.thresholds):
            raise InputError(
                f"{len(self.models)} models but {len(self.thresholds)} thresholds"
            )
        if not np.all(np.isfinite(self.thresholds)):
            raise InputError("Thresholds must be finite")
        dims = {m.dimension for m in self.models}
        if len(dims) != 1:
            raise InputError(f"Models disagree on input dimension: {sorted(dims)}")

    @classmethod
    def build(cls, models: Sequence[GpModel], thresholds: Sequence[float]) -> MultiSurrogate:
        return cls(tuple(models), tuple(float(t) for t in thresholds))

    @property
    def dimension(self) -> int:
        return self.models[0].dimension

    @property
    def num_constraints(self) -> int:
        return len(self.models)


def standardised_margin(mean: np.ndarray, std: np.ndarray, threshold: np.ndarray) -> np.ndarray:
    """
    tau = (t - mu) / sigma, with +/-inf where sigma is (numerically) zero.

    Examples:
        >>> standardised_margin(np.array([0.0]), np.array([0.0]), np.array([1.0]))
        array([inf])
    """
    mean, std, threshold = np.broadcast_arrays(
        np.asarray(mean, dtype=float), np.asarray(std, dtype=float), np.asarray(threshold)
    )
    degenerate = std < DEGENERATE_STD
    safe = np.where(degenerate, 1.0, std)
    tau = (threshold - mean) / safe
    return np.where(degenerate, np.where(mean <= threshold, np.inf, -np.inf), tau)


def joint_predict(surr: MultiSurrogate, x: np.ndarray) -> JointPrediction:
    """Per-constraint predictions stacked on the last axis."""
    preds = [predict(model, x) for model in surr.models]
    means = np.stack([np.asarray(p.mean) for p in preds], axis=-1)
    stds = np.stack([np.asarray(p.std) for p in preds], axis=-1)
    stds_n = np.stack([np.asarray(p.std_normalized) for p in preds], axis=-1)
    taus = standardised_margin(means, stds, np.asarray(surr.thresholds))
    return JointPrediction(means=means, stds=stds, taus=taus, stds_normalized=stds_n)


def log_prob_feasible(jp: JointPrediction) -> np.ndarray | float:
    value = np.sum(log_ndtr(jp.taus), axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def prob_feasible(jp: JointPrediction) -> np.ndarray | float:
    """Product of Phi(tau_l), accumulated in the log domain."""
    value = np.exp(np.sum(log_ndtr(jp.taus), axis=-1))
    return float(value) if np.ndim(value) == 0 else value


def prob_infeasible(jp: JointPrediction) -> np.ndarray | float:
    """1 - p(F), kept accurate while p(F) is within rounding of 1."""
    value = -np.expm1(np.asarray(log_prob_feasible(jp)))
    return float(value) if np.ndim(value) == 0 else value


def classify(surr: MultiSurrogate, x: np.ndarray) -> bool | np.ndarray:
    """True (feasible) iff p(F) > 0.5; the 0.5 tie goes to infeasible."""
    verdict = np.asarray(prob_feasible(joint_predict(surr, x))) > 0.5
    return bool(verdict) if verdict.ndim == 0 else verdict


def scalarise_max(values: np.ndarray, thresholds: Sequence[float]) -> np.ndarray | float:
    """
    max_l (g_l - t_l); non-positive exactly when every constraint is met.

    Examples:
        >>> scalarise_max(np.array([0.2, -1.0]), (0.5, 0.0))
        -0.3
    """
    margin = np.max(np.asarray(values, dtype=float) - np.asarray(thresholds, dtype=float), axis=-1)
    return float(margin) if np.ndim(margin) == 0 else margin
