from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..errors import InputError

Array = np.ndarray
Phase = Literal["init", "seq"]
RunStatus = Literal["completed", "aborted"]


@dataclass(frozen=True)
class Dataset:
    """
    M design vectors and their constraint responses.

    ``outputs`` is (M,) for a single constraint or (M, L) for all of them.
    """

    inputs: Array
    outputs: Array

    def __post_init__(self) -> None:
        inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        outputs = np.asarray(self.outputs, dtype=float)
        if inputs.shape[0] < 1:
            raise InputError("Dataset needs at least one row")
        if outputs.shape[0] != inputs.shape[0]:
            raise InputError(
                f"Dataset has {inputs.shape[0]} inputs but {outputs.shape[0]} outputs"
            )
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(outputs))):
            raise InputError("Dataset contains non-finite values")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)

    @property
    def size(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.inputs.shape[1])

    @property
    def num_constraints(self) -> int:
        return 1 if self.outputs.ndim == 1 else int(self.outputs.shape[1])


@dataclass(frozen=True)
class KernelParams:
    """Matern 5/2 ARD hyperparameters (standardised output space)."""

    signal_variance: float
    lengthscales: tuple[float, ...]
    noise_variance: float = 0.0

    def __post_init__(self) -> None:
        if not self.signal_variance > 0:
            raise InputError(f"signal_variance must be > 0, got {self.signal_variance}")
        if len(self.lengthscales) == 0 or any(not ls > 0 for ls in self.lengthscales):
            raise InputError(f"lengthscales must all be > 0, got {self.lengthscales}")
        if not self.noise_variance >= 0:
            raise InputError(f"noise_variance must be >= 0, got {self.noise_variance}")

    @property
    def dimension(self) -> int:
        return len(self.lengthscales)


@dataclass(frozen=True)
class Normalization:
    """Affine maps between design space / raw outputs and the GP's working space."""

    input_lo: tuple[float, ...]
    input_hi: tuple[float, ...]
    output_mean: float = 0.0
    output_std: float = 1.0

    def to_unit(self, x: Array) -> Array:
        lo = np.asarray(self.input_lo)
        hi = np.asarray(self.input_hi)
        return (np.asarray(x, dtype=float) - lo) / (hi - lo)


@dataclass(frozen=True)
class Prediction:
    """Gaussian predictive distribution; scalars or arrays over a batch."""

    mean: Array | float
    std: Array | float
    std_normalized: Array | float


@dataclass(frozen=True)
class JointPrediction:
    """Per-constraint predictions stacked on the last axis (length L)."""

    means: Array
    stds: Array
    taus: Array
    stds_normalized: Array

    @property
    def num_constraints(self) -> int:
        return int(self.means.shape[-1])


@dataclass(frozen=True)
class ConfusionMatrix:
    """Positive class = feasible."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    corrected_alpha: float
    method: str  # "exact" | "approx" | "degenerate"

    @property
    def reject(self) -> bool:
        return self.p_value <= self.corrected_alpha


@dataclass
class TraceRow:
    iteration: int
    x: Array
    g: Array
    acq_value: float | None
    phase: Phase
    wallclock: float = 0.0


@dataclass
class RunTrace:
    """History of one search run, in expensive-evaluation order."""

    problem_id: str
    method: str
    rep_index: int
    rows: list[TraceRow] = field(default_factory=list)
    status: RunStatus = "completed"
    diagnostic: str | None = None
    config_echo: dict[str, object] = field(default_factory=dict)
    model_path: str | None = None

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def inputs(self) -> Array:
        return np.array([row.x for row in self.rows], dtype=float)

    @property
    def outputs(self) -> Array:
        return np.array([row.g for row in self.rows], dtype=float)

    @property
    def wallclock(self) -> float:
        """Seconds spent producing the rows: fits, acquisition search and evaluations."""
        return float(sum(row.wallclock for row in self.rows))
