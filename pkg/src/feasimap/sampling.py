"""Seeded space-filling and uniform designs over a box."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core.utils import check_bounds, make_rng
from .errors import InputError


@dataclass(frozen=True)
class SamplePlan:
    count: int
    dimension: int
    bounds: tuple[tuple[float, ...], tuple[float, ...]]
    seed: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise InputError(f"count must be >= 1, got {self.count}")
        if self.dimension < 1:
            raise InputError(f"dimension must be >= 1, got {self.dimension}")
        lo, _ = check_bounds(np.asarray(self.bounds[0]), np.asarray(self.bounds[1]))
        if lo.shape[0] != self.dimension:
            raise InputError(
                f"Bounds have {lo.shape[0]} entries, plan has dimension {self.dimension}"
            )

    def box(self) -> tuple[np.ndarray, np.ndarray]:
        return check_bounds(np.asarray(self.bounds[0]), np.asarray(self.bounds[1]))


def latin_hypercube(plan: SamplePlan) -> np.ndarray:
    """
    Random-permutation LHS with uniform jitter inside each stratum.

    Every column holds exactly one point per equal-width stratum.
    """
    rng = make_rng(plan.seed)
    lo, hi = plan.box()
    k = plan.count
    strata = np.stack([rng.permutation(k) for _ in range(plan.dimension)], axis=1)
    unit = (strata + rng.uniform(size=(k, plan.dimension))) / k
    return lo + unit * (hi - lo)


def uniform_random(plan: SamplePlan) -> np.ndarray:
    """I.i.d. uniform points over the box."""
    rng = make_rng(plan.seed)
    lo, hi = plan.box()
    return rng.uniform(lo, hi, size=(plan.count, plan.dimension))
