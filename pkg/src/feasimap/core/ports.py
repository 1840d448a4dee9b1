from typing import Protocol

import numpy as np


class BatchObjective(Protocol):
    """
    Utility over a batch of design vectors: (k, n) -> (k,). Must be pure.
    """

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pass


class ConstraintFunction(Protocol):
    """
    Vectorised constraint vector G: (k, n) -> (k, L).
    """

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pass
