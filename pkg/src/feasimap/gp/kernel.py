"""Matern 5/2 kernel with ARD lengthscales."""

import numpy as np

from ..core.model import KernelParams
from ..errors import InputError

SQRT5 = np.sqrt(5.0)


def _scaled_differences(a: np.ndarray, b: np.ndarray, lengthscales: np.ndarray) -> np.ndarray:
    """(ka, kb, n) array of (a_i - b_j) / lengthscale."""
    return (a[:, None, :] - b[None, :, :]) / lengthscales


def matern52(x_a: np.ndarray, x_b: np.ndarray, params: KernelParams) -> float:
    """
    Covariance between two design vectors.

    Examples:
        >>> p = KernelParams(signal_variance=1.0, lengthscales=(1.0,))
        >>> round(matern52(np.array([0.0]), np.array([1.0]), p), 5)
        0.52399
    """
    a = np.atleast_1d(np.asarray(x_a, dtype=float))
    b = np.atleast_1d(np.asarray(x_b, dtype=float))
    if a.shape != b.shape or a.ndim != 1:
        raise InputError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    if a.shape[0] != params.dimension:
        raise InputError(f"Vectors have dimension {a.shape[0]}, kernel has {params.dimension}")
    return float(kernel_matrix(a[None, :], b[None, :], params)[0, 0])


def kernel_matrix(a: np.ndarray, b: np.ndarray, params: KernelParams) -> np.ndarray:
    """Cross-covariance matrix between the rows of ``a`` and ``b`` (no noise term)."""
    lengthscales = np.asarray(params.lengthscales, dtype=float)
    d = _scaled_differences(np.atleast_2d(a), np.atleast_2d(b), lengthscales)
    r = np.sqrt(np.sum(d * d, axis=-1))
    return params.signal_variance * (1.0 + SQRT5 * r + 5.0 / 3.0 * r * r) * np.exp(-SQRT5 * r)


def kernel_gradients(
    a: np.ndarray, params: KernelParams
) -> tuple[np.ndarray, list[np.ndarray]]:
    """
    Kernel matrix on ``a`` and its derivatives with respect to log-lengthscales.

    d k / d log l_d = s2 * 5/3 * (1 + sqrt5 r) exp(-sqrt5 r) * (delta_d / l_d)^2,
    which stays finite at r = 0.
    """
    lengthscales = np.asarray(params.lengthscales, dtype=float)
    d = _scaled_differences(a, a, lengthscales)
    sq = d * d
    r = np.sqrt(np.sum(sq, axis=-1))
    decay = np.exp(-SQRT5 * r)
    k = params.signal_variance * (1.0 + SQRT5 * r + 5.0 / 3.0 * r * r) * decay
    shared = params.signal_variance * 5.0 / 3.0 * (1.0 + SQRT5 * r) * decay
    return k, [shared * sq[:, :, j] for j in range(sq.shape[-1])]
