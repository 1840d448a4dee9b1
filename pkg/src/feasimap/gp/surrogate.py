"""
Gaussian-process regression for a single constraint.

Training happens in a working space: inputs mapped to the unit hypercube with
the problem bounds, outputs standardised to zero mean and unit variance.
Predictions are returned in raw units, with the standardised std kept alongside.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from ..core.model import Dataset, KernelParams, Normalization, Prediction
from ..core.utils import as_points, check_bounds, make_rng
from ..errors import InputError, NumericalError
from .kernel import kernel_gradients, kernel_matrix

logger = logging.getLogger(__name__)

_LOG_2PI = float(np.log(2.0 * np.pi))
_FAILED_NLL = 1e25


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameter search settings (bounds in the working space)."""

    seed: int = 0
    restarts: int = 10
    bounds: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    lengthscale_bounds: tuple[float, float] = (1e-3, 10.0)
    signal_bounds: tuple[float, float] = (1e-3, 10.0)
    noise_bounds: tuple[float, float] = (1e-8, 1e-1)
    jitter_start: float = 1e-10
    jitter_max: float = 1e-4


@dataclass(frozen=True)
class GpModel:
    params: KernelParams
    normalization: Normalization
    inputs: np.ndarray
    outputs: np.ndarray
    unit_inputs: np.ndarray
    chol_factor: np.ndarray
    alpha: np.ndarray
    jitter: float

    @property
    def dimension(self) -> int:
        return int(self.inputs.shape[1])

    def predict(self, x: np.ndarray) -> Prediction:
        return predict(self, x)


def stable_cholesky(
    k: np.ndarray, jitter_start: float = 1e-10, jitter_max: float = 1e-4
) -> tuple[np.ndarray, float]:
    """
    Lower Cholesky factor of ``k + jitter * I``.

    Jitter starts at ``jitter_start`` and grows tenfold up to ``jitter_max``.
    """
    eye = np.eye(k.shape[0])
    jitter = jitter_start
    while True:
        try:
            return cholesky(k + jitter * eye, lower=True, check_finite=True), jitter
        except (LinAlgError, ValueError):
            if jitter >= jitter_max:
                break
            jitter = min(jitter * 10.0 if jitter > 0 else 1e-10, jitter_max)
            logger.debug("Cholesky failed, escalating jitter to %.1e", jitter)
    raise NumericalError(f"Covariance not positive definite with jitter up to {jitter_max:.0e}")


def _params_from_log(theta: np.ndarray) -> KernelParams:
    n = theta.shape[0] - 2
    values = np.exp(theta)
    return KernelParams(
        signal_variance=float(values[n]),
        lengthscales=tuple(float(v) for v in values[:n]),
        noise_variance=float(values[n + 1]),
    )


def _negative_lml(
    theta: np.ndarray,
    unit_inputs: np.ndarray,
    y: np.ndarray,
    jitter_start: float,
    jitter_max: float,
) -> tuple[float, np.ndarray]:
    """Negative log marginal likelihood and its gradient in log-hyperparameters."""
    params = _params_from_log(theta)
    m = y.shape[0]
    k_signal, dk_lengths = kernel_gradients(unit_inputs, params)
    k = k_signal + params.noise_variance * np.eye(m)
    try:
        chol, _ = stable_cholesky(k, jitter_start, jitter_max)
    except NumericalError:
        return _FAILED_NLL, np.zeros_like(theta)

    alpha = cho_solve((chol, True), y)
    nll = 0.5 * float(y @ alpha) + float(np.sum(np.log(np.diag(chol)))) + 0.5 * m * _LOG_2PI
    k_inv = cho_solve((chol, True), np.eye(m))
    inner = np.outer(alpha, alpha) - k_inv

    grad = np.empty_like(theta)
    for j, dk in enumerate(dk_lengths):
        grad[j] = -0.5 * float(np.sum(inner * dk))
    grad[-2] = -0.5 * float(np.sum(inner * k_signal))
    grad[-1] = -0.5 * float(np.trace(inner)) * params.noise_variance
    if not (np.isfinite(nll) and np.all(np.isfinite(grad))):
        return _FAILED_NLL, np.zeros_like(theta)
    return nll, grad


def log_marginal_likelihood(
    params: KernelParams,
    unit_inputs: np.ndarray,
    outputs: np.ndarray,
    jitter_start: float = 1e-10,
    jitter_max: float = 1e-4,
) -> float:
    """Log marginal likelihood of working-space data under ``params``."""
    unit_inputs = np.atleast_2d(np.asarray(unit_inputs, dtype=float))
    y = np.asarray(outputs, dtype=float)
    k = kernel_matrix(unit_inputs, unit_inputs, params) + params.noise_variance * np.eye(len(y))
    chol, _ = stable_cholesky(k, jitter_start, jitter_max)
    alpha = cho_solve((chol, True), y)
    return -(
        0.5 * float(y @ alpha)
        + float(np.sum(np.log(np.diag(chol))))
        + 0.5 * len(y) * _LOG_2PI
    )


def make_normalization(
    data: Dataset, bounds: tuple[tuple[float, ...], tuple[float, ...]] | None
) -> Normalization:
    """Input box from ``bounds`` (or the data range) and output standardisation."""
    if bounds is not None:
        lo, hi = check_bounds(np.asarray(bounds[0]), np.asarray(bounds[1]))
    else:
        lo = data.inputs.min(axis=0)
        hi = data.inputs.max(axis=0)
        flat = hi - lo <= 0
        lo = np.where(flat, lo - 0.5, lo)
        hi = np.where(flat, hi + 0.5, hi)
    y = data.outputs
    std = float(np.std(y))
    return Normalization(
        input_lo=tuple(float(v) for v in lo),
        input_hi=tuple(float(v) for v in hi),
        output_mean=float(np.mean(y)),
        output_std=std if std > 1e-12 else 1.0,
    )


def condition(
    data: Dataset,
    params: KernelParams,
    normalization: Normalization,
    jitter_start: float = 1e-10,
    jitter_max: float = 1e-4,
) -> GpModel:
    """Build the posterior for fixed hyperparameters (no optimisation)."""
    if data.outputs.ndim != 1:
        raise InputError("condition() expects a single-constraint dataset")
    if params.dimension != data.dimension:
        raise InputError(
            f"Kernel has {params.dimension} lengthscales, data has dimension {data.dimension}"
        )
    unit = normalization.to_unit(data.inputs)
    y = (data.outputs - normalization.output_mean) / normalization.output_std
    k = kernel_matrix(unit, unit, params) + params.noise_variance * np.eye(data.size)
    chol, jitter = stable_cholesky(k, jitter_start, jitter_max)
    if jitter > jitter_start:
        logger.info("GP factorised with escalated jitter %.1e (M=%d)", jitter, data.size)
    alpha = cho_solve((chol, True), y)
    return GpModel(
        params=params,
        normalization=normalization,
        inputs=data.inputs.copy(),
        outputs=data.outputs.copy(),
        unit_inputs=unit,
        chol_factor=chol,
        alpha=alpha,
        jitter=jitter,
    )


def fit(data: Dataset, config: FitConfig | None = None) -> GpModel:
    """
    Fit hyperparameters by multi-start L-BFGS-B on the log marginal likelihood.

    Args:
        data: Single-constraint dataset with at least two distinct inputs
        config: Search settings; the seed fixes the random restarts

    Returns:
        GpModel conditioned on the best hyperparameters found
    """
    config = config or FitConfig()
    if data.outputs.ndim != 1:
        raise InputError("fit() expects a single-constraint dataset")
    if np.unique(data.inputs, axis=0).shape[0] < 2:
        raise InputError("fit() needs at least two distinct inputs")

    normalization = make_normalization(data, config.bounds)
    unit = normalization.to_unit(data.inputs)
    y = (data.outputs - normalization.output_mean) / normalization.output_std
    n = data.dimension

    log_bounds = (
        [tuple(np.log(config.lengthscale_bounds))] * n
        + [tuple(np.log(config.signal_bounds))]
        + [tuple(np.log(config.noise_bounds))]
    )
    lower = np.array([b[0] for b in log_bounds])
    upper = np.array([b[1] for b in log_bounds])

    rng = make_rng(config.seed)
    default = np.clip(np.log(np.array([0.5] * n + [1.0, 1e-6])), lower, upper)
    starts = [default] + [rng.uniform(lower, upper) for _ in range(max(config.restarts, 1) - 1)]

    best_theta: np.ndarray | None = None
    best_value = np.inf
    for x0 in starts:
        result = minimize(
            _negative_lml,
            x0,
            args=(unit, y, config.jitter_start, config.jitter_max),
            jac=True,
            method="L-BFGS-B",
            bounds=log_bounds,
        )
        value = float(result.fun)
        if np.isfinite(value) and value < _FAILED_NLL and value < best_value:
            best_value = value
            best_theta = np.clip(result.x, lower, upper)

    if best_theta is None:
        raise NumericalError("No restart produced a finite log marginal likelihood")

    params = _params_from_log(best_theta)
    logger.debug(
        "GP fit: nll=%.4f signal=%.3g noise=%.3g lengthscales=%s",
        best_value,
        params.signal_variance,
        params.noise_variance,
        np.round(params.lengthscales, 4).tolist(),
    )
    return condition(data, params, normalization, config.jitter_start, config.jitter_max)


def predict(model: GpModel, x: np.ndarray) -> Prediction:
    """
    Predictive mean and std at one point (scalars) or a batch (arrays).
    """
    points, single = as_points(x, model.dimension)
    unit = model.normalization.to_unit(points)
    k_star = kernel_matrix(unit, model.unit_inputs, model.params)
    mean_n = k_star @ model.alpha
    v = solve_triangular(model.chol_factor, k_star.T, lower=True)
    var_n = np.maximum(model.params.signal_variance - np.sum(v * v, axis=0), 0.0)
    std_n = np.sqrt(var_n)

    scale = model.normalization.output_std
    mean = mean_n * scale + model.normalization.output_mean
    std = std_n * scale
    if single:
        return Prediction(mean=float(mean[0]), std=float(std[0]), std_normalized=float(std_n[0]))
    return Prediction(mean=mean, std=std, std_normalized=std_n)
