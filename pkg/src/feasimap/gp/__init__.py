"""Single-constraint Gaussian-process surrogates."""

from .kernel import kernel_matrix, matern52
from .surrogate import (
    FitConfig,
    GpModel,
    condition,
    fit,
    log_marginal_likelihood,
    predict,
    stable_cholesky,
)

__all__ = [
    "FitConfig",
    "GpModel",
    "condition",
    "fit",
    "kernel_matrix",
    "log_marginal_likelihood",
    "matern52",
    "predict",
    "stable_cholesky",
]
