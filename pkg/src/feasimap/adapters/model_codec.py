"""JSON encoding of fitted surrogates."""

import json
from pathlib import Path
from typing import Any

import numpy as np

from ..core.model import Dataset, KernelParams, Normalization
from ..errors import InputError
from ..feasibility import MultiSurrogate
from ..gp.surrogate import GpModel, condition
from .fs_store import atomic_write_text

KERNEL_NAME = "matern52"


def model_to_dict(model: GpModel) -> dict[str, Any]:
    norm = model.normalization
    return {
        "kernel": KERNEL_NAME,
        "lengthscales": list(model.params.lengthscales),
        "signal_variance": model.params.signal_variance,
        "noise_variance": model.params.noise_variance,
        "normalization": {
            "input_lo": list(norm.input_lo),
            "input_hi": list(norm.input_hi),
            "output_mean": norm.output_mean,
            "output_std": norm.output_std,
        },
        "training_inputs": model.inputs.tolist(),
        "training_outputs": model.outputs.tolist(),
        "jitter": model.jitter,
    }


def model_from_dict(data: dict[str, Any]) -> GpModel:
    """Rebuild a model by conditioning on the stored data with the stored hyperparameters."""
    kernel = data.get("kernel", KERNEL_NAME)
    if kernel != KERNEL_NAME:
        raise InputError(f"Unsupported kernel '{kernel}'")
    try:
        params = KernelParams(
            signal_variance=float(data["signal_variance"]),
            lengthscales=tuple(float(v) for v in data["lengthscales"]),
            noise_variance=float(data.get("noise_variance", 0.0)),
        )
        norm_data = data["normalization"]
        normalization = Normalization(
            input_lo=tuple(float(v) for v in norm_data["input_lo"]),
            input_hi=tuple(float(v) for v in norm_data["input_hi"]),
            output_mean=float(norm_data.get("output_mean", 0.0)),
            output_std=float(norm_data.get("output_std", 1.0)),
        )
        dataset = Dataset(
            np.asarray(data["training_inputs"], dtype=float),
            np.asarray(data["training_outputs"], dtype=float),
        )
    except KeyError as exc:
        raise InputError(f"Model file is missing field {exc}") from None
    jitter = float(data.get("jitter", 1e-10))
    return condition(
        dataset, params, normalization, jitter_start=jitter, jitter_max=max(jitter, 1e-4)
    )


def surrogate_to_dict(surr: MultiSurrogate) -> dict[str, Any]:
    return {
        "thresholds": list(surr.thresholds),
        "models": [model_to_dict(m) for m in surr.models],
    }


def surrogate_from_dict(data: dict[str, Any]) -> MultiSurrogate:
    if "models" not in data:
        # a bare single-constraint model file
        return MultiSurrogate.build([model_from_dict(data)], [0.0])
    return MultiSurrogate.build(
        [model_from_dict(m) for m in data["models"]],
        [float(t) for t in data.get("thresholds", [0.0] * len(data["models"]))],
    )


def save_surrogate(surr: MultiSurrogate, path: Path) -> None:
    atomic_write_text(path, json.dumps(surrogate_to_dict(surr), indent=2))


def load_surrogate(path: Path) -> MultiSurrogate:
    if not path.exists():
        raise InputError(f"Model file not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        return surrogate_from_dict(json.load(f))
