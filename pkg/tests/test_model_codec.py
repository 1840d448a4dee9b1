"""Tests for JSON persistence of fitted surrogates."""

import json

import numpy as np
import pytest

from feasimap.adapters.model_codec import (
    load_surrogate,
    model_to_dict,
    save_surrogate,
    surrogate_from_dict,
)
from feasimap.core.model import Dataset
from feasimap.errors import InputError
from feasimap.feasibility import MultiSurrogate, joint_predict
from feasimap.gp.surrogate import FitConfig, fit


def _surrogate() -> MultiSurrogate:
    rng = np.random.default_rng(4)
    x = rng.uniform([0.0, 0.0], [3.0, 4.0], size=(8, 2))
    g = np.stack([np.sin(x[:, 0]) - x[:, 1] / 4, x[:, 0] * x[:, 1] - 3.0], axis=1)
    config = FitConfig(seed=1, restarts=2, bounds=((0.0, 0.0), (3.0, 4.0)))
    models = [fit(Dataset(x, g[:, j]), config) for j in range(2)]
    return MultiSurrogate.build(models, [0.0, 0.5])


def test_saved_surrogate_predicts_identically(tmp_path):
    """Test that a reloaded surrogate reproduces means and deviations."""
    surr = _surrogate()
    path = tmp_path / "run" / "model.json"
    save_surrogate(surr, path)

    loaded = load_surrogate(path)
    probe = np.random.default_rng(9).uniform([0.0, 0.0], [3.0, 4.0], size=(20, 2))
    before, after = joint_predict(surr, probe), joint_predict(loaded, probe)

    assert loaded.thresholds == (0.0, 0.5)
    assert np.allclose(before.means, after.means, rtol=0, atol=1e-10)
    assert np.allclose(before.stds, after.stds, rtol=0, atol=1e-10)


def test_model_file_lists_hyperparameters(tmp_path):
    """Test the documented fields of a stored model."""
    path = tmp_path / "model.json"
    save_surrogate(_surrogate(), path)
    data = json.loads(path.read_text())

    first = data["models"][0]
    assert first["kernel"] == "matern52"
    assert len(first["lengthscales"]) == 2
    assert len(first["training_inputs"]) == 8
    assert set(first["normalization"]) == {"input_lo", "input_hi", "output_mean", "output_std"}


def test_bare_model_loads_with_zero_threshold():
    """Test that a single-model document becomes a one-constraint surrogate."""
    surr = surrogate_from_dict(model_to_dict(_surrogate().models[1]))
    assert surr.thresholds == (0.0,)
    assert surr.num_constraints == 1


def test_rejects_unknown_kernel_and_missing_fields():
    """Test that malformed model documents raise InputError."""
    data = model_to_dict(_surrogate().models[0])
    with pytest.raises(InputError, match="kernel"):
        surrogate_from_dict({**data, "kernel": "rbf"})

    del data["lengthscales"]
    with pytest.raises(InputError, match="lengthscales"):
        surrogate_from_dict(data)


def test_missing_model_file(tmp_path):
    """Test that loading a nonexistent file raises InputError."""
    with pytest.raises(InputError):
        load_surrogate(tmp_path / "absent.json")
