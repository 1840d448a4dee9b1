"""Tests for the Matern 5/2 kernel."""

import numpy as np
import pytest

from feasimap.core.model import KernelParams
from feasimap.errors import InputError
from feasimap.gp.kernel import kernel_gradients, kernel_matrix, matern52


def test_matern52_at_zero_distance_is_signal_variance():
    """Test that k(x, x) equals the signal variance."""
    params = KernelParams(signal_variance=2.5, lengthscales=(0.3, 1.7))
    x = np.array([0.2, 0.9])
    assert matern52(x, x, params) == pytest.approx(2.5)


def test_matern52_closed_form():
    """Test k at one lengthscale of distance against (1 + sqrt5 + 5/3) exp(-sqrt5)."""
    params = KernelParams(signal_variance=1.0, lengthscales=(2.0,))
    expected = (1.0 + np.sqrt(5.0) + 5.0 / 3.0) * np.exp(-np.sqrt(5.0))
    assert matern52(np.array([1.0]), np.array([3.0]), params) == pytest.approx(expected)


def test_kernel_matrix_is_symmetric_positive_semidefinite():
    """Test that the Gram matrix on random points is symmetric and PSD."""
    rng = np.random.default_rng(0)
    x = rng.uniform(size=(25, 3))
    params = KernelParams(signal_variance=1.3, lengthscales=(0.2, 0.5, 1.0))
    k = kernel_matrix(x, x, params)

    assert np.allclose(k, k.T)
    assert np.min(np.linalg.eigvalsh(k)) > -1e-10


def test_kernel_matrix_matches_pairwise():
    """Test that the vectorised matrix agrees with the pairwise function."""
    rng = np.random.default_rng(1)
    a = rng.uniform(size=(4, 2))
    b = rng.uniform(size=(3, 2))
    params = KernelParams(signal_variance=0.7, lengthscales=(0.4, 0.9))
    k = kernel_matrix(a, b, params)

    assert k.shape == (4, 3)
    for i in range(4):
        for j in range(3):
            assert k[i, j] == pytest.approx(matern52(a[i], b[j], params))


def test_kernel_gradients_match_finite_differences():
    """Test dK/dlog(l_d) against central differences."""
    rng = np.random.default_rng(2)
    x = rng.uniform(size=(6, 2))
    lengthscales = np.array([0.3, 0.8])
    params = KernelParams(signal_variance=1.1, lengthscales=tuple(lengthscales))
    _, grads = kernel_gradients(x, params)

    h = 1e-6
    for d in range(2):
        up = lengthscales.copy()
        down = lengthscales.copy()
        up[d] *= np.exp(h)
        down[d] *= np.exp(-h)
        k_up = kernel_matrix(x, x, KernelParams(1.1, tuple(up)))
        k_down = kernel_matrix(x, x, KernelParams(1.1, tuple(down)))
        numeric = (k_up - k_down) / (2 * h)
        assert np.allclose(grads[d], numeric, atol=1e-6)


def test_matern52_dimension_mismatch():
    """Test that mismatched vectors raise InputError."""
    params = KernelParams(signal_variance=1.0, lengthscales=(1.0, 1.0))
    with pytest.raises(InputError):
        matern52(np.array([0.0, 1.0]), np.array([0.0]), params)
    with pytest.raises(InputError):
        matern52(np.array([0.0]), np.array([1.0]), params)


def test_kernel_params_validation():
    """Test that non-positive hyperparameters are rejected."""
    with pytest.raises(InputError):
        KernelParams(signal_variance=0.0, lengthscales=(1.0,))
    with pytest.raises(InputError):
        KernelParams(signal_variance=1.0, lengthscales=(1.0, -0.1))
    with pytest.raises(InputError):
        KernelParams(signal_variance=1.0, lengthscales=(1.0,), noise_variance=-1e-9)
