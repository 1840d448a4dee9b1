"""Tests for truncated-Gaussian entropies and the entropy-loss identity."""

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import norm

from feasimap.acquisition import (
    acq_knudde_single,
    knudde_four_term,
    knudde_tail_correction,
    truncated_gaussian_entropy,
)
from feasimap.errors import InputError


def _quadrature_entropy(mu: float, sigma: float, lower: float, upper: float) -> float:
    mass = norm.cdf(upper, mu, sigma) - norm.cdf(lower, mu, sigma)

    def integrand(x: float) -> float:
        p = norm.pdf(x, mu, sigma) / mass
        return -p * np.log(p) if p > 0 else 0.0

    # integrate over the bulk only; the tails beyond 12 sigma are negligible
    lo = max(lower, mu - 12 * sigma)
    hi = min(upper, mu + 12 * sigma)
    value, _ = integrate.quad(integrand, lo, hi, points=[mu] if lo < mu < hi else None, limit=200)
    return value


def test_untruncated_entropy_is_gaussian_entropy():
    """Test that infinite limits give 0.5 ln(2 pi e sigma^2)."""
    assert truncated_gaussian_entropy(1.0, 2.0) == pytest.approx(
        0.5 * np.log(2 * np.pi * np.e * 4.0)
    )


def test_half_normal_entropy():
    """Test the half-normal closed form 0.5 ln(pi e sigma^2 / 2)."""
    sigma = 1.7
    expected = 0.5 * np.log(np.pi * np.e * sigma**2 / 2.0)
    assert truncated_gaussian_entropy(0.0, sigma, lower=0.0) == pytest.approx(expected)


def test_truncated_entropy_matches_quadrature():
    """Test truncated entropies against quadrature of -integral p ln p on 100 random cases."""
    rng = np.random.default_rng(17)
    for _ in range(100):
        mu = rng.uniform(-2, 2)
        sigma = rng.uniform(0.2, 2)
        t = mu + sigma * rng.uniform(-2.5, 2.5)
        above = truncated_gaussian_entropy(mu, sigma, lower=t)
        below = truncated_gaussian_entropy(mu, sigma, upper=t)
        assert above == pytest.approx(_quadrature_entropy(mu, sigma, t, np.inf), abs=1e-6)
        assert below == pytest.approx(_quadrature_entropy(mu, sigma, -np.inf, t), abs=1e-6)


def test_four_term_form_equals_simplified_plus_tail_term():
    """Test that the entropy-loss forms differ exactly by the tail correction."""
    rng = np.random.default_rng(5)
    for _ in range(100):
        mu = rng.uniform(-3, 3)
        sigma = rng.uniform(0.1, 3)
        t = mu + sigma * rng.uniform(-3, 3)
        four = knudde_four_term(mu, sigma, t)
        simplified = acq_knudde_single(mu, sigma, t)
        assert four == pytest.approx(simplified + knudde_tail_correction(mu, sigma, t), abs=1e-9)


def test_forms_agree_at_boundary():
    """Test that at tau = 0 the correction vanishes and both forms coincide."""
    assert knudde_tail_correction(0.4, 1.3, 0.4) == 0.0
    assert knudde_four_term(0.4, 1.3, 0.4) == pytest.approx(
        acq_knudde_single(0.4, 1.3, 0.4), abs=1e-9
    )


def test_truncated_entropy_rejects_bad_arguments():
    """Test that sigma <= 0 and an empty interval raise InputError."""
    with pytest.raises(InputError):
        truncated_gaussian_entropy(0.0, 0.0)
    with pytest.raises(InputError):
        truncated_gaussian_entropy(0.0, 1.0, lower=1.0, upper=1.0)
