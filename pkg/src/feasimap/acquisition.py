"""
Acquisition functions for boundary search.

Single-constraint criteria take raw-scale (mu, sigma, t) and broadcast over
arrays. Joint criteria take a JointPrediction. ``make_acquisition`` binds a
criterion to a MultiSurrogate and returns a batch utility for the optimizer.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from enum import Enum

import numpy as np
from scipy.special import log_ndtr, logsumexp, ndtr

from .core.model import JointPrediction
from .errors import InputError
from .feasibility import (
    DEGENERATE_STD,
    MultiSurrogate,
    joint_predict,
    prob_feasible,
    prob_infeasible,
)

SENTINEL = -1e12
LOG_2PI_E = float(np.log(2.0 * np.pi * np.e))

SingleCriterion = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class AcquisitionKind(str, Enum):
    KNUDDE = "knudde"
    TMSE = "tmse"
    BICHON = "bichon"
    RANJAN = "ranjan"
    ECHARD = "echard"
    PBE = "pbe"

    @property
    def tag(self) -> str:
        return "PBE" if self is AcquisitionKind.PBE else self.value[0].upper()

    @property
    def is_composite(self) -> bool:
        return self in _SINGLE

    @classmethod
    def parse(cls, name: str | AcquisitionKind) -> AcquisitionKind:
        if isinstance(name, AcquisitionKind):
            return name
        lowered = name.strip().lower()
        for kind in cls:
            if lowered in (kind.value, kind.tag.lower()):
                return kind
        known = " | ".join(k.value for k in cls)
        raise InputError(f"Unknown acquisition '{name}' (expected {known})")


def _pdf(z: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi)


def _scalar_or_array(value: np.ndarray) -> np.ndarray | float:
    return float(value) if np.ndim(value) == 0 else value


def _z(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu, sigma, t = np.broadcast_arrays(
        np.asarray(mu, dtype=float), np.asarray(sigma, dtype=float), np.asarray(t, dtype=float)
    )
    positive = sigma > DEGENERATE_STD
    z = np.where(positive, (mu - t) / np.where(positive, sigma, 1.0), np.inf)
    return z, positive


def acq_knudde_single(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> np.ndarray | float:
    """
    Entropy-loss criterion: 0.5 ln(2 pi e sigma^2) - ln(Phi(tau) (1 - Phi(tau))).

    A degenerate sigma returns -inf.
    """
    z, positive = _z(mu, sigma, t)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), z.shape)
    tau = -z
    with np.errstate(divide="ignore", invalid="ignore"):
        value = 0.5 * (LOG_2PI_E + 2.0 * np.log(np.where(positive, sigma, 1.0)))
        value = value - (log_ndtr(tau) + log_ndtr(-tau))
    return _scalar_or_array(np.where(positive, value, -np.inf))


def acq_tmse_single(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> np.ndarray | float:
    """Targeted MSE: sigma * phi((mu - t) / sigma)."""
    z, positive = _z(mu, sigma, t)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), z.shape)
    return _scalar_or_array(np.where(positive, sigma * _pdf(np.where(positive, z, 0.0)), 0.0))


def acq_bichon_single(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> np.ndarray | float:
    """Expected feasibility E[max(0, sigma - |t - g|)], g ~ N(mu, sigma^2)."""
    z, positive = _z(mu, sigma, t)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), z.shape)
    z = np.where(positive, z, 0.0)
    zp, zm = z + 1.0, z - 1.0
    bracket = (
        zp * ndtr(zp) + zm * ndtr(zm) + _pdf(zp) + _pdf(zm) - 2.0 * z * ndtr(z) - 2.0 * _pdf(z)
    )
    return _scalar_or_array(np.where(positive, sigma * np.maximum(bracket, 0.0), 0.0))


def acq_ranjan_single(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> np.ndarray | float:
    """
    E[max(0, sigma^2 - (t - g)^2)], g ~ N(mu, sigma^2).

    sigma^2 [z^2 (Phi(z-1) - Phi(z+1)) + (z+1) phi(z-1) - (z-1) phi(z+1)]
    """
    z, positive = _z(mu, sigma, t)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), z.shape)
    z = np.where(positive, z, 0.0)
    zp, zm = z + 1.0, z - 1.0
    bracket = z * z * (ndtr(zm) - ndtr(zp)) + zp * _pdf(zm) - zm * _pdf(zp)
    return _scalar_or_array(np.where(positive, sigma**2 * np.maximum(bracket, 0.0), 0.0))


def acq_echard_single(mu: np.ndarray, sigma: np.ndarray, t: np.ndarray) -> np.ndarray | float:
    """-|mu - t| / sigma; -inf where sigma is degenerate."""
    z, positive = _z(mu, sigma, t)
    return _scalar_or_array(np.where(positive, -np.abs(np.where(positive, z, 0.0)), -np.inf))


_SINGLE: dict[AcquisitionKind, SingleCriterion] = {
    AcquisitionKind.TMSE: acq_tmse_single,
    AcquisitionKind.BICHON: acq_bichon_single,
    AcquisitionKind.RANJAN: acq_ranjan_single,
    AcquisitionKind.ECHARD: acq_echard_single,
}


def acq_knudde(jp: JointPrediction, thresholds: Sequence[float]) -> np.ndarray | float:
    """Sum of the per-constraint entropy-loss criteria."""
    parts = acq_knudde_single(jp.means, jp.stds, np.asarray(thresholds, dtype=float))
    return _scalar_or_array(np.sum(np.asarray(parts), axis=-1))


def composite_index(jp: JointPrediction, thresholds: Sequence[float]) -> np.ndarray:
    """argmax_l (mu_l - t_l); ties go to the lowest index."""
    return np.argmax(jp.means - np.asarray(thresholds, dtype=float), axis=-1)


def acq_composite(
    kind: AcquisitionKind | str, jp: JointPrediction, thresholds: Sequence[float]
) -> np.ndarray | float:
    """Single-constraint criterion evaluated on the most violated (raw-scale) constraint."""
    kind = AcquisitionKind.parse(kind)
    if kind not in _SINGLE:
        raise InputError(f"'{kind.value}' has no composite form")
    t = np.broadcast_to(np.asarray(thresholds, dtype=float), jp.means.shape)
    k = composite_index(jp, thresholds)[..., None]
    mu = np.take_along_axis(jp.means, k, axis=-1)[..., 0]
    sigma = np.take_along_axis(jp.stds, k, axis=-1)[..., 0]
    t_k = np.take_along_axis(t, k, axis=-1)[..., 0]
    return _SINGLE[kind](mu, sigma, t_k)


def prob_boundary(jp: JointPrediction) -> np.ndarray | float:
    """p(F) p(I) = p(F) (1 - p(F)), in [0, 0.25]."""
    pf = np.asarray(prob_feasible(jp))
    pi = np.asarray(prob_infeasible(jp))
    return _scalar_or_array(pf * pi)


def joint_entropy(stds: np.ndarray) -> np.ndarray | float:
    """
    Differential entropy of a diagonal Gaussian with the given stds (last axis).

    Examples:
        >>> round(joint_entropy(np.array([1.0])), 6)
        1.418939
    """
    stds = np.asarray(stds, dtype=float)
    if stds.ndim == 0:
        stds = stds[None]
    with np.errstate(divide="ignore"):
        value = 0.5 * stds.shape[-1] * LOG_2PI_E + np.sum(np.log(stds), axis=-1)
    return _scalar_or_array(value)


def positive_entropy(entropy: np.ndarray) -> np.ndarray | float:
    """
    Strictly increasing map of entropy onto (0, inf).

    Identity from 1 nat upwards, exp(h - 1) below; value and slope match at 1.

    Examples:
        >>> positive_entropy(np.array(2.0))
        2.0
        >>> round(positive_entropy(np.array(1.0 - np.log(4.0))), 6)
        0.25
    """
    h = np.asarray(entropy, dtype=float)
    return _scalar_or_array(np.where(h >= 1.0, h, np.exp(np.minimum(h, 1.0) - 1.0)))


def acq_pbe(
    jp: JointPrediction, entropy_floor: float | None = None, positive: bool = True
) -> np.ndarray | float:
    """
    Probability of boundary times joint entropy of the standardised predictions.

    The entropy goes through ``positive_entropy`` unless ``positive`` is off, so a
    confident model still ranks points by boundary probability instead of
    preferring p(boundary) = 0. ``entropy_floor`` clamps the entropy from below
    before that. Zero wherever the boundary probability is zero.
    """
    boundary = np.asarray(prob_boundary(jp))
    entropy = np.asarray(joint_entropy(jp.stds_normalized))
    if entropy_floor is not None:
        entropy = np.maximum(entropy, entropy_floor)
    if positive:
        entropy = np.asarray(positive_entropy(entropy))
    with np.errstate(invalid="ignore"):
        value = np.where(boundary > 0.0, boundary * entropy, 0.0)
    return _scalar_or_array(value)


def log_prob_boundary(jp: JointPrediction) -> np.ndarray | float:
    """
    ln p(F) + ln p(I), finite far into either region.

    Where p(F) rounds to 1, ln p(I) falls back to ln sum_l Phi(-tau_l), its
    first-order form.
    """
    taus = np.asarray(jp.taus, dtype=float)
    log_pf = np.sum(log_ndtr(taus), axis=-1)
    with np.errstate(divide="ignore"):
        direct = np.log(-np.expm1(np.minimum(log_pf, -1e-300)))
        tail = logsumexp(log_ndtr(-taus), axis=-1)
    log_pi = np.where(log_pf > -1e-12, tail, direct)
    return _scalar_or_array(log_pf + log_pi)


def log_acq_pbe(jp: JointPrediction, entropy_floor: float | None = None) -> np.ndarray | float:
    """Natural log of ``acq_pbe`` with the positive entropy map; same maximiser."""
    entropy = np.asarray(joint_entropy(jp.stds_normalized))
    if entropy_floor is not None:
        entropy = np.maximum(entropy, entropy_floor)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_entropy = np.where(entropy >= 1.0, np.log(np.maximum(entropy, 1.0)), entropy - 1.0)
    return _scalar_or_array(np.asarray(log_prob_boundary(jp)) + log_entropy)


def evaluate_acquisition(
    kind: AcquisitionKind | str,
    jp: JointPrediction,
    thresholds: Sequence[float],
    entropy_floor: float | None = None,
    positive: bool = True,
) -> np.ndarray | float:
    kind = AcquisitionKind.parse(kind)
    if kind is AcquisitionKind.KNUDDE:
        return acq_knudde(jp, thresholds)
    if kind is AcquisitionKind.PBE:
        return acq_pbe(jp, entropy_floor, positive)
    return acq_composite(kind, jp, thresholds)


def to_finite(values: np.ndarray) -> np.ndarray:
    """Map -inf and NaN to the sentinel; +inf is capped at its mirror."""
    return np.nan_to_num(
        np.asarray(values, dtype=float), nan=SENTINEL, neginf=SENTINEL, posinf=-SENTINEL
    )


def make_acquisition(
    kind: AcquisitionKind | str,
    surr: MultiSurrogate,
    entropy_floor: float | None = None,
    positive: bool = True,
    log_domain: bool = False,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Batch utility (k, n) -> (k,) for the optimizer, always finite.

    ``log_domain`` swaps PBE (with the positive entropy map) for its logarithm,
    which has the same maximiser but no zero plateaus. Other kinds ignore it.
    """
    kind = AcquisitionKind.parse(kind)
    thresholds = surr.thresholds
    use_log = log_domain and positive and kind is AcquisitionKind.PBE

    def utility(points: np.ndarray) -> np.ndarray:
        jp = joint_predict(surr, np.atleast_2d(points))
        if use_log:
            values = log_acq_pbe(jp, entropy_floor)
        else:
            values = evaluate_acquisition(kind, jp, thresholds, entropy_floor, positive)
        return to_finite(np.atleast_1d(values))

    return utility


def truncated_gaussian_entropy(
    mu: float, sigma: float, lower: float = -np.inf, upper: float = np.inf
) -> float:
    """Entropy of N(mu, sigma^2) truncated to [lower, upper]; infinite limits allowed."""
    if not sigma > 0:
        raise InputError(f"sigma must be > 0, got {sigma}")
    if not upper > lower:
        raise InputError("upper must exceed lower")
    psi = (lower - mu) / sigma
    omega = (upper - mu) / sigma
    mass = float(ndtr(omega) - ndtr(psi))
    edge_lo = psi * _pdf(psi) if np.isfinite(psi) else 0.0
    edge_hi = omega * _pdf(omega) if np.isfinite(omega) else 0.0
    log_scale = np.log(np.sqrt(2.0 * np.pi * np.e) * sigma * mass)
    return float(log_scale + (edge_lo - edge_hi) / (2.0 * mass))


def knudde_four_term(mu: float, sigma: float, t: float) -> float:
    """
    Entropy-loss criterion assembled from full and truncated entropies, lower limit at -inf.

    3 H[g] - H[g | g > t] - H[g | g < t] - H[g | g < -inf], the last term being zero.
    """
    full = 0.5 * (LOG_2PI_E + 2.0 * np.log(sigma))
    above = truncated_gaussian_entropy(mu, sigma, lower=t)
    below = truncated_gaussian_entropy(mu, sigma, upper=t)
    return float(3.0 * full - above - below)


def knudde_tail_correction(mu: float, sigma: float, t: float) -> float:
    """
    Difference between the four-term and simplified entropy-loss forms.

    tau phi(tau) (1 - 2 Phi(tau)) / (2 Phi(tau) (1 - Phi(tau))); zero at tau = 0.
    """
    tau = (t - mu) / sigma
    cdf = float(ndtr(tau))
    return float(tau * _pdf(tau) * (1.0 - 2.0 * cdf) / (2.0 * cdf * (1.0 - cdf)))
