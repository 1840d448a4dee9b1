"""
Classifier scoring and the rank tests used to compare methods.

Positive class is "feasible". Informedness is bookmaker informedness,
TPR + TNR - 1.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import numpy as np
from scipy import stats

from .core.model import ConfusionMatrix, TestResult
from .errors import InputError

logger = logging.getLogger(__name__)

Alternative = Literal["greater", "less"]
TestMethod = Literal["auto", "exact", "approx"]

WILCOXON_EXACT_MAX = 20
MANN_WHITNEY_EXACT_MAX = 12
UNMATCHED_METHODS = frozenset({"lhs-only"})
_TIE_EPS = 1e-9


def confusion_matrix(predicted: np.ndarray, actual: np.ndarray) -> ConfusionMatrix:
    predicted = np.asarray(predicted, dtype=bool)
    actual = np.asarray(actual, dtype=bool)
    if predicted.shape != actual.shape:
        raise InputError(f"Label shapes differ: {predicted.shape} vs {actual.shape}")
    return ConfusionMatrix(
        tp=int(np.count_nonzero(predicted & actual)),
        fp=int(np.count_nonzero(predicted & ~actual)),
        tn=int(np.count_nonzero(~predicted & ~actual)),
        fn=int(np.count_nonzero(~predicted & actual)),
    )


def informedness(cm: ConfusionMatrix) -> float:
    """
    TPR + TNR - 1.

    When ground truth lacks a class, that class's rate counts as 1 if the other
    class is classified perfectly; otherwise the value is NaN.
    """
    positives = cm.tp + cm.fn
    negatives = cm.tn + cm.fp
    if positives and negatives:
        return cm.tp / positives + cm.tn / negatives - 1.0
    if not positives and not negatives:
        logger.warning("Informedness undefined: empty confusion matrix")
        return math.nan
    if not positives:
        if cm.fp == 0:
            return 1.0
        logger.warning("Informedness undefined: no feasible points, %d false positives", cm.fp)
        return math.nan
    if cm.fn == 0:
        return 1.0
    logger.warning("Informedness undefined: no infeasible points, %d false negatives", cm.fn)
    return math.nan


def median_mad(values: Sequence[float]) -> tuple[float, float]:
    """
    Median and unscaled median absolute deviation.

    Examples:
        >>> median_mad([1.0, 2.0, 3.0])
        (2.0, 1.0)
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InputError("median_mad needs at least one value")
    median = float(np.median(arr))
    return median, float(np.median(np.abs(arr - median)))


def _signed_rank_exact(diffs: np.ndarray, alternative: Alternative) -> tuple[float, float]:
    """Exact null distribution of W+ over sign assignments, midranks doubled to integers."""
    ranks = stats.rankdata(np.abs(diffs))
    doubled = np.rint(2.0 * ranks).astype(int)
    counts = np.zeros(int(doubled.sum()) + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    observed = int(doubled[diffs > 0].sum())
    total = counts.sum()
    if alternative == "greater":
        tail = counts[observed:].sum()
    else:
        tail = counts[: observed + 1].sum()
    return observed / 2.0, float(min(tail / total, 1.0))


def wilcoxon_signed_rank_one_sided(
    a: Sequence[float],
    b: Sequence[float],
    alternative: Alternative = "greater",
    alpha: float = 0.05,
    method: TestMethod = "auto",
) -> TestResult:
    """
    Paired one-sided signed-rank test of a - b.

    Zero differences are dropped; ties share average ranks. Exact enumeration for
    up to 20 non-zero differences, normal approximation with continuity and tie
    corrections otherwise.
    """
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError(f"Paired samples must have equal lengths, got {x.shape} and {y.shape}")
    diffs = x - y
    diffs = diffs[diffs != 0.0]
    if diffs.size == 0:
        return TestResult(statistic=0.0, p_value=1.0, corrected_alpha=alpha, method="degenerate")

    use_exact = method == "exact" or (method == "auto" and diffs.size <= WILCOXON_EXACT_MAX)
    if use_exact:
        statistic, p_value = _signed_rank_exact(diffs, alternative)
        return TestResult(statistic, p_value, alpha, "exact")
    result = stats.wilcoxon(
        diffs, alternative=alternative, zero_method="wilcox", correction=True, method="asymptotic"
    )
    return TestResult(float(result.statistic), float(result.pvalue), alpha, "approx")


def _mann_whitney_exact(
    x: np.ndarray, y: np.ndarray, alternative: Alternative
) -> tuple[float, float]:
    pooled = stats.rankdata(np.concatenate([x, y]))
    na = x.size
    offset = na * (na + 1) / 2.0
    observed = float(pooled[:na].sum() - offset)
    hits = 0
    total = 0
    for combo in combinations(range(pooled.size), na):
        u = pooled[list(combo)].sum() - offset
        total += 1
        if alternative == "greater":
            hits += u >= observed - _TIE_EPS
        else:
            hits += u <= observed + _TIE_EPS
    return observed, hits / total


def mann_whitney_u_one_sided(
    a: Sequence[float],
    b: Sequence[float],
    alternative: Alternative = "greater",
    alpha: float = 0.05,
    method: TestMethod = "auto",
) -> TestResult:
    """Unpaired one-sided rank-sum test; U is reported for ``a``."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.size == 0 or y.size == 0:
        raise InputError("Mann-Whitney needs two non-empty samples")
    use_exact = method == "exact" or (
        method == "auto" and x.size + y.size <= MANN_WHITNEY_EXACT_MAX
    )
    if use_exact:
        statistic, p_value = _mann_whitney_exact(x, y, alternative)
        return TestResult(statistic, p_value, alpha, "exact")
    result = stats.mannwhitneyu(
        x, y, alternative=alternative, method="asymptotic", use_continuity=True
    )
    return TestResult(float(result.statistic), float(result.pvalue), alpha, "approx")


@dataclass(frozen=True)
class Ranking:
    """Best method by median and the methods not significantly worse than it."""

    best: str
    equivalent: tuple[str, ...]
    corrected_alpha: float
    results: dict[str, TestResult] = field(default_factory=dict)


def _finite(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return arr[np.isfinite(arr)]


def _compare(
    winner: str,
    loser: str,
    per_method_values: Mapping[str, Sequence[float]],
    alpha: float,
) -> TestResult:
    """One-sided test that ``winner`` beats ``loser``."""
    w = np.asarray(per_method_values[winner], dtype=float)
    lo = np.asarray(per_method_values[loser], dtype=float)
    if winner in UNMATCHED_METHODS or loser in UNMATCHED_METHODS:
        if not (np.isfinite(w).any() and np.isfinite(lo).any()):
            return TestResult(0.0, 1.0, alpha, "degenerate")
        return mann_whitney_u_one_sided(_finite(w), _finite(lo), "greater", alpha)
    if w.shape != lo.shape:
        raise InputError(
            f"Unmatched repetitions: {winner} has {w.size}, {loser} has {lo.size}"
        )
    keep = np.isfinite(w) & np.isfinite(lo)
    return wilcoxon_signed_rank_one_sided(w[keep], lo[keep], "greater", alpha)


def _medians(per_method_values: Mapping[str, Sequence[float]]) -> dict[str, float]:
    medians = {}
    for name, values in per_method_values.items():
        finite = _finite(values)
        medians[name] = median_mad(finite)[0] if finite.size else -math.inf
    return medians


def best_and_equivalents(
    per_method_values: Mapping[str, Sequence[float]], alpha: float = 0.05
) -> Ranking:
    """
    Best median and its statistical equivalents under a Bonferroni-corrected alpha.

    Methods in ``UNMATCHED_METHODS`` are compared with Mann-Whitney U, all
    other pairs with the paired signed-rank test.
    """
    if not per_method_values:
        raise InputError("best_and_equivalents needs at least one method")
    medians = _medians(per_method_values)
    best = max(medians, key=lambda name: medians[name])
    others = [name for name in per_method_values if name != best]
    corrected = alpha / max(len(others), 1)
    results = {name: _compare(best, name, per_method_values, corrected) for name in others}
    equivalent = tuple(name for name in others if not results[name].reject)
    return Ranking(best=best, equivalent=equivalent, corrected_alpha=corrected, results=results)


def beaten_by(
    per_method_values: Mapping[str, Sequence[float]], alpha: float = 0.05
) -> dict[str, int]:
    """For each method, how many others beat it significantly at the corrected alpha."""
    names = list(per_method_values)
    corrected = alpha / max(len(names) - 1, 1)
    counts = {}
    for name in names:
        counts[name] = sum(
            _compare(other, name, per_method_values, corrected).reject
            for other in names
            if other != name
        )
    return counts
