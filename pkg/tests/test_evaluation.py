"""Tests for classifier scoring and the method-comparison tests."""

import math

import numpy as np
import pytest
from scipy import stats

from feasimap.core.model import ConfusionMatrix
from feasimap.errors import InputError
from feasimap.evaluation import (
    beaten_by,
    best_and_equivalents,
    confusion_matrix,
    informedness,
    mann_whitney_u_one_sided,
    median_mad,
    wilcoxon_signed_rank_one_sided,
)


def test_confusion_matrix_counts():
    """Test TP/FP/TN/FN with feasible as the positive class."""
    predicted = np.array([True, True, False, False, True])
    actual = np.array([True, False, False, True, True])
    cm = confusion_matrix(predicted, actual)
    assert cm == ConfusionMatrix(tp=2, fp=1, tn=1, fn=1)
    assert cm.total == 5


def test_confusion_matrix_shape_mismatch():
    """Test that label vectors of different lengths are rejected."""
    with pytest.raises(InputError):
        confusion_matrix(np.array([True]), np.array([True, False]))


def test_informedness_examples():
    """Test perfect, inverted and chance-level classifiers."""
    assert informedness(ConfusionMatrix(tp=10, fp=0, tn=90, fn=0)) == 1.0
    assert informedness(ConfusionMatrix(tp=0, fp=90, tn=0, fn=10)) == -1.0
    assert informedness(ConfusionMatrix(tp=5, fp=45, tn=45, fn=5)) == pytest.approx(0.0)


def test_informedness_all_positive_prediction_is_zero():
    """Test that predicting everything feasible scores TPR 1, TNR 0."""
    assert informedness(ConfusionMatrix(tp=30, fp=70, tn=0, fn=0)) == 0.0


def test_informedness_missing_class():
    """Test the degenerate rule when ground truth lacks one class."""
    assert informedness(ConfusionMatrix(tp=0, fp=0, tn=100, fn=0)) == 1.0
    assert math.isnan(informedness(ConfusionMatrix(tp=0, fp=3, tn=97, fn=0)))
    assert informedness(ConfusionMatrix(tp=100, fp=0, tn=0, fn=0)) == 1.0
    assert math.isnan(informedness(ConfusionMatrix(tp=98, fp=0, tn=0, fn=2)))
    assert math.isnan(informedness(ConfusionMatrix(tp=0, fp=0, tn=0, fn=0)))


def test_median_mad():
    """Test median and unscaled MAD, including an even-length sample."""
    assert median_mad([1.0, 2.0, 3.0]) == (2.0, 1.0)
    assert median_mad([1.0, 2.0, 4.0, 10.0]) == (3.0, 1.5)
    with pytest.raises(InputError):
        median_mad([])


def test_wilcoxon_all_positive_exact_p():
    """Test that 21 all-positive distinct differences give p = 2^-21 exactly."""
    a = np.arange(1.0, 22.0) + 0.5
    b = np.zeros(21)
    result = wilcoxon_signed_rank_one_sided(a, b, "greater", method="exact")
    assert result.method == "exact"
    assert result.p_value == 2.0**-21
    assert result.statistic == 21 * 22 / 2


def test_wilcoxon_exact_matches_scipy_without_ties():
    """Test the exact enumeration against scipy's exact distribution."""
    rng = np.random.default_rng(3)
    for _ in range(10):
        diffs = rng.normal(0.2, 1.0, size=12)
        ours = wilcoxon_signed_rank_one_sided(diffs, np.zeros(12), "greater")
        ref = stats.wilcoxon(diffs, alternative="greater", method="exact")
        assert ours.method == "exact"
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def _signed_ranks(negative_sum: int, n: int = 21) -> np.ndarray:
    """Differences +-1..n whose negative ranks sum to ``negative_sum``."""
    signs = np.ones(n)
    remaining = negative_sum
    for rank in range(n, 0, -1):
        if rank <= remaining:
            signs[rank - 1] = -1.0
            remaining -= rank
    return signs * np.arange(1.0, n + 1.0)


@pytest.mark.parametrize("negative_sum", range(55, 80, 3))
def test_wilcoxon_branches_agree_at_decision_boundary(negative_sum):
    """Test exact and approximate p-values within 0.01 at n = 21 around p = 0.05."""
    diffs = _signed_ranks(negative_sum)
    exact = wilcoxon_signed_rank_one_sided(diffs, np.zeros(21), "greater", method="exact")
    approx = wilcoxon_signed_rank_one_sided(diffs, np.zeros(21), "greater", method="approx")
    assert exact.statistic == 231 - negative_sum
    assert 0.01 < exact.p_value < 0.15
    assert approx.p_value == pytest.approx(exact.p_value, abs=0.01)


def test_wilcoxon_exact_and_normal_approximation_agree():
    """Test exact and approximate p-values within 0.01 on random n = 21 samples."""
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = rng.normal(0.3, 1.0, size=21)
        b = rng.normal(0.0, 1.0, size=21)
        exact = wilcoxon_signed_rank_one_sided(a, b, "greater", method="exact")
        approx = wilcoxon_signed_rank_one_sided(a, b, "greater", method="approx")
        assert approx.method == "approx"
        assert exact.p_value == pytest.approx(approx.p_value, abs=0.01)


def test_wilcoxon_handles_ties_and_zeros():
    """Test that zero differences are dropped and tied ranks still give a valid p."""
    a = [1.0, 2.0, 2.0, 3.0, 0.0, 5.0]
    b = [0.0, 1.0, 1.0, 2.0, 0.0, 4.0]
    result = wilcoxon_signed_rank_one_sided(a, b, "greater")
    # five tied +1 differences, one zero
    assert result.p_value == pytest.approx(2.0**-5)
    assert result.statistic == 15.0


def test_wilcoxon_degenerate_and_direction():
    """Test identical samples and the 'less' alternative."""
    same = wilcoxon_signed_rank_one_sided([1.0, 2.0], [1.0, 2.0])
    assert same.method == "degenerate"
    assert same.p_value == 1.0
    assert not same.reject

    less = wilcoxon_signed_rank_one_sided([0.0] * 6, [1.0, 2.0, 3.0, 4.0, 5.0, 6.0], "less")
    assert less.p_value == pytest.approx(2.0**-6)


def test_wilcoxon_rejects_unpaired_lengths():
    """Test that paired samples of different lengths raise InputError."""
    with pytest.raises(InputError):
        wilcoxon_signed_rank_one_sided([1.0, 2.0], [1.0])


def test_mann_whitney_exact_matches_scipy():
    """Test the exact rank-sum enumeration against scipy for small tie-free samples."""
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = rng.normal(0.5, 1.0, size=5)
        b = rng.normal(0.0, 1.0, size=6)
        ours = mann_whitney_u_one_sided(a, b, "greater")
        ref = stats.mannwhitneyu(a, b, alternative="greater", method="exact")
        assert ours.method == "exact"
        assert ours.statistic == pytest.approx(ref.statistic)
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_mann_whitney_exact_and_approximation_agree():
    """Test that exact and normal p-values agree within 0.03 for 8 vs 8 samples."""
    rng = np.random.default_rng(2)
    for _ in range(5):
        a = rng.normal(0.5, 1.0, size=8)
        b = rng.normal(0.0, 1.0, size=8)
        exact = mann_whitney_u_one_sided(a, b, "greater", method="exact")
        approx = mann_whitney_u_one_sided(a, b, "greater", method="approx")
        assert exact.p_value == pytest.approx(approx.p_value, abs=0.03)


def test_mann_whitney_complete_separation():
    """Test that 3 values all above 3 others give p = 1 / C(6, 3)."""
    result = mann_whitney_u_one_sided([4.0, 5.0, 6.0], [1.0, 2.0, 3.0], "greater")
    assert result.p_value == pytest.approx(1.0 / 20.0)
    assert result.statistic == 9.0


def test_best_and_equivalents_bonferroni():
    """Test that two competitors halve alpha and a clearly worse method is rejected."""
    reps = 21
    base = np.linspace(0.5, 0.9, reps)
    values = {
        "pbe": base + 0.05,
        "ranjan": base + 0.05 + np.linspace(-1e-3, 1e-3, reps),
        "tmse": base - 0.3,
    }
    ranking = best_and_equivalents(values, alpha=0.05)
    assert ranking.corrected_alpha == pytest.approx(0.025)
    assert ranking.best in {"pbe", "ranjan"}
    assert "tmse" not in ranking.equivalent
    assert ranking.results["tmse"].p_value < 0.025
    assert len(ranking.equivalent) == 1


def test_best_and_equivalents_ignores_nan_runs():
    """Test that aborted (NaN) runs are dropped pairwise."""
    values = {"a": [0.9, 0.8, math.nan, 0.85], "b": [0.1, math.nan, 0.2, 0.15]}
    ranking = best_and_equivalents(values)
    assert ranking.best == "a"
    assert ranking.corrected_alpha == 0.05


def test_lhs_baseline_uses_unpaired_test():
    """Test that comparisons with lhs-only go through Mann-Whitney."""
    values = {"pbe": [0.9, 0.8, 0.95, 0.85], "lhs-only": [0.1, 0.3, 0.2, 0.15, 0.25]}
    ranking = best_and_equivalents(values)
    assert ranking.best == "pbe"
    assert ranking.results["lhs-only"].method == "exact"
    assert ranking.results["lhs-only"].p_value == pytest.approx(1.0 / 126.0)


def test_beaten_by_counts():
    """Test beat counts for a strict three-way ordering."""
    reps = 21
    base = np.linspace(0.0, 0.2, reps)
    values = {"good": base + 0.7, "middle": base + 0.4, "poor": base}
    counts = beaten_by(values, alpha=0.05)
    assert counts == {"good": 0, "middle": 1, "poor": 2}


def test_best_needs_methods():
    """Test that an empty method map is an input error."""
    with pytest.raises(InputError):
        best_and_equivalents({})


@pytest.mark.parametrize("test", [wilcoxon_signed_rank_one_sided, mann_whitney_u_one_sided])
@pytest.mark.parametrize("size", [10, 21])
def test_p_values_fall_as_first_sample_shifts_up(test, size):
    """Test that shifting every element of a upward never raises the a-greater p-value."""
    rng = np.random.default_rng(size)
    for _ in range(5):
        a = rng.normal(0.0, 1.0, size=size)
        b = rng.normal(0.0, 1.0, size=size)
        p_values = [test(a + shift, b, "greater").p_value for shift in (0.0, 0.1, 0.3, 0.7, 1.5)]
        assert all(later <= earlier + 1e-12 for earlier, later in zip(p_values, p_values[1:]))


def test_informedness_invariant_under_label_swap():
    """Test that swapping feasible/infeasible in both label vectors keeps informedness."""
    rng = np.random.default_rng(8)
    for _ in range(20):
        actual = rng.random(200) < rng.uniform(0.1, 0.9)
        predicted = np.where(rng.random(200) < 0.8, actual, ~actual)
        swapped = confusion_matrix(~predicted, ~actual)
        assert informedness(swapped) == pytest.approx(
            informedness(confusion_matrix(predicted, actual)), abs=1e-12
        )


def test_median_mad_permutation_invariant():
    """Test that reordering the sample leaves median and MAD unchanged."""
    rng = np.random.default_rng(21)
    values = rng.uniform(0.5, 1.0, size=21)
    expected = median_mad(values)
    for _ in range(10):
        assert median_mad(rng.permutation(values)) == expected
