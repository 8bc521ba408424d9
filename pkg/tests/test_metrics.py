from __future__ import annotations

import numpy as np
import pytest

from metrics.distribution import box_stats, nrmse_ratio, quantiles
from metrics.forecast import Normalizer, nmae, nrmse, summarize
from metrics.normality import CRITICAL_5PCT, jarque_bera
from utils.errors import EmptyDataError, InputShapeError, InsufficientDataError, ZeroNormalizerError

N_CASES = 1000


def test_normalized_errors_on_small_example() -> None:
    assert nrmse([2.0, 2.0], [1.0, 3.0]) == pytest.approx(0.5)
    assert nmae([2.0, 2.0], [1.0, 3.0]) == pytest.approx(0.5)
    summary = summarize([2.0, 2.0], [1.0, 3.0])
    assert (summary.n, summary.obs_mean) == (2, 2.0)


def test_alternative_normalizers() -> None:
    assert nrmse([2.0, 2.0], [1.0, 3.0], normalizer=Normalizer.RANGE) == pytest.approx(0.5)
    assert nrmse([2.0, 2.0], [1.0, 3.0], normalizer=Normalizer.STD) == pytest.approx(1.0)
    assert nmae([2.0, 2.0], [1.0, 3.0], normalizer=Normalizer.STD) == pytest.approx(1.0)


def test_metric_errors() -> None:
    with pytest.raises(InputShapeError):
        nrmse([1.0, 2.0], [1.0])
    with pytest.raises(EmptyDataError):
        nmae([], [])
    with pytest.raises(ZeroNormalizerError):
        nrmse([0.0, 0.0], [-1.0, 1.0])
    with pytest.raises(ZeroNormalizerError):
        nmae([0.0, 0.0], [-2.0, -1.0])
    with pytest.raises(ZeroNormalizerError):
        nrmse([1.0, 2.0], [4.0, 4.0], normalizer=Normalizer.RANGE)


def test_metric_properties_on_random_inputs() -> None:
    rng = np.random.default_rng(31)
    for _ in range(N_CASES):
        n = int(rng.integers(1, 40))
        obs = rng.uniform(0.1, 10.0, n)
        pred = obs + rng.normal(0.0, 1.0, n)
        scale = float(rng.uniform(0.01, 100.0))
        assert nrmse(scale * pred, scale * obs) == pytest.approx(nrmse(pred, obs), rel=1e-9)
        assert nmae(scale * pred, scale * obs) == pytest.approx(nmae(pred, obs), rel=1e-9)
        assert nmae(pred, obs) <= nrmse(pred, obs) * (1.0 + 1e-12)


def test_ratio_reciprocity() -> None:
    rng = np.random.default_rng(32)
    for _ in range(N_CASES):
        a = rng.uniform(0.01, 2.0, 7)
        b = rng.uniform(0.01, 2.0, 7)
        np.testing.assert_allclose(nrmse_ratio(a, b) * nrmse_ratio(b, a), np.ones(7), rtol=1e-12)


def test_ratio_errors() -> None:
    with pytest.raises(ZeroNormalizerError):
        nrmse_ratio([0.1, 0.2], [0.1, 0.0])
    with pytest.raises(InputShapeError):
        nrmse_ratio([0.1, 0.2], [0.1])
    np.testing.assert_array_equal(nrmse_ratio([0.2, 0.3], [0.2, 0.3]), [1.0, 1.0])


def test_quantiles_interpolate_linearly() -> None:
    np.testing.assert_allclose(quantiles([1.0, 2.0, 3.0, 4.0], [0.5]), [2.5])
    np.testing.assert_allclose(quantiles([1.0, 2.0, 3.0, 4.0], [0.0, 0.25, 1.0]), [1.0, 1.75, 4.0])


def test_box_stats_flags_outlier() -> None:
    stats = box_stats([1.0, 2.0, 3.0, 4.0, 100.0])
    assert (stats.q1, stats.median, stats.q3) == (2.0, 3.0, 4.0)
    assert (stats.whisker_low, stats.whisker_high) == (1.0, 4.0)
    assert stats.outliers == (100.0,)


def test_box_stats_without_outliers() -> None:
    stats = box_stats([0.5])
    assert stats.q1 == stats.median == stats.q3 == stats.whisker_low == stats.whisker_high == 0.5
    assert stats.outliers == ()
    with pytest.raises(EmptyDataError):
        box_stats([])


def test_jarque_bera_on_symmetric_mesokurtic_sample() -> None:
    # Zero skewness and kurtosis of exactly 3.
    result = jarque_bera([-1.0, 0.0, 0.0, 0.0, 0.0, 1.0] * 2)
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.normal_at_5pct


def test_jarque_bera_rejects_skewed_sample() -> None:
    result = jarque_bera(np.random.default_rng(33).exponential(1.0, 1000))
    assert result.statistic > CRITICAL_5PCT
    assert not result.normal_at_5pct


def test_jarque_bera_accepts_normal_draws() -> None:
    flags = [jarque_bera(np.random.default_rng(seed).standard_normal(5000)).normal_at_5pct for seed in range(20)]
    assert sum(flags) >= 18


def test_jarque_bera_rejects_two_point_law() -> None:
    result = jarque_bera(np.random.default_rng(35).choice([-1.0, 1.0], size=5000))
    assert result.statistic > 100 * CRITICAL_5PCT
    assert not result.normal_at_5pct


def test_jarque_bera_is_non_negative() -> None:
    rng = np.random.default_rng(34)
    for _ in range(N_CASES):
        assert jarque_bera(rng.standard_t(3, int(rng.integers(8, 60)))).statistic >= 0.0


def test_jarque_bera_needs_varied_data() -> None:
    with pytest.raises(InsufficientDataError):
        jarque_bera(np.arange(7.0))
    with pytest.raises(InsufficientDataError):
        jarque_bera(np.full(20, 1.5))
    assert CRITICAL_5PCT == pytest.approx(5.991, abs=1e-3)
