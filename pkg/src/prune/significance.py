"""Bootstrap significance test of first-stage weights and mask construction.

第1段階の重みに対するブートストラップ有意性検定とマスク構築を行うモジュール.

A parameter is kept iff ``t1 * t2 > 0``, where ``t1`` and ``t2`` are the ``alpha/2`` and
``1 - alpha/2`` type-7 quantiles of the bootstrapped column means. A product of exactly zero
prunes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from metrics.distribution import quantiles
from metrics.normality import jarque_bera
from net.topology import ConnectionMask, FloatArray, parameter_names
from utils.errors import InsufficientDataError

if TYPE_CHECKING:
    from prune.config import BootstrapConfig
    from prune.stage1 import WeightSampleMatrix


@dataclass(frozen=True)
class ParameterTest:
    """Bootstrap interval and decision for one parameter.

    1つのパラメータに対するブートストラップ区間と判定.
    """

    index: int
    name: str
    t1: float
    t2: float
    keep: bool
    mean: float
    jb_statistic: float | None = None
    jb_normal: bool | None = None


@dataclass(frozen=True)
class SignificanceReport:
    """Per-parameter bootstrap results and the resulting pruning ratio.

    パラメータごとの検定結果と剪定率.
    """

    tests: tuple[ParameterTest, ...]
    alpha: float
    n_resamples: int
    n_systems: int

    @property
    def pruning_ratio(self) -> float:
        """Fraction of parameters pruned.

        Returns:
            float: ``count(keep = false) / m`` / 剪定されたパラメータの割合
        """
        return sum(not test.keep for test in self.tests) / len(self.tests)

    @property
    def n_pruned(self) -> int:  # noqa: D102
        return sum(not test.keep for test in self.tests)

    @property
    def output_bias_pruned(self) -> bool:
        """Whether ``B2`` was pruned, which leaves a zero-intercept model.

        Returns:
            bool: True if the last parameter is pruned / 出力バイアスが剪定された場合True
        """
        return not self.tests[-1].keep

    @property
    def normal_fraction(self) -> float | None:
        """Fraction of columns passing the Jarque-Bera check, None when no column was testable.

        Returns:
            float | None: Fraction of normal-looking columns / 正規と判定された列の割合
        """
        flags = [test.jb_normal for test in self.tests if test.jb_normal is not None]
        return sum(flags) / len(flags) if flags else None

    def mask(self) -> ConnectionMask:
        """Active flags in canonical order.

        Returns:
            ConnectionMask: ``keep`` per parameter / パラメータごとの保持フラグ
        """
        return np.array([test.keep for test in self.tests], dtype=np.bool_)

    def to_dict(self) -> dict[str, object]:
        """Plain structure for JSON output.

        Returns:
            dict[str, object]: Report fields / レポートの内容
        """
        return {
            "alpha": self.alpha,
            "n_resamples": self.n_resamples,
            "n_systems": self.n_systems,
            "pruning_ratio": self.pruning_ratio,
            "output_bias_pruned": self.output_bias_pruned,
            "parameters": [
                {
                    "index": test.index,
                    "name": test.name,
                    "t1": test.t1,
                    "t2": test.t2,
                    "keep": test.keep,
                    "mean": test.mean,
                    "jb_statistic": test.jb_statistic,
                    "jb_normal": test.jb_normal,
                }
                for test in self.tests
            ],
        }


def _resampled_means(samples: FloatArray, config: BootstrapConfig) -> FloatArray:
    """Means of ``n_resamples`` row resamples; the draws depend only on N and the seed."""
    n = samples.shape[0]
    if n < 2:  # noqa: PLR2004
        raise InsufficientDataError(f"bootstrap needs at least 2 values, got {n}")
    rng = np.random.default_rng(config.rng_seed)
    draws = rng.integers(0, n, size=(config.n_resamples, n))
    return samples[draws].mean(axis=1)


def _interval(means: FloatArray, alpha: float) -> FloatArray:
    return quantiles(means, [alpha / 2.0, 1.0 - alpha / 2.0])


def bootstrap_ci(column: npt.ArrayLike, config: BootstrapConfig) -> tuple[float, float]:
    """Percentile bootstrap interval of a column's mean.

    列の平均に対するパーセンタイル・ブートストラップ区間を求める.

    Args:
        column (npt.ArrayLike): ``N`` first-stage values of one parameter / 1パラメータのN個の値
        config (BootstrapConfig): Resample count, alpha and seed / リサンプル数、有意水準、シード

    Returns:
        tuple[float, float]: ``(t1, t2)``, the ``alpha/2`` and ``1 - alpha/2`` quantiles /
            区間の両端

    Raises:
        InsufficientDataError: If ``N < 2`` / ``N < 2`` の場合
    """
    values = np.asarray(column, dtype=np.float64).reshape(-1, 1)
    t1, t2 = _interval(_resampled_means(values, config), config.alpha)[:, 0]
    return float(t1), float(t2)


def _diagnose(column: FloatArray) -> tuple[float | None, bool | None]:
    try:
        result = jarque_bera(column)
    except InsufficientDataError:
        return None, None
    return result.statistic, result.normal_at_5pct


def build_mask(samples: WeightSampleMatrix, config: BootstrapConfig) -> tuple[ConnectionMask, SignificanceReport]:
    """Test every parameter and mask those not significantly different from zero.

    全パラメータを検定し, ゼロと有意に異ならないものをマスクする.

    All columns share the same resample draws, so a larger alpha never prunes more.

    Args:
        samples (WeightSampleMatrix): First-stage solutions / 第1段階の解
        config (BootstrapConfig): Bootstrap settings / ブートストラップ設定

    Returns:
        tuple[ConnectionMask, SignificanceReport]: Mask and full report / マスクとレポート
    """
    means = _resampled_means(samples.samples, config)
    t1, t2 = _interval(means, config.alpha)
    keep = t1 * t2 > 0
    names = parameter_names(samples.topology)
    tests: list[ParameterTest] = []
    for index, name in enumerate(names):
        column = samples.column(index)
        jb_statistic, jb_normal = _diagnose(column)
        tests.append(
            ParameterTest(
                index=index,
                name=name,
                t1=float(t1[index]),
                t2=float(t2[index]),
                keep=bool(keep[index]),
                mean=float(np.mean(column)),
                jb_statistic=jb_statistic,
                jb_normal=jb_normal,
            ),
        )
    report = SignificanceReport(
        tests=tuple(tests),
        alpha=config.alpha,
        n_resamples=config.n_resamples,
        n_systems=samples.n_systems,
    )
    return report.mask(), report
