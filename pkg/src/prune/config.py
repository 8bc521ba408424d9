"""Configuration of the first-stage ensemble and the bootstrap test.

第1段階のアンサンブルとブートストラップ検定の設定.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from optim.lm import LmConfig
from utils.errors import ConfigError

MIN_RESAMPLES = 100
MIN_SYSTEMS = 30


@dataclass(frozen=True)
class Stage1Config:
    """Small-system ensemble settings.

    小規模システム群の設定.

    ``n_systems`` and ``system_size`` default to ``None``, meaning ``max(30, pool)`` systems of ``m``
    equations each, where ``pool`` is the eligible subset size. With ``canonicalize`` each solved
    row is mapped to its sign- and order-canonical form before it is stored.
    """

    n_systems: int | None = None
    system_size: int | None = None
    subset_fraction: float = 0.10
    lm: LmConfig = field(default_factory=lambda: LmConfig(max_iters=100))
    rng_seed: int = 0
    redraw_subset: bool = False
    canonicalize: bool = True

    def __post_init__(self) -> None:
        """Validate the settings."""
        if self.n_systems is not None and self.n_systems < 2:  # noqa: PLR2004
            raise ConfigError(f"n_systems must be >= 2, got {self.n_systems}")
        if self.system_size is not None and self.system_size < 1:
            raise ConfigError(f"system_size must be >= 1, got {self.system_size}")
        if not 0 < self.subset_fraction <= 1:
            raise ConfigError(f"subset_fraction must lie in (0, 1], got {self.subset_fraction}")

    def pool_size(self, n_samples: int) -> int:
        """Size of the eligible subset for a training set.

        Args:
            n_samples (int): Training samples / 学習サンプル数

        Returns:
            int: ``ceil(subset_fraction * n_samples)``
        """
        return math.ceil(round(self.subset_fraction * n_samples, 9))

    def resolve(self, n_samples: int, n_params: int) -> tuple[int, int]:
        """Resolve defaulted sizes.

        Args:
            n_samples (int): Training samples / 学習サンプル数
            n_params (int): Parameter count ``m`` / パラメータ数

        Returns:
            tuple[int, int]: ``(n_systems, system_size)``
        """
        size = self.system_size or n_params
        count = self.n_systems or max(MIN_SYSTEMS, self.pool_size(n_samples))
        return count, size


@dataclass(frozen=True)
class BootstrapConfig:
    """Percentile bootstrap settings.

    パーセンタイル・ブートストラップの設定.
    """

    n_resamples: int = 4000
    alpha: float = 0.05
    rng_seed: int = 0

    def __post_init__(self) -> None:
        """Validate the settings."""
        if self.n_resamples < MIN_RESAMPLES:
            raise ConfigError(f"n_resamples must be >= {MIN_RESAMPLES}, got {self.n_resamples}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
