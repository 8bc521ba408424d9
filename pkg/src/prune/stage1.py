"""First stage: an ensemble of small-system LM solves.

第1段階: 小規模システムのLM求解を多数行い, 各パラメータの分布を得るモジュール.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from net.network import Network
from net.topology import FloatArray, ParameterVector, Topology, canonical_form
from optim.lm import Termination, initialize, train
from utils.errors import InputShapeError, InsufficientDataError, Stage1FailureError
from utils.seeding import derive_seed

if TYPE_CHECKING:
    from prune.config import Stage1Config
    from series.dataset import Dataset

logger = logging.getLogger(__name__)

MAX_ATTEMPT_FACTOR = 5
_POOL_STREAM = 0
_SYSTEM_STREAM = 1


@dataclass(frozen=True)
class WeightSampleMatrix:
    """``N x m`` matrix of first-stage solutions, one row per system.

    第1段階の解を行ごとに並べた ``N x m`` 行列.
    """

    topology: Topology
    samples: FloatArray

    def __post_init__(self) -> None:
        """Validate shape and finiteness, then freeze."""
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 2 or samples.shape[1] != self.topology.n_params:  # noqa: PLR2004
            raise InputShapeError(f"sample matrix of shape {samples.shape} does not fit topology {self.topology}")
        if not np.all(np.isfinite(samples)):
            raise InputShapeError("sample matrix holds non-finite values")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n_systems(self) -> int:
        """Number of rows ``N``.

        Returns:
            int: Row count / 行数
        """
        return int(self.samples.shape[0])

    def column(self, index: int) -> FloatArray:
        """Samples of one parameter.

        Args:
            index (int): Canonical parameter index / パラメータ番号

        Returns:
            FloatArray: ``N`` values / ``N`` 個の値
        """
        return self.samples[:, index]

    def means(self) -> ParameterVector:
        """Column means, usable as a warm start.

        Returns:
            ParameterVector: Mean of every parameter / 各パラメータの平均
        """
        return np.asarray(self.samples.mean(axis=0), dtype=np.float64)


def _solve_system(
    topology: Topology,
    dataset: Dataset,
    pool: npt.NDArray[np.intp],
    size: int,
    config: Stage1Config,
    seed: int,
) -> ParameterVector | None:
    """Solve one randomly drawn system; None when the solve diverges."""
    rng = np.random.default_rng(seed)
    if config.redraw_subset:
        pool = rng.choice(len(dataset), size=pool.size, replace=False)
    rows = rng.choice(pool, size=size, replace=False)
    net = Network.create(topology, initialize(topology, int(rng.integers(2**62))))
    outcome = train(net, dataset.take(rows), config.lm, seed)
    if outcome.termination == Termination.DIVERGED or not np.all(np.isfinite(outcome.params)):
        return None
    return canonical_form(outcome.params, topology) if config.canonicalize else outcome.params


def stage1_ensemble(topology: Topology, dataset: Dataset, config: Stage1Config) -> WeightSampleMatrix:
    """Solve N small systems drawn from an eligible subset and stack the solutions.

    適格部分集合から抽出したN個の小規模システムを解き, 解を積み重ねる.

    The eligible subset (``ceil(subset_fraction * n)`` samples) is drawn once per ensemble.
    System ``i`` draws its samples without replacement and a fresh initialization from a stream
    derived from ``(rng_seed, i, retry)``, so row ``i`` never depends on other rows. Diverged
    solves are redrawn; more than ``4 N`` redraws in total raise. Rows are stored in canonical form
    (every ``W2[j] >= 0``, hidden nodes by decreasing ``W2``) unless ``canonicalize`` is off, so
    equivalent solutions land on the same values.

    Args:
        topology (Topology): Network shape / ネットワーク構造
        dataset (Dataset): Training samples / 学習サンプル
        config (Stage1Config): Ensemble settings / アンサンブル設定

    Returns:
        WeightSampleMatrix: One solved parameter vector per system / システムごとの解

    Raises:
        InsufficientDataError: If the data or the eligible subset is smaller than a system /
            データまたは適格部分集合がシステムより小さい場合
        Stage1FailureError: If too many solves diverge / 発散が多すぎる場合
    """
    n = len(dataset)
    n_systems, size = config.resolve(n, topology.n_params)
    if n < size:
        raise InsufficientDataError(f"{dataset.name}: {n} samples cannot form a system of {size} equations")
    pool_size = config.pool_size(n)
    if pool_size < size:
        raise InsufficientDataError(
            f"{dataset.name}: eligible subset of {pool_size} samples is smaller than a system of {size} equations",
        )
    pool_rng = np.random.default_rng(derive_seed(config.rng_seed, _POOL_STREAM))
    pool = np.sort(pool_rng.choice(n, size=pool_size, replace=False))

    rows: list[ParameterVector] = []
    failures = 0
    budget = (MAX_ATTEMPT_FACTOR - 1) * n_systems
    for index in range(n_systems):
        retry = 0
        while True:
            seed = derive_seed(config.rng_seed, _SYSTEM_STREAM, index, retry)
            solution = _solve_system(topology, dataset, pool, size, config, seed)
            if solution is not None:
                rows.append(solution)
                break
            failures += 1
            retry += 1
            logger.warning("Stage-1 system %d diverged, redrawing (retry %d)", index, retry)
            if failures > budget:
                raise Stage1FailureError(
                    f"{dataset.name}: {failures} diverged solves exceed the budget for {n_systems} systems",
                )
    logger.debug("Stage-1 solved %d systems of %d equations from a pool of %d", n_systems, size, pool_size)
    return WeightSampleMatrix(topology=topology, samples=np.vstack(rows))
