"""Classical and two-stage training pipelines.

通常のLM学習と2段階LM学習のパイプライン.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from net.network import Network
from optim.lm import LmConfig, TrainOutcome, initialize, train
from prune.significance import SignificanceReport, build_mask
from prune.stage1 import WeightSampleMatrix, stage1_ensemble

if TYPE_CHECKING:
    from net.topology import Topology
    from prune.config import BootstrapConfig, Stage1Config
    from series.dataset import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrunedFit:
    """Everything the two-stage pipeline produces.

    2段階学習の成果物一式.
    """

    network: Network
    report: SignificanceReport
    outcome: TrainOutcome
    samples: WeightSampleMatrix

    def __iter__(self):  # noqa: ANN204, D105
        return iter((self.network, self.report, self.outcome))


def classical_train(topology: Topology, dataset: Dataset, lm: LmConfig, rng_seed: int) -> tuple[Network, TrainOutcome]:
    """Train an unmasked network with a single batch LM run.

    マスクなしのネットワークを1回のバッチLMで学習する.

    Args:
        topology (Topology): Network shape / ネットワーク構造
        dataset (Dataset): Training samples / 学習サンプル
        lm (LmConfig): Solver settings / ソルバ設定
        rng_seed (int): Initialization seed / 初期化シード

    Returns:
        tuple[Network, TrainOutcome]: Trained MLP and its outcome / 学習済みMLPと結果
    """
    net = Network.create(topology, initialize(topology, rng_seed))
    outcome = train(net, dataset, lm, rng_seed)
    return net.with_params(outcome.params), outcome


def two_stage_train(  # noqa: PLR0913
    topology: Topology,
    dataset: Dataset,
    s1: Stage1Config,
    bs: BootstrapConfig,
    lm: LmConfig,
    rng_seed: int,
    *,
    warm_start: bool = False,
) -> PrunedFit:
    """Run the ensemble, build the mask, then train the pruned network on the full set.

    アンサンブル求解, マスク構築の後, 剪定済みネットワークを全学習データで学習する.

    The result unpacks as ``network, report, outcome``; the first-stage matrix is available as
    ``.samples``.

    Args:
        topology (Topology): Network shape / ネットワーク構造
        dataset (Dataset): Training samples / 学習サンプル
        s1 (Stage1Config): First-stage settings / 第1段階の設定
        bs (BootstrapConfig): Bootstrap settings / ブートストラップ設定
        lm (LmConfig): Second-stage solver settings / 第2段階のソルバ設定
        rng_seed (int): Second-stage initialization seed / 第2段階の初期化シード
        warm_start (bool): Start from the first-stage column means instead of a fresh draw /
            新規初期化の代わりに第1段階の列平均から開始する

    Returns:
        PrunedFit: Trained pMLP, significance report, outcome and first-stage samples /
            学習済みpMLP、検定レポート、学習結果、第1段階の解
    """
    samples = stage1_ensemble(topology, dataset, s1)
    mask, report = build_mask(samples, bs)
    logger.debug(
        "pruned %d of %d parameters (ratio %.3f)",
        report.n_pruned,
        topology.n_params,
        report.pruning_ratio,
    )
    if report.output_bias_pruned:
        logger.info("output bias B2 was pruned; the pMLP has no intercept")
    start = samples.means() if warm_start else initialize(topology, rng_seed)
    net = Network.create(topology, start, mask)
    outcome = train(net, dataset, lm, rng_seed)
    return PrunedFit(network=net.with_params(outcome.params), report=report, outcome=outcome, samples=samples)
