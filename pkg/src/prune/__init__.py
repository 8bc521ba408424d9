"""Two-stage pruning: first-stage ensemble, bootstrap significance test and pruned retraining.

2段階剪定: 第1段階のアンサンブル、ブートストラップ有意性検定、剪定後の再学習.
"""

from prune.config import BootstrapConfig, Stage1Config
from prune.pipeline import PrunedFit, classical_train, two_stage_train
from prune.significance import ParameterTest, SignificanceReport, bootstrap_ci, build_mask
from prune.stage1 import WeightSampleMatrix, stage1_ensemble

__all__ = [
    "BootstrapConfig",
    "ParameterTest",
    "PrunedFit",
    "SignificanceReport",
    "Stage1Config",
    "WeightSampleMatrix",
    "bootstrap_ci",
    "build_mask",
    "classical_train",
    "stage1_ensemble",
    "two_stage_train",
]
