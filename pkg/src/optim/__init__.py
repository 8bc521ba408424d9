"""Levenberg-Marquardt training.

Levenberg-Marquardt法による学習.
"""

from optim.lm import LmConfig, Termination, TrainOutcome, damped_step, initialize, lm_step, train

__all__ = [
    "LmConfig",
    "Termination",
    "TrainOutcome",
    "damped_step",
    "initialize",
    "lm_step",
    "train",
]
