"""Shared fixtures for the test suite."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from bench.config import ExperimentConfig, LogConfig, SeriesSource
from net.network import Network, predict
from net.topology import Topology
from optim.lm import LmConfig
from prune.config import BootstrapConfig, Stage1Config
from series.dataset import Dataset, SplitSpec
from series.synth import SynthKind

SMALL_CONFIG_YAML = """\
topology: {n_inputs: 3, n_hidden: 2}
split: {n_train: 120, n_test: 30}
lm: {max_iters: 40}
stage1:
  n_systems: 12
  subset_fraction: 0.5
  lm: {max_iters: 30}
bootstrap: {n_resamples: 200, alpha: 0.05}
campaign: {n_runs: 2, master_seed: 3, format: text}
log: {console_output: false, file_output: false, level: WARNING}
"""


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def topology_721() -> Topology:
    return Topology(n_inputs=7, n_hidden=2)


def network_dataset(net: Network, n_samples: int, seed: int, noise_sd: float = 0.0) -> Dataset:
    """Samples labelled by a known network, optionally with Gaussian noise."""
    rng = np.random.default_rng(seed)
    inputs = rng.standard_normal((n_samples, net.topology.n_inputs))
    targets = predict(net, inputs) + noise_sd * rng.standard_normal(n_samples)
    return Dataset(inputs, targets, name="labelled")


@pytest.fixture
def small_config(tmp_path: Path) -> ExperimentConfig:
    """Two short synthetic series on a 3-2-1 network; runs in seconds."""
    return ExperimentConfig(
        series=(
            SeriesSource(name="temperature@a", kind=SynthKind.TEMPERATURE, length=160, seed=1),
            SeriesSource(name="wind_speed@b", kind=SynthKind.WIND_SPEED, length=160, seed=2),
        ),
        topology=Topology(n_inputs=3, n_hidden=2),
        split=SplitSpec(n_train=120, n_test=30),
        n_runs=2,
        lm=LmConfig(max_iters=40),
        stage1=Stage1Config(n_systems=12, subset_fraction=0.5, lm=LmConfig(max_iters=30)),
        bootstrap=BootstrapConfig(n_resamples=200),
        master_seed=3,
        output_dir=tmp_path / "results",
        log=LogConfig(console_output=False, file_output=False, level="WARNING"),
    )


@pytest.fixture
def small_config_file(tmp_path: Path) -> Path:
    path = tmp_path / "small.yml"
    path.write_text(SMALL_CONFIG_YAML, encoding="utf-8")
    return path
