from __future__ import annotations

import numpy as np
import pytest
from conftest import network_dataset

from net.network import Network, full_mask, mse
from net.topology import Topology
from optim.lm import LmConfig, Termination, damped_step, initialize, lm_step, train
from series.dataset import Dataset
from utils.errors import ConfigError, DampingSingularError, InputShapeError


def test_damped_step_solves_linear_example() -> None:
    step = damped_step([[1.0], [2.0]], [-2.0, -4.0], 0.0)
    np.testing.assert_allclose(step, [2.0])


def test_damped_step_shrinks_with_damping() -> None:
    jac = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    res = np.array([1.0, -2.0, 0.5])
    small = damped_step(jac, res, 1e-6)
    large = damped_step(jac, res, 1e3)
    assert np.linalg.norm(large) < np.linalg.norm(small)
    # Large damping approaches a short gradient-descent step.
    np.testing.assert_allclose(large, -(jac.T @ res) / 1e3, rtol=1e-2)


def test_damped_step_errors() -> None:
    with pytest.raises(DampingSingularError):
        damped_step(np.zeros((3, 2)), np.ones(3), 0.0)
    with pytest.raises(ConfigError):
        damped_step(np.eye(2), np.ones(2), -1.0)
    with pytest.raises(InputShapeError):
        damped_step(np.eye(2), np.ones(3), 0.1)


def test_lm_step_is_zero_at_exact_fit(topology_721: Topology, rng: np.random.Generator) -> None:
    net = Network.create(topology_721, rng.uniform(-0.5, 0.5, 19))
    data = network_dataset(net, 30, seed=1)
    np.testing.assert_allclose(lm_step(net, data, 1e-3), np.zeros(19), atol=1e-12)


def test_initialize_is_seeded_and_bounded(topology_721: Topology) -> None:
    first = initialize(topology_721, 11)
    np.testing.assert_array_equal(first, initialize(topology_721, 11))
    assert not np.array_equal(first, initialize(topology_721, 12))
    assert np.all((first >= -0.5) & (first <= 0.5))


def test_config_validation() -> None:
    with pytest.raises(ConfigError):
        LmConfig(lambda0=0.0)
    with pytest.raises(ConfigError):
        LmConfig(lambda_up=1.0)
    with pytest.raises(ConfigError):
        LmConfig(lambda_max=1e-4)
    with pytest.raises(ConfigError):
        LmConfig(lambda_min=1.0)
    with pytest.raises(ConfigError):
        LmConfig(max_iters=0)


def test_gauss_newton_limit_on_linear_parameters(topology_721: Topology) -> None:
    rng = np.random.default_rng(5)
    net = Network.create(topology_721, rng.uniform(-0.5, 0.5, 19))
    data = Dataset(rng.standard_normal((200, 7)), rng.standard_normal(200))
    trainable = np.zeros(19, dtype=bool)
    trainable[topology_721.w2_slice] = True
    trainable[topology_721.b2_index] = True

    config = LmConfig(lambda0=1e-10, max_iters=1)
    outcome = train(net, data, config, trainable=trainable)

    w1 = net.params[topology_721.w1_slice].reshape(2, 7)
    b1 = net.params[topology_721.b1_slice]
    design = np.column_stack([np.tanh(data.inputs @ w1.T + b1), np.ones(200)])
    expected, *_ = np.linalg.lstsq(design, data.targets, rcond=None)
    solved = outcome.params[trainable]
    assert outcome.iterations == 1
    assert np.linalg.norm(solved - expected) <= 1e-8 * np.linalg.norm(expected)
    np.testing.assert_array_equal(outcome.params[~trainable], net.params[~trainable])


def test_cost_trace_strictly_decreases(topology_721: Topology) -> None:
    source_net = Network.create(topology_721, np.random.default_rng(2).uniform(-1, 1, 19))
    data = network_dataset(source_net, 100, seed=3, noise_sd=0.05)
    start = Network.create(topology_721, initialize(topology_721, 4))
    outcome = train(start, data, LmConfig(max_iters=60))
    trace = np.array(outcome.cost_trace)
    assert np.all(np.diff(trace) < 0)
    assert len(trace) == outcome.iterations + 1
    assert outcome.final_mse == trace[-1]
    assert outcome.final_mse == pytest.approx(mse(start.with_params(outcome.params), data))


def test_masked_parameters_stay_zero(topology_721: Topology) -> None:
    source_net = Network.create(topology_721, np.random.default_rng(8).uniform(-1, 1, 19))
    data = network_dataset(source_net, 80, seed=9)
    mask = full_mask(topology_721)
    mask[[0, 3, 9, 16]] = False
    start = Network.create(topology_721, initialize(topology_721, 10), mask)
    outcome = train(start, data, LmConfig(max_iters=30))
    assert np.all(outcome.params[~mask] == 0.0)


def test_exact_start_stops_on_small_gradient(topology_721: Topology) -> None:
    source_net = Network.create(topology_721, np.random.default_rng(12).uniform(-1, 1, 19))
    data = network_dataset(source_net, 50, seed=13)
    outcome = train(source_net, data, LmConfig())
    assert outcome.termination == Termination.GRAD_SMALL
    assert outcome.iterations == 0
    assert outcome.final_mse == 0.0


def test_training_rejects_mismatched_lags(topology_721: Topology) -> None:
    net = Network.create(topology_721, np.zeros(19))
    with pytest.raises(InputShapeError):
        train(net, Dataset(np.zeros((5, 6)), np.zeros(5)), LmConfig())


def test_converges_from_a_nearby_start(topology_721: Topology) -> None:
    rng = np.random.default_rng(21)
    source_net = Network.create(topology_721, rng.uniform(-1, 1, 19))
    data = network_dataset(source_net, 320, seed=22)
    start = source_net.with_params(source_net.params + rng.uniform(-0.05, 0.05, 19))
    outcome = train(start, data, LmConfig(max_iters=500))
    assert outcome.final_mse <= 1e-6


def test_outcome_records_seed(topology_721: Topology) -> None:
    net = Network.create(topology_721, initialize(topology_721, 1))
    data = Dataset(np.random.default_rng(0).standard_normal((20, 7)), np.zeros(20))
    assert train(net, data, LmConfig(max_iters=2), rng_seed=99).seed == 99


@pytest.mark.slow
def test_random_restarts_recover_a_noiseless_network(topology_721: Topology) -> None:
    source_net = Network.create(topology_721, np.random.default_rng(30).uniform(-1, 1, 19))
    data = network_dataset(source_net, 320, seed=31)
    reached = 0
    for seed in range(50):
        start = Network.create(topology_721, initialize(topology_721, seed))
        if train(start, data, LmConfig(max_iters=500), seed).final_mse <= 1e-6:
            reached += 1
    assert reached >= 40
