from __future__ import annotations

import numpy as np
import pytest

from net.network import Network, forward, full_jacobian, full_mask, jacobian, mse, predict, residuals
from net.topology import Topology, canonical_form, pack, parameter_names, unpack
from series.dataset import Dataset
from utils.errors import EmptyDataError, InputShapeError, InvariantViolationError, MaskShapeError


def test_topology_counts_parameters(topology_721: Topology) -> None:
    assert topology_721.n_params == 19
    assert str(topology_721) == "7-2-1"
    assert Topology(n_inputs=15, n_hidden=15).n_params == 271


def test_topology_rejects_empty_layers() -> None:
    with pytest.raises(InputShapeError):
        Topology(n_inputs=0, n_hidden=2)
    with pytest.raises(InputShapeError):
        Topology(n_inputs=3, n_hidden=0)


def test_canonical_order_is_w1_row_major_then_b1_w2_b2() -> None:
    topology = Topology(n_inputs=2, n_hidden=2)
    values = pack(topology, [[1.0, 2.0], [3.0, 4.0]], [5.0, 6.0], [7.0, 8.0], 9.0)
    np.testing.assert_array_equal(values, np.arange(1.0, 10.0))
    assert parameter_names(topology) == [
        "W1[0][0]",
        "W1[0][1]",
        "W1[1][0]",
        "W1[1][1]",
        "B1[0]",
        "B1[1]",
        "W2[0]",
        "W2[1]",
        "B2",
    ]
    layers = unpack(values, topology)
    np.testing.assert_array_equal(layers.w1, [[1.0, 2.0], [3.0, 4.0]])
    assert layers.b2 == 9.0


def test_pack_rejects_wrong_shapes() -> None:
    with pytest.raises(InputShapeError):
        pack(Topology(n_inputs=2, n_hidden=2), [[1.0, 2.0]], [0.0, 0.0], [0.0, 0.0], 0.0)
    with pytest.raises(InputShapeError):
        unpack(np.zeros(5), Topology(n_inputs=2, n_hidden=2))


def test_canonical_form_flips_and_orders_hidden_nodes() -> None:
    topology = Topology(n_inputs=2, n_hidden=2)
    values = pack(topology, [[1.0, 2.0], [3.0, 4.0]], [0.5, -0.5], [-0.25, 1.5], 0.7)
    layers = unpack(canonical_form(values, topology), topology)
    np.testing.assert_array_equal(layers.w1, [[3.0, 4.0], [-1.0, -2.0]])
    np.testing.assert_array_equal(layers.b1, [-0.5, -0.5])
    np.testing.assert_array_equal(layers.w2, [1.5, 0.25])
    assert layers.b2 == 0.7


def test_canonical_form_keeps_the_function(topology_721: Topology, rng: np.random.Generator) -> None:
    inputs = rng.standard_normal((25, 7))
    for _ in range(20):
        values = rng.uniform(-2, 2, 19)
        canonical = canonical_form(values, topology_721)
        np.testing.assert_allclose(
            predict(Network.create(topology_721, canonical), inputs),
            predict(Network.create(topology_721, values), inputs),
            rtol=1e-12,
            atol=1e-12,
        )
        w2 = unpack(canonical, topology_721).w2
        assert np.all(w2 >= 0.0)
        assert w2[0] >= w2[1]
        np.testing.assert_array_equal(canonical_form(canonical, topology_721), canonical)


def test_forward_matches_hand_computation() -> None:
    topology = Topology(n_inputs=2, n_hidden=1)
    net = Network.create(topology, pack(topology, [[0.5, -1.0]], [0.25], [2.0], 0.1))
    x = np.array([1.0, 0.5])
    expected = 2.0 * np.tanh(0.5 * 1.0 - 1.0 * 0.5 + 0.25) + 0.1
    assert forward(net, x) == pytest.approx(expected, rel=1e-12)


def test_output_bias_alone_is_constant(topology_721: Topology) -> None:
    params = np.zeros(topology_721.n_params)
    params[-1] = 0.5
    net = Network.create(topology_721, params)
    assert forward(net, np.arange(7.0)) == 0.5


def test_forward_rejects_wrong_input_length(topology_721: Topology) -> None:
    net = Network.create(topology_721, np.zeros(19))
    with pytest.raises(InputShapeError):
        forward(net, np.zeros(6))
    with pytest.raises(InputShapeError):
        predict(net, np.zeros((4, 8)))


def test_predict_rows_equal_forward(topology_721: Topology, rng: np.random.Generator) -> None:
    net = Network.create(topology_721, rng.uniform(-1, 1, 19))
    inputs = rng.standard_normal((10, 7))
    outputs = predict(net, inputs)
    for row, value in zip(inputs, outputs, strict=True):
        assert forward(net, row) == pytest.approx(value, rel=1e-14)


def test_create_zeroes_masked_parameters(topology_721: Topology) -> None:
    mask = full_mask(topology_721)
    mask[[0, 5, 18]] = False
    net = Network.create(topology_721, np.ones(19), mask)
    assert net.params[[0, 5, 18]].tolist() == [0.0, 0.0, 0.0]
    assert net.n_active == 16


def test_constructor_rejects_nonzero_masked_value(topology_721: Topology) -> None:
    mask = full_mask(topology_721)
    mask[3] = False
    with pytest.raises(InvariantViolationError):
        Network(topology_721, np.ones(19), mask)


def test_constructor_rejects_wrong_mask_length(topology_721: Topology) -> None:
    with pytest.raises(MaskShapeError):
        Network(topology_721, np.zeros(19), np.ones(18, dtype=bool))
    with pytest.raises(InputShapeError):
        Network.create(topology_721, np.zeros(19), np.ones(20, dtype=bool))


def test_network_arrays_are_read_only(topology_721: Topology) -> None:
    net = Network.create(topology_721, np.zeros(19))
    with pytest.raises(ValueError, match="read-only"):
        net.params[0] = 1.0


def test_residuals_are_prediction_minus_target(topology_721: Topology) -> None:
    params = np.zeros(19)
    params[-1] = 1.0
    net = Network.create(topology_721, params)
    data = Dataset(np.zeros((3, 7)), np.array([0.0, 1.0, 3.0]))
    np.testing.assert_array_equal(residuals(net, data), [1.0, 0.0, -2.0])
    assert mse(net, data) == pytest.approx(5.0 / 3.0)


def test_residuals_reject_empty_dataset(topology_721: Topology) -> None:
    net = Network.create(topology_721, np.zeros(19))
    with pytest.raises(EmptyDataError):
        residuals(net, Dataset(np.zeros((0, 7)), np.zeros(0)))


def _central_differences(net: Network, data: Dataset, step: float = 1e-6) -> np.ndarray:
    columns = []
    for k in range(net.topology.n_params):
        up = np.array(net.params)
        down = np.array(net.params)
        up[k] += step
        down[k] -= step
        plus = predict(Network.create(net.topology, up), data.inputs)
        minus = predict(Network.create(net.topology, down), data.inputs)
        columns.append((plus - minus) / (2.0 * step))
    return np.column_stack(columns)


def test_jacobian_matches_finite_differences(topology_721: Topology) -> None:
    rng = np.random.default_rng(7)
    for _ in range(100):
        net = Network.create(topology_721, rng.uniform(-0.5, 0.5, 19))
        data = Dataset(rng.standard_normal((20, 7)), rng.standard_normal(20))
        np.testing.assert_allclose(full_jacobian(net, data), _central_differences(net, data), rtol=1e-6, atol=1e-9)


def test_masked_jacobian_keeps_active_columns(topology_721: Topology, rng: np.random.Generator) -> None:
    mask = full_mask(topology_721)
    mask[[1, 8, 15]] = False
    net = Network.create(topology_721, rng.uniform(-0.5, 0.5, 19), mask)
    data = Dataset(rng.standard_normal((12, 7)), rng.standard_normal(12))
    masked = jacobian(net, data)
    assert masked.shape == (12, 16)
    np.testing.assert_array_equal(masked, full_jacobian(net, data)[:, mask])
