"""Module defining the masked perceptron and its analytic derivatives.

マスク付きパーセプトロンとその解析的微分を定義するモジュール.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from net.topology import ConnectionMask, FloatArray, ParameterVector, Topology, unpack
from utils.errors import EmptyDataError, InputShapeError, InvariantViolationError, MaskShapeError

if TYPE_CHECKING:
    from series.dataset import Dataset


def full_mask(topology: Topology) -> ConnectionMask:
    """Return an all-active mask.

    Args:
        topology (Topology): Network shape / ネットワーク構造

    Returns:
        ConnectionMask: ``m`` true flags / 全て真のマスク
    """
    return np.ones(topology.n_params, dtype=np.bool_)


def apply_mask(values: npt.ArrayLike, mask: ConnectionMask) -> ParameterVector:
    """Zero the parameters whose flag is false; applying it twice equals applying it once.

    Args:
        values (npt.ArrayLike): Parameter vector / パラメータベクトル
        mask (ConnectionMask): Active flags / 有効フラグ

    Returns:
        ParameterVector: Masked copy / マスク適用後のコピー
    """
    return np.where(mask, np.asarray(values, dtype=np.float64), 0.0)


@dataclass(frozen=True)
class Network:
    """Immutable masked network value.

    不変のマスク付きネットワーク.

    Every parameter whose mask flag is false holds exactly 0. Use ``Network.create`` to build a
    network from arbitrary values (the mask is applied) and the constructor to validate a
    network read from storage (violations raise).
    """

    topology: Topology
    params: ParameterVector
    mask: ConnectionMask

    def __post_init__(self) -> None:
        """Validate lengths and the masked-zero invariant, then freeze the arrays."""
        params = np.array(self.params, dtype=np.float64)
        mask = np.array(self.mask, dtype=np.bool_)
        m = self.topology.n_params
        if params.shape != (m,):
            raise InputShapeError(f"expected {m} parameters for {self.topology}, got shape {params.shape}")
        if mask.shape != (m,):
            raise MaskShapeError(f"expected mask of length {m} for {self.topology}, got shape {mask.shape}")
        if not np.all(np.isfinite(params)):
            raise InvariantViolationError("parameters must be finite")
        violations = np.flatnonzero(~mask & (params != 0.0))
        if violations.size:
            raise InvariantViolationError(f"masked parameters hold nonzero values at indices {violations.tolist()}")
        params.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def create(
        cls,
        topology: Topology,
        params: npt.ArrayLike,
        mask: ConnectionMask | None = None,
    ) -> Network:
        """Build a network, forcing masked parameters to zero.

        マスクを適用してネットワークを構築する.

        Args:
            topology (Topology): Network shape / ネットワーク構造
            params (npt.ArrayLike): Parameter values / パラメータ値
            mask (ConnectionMask | None): Active flags, all true when omitted / 有効フラグ (省略時は全て真)

        Returns:
            Network: Valid network / 不変条件を満たすネットワーク
        """
        mask = full_mask(topology) if mask is None else np.asarray(mask, dtype=np.bool_)
        if mask.shape != (topology.n_params,):
            raise MaskShapeError(f"expected mask of length {topology.n_params} for {topology}, got shape {mask.shape}")
        return cls(topology, apply_mask(params, mask), mask)

    def with_params(self, params: npt.ArrayLike) -> Network:
        """Return a copy with new parameter values under the same mask.

        Args:
            params (npt.ArrayLike): New values / 新しいパラメータ値

        Returns:
            Network: Updated network / 更新されたネットワーク
        """
        return Network.create(self.topology, params, self.mask)

    @property
    def n_active(self) -> int:
        """Number of unmasked parameters.

        Returns:
            int: Active count / 有効パラメータ数
        """
        return int(np.count_nonzero(self.mask))


def _hidden(net: Network, inputs: FloatArray) -> tuple[FloatArray, FloatArray, float]:
    layers = unpack(net.params, net.topology)
    activation = np.tanh(inputs @ layers.w1.T + layers.b1)
    return activation, layers.w2, layers.b2


def _check_inputs(net: Network, inputs: FloatArray) -> None:
    if inputs.ndim != 2 or inputs.shape[1] != net.topology.n_inputs:  # noqa: PLR2004
        raise InputShapeError(
            f"network {net.topology} expects {net.topology.n_inputs} inputs per sample, got shape {inputs.shape}",
        )


def predict(net: Network, inputs: npt.ArrayLike) -> FloatArray:
    """Evaluate the network on every row of an input matrix.

    入力行列の各行に対してネットワークを評価する.

    Args:
        net (Network): Network / ネットワーク
        inputs (npt.ArrayLike): ``n x n_inputs`` matrix / 入力行列

    Returns:
        FloatArray: ``n`` outputs ``W2 . tanh(W1 x + B1) + B2`` / 出力

    Raises:
        InputShapeError: If the column count differs from ``n_inputs`` / 列数が入力数と異なる場合
    """
    matrix = np.asarray(inputs, dtype=np.float64)
    _check_inputs(net, matrix)
    activation, w2, b2 = _hidden(net, matrix)
    return activation @ w2 + b2


def forward(net: Network, inputs: npt.ArrayLike) -> float:
    """Evaluate the network on one input vector.

    1つの入力ベクトルに対してネットワークを評価する.

    Args:
        net (Network): Network / ネットワーク
        inputs (npt.ArrayLike): ``n_inputs`` lag values / ラグ値

    Returns:
        float: Network output / ネットワーク出力

    Raises:
        InputShapeError: If the input length differs from ``n_inputs`` / 入力長が不正な場合
    """
    vector = np.asarray(inputs, dtype=np.float64)
    if vector.ndim != 1:
        raise InputShapeError(f"expected a 1-d input vector, got shape {vector.shape}")
    return float(predict(net, vector[np.newaxis, :])[0])


def residuals(net: Network, dataset: Dataset) -> FloatArray:
    """Return ``prediction - target`` for every sample.

    各サンプルの残差 (予測値 - 観測値) を返す. 目的関数はその二乗平均.

    Args:
        net (Network): Network / ネットワーク
        dataset (Dataset): Samples / サンプル

    Returns:
        FloatArray: Residual vector / 残差ベクトル

    Raises:
        EmptyDataError: If the dataset has no samples / サンプルが空の場合
    """
    if len(dataset) == 0:
        raise EmptyDataError(f"{dataset.name}: no samples")
    return predict(net, dataset.inputs) - dataset.targets


def mse(net: Network, dataset: Dataset) -> float:
    """Mean squared residual, the training objective.

    Args:
        net (Network): Network / ネットワーク
        dataset (Dataset): Samples / サンプル

    Returns:
        float: Mean squared error / 平均二乗誤差
    """
    r = residuals(net, dataset)
    return float(np.mean(r * r))


def full_jacobian(net: Network, dataset: Dataset) -> FloatArray:
    """Jacobian of the residuals with respect to every parameter, masked or not.

    Args:
        net (Network): Network / ネットワーク
        dataset (Dataset): Samples / サンプル

    Returns:
        FloatArray: ``n_samples x m`` matrix in canonical column order / 標準順序のヤコビ行列

    Raises:
        EmptyDataError: If the dataset has no samples / サンプルが空の場合
    """
    if len(dataset) == 0:
        raise EmptyDataError(f"{dataset.name}: no samples")
    _check_inputs(net, dataset.inputs)
    activation, w2, _ = _hidden(net, dataset.inputs)
    n = len(dataset)
    # d r / d u_j = W2_j * (1 - tanh(u_j)^2)
    delta = (1.0 - activation * activation) * w2
    d_w1 = (delta[:, :, np.newaxis] * dataset.inputs[:, np.newaxis, :]).reshape(n, -1)
    return np.hstack([d_w1, delta, activation, np.ones((n, 1))])


def jacobian(net: Network, dataset: Dataset) -> FloatArray:
    """Jacobian of the residuals restricted to active parameters.

    有効パラメータに限定した残差のヤコビ行列.

    Args:
        net (Network): Network / ネットワーク
        dataset (Dataset): Samples / サンプル

    Returns:
        FloatArray: ``n_samples x m_active`` matrix / ヤコビ行列

    Raises:
        EmptyDataError: If the dataset has no samples / サンプルが空の場合
    """
    return full_jacobian(net, dataset)[:, net.mask]
