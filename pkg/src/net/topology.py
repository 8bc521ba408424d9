"""Module defining the network topology and the canonical parameter ordering.

ネットワーク構造と標準パラメータ順序を定義するモジュール.

The canonical order is ``W1`` row-major by hidden node, then ``B1``, then ``W2``, then ``B2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from utils.errors import InputShapeError

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]
# Flat vector of all weights and biases in canonical order.
ParameterVector = FloatArray
# Per-parameter active flags aligned with ParameterVector.
ConnectionMask = BoolArray


@dataclass(frozen=True)
class Topology:
    """Single-hidden-layer perceptron shape with tanh hidden nodes and one linear output.

    tanh隠れ層1層と線形出力1つを持つパーセプトロンの構造.
    """

    n_inputs: int
    n_hidden: int

    def __post_init__(self) -> None:
        """Validate the layer sizes."""
        if self.n_inputs < 1 or self.n_hidden < 1:
            raise InputShapeError(
                f"topology needs at least one input and one hidden node, got {self.n_inputs}-{self.n_hidden}-1",
            )

    @property
    def n_params(self) -> int:
        """Total count ``m`` of weights and biases.

        Returns:
            int: ``n_hidden * n_inputs + 2 * n_hidden + 1``
        """
        return self.n_hidden * self.n_inputs + 2 * self.n_hidden + 1

    @property
    def w1_slice(self) -> slice:  # noqa: D102
        return slice(0, self.n_hidden * self.n_inputs)

    @property
    def b1_slice(self) -> slice:  # noqa: D102
        start = self.n_hidden * self.n_inputs
        return slice(start, start + self.n_hidden)

    @property
    def w2_slice(self) -> slice:  # noqa: D102
        start = self.n_hidden * self.n_inputs + self.n_hidden
        return slice(start, start + self.n_hidden)

    @property
    def b2_index(self) -> int:  # noqa: D102
        return self.n_params - 1

    def __str__(self) -> str:  # noqa: D105
        return f"{self.n_inputs}-{self.n_hidden}-1"


class LayerParams(NamedTuple):
    """Parameters split by layer.

    層ごとに分けたパラメータ.
    """

    w1: FloatArray
    b1: FloatArray
    w2: FloatArray
    b2: float


def pack(topology: Topology, w1: npt.ArrayLike, b1: npt.ArrayLike, w2: npt.ArrayLike, b2: float) -> ParameterVector:
    """Flatten layer matrices into the canonical parameter vector.

    層ごとの行列を標準順序のパラメータベクトルに変換する.

    Args:
        topology (Topology): Network shape / ネットワーク構造
        w1 (npt.ArrayLike): Hidden weights, ``n_hidden x n_inputs`` / 隠れ層の重み
        b1 (npt.ArrayLike): Hidden biases, length ``n_hidden`` / 隠れ層のバイアス
        w2 (npt.ArrayLike): Output weights, length ``n_hidden`` / 出力層の重み
        b2 (float): Output bias / 出力層のバイアス

    Returns:
        ParameterVector: Vector of length ``m`` / 長さ ``m`` のベクトル

    Raises:
        InputShapeError: If any layer has the wrong shape / 層の形状が不正な場合
    """
    w1_array = np.asarray(w1, dtype=np.float64)
    b1_array = np.asarray(b1, dtype=np.float64)
    w2_array = np.asarray(w2, dtype=np.float64)
    h, p = topology.n_hidden, topology.n_inputs
    if w1_array.shape != (h, p) or b1_array.shape != (h,) or w2_array.shape != (h,):
        raise InputShapeError(
            f"layer shapes {w1_array.shape}, {b1_array.shape}, {w2_array.shape} do not fit topology {topology}",
        )
    return np.concatenate([w1_array.reshape(-1), b1_array, w2_array, [float(b2)]])


def unpack(values: npt.ArrayLike, topology: Topology) -> LayerParams:
    """Split a canonical parameter vector into layer matrices.

    標準順序のパラメータベクトルを層ごとの行列に分解する.

    Args:
        values (npt.ArrayLike): Parameter vector / パラメータベクトル
        topology (Topology): Network shape / ネットワーク構造

    Returns:
        LayerParams: Layer matrices (copies) / 層ごとの行列 (コピー)

    Raises:
        InputShapeError: If the vector length differs from ``m`` / 長さが ``m`` と異なる場合
    """
    array = np.asarray(values, dtype=np.float64)
    if array.shape != (topology.n_params,):
        raise InputShapeError(f"expected {topology.n_params} parameters for {topology}, got shape {array.shape}")
    return LayerParams(
        w1=array[topology.w1_slice].reshape(topology.n_hidden, topology.n_inputs).copy(),
        b1=array[topology.b1_slice].copy(),
        w2=array[topology.w2_slice].copy(),
        b2=float(array[topology.b2_index]),
    )


def parameter_names(topology: Topology) -> list[str]:
    """Return canonical labels ``W1[j][k]``, ``B1[j]``, ``W2[j]``, ``B2``.

    Args:
        topology (Topology): Network shape / ネットワーク構造

    Returns:
        list[str]: One label per parameter / パラメータごとのラベル
    """
    h, p = topology.n_hidden, topology.n_inputs
    names = [f"W1[{j}][{k}]" for j in range(h) for k in range(p)]
    names += [f"B1[{j}]" for j in range(h)]
    names += [f"W2[{j}]" for j in range(h)]
    names.append("B2")
    return names


def canonical_form(values: npt.ArrayLike, topology: Topology) -> ParameterVector:
    """Map a parameter vector to one representative of its symmetry class.

    隠れ層の符号反転と並べ替えに関する対称性を除いた代表ベクトルを返す.

    Negating a hidden node's incoming weights, bias and outgoing weight leaves the network's
    output unchanged, and so does reordering hidden nodes. The representative has every
    ``W2[j] >= 0`` and hidden nodes sorted by decreasing ``W2``; ties keep their original order.

    Args:
        values (npt.ArrayLike): Parameter vector / パラメータベクトル
        topology (Topology): Network shape / ネットワーク構造

    Returns:
        ParameterVector: Canonical vector computing the same function / 同じ関数を表す代表ベクトル

    Raises:
        InputShapeError: If the vector length differs from ``m`` / 長さが ``m`` と異なる場合
    """
    layers = unpack(values, topology)
    signs = np.where(layers.w2 < 0, -1.0, 1.0)
    w1 = layers.w1 * signs[:, np.newaxis]
    b1 = layers.b1 * signs
    w2 = layers.w2 * signs
    order = np.argsort(-w2, kind="stable")
    return pack(topology, w1[order], b1[order], w2[order], layers.b2)
