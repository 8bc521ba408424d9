"""Versioned YAML persistence of trained networks.

学習済みネットワークのバージョン付きYAML保存と読み込み.

A model file starts with a format header line followed by a YAML mapping::

    # pmlp-model-format: 1
    topology: {n_inputs: 7, n_hidden: 2}
    mask: [true, false, ...]
    params: [0.12, 0.0, ...]
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from net.network import Network
from net.topology import Topology
from utils.errors import InputShapeError, ModelFormatError

FORMAT_VERSION = 1
HEADER = f"# pmlp-model-format: {FORMAT_VERSION}"
_HEADER_PATTERN = re.compile(r"^# pmlp-model-format: (\S+)\s*$")


def save_model(net: Network, path: str | Path) -> Path:
    """Write a network with its topology, mask and parameters.

    ネットワークをトポロジー、マスク、パラメータとともに書き出す.

    Args:
        net (Network): Network to save / 保存するネットワーク
        path (str | Path): Destination / 出力先

    Returns:
        Path: Written file / 書き出したファイル
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {
        "topology": {"n_inputs": net.topology.n_inputs, "n_hidden": net.topology.n_hidden},
        "mask": [bool(flag) for flag in net.mask],
        "params": [float(value) for value in net.params],
    }
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write(HEADER + "\n")
        yaml.safe_dump(body, f, default_flow_style=None, sort_keys=False)
    return path


def _check_header(first_line: str, path: Path) -> None:
    match = _HEADER_PATTERN.match(first_line)
    if match is None:
        raise ModelFormatError(f"{path}: missing model format header")
    if match.group(1) != str(FORMAT_VERSION):
        raise ModelFormatError(f"{path}: format version {match.group(1)} is not supported (expected {FORMAT_VERSION})")


def _field(body: dict[str, Any], key: str, path: Path) -> Any:  # noqa: ANN401
    if key not in body:
        raise ModelFormatError(f"{path}: missing field {key!r}")
    return body[key]


def load_model(path: str | Path) -> Network:
    """Read a network and validate every invariant.

    ネットワークを読み込み, 全ての不変条件を検証する.

    Args:
        path (str | Path): Model file / モデルファイル

    Returns:
        Network: Restored network / 復元されたネットワーク

    Raises:
        ModelFormatError: On a wrong version or corrupted fields / バージョン不一致や破損時
        MaskShapeError: If the mask length differs from the parameter count / マスク長が不一致の場合
        InvariantViolationError: If a masked parameter is nonzero / マスクされたパラメータが非ゼロの場合
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ModelFormatError(f"{path}: not a UTF-8 text file ({e.reason})") from e
    first_line, _, rest = text.partition("\n")
    _check_header(first_line, path)
    try:
        body = yaml.safe_load(rest)
    except yaml.YAMLError as e:
        raise ModelFormatError(f"{path}: {e}") from e
    if not isinstance(body, dict):
        raise ModelFormatError(f"{path}: expected a mapping after the header")

    topology_field = _field(body, "topology", path)  # pyright: ignore[reportUnknownArgumentType]
    mask_field = _field(body, "mask", path)  # pyright: ignore[reportUnknownArgumentType]
    params_field = _field(body, "params", path)  # pyright: ignore[reportUnknownArgumentType]
    try:
        topology = Topology(n_inputs=int(topology_field["n_inputs"]), n_hidden=int(topology_field["n_hidden"]))
        if not all(isinstance(flag, bool) for flag in mask_field):
            raise ModelFormatError(f"{path}: mask entries must be booleans")
        mask = np.array(mask_field, dtype=np.bool_)
        params = np.array([float(value) for value in params_field], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f"{path}: corrupted field ({e})") from e
    except InputShapeError as e:
        raise ModelFormatError(f"{path}: {e}") from e
    if params.shape != (topology.n_params,):
        raise ModelFormatError(f"{path}: {params.size} parameters stored for topology {topology}")
    return Network(topology=topology, params=params, mask=mask)
