"""Masked single-hidden-layer perceptron.

マスク付き1隠れ層パーセプトロン.
"""

from net.network import (
    Network,
    apply_mask,
    forward,
    full_jacobian,
    full_mask,
    jacobian,
    mse,
    predict,
    residuals,
)
from net.topology import (
    ConnectionMask,
    LayerParams,
    ParameterVector,
    Topology,
    canonical_form,
    pack,
    parameter_names,
    unpack,
)

__all__ = [
    "ConnectionMask",
    "LayerParams",
    "Network",
    "ParameterVector",
    "Topology",
    "apply_mask",
    "canonical_form",
    "forward",
    "full_jacobian",
    "full_mask",
    "jacobian",
    "mse",
    "pack",
    "parameter_names",
    "predict",
    "residuals",
    "unpack",
]
