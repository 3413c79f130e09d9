"""Graphs, model specifications and parameter containers."""

from gimodels.core.graph import (
    ModelSpec,
    UndirectedGraph,
    enumerate_graphs,
    separates,
)
from gimodels.core.params import (
    GIParams,
    VarParams,
    ZeroPattern,
    apply_zero_pattern,
    param_count,
    theta_layout,
)

__all__ = [
    "GIParams",
    "ModelSpec",
    "UndirectedGraph",
    "VarParams",
    "ZeroPattern",
    "apply_zero_pattern",
    "enumerate_graphs",
    "param_count",
    "separates",
    "theta_layout",
]
