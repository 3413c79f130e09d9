"""Alternating-projection fitting of GI(p,G) models."""

from gimodels.fit.estimate import FitOptions, FitResult, fit_gi
from gimodels.fit.projection import (
    ConstraintSets,
    constraint_sets,
    edge_projection_step,
    gi_from_spectrum,
    order_projection_step,
)

__all__ = [
    "ConstraintSets",
    "FitOptions",
    "FitResult",
    "constraint_sets",
    "edge_projection_step",
    "fit_gi",
    "gi_from_spectrum",
    "order_projection_step",
]
