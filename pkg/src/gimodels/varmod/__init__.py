"""VAR(p) estimation, spectra, inverse covariances and simulation."""

from gimodels.varmod.var import (
    StabilityResult,
    inv_cov_from_var,
    simulate_var,
    stability_check,
    var_autocovariances,
    var_spectrum,
    yule_walker,
)

__all__ = [
    "StabilityResult",
    "inv_cov_from_var",
    "simulate_var",
    "stability_check",
    "var_autocovariances",
    "var_spectrum",
    "yule_walker",
]
