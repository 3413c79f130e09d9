"""Periodograms, tapers, covariances and spectral-matrix arithmetic."""

from gimodels.spectral.grid import (
    SpectralGrid,
    data_grid_size,
    frequencies,
    invert_grid,
    model_grid_size,
    periodogram,
    smooth_periodogram,
)
from gimodels.spectral.series import CovSeq, TimeSeries, demean, empirical_covariances
from gimodels.spectral.taper import TaperSpec
from gimodels.spectral.transforms import (
    coherence,
    cov_from_spectrum,
    inv_cov_from_spectrum,
    partial_coherence,
    partial_coherence_from_inverse,
    spectrum_from_gi,
)

__all__ = [
    "CovSeq",
    "SpectralGrid",
    "TaperSpec",
    "TimeSeries",
    "coherence",
    "cov_from_spectrum",
    "data_grid_size",
    "demean",
    "empirical_covariances",
    "frequencies",
    "inv_cov_from_spectrum",
    "invert_grid",
    "model_grid_size",
    "partial_coherence",
    "partial_coherence_from_inverse",
    "periodogram",
    "smooth_periodogram",
    "spectrum_from_gi",
]
