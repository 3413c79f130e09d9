"""
Transforms between spectral matrices and (inverse) covariance sequences, and
the coherency measures derived from them.

    Gamma(u)   = int f(lambda) e^{i lambda u} d lambda
    Gamma_i(u) = (1/4 pi^2) int f(lambda)^{-1} e^{i lambda u} d lambda
    f^{-1}(lambda) = 2 pi sum_{|u| <= p} Gamma_i(u) e^{-i lambda u}
"""

from __future__ import annotations

import numpy as np

from gimodels.core.params import GIParams
from gimodels.errors import ArgumentError, InconsistencyError, SingularityError
from gimodels.spectral.grid import SpectralGrid, frequencies, invert_values, mirror
from gimodels.spectral.series import CovSeq

IMAG_RTOL = 1e-8

PairGrids = dict[tuple[int, int], np.ndarray]


def fourier_coefficients(values: np.ndarray, L: int, what: str) -> np.ndarray:
    """(1/N) sum_j values_j e^{i lambda_j u} for u = 0..L, asserted real."""
    N = values.shape[0]
    if not 0 <= L < N // 2:
        raise ArgumentError(f"Maximum lag must satisfy 0 <= L < N/2={N // 2}, got L={L}")
    coef = np.fft.ifft(values, axis=0)[: L + 1]
    scale = max(float(np.max(np.abs(coef[0]))), np.finfo(float).tiny)
    residue = float(np.max(np.abs(coef.imag)))
    if residue > IMAG_RTOL * scale:
        raise InconsistencyError(
            f"{what}: imaginary residue {residue:.3g} exceeds {IMAG_RTOL:g} relative "
            "(grid is not conjugate symmetric)"
        )
    return coef.real


def cov_from_spectrum(f: SpectralGrid, L: int) -> CovSeq:
    """Model covariances Gamma(0..L) by Riemann-sum inversion of the spectrum."""
    coef = fourier_coefficients(f.values, L, "cov_from_spectrum")
    return CovSeq(f.d, L, 2.0 * np.pi * coef)


def inv_cov_from_spectrum(f: SpectralGrid, L: int) -> CovSeq:
    """Inverse covariances Gamma_i(0..L) from the inverted spectrum."""
    coef = fourier_coefficients(invert_values(f.values), L, "inv_cov_from_spectrum")
    return CovSeq(f.d, L, coef / (2.0 * np.pi))


def inverse_spectrum_from_gi(theta: GIParams, N: int) -> np.ndarray:
    """g(lambda_j) = 2 pi sum_{|u|<=p} Gamma_i(u) e^{-i lambda_j u}, shape (N, d, d)."""
    lam = frequencies(N)[: N // 2 + 1]
    g = np.broadcast_to(theta.gamma_inv[0].astype(complex), (lam.size, theta.d, theta.d)).copy()
    for u in range(1, theta.p + 1):
        phase = np.exp(-1j * lam * u)[:, None, None]
        g += phase * theta.gamma_inv[u] + np.conj(phase) * theta.gamma_inv[u].T
    g = 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))
    return mirror(2.0 * np.pi * g, N)


def spectrum_from_gi(theta: GIParams, N: int) -> SpectralGrid:
    """Spectral matrix implied by GI parameters (inverse of the finite expansion)."""
    g = inverse_spectrum_from_gi(theta, N)
    low = np.linalg.eigvalsh(g[: N // 2 + 1])[:, 0]
    bad = np.flatnonzero(~(low > 0))
    if bad.size:
        raise SingularityError(
            "Inverse covariances do not define a positive definite spectrum",
            freq_index=int(bad[0]),
        )
    return SpectralGrid(invert_values(g))


# ----------------------------
# Coherency
# ----------------------------

def partial_coherence_from_inverse(g: np.ndarray) -> PairGrids:
    """R_ab|rest = -g_ab / sqrt(g_aa g_bb) for all a < b, from an inverse spectrum."""
    diag = np.real(np.diagonal(g, axis1=1, axis2=2))
    d = g.shape[1]
    return {
        (a, b): -g[:, a, b] / np.sqrt(diag[:, a] * diag[:, b])
        for a in range(d)
        for b in range(a + 1, d)
    }


def partial_coherence(f: SpectralGrid) -> PairGrids:
    """Partial spectral coherence of every pair given all remaining series."""
    return partial_coherence_from_inverse(invert_values(f.values))


def coherence(f: SpectralGrid) -> PairGrids:
    """Ordinary coherency f_ab / sqrt(f_aa f_bb) for all a < b."""
    v = f.values
    diag = np.real(np.diagonal(v, axis1=1, axis2=2))
    return {
        (a, b): v[:, a, b] / np.sqrt(diag[:, a] * diag[:, b])
        for a in range(f.d)
        for b in range(a + 1, f.d)
    }
