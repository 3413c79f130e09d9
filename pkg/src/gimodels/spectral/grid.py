"""
Spectral matrices on the Fourier grid lambda_j = 2*pi*j/N, j = 0..N-1.

A SpectralGrid stores one complex d x d matrix per frequency. Grids built
from real data or real parameters are Hermitian at every frequency and
conjugate symmetric across the grid (M_{N-j} = conj(M_j)); computations here
evaluate frequencies 0..N/2 and mirror the rest, so the symmetry is exact.
All integrals over [-pi, pi) are Riemann sums (2*pi/N) * sum_j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from gimodels.errors import ArgumentError, InconsistencyError, SingularityError
from gimodels.spectral.series import TimeSeries, tapered_data
from gimodels.spectral.taper import TaperSpec

logger = logging.getLogger(__name__)

HERMITIAN_RTOL = 1e-10
MAX_CONDITION = 1e12
MIN_GRID = 512


def _next_pow2(n: int) -> int:
    return 1 << max(int(n) - 1, 0).bit_length()


def data_grid_size(T: int) -> int:
    """Default grid for data-derived spectra: max(512, pow2 >= 4T)."""
    return max(MIN_GRID, _next_pow2(4 * T))


def model_grid_size(p: int) -> int:
    """Default grid for model spectra: max(512, pow2 >= 64(p+1))."""
    return max(MIN_GRID, _next_pow2(64 * (p + 1)))


def frequencies(N: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(N) / N


def mirror(half: np.ndarray, N: int) -> np.ndarray:
    """Full grid from frequencies 0..N/2 using M_{N-j} = conj(M_j)."""
    full = np.empty((N,) + half.shape[1:], dtype=complex)
    full[: N // 2 + 1] = half
    # lambda = 0 and pi are self-conjugate: the matrices there are real
    full[0] = half[0].real
    full[N // 2] = half[N // 2].real
    full[N // 2 + 1:] = np.conj(half[1: N - N // 2][::-1])
    return full


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    values: np.ndarray  # shape (N, d, d), complex

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim != 3 or v.shape[1] != v.shape[2]:
            raise ArgumentError(f"Grid values must have shape (N, d, d), got {v.shape}")
        N = v.shape[0]
        if N < 2 or N % 2:
            raise ArgumentError(f"Grid size must be even and >= 2, got {N}")
        v = np.array(v, dtype=complex, copy=True)
        scale = max(float(np.max(np.abs(v))), np.finfo(float).tiny)
        if not np.all(np.isfinite(v)):
            raise InconsistencyError("Spectral grid has non-finite entries")
        if np.max(np.abs(v - np.conj(np.swapaxes(v, 1, 2)))) > HERMITIAN_RTOL * scale:
            raise InconsistencyError("Spectral grid is not Hermitian at every frequency")
        if np.max(np.abs(v[1:] - np.conj(v[1:][::-1]))) > HERMITIAN_RTOL * scale:
            raise InconsistencyError("Spectral grid is not conjugate symmetric")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def lambdas(self) -> np.ndarray:
        return frequencies(self.N)

    def min_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.values)[:, 0]

    def is_positive_definite(self) -> bool:
        return bool(np.all(self.min_eigenvalues() > 0))


# ----------------------------
# Nonparametric estimates
# ----------------------------

def periodogram(X: TimeSeries, taper: TaperSpec | None = None, N: int | None = None) -> SpectralGrid:
    """
    Tapered periodogram I(lambda_j) = (2*pi*H2)^{-1} d(lambda_j) d(lambda_j)*.

    d_a(lambda) = sum_t h_t X_a(t) exp(-i lambda t); N >= T zero-pads.
    """
    N = data_grid_size(X.T) if N is None else int(N)
    if N < X.T:
        raise ArgumentError(f"Grid size N={N} must be >= T={X.T}")
    if N % 2:
        raise ArgumentError(f"Grid size must be even, got {N}")
    y, h2 = tapered_data(X, taper)
    if h2 <= 0:
        raise ArgumentError("Taper window has zero energy")
    dft = np.fft.rfft(y, n=N, axis=0)  # (N/2 + 1, d)
    half = dft[:, :, None] * np.conj(dft[:, None, :]) / (2.0 * np.pi * h2)
    return SpectralGrid(mirror(half, N))


def _triangular_kernel(bandwidth: int) -> np.ndarray:
    m = (bandwidth - 1) // 2
    w = (m + 1.0) - np.abs(np.arange(-m, m + 1))
    return w / w.sum()


def smooth_periodogram(I: SpectralGrid, bandwidth: int) -> SpectralGrid:
    """Circular moving average across frequencies with a triangular kernel."""
    if bandwidth % 2 == 0:
        raise ArgumentError(f"Bandwidth must be odd, got {bandwidth}")
    if not 1 <= bandwidth < I.N:
        raise ArgumentError(f"Bandwidth must satisfy 1 <= bandwidth < N={I.N}, got {bandwidth}")
    if bandwidth == 1:
        return I
    w = _triangular_kernel(bandwidth)
    re = ndimage.convolve1d(I.values.real, w, axis=0, mode="wrap")
    im = ndimage.convolve1d(I.values.imag, w, axis=0, mode="wrap")
    return SpectralGrid(re + 1j * im)


# ----------------------------
# Frequency-wise linear algebra
# ----------------------------

def invert_values(values: np.ndarray) -> np.ndarray:
    """Frequency-wise inverse of a conjugate-symmetric stack, mirrored and Hermitized."""
    N = values.shape[0]
    half = values[: N // 2 + 1]
    cond = np.linalg.cond(half)
    bad = np.flatnonzero(~(cond <= MAX_CONDITION))
    if bad.size:
        j = int(bad[0])
        raise SingularityError(
            f"Spectral matrix numerically singular (condition number {cond[j]:.3g})",
            freq_index=j,
        )
    inv = np.linalg.inv(half)
    inv = 0.5 * (inv + np.conj(np.swapaxes(inv, 1, 2)))
    return mirror(inv, N)


def invert_grid(M: SpectralGrid) -> SpectralGrid:
    """g(lambda_j) = M(lambda_j)^{-1} at every frequency."""
    return SpectralGrid(invert_values(M.values))
