"""
Observed series and empirical covariance sequences.

Covariances follow the convention Gamma(u) = E X(t+u) X(t)' with negative
lags represented implicitly as Gamma(-u) = Gamma(u)'.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from gimodels.errors import ArgumentError, DataError
from gimodels.spectral.taper import TaperSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    data: np.ndarray  # shape (T, d), row = time point
    labels: tuple[str, ...] = field(default=())
    demeaned: bool = False

    def __post_init__(self) -> None:
        x = np.array(self.data, dtype=float, copy=True)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise DataError(f"Series must be a T x d matrix, got shape {x.shape}")
        if x.shape[0] < 2:
            raise DataError(f"Series needs at least 2 time points, got {x.shape[0]}")
        if not np.all(np.isfinite(x)):
            rows, cols = np.nonzero(~np.isfinite(x))
            raise DataError(
                f"Series has non-finite values (first at row {rows[0]}, column {cols[0]})"
            )
        labels = tuple(self.labels) or tuple(f"x{i}" for i in range(x.shape[1]))
        if len(labels) != x.shape[1]:
            raise DataError(f"Got {len(labels)} labels for {x.shape[1]} columns")
        if self.demeaned:
            scale = max(float(np.max(np.abs(x))), 1.0)
            if np.max(np.abs(x.sum(axis=0))) > 1e-9 * x.shape[0] * scale:
                raise DataError("Series flagged as demeaned has nonzero column means")
        x.flags.writeable = False
        object.__setattr__(self, "data", x)
        object.__setattr__(self, "labels", labels)

    @property
    def T(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def select(self, columns: Sequence[int]) -> "TimeSeries":
        return TimeSeries(
            self.data[:, list(columns)],
            tuple(self.labels[i] for i in columns),
            self.demeaned,
        )


@dataclass(frozen=True, eq=False)
class CovSeq:
    """Gamma(0..L); also used for inverse covariances Gamma_i(0..L)."""

    d: int
    L: int
    gamma: np.ndarray  # shape (L + 1, d, d)

    def __post_init__(self) -> None:
        g = np.array(self.gamma, dtype=float, copy=True)
        if g.shape != (self.L + 1, self.d, self.d):
            raise ArgumentError(
                f"gamma must have shape {(self.L + 1, self.d, self.d)}, got {g.shape}"
            )
        g[0] = 0.5 * (g[0] + g[0].T)
        g.flags.writeable = False
        object.__setattr__(self, "gamma", g)

    def lag(self, u: int) -> np.ndarray:
        if abs(u) > self.L:
            raise ArgumentError(f"Lag {u} outside stored range |u| <= {self.L}")
        return self.gamma[u] if u >= 0 else self.gamma[-u].T


def demean(X: TimeSeries) -> TimeSeries:
    """Subtract each column's sample mean."""
    centered = X.data - X.data.mean(axis=0, keepdims=True)
    return TimeSeries(centered, X.labels, demeaned=True)


def tapered_data(X: TimeSeries, taper: Optional[TaperSpec]) -> tuple[np.ndarray, float]:
    """Return (h * X, H2) for the given taper (None means no taper)."""
    taper = taper or TaperSpec.none()
    h = taper.window(X.T)
    return X.data * h[:, None], float(np.sum(h**2))


def empirical_covariances(
    X: TimeSeries, L: int, taper: Optional[TaperSpec] = None
) -> CovSeq:
    """
    Biased empirical covariances Gamma_hat(u) = (1/T) sum_t X(t+u) X(t)'.

    With a taper the tapered series h*X is used and the sum is divided by
    H2 = sum h_t^2, which makes the result the exact lag-u Fourier coefficient
    of the tapered periodogram.
    """
    if not X.demeaned:
        logger.debug("empirical_covariances called on a series not flagged as demeaned")
    if not 0 <= L < X.T:
        raise ArgumentError(f"Maximum lag must satisfy 0 <= L < T={X.T}, got L={L}")
    y, h2 = tapered_data(X, taper)
    T = X.T
    gamma = np.empty((L + 1, X.d, X.d))
    for u in range(L + 1):
        gamma[u] = y[u:].T @ y[: T - u] / h2
    return CovSeq(X.d, L, gamma)
