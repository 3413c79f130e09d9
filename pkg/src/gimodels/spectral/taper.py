"""Data tapers applied before the discrete Fourier transform."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import windows

from gimodels.errors import ArgumentError

TAPER_KINDS = ("none", "cosine-bell")


@dataclass(frozen=True)
class TaperSpec:
    """
    kind: "none" or "cosine-bell" (split cosine bell / Tukey window).
    fraction: portion of each end of the series that is tapered; values above
        0.5 saturate at a full Hann window.
    """

    kind: str = "cosine-bell"
    fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in TAPER_KINDS:
            raise ArgumentError(f"Unknown taper kind {self.kind!r}; expected one of {TAPER_KINDS}")
        if not 0.0 <= float(self.fraction) <= 1.0:
            raise ArgumentError(f"Taper fraction must lie in [0, 1], got {self.fraction}")

    @classmethod
    def none(cls) -> "TaperSpec":
        return cls(kind="none", fraction=0.0)

    def window(self, T: int) -> np.ndarray:
        if self.kind == "none" or self.fraction == 0.0:
            return np.ones(T)
        return windows.tukey(T, alpha=min(2.0 * self.fraction, 1.0), sym=True)

    def H2(self, T: int) -> float:
        return float(np.sum(self.window(T) ** 2))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "fraction": self.fraction}

    @classmethod
    def from_dict(cls, obj: dict) -> "TaperSpec":
        return cls(kind=str(obj.get("kind", "none")), fraction=float(obj.get("fraction", 0.0)))
