"""
Exception hierarchy shared by the library and the CLI.

The CLI maps every class to a process exit code:
    InputError       -> 2
    NumericalError   -> 3
    ConvergenceError -> 4
"""

from __future__ import annotations


class GIModelError(Exception):
    """Base class for all gimodels errors."""

    exit_code: int = 1


# ----------------------------
# Input problems (exit 2)
# ----------------------------

class InputError(GIModelError, ValueError):
    exit_code = 2


class ArgumentError(InputError):
    """Invalid argument: wrong dimension, overlapping sets, bad ranges."""


class DataError(InputError):
    """Unusable observations: non-finite values, unparsable cells."""


class EnumerationCapError(ArgumentError):
    def __init__(self, d: int, cap: int):
        self.d = d
        self.cap = cap
        self.count = 2 ** (d * (d - 1) // 2)
        super().__init__(
            f"Refusing to enumerate {self.count} graphs for d={d} "
            f"(cap is d <= {cap}; raise the cap to override)"
        )


# ----------------------------
# Numerical problems (exit 3)
# ----------------------------

class NumericalError(GIModelError):
    exit_code = 3


class DegeneracyError(NumericalError):
    """Singular or indefinite covariance structure (constant/collinear series)."""


class SingularityError(NumericalError):
    def __init__(self, message: str, freq_index: int | None = None):
        self.freq_index = freq_index
        if freq_index is not None:
            message = f"{message} (frequency index {freq_index})"
        super().__init__(message)


class StabilityError(NumericalError):
    """VAR companion matrix has an eigenvalue on or outside the unit circle."""


class InconsistencyError(NumericalError):
    """Grid violates conjugate symmetry (imaginary residue in covariances)."""


class IdentifiabilityError(NumericalError):
    """Projected information matrix is singular."""


class SelectionError(NumericalError):
    """No candidate model could be fitted to convergence."""


# ----------------------------
# Non-convergence (exit 4)
# ----------------------------

class ConvergenceError(GIModelError):
    exit_code = 4
