"""
The two projection steps of the alternating fitting algorithm.

C_0 (order step): replace the current spectrum by the VAR(p) spectrum that
matches its covariances at lags 0..p (Yule-Walker).
C_i (edge step): replace the cross-spectrum of a missing edge {a,b} by the
partial regression f_aS f_SS^{-1} f_Sb, S = V minus {a,b}; this zeroes the
(a,b) entry of the inverse spectrum and leaves every other entry untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gimodels.core.graph import UndirectedGraph
from gimodels.core.params import GIParams, VarParams
from gimodels.errors import ArgumentError, SingularityError
from gimodels.spectral.grid import MAX_CONDITION, SpectralGrid, mirror
from gimodels.spectral.transforms import cov_from_spectrum, inv_cov_from_spectrum
from gimodels.varmod.var import var_spectrum, yule_walker


@dataclass(frozen=True)
class ConstraintSets:
    """Missing edges {a_i, b_i}, i = 1..m, in lexicographic order; C_0 is implicit."""

    missing_edges: tuple[tuple[int, int], ...]
    p: int

    @property
    def m(self) -> int:
        return len(self.missing_edges)


def constraint_sets(p: int, G: UndirectedGraph) -> ConstraintSets:
    return ConstraintSets(missing_edges=tuple(G.missing_edges()), p=p)


def order_projection_step(f: SpectralGrid, p: int) -> tuple[SpectralGrid, VarParams]:
    """Yule-Walker projection onto VAR(p) spectra, on the same grid."""
    gamma = cov_from_spectrum(f, p)
    params = yule_walker(gamma, p)
    return var_spectrum(params, f.N), params


def edge_projection_step(f: SpectralGrid, pair: tuple[int, int]) -> SpectralGrid:
    """Set f_ab = f_aS f_SS^{-1} f_Sb and f_ba = conj(f_ab) at every frequency."""
    a, b = pair
    if a == b or not (0 <= a < f.d and 0 <= b < f.d):
        raise ArgumentError(f"Invalid vertex pair {pair} for d={f.d}")
    S = [v for v in range(f.d) if v not in (a, b)]
    N = f.N
    half = f.values[: N // 2 + 1]

    if S:
        f_ss = half[:, S][:, :, S]
        cond = np.linalg.cond(f_ss)
        bad = np.flatnonzero(~(cond <= MAX_CONDITION))
        if bad.size:
            raise SingularityError(
                f"f_SS singular while projecting edge {{{a},{b}}}", freq_index=int(bad[0])
            )
        coef = np.linalg.solve(f_ss, half[:, S, b][:, :, None])[:, :, 0]
        cross = np.einsum("js,js->j", half[:, a, S], coef)
    else:
        cross = np.zeros(half.shape[0], dtype=complex)

    cross = mirror(cross, N)
    values = np.array(f.values, copy=True)
    values[:, a, b] = cross
    values[:, b, a] = np.conj(cross)
    return SpectralGrid(values)


def gi_from_spectrum(f: SpectralGrid, p: int) -> GIParams:
    """GI estimate read off any iterate: inverse covariances Gamma_i(0..p)."""
    return GIParams(d=f.d, p=p, gamma_inv=inv_cov_from_spectrum(f, p).gamma)
