"""
Whittle likelihood of a GI(p,G) model, its gradient, the likelihood-equation
residuals and the asymptotic covariance of the Whittle estimator.

    l_w(theta) = (1/4 pi) int [log det f_theta + tr(I f_theta^{-1})] d lambda

The inverse spectrum is linear in theta: for the coordinate (a, b, u)
    d f^{-1} / d theta = 2 pi [E_ab e^{-i lambda u} + E_ba e^{i lambda u}]
except for diagonal lag-0 coordinates, where it is 2 pi E_aa.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from scipy import linalg

from gimodels.core.graph import UndirectedGraph
from gimodels.core.params import GIParams, VarParams, ZeroPattern
from gimodels.errors import ArgumentError, IdentifiabilityError, SingularityError
from gimodels.spectral.grid import SpectralGrid, invert_values, model_grid_size
from gimodels.spectral.series import CovSeq
from gimodels.spectral.transforms import (
    cov_from_spectrum,
    fourier_coefficients,
    spectrum_from_gi,
)
from gimodels.varmod.var import inv_cov_from_var

logger = logging.getLogger(__name__)

IMAG_ATOL = 1e-10
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Scaled residuals of the two likelihood-equation families."""

    moment_residual: float
    constraint_residual: float
    table: pd.DataFrame = field(repr=False)

    @property
    def max_residual(self) -> float:
        return max(self.moment_residual, self.constraint_residual)

    def to_dict(self) -> dict:
        return {"moment": self.moment_residual, "constraint": self.constraint_residual}


def _check_grids(f_theta: SpectralGrid, I: SpectralGrid) -> None:
    if f_theta.d != I.d or f_theta.N != I.N:
        raise ArgumentError(
            f"Grid mismatch: model (d={f_theta.d}, N={f_theta.N}) "
            f"vs periodogram (d={I.d}, N={I.N})"
        )


def whittle_loglik(f_theta: SpectralGrid, I: SpectralGrid) -> float:
    """(1/4 pi)(2 pi/N) sum_j [log det f(lambda_j) + tr(I(lambda_j) f(lambda_j)^{-1})]."""
    _check_grids(f_theta, I)
    eig = np.linalg.eigvalsh(f_theta.values)
    bad = np.flatnonzero(~(eig[:, 0] > 0))
    if bad.size:
        raise SingularityError("Model spectrum is not positive definite", freq_index=int(bad[0]))
    g = invert_values(f_theta.values)
    logdet = np.sum(np.log(eig), axis=1)
    trace = np.einsum("jab,jba->j", I.values, g)
    total = np.sum(logdet + trace)
    if abs(total.imag) > IMAG_ATOL * max(abs(total.real), 1.0):
        raise SingularityError(f"Whittle likelihood has imaginary residue {total.imag:.3g}")
    return float(total.real / (2.0 * I.N))


def whittle_loglik_var(params: VarParams, gammahat: CovSeq) -> float:
    """
    Whittle likelihood of a stable VAR(p) in closed form:
        1/2 [log det(Sigma / 2pi) + sum_{|u|<=p} tr(Gamma_i(u) Gamma_hat(u)')]
    using int log|det A(e^{-i lambda})|^2 d lambda = 0 for stable A.
    """
    if gammahat.L < params.p:
        raise ArgumentError(f"Need empirical covariances up to lag {params.p}")
    gi = inv_cov_from_var(params).gamma_inv
    _, logdet = np.linalg.slogdet(params.sigma / (2.0 * np.pi))
    quad = np.trace(gi[0] @ gammahat.gamma[0].T)
    quad += 2.0 * sum(np.trace(gi[u] @ gammahat.gamma[u].T) for u in range(1, params.p + 1))
    return float(0.5 * (logdet + quad))


def _lag_covariances(values: np.ndarray, L: int, what: str) -> np.ndarray:
    return 2.0 * np.pi * fourier_coefficients(values, L, what)


def whittle_gradient(theta: GIParams, G: UndirectedGraph, I: SpectralGrid) -> np.ndarray:
    """
    Partial derivatives of whittle_loglik(spectrum_from_gi(theta), I) with
    respect to the free theta coordinates, in theta layout order.

    For a coordinate (a, b, u) other than a diagonal lag-0 one this is
    int (I_ab - f_ab) e^{i lambda u} d lambda, i.e. the moment difference
    Gamma_hat_ab(u) - Gamma_theta,ab(u); diagonal lag-0 coordinates get half
    of that because they enter the inverse spectrum only once.
    """
    if theta.d != G.d or theta.d != I.d:
        raise ArgumentError("theta, graph and periodogram dimensions differ")
    f = spectrum_from_gi(theta, I.N)
    diff = (
        _lag_covariances(I.values, theta.p, "periodogram")
        - _lag_covariances(f.values, theta.p, "model spectrum")
    )
    pattern = ZeroPattern.from_graph(theta.p, G)
    grad = []
    for a, b, u in pattern.free_layout():
        value = diff[u, a, b]
        grad.append(0.5 * value if (a == b and u == 0) else value)
    return np.array(grad)


def likelihood_residuals(
    theta: GIParams,
    G: UndirectedGraph,
    p: int,
    gammahat: CovSeq,
    N: Optional[int] = None,
) -> ResidualReport:
    """
    Scaled residuals of the likelihood equations:
        (i)  Gamma_theta,ab(u) = Gamma_hat_ab(u) for a = b or a-b in E,
        (ii) Gamma_i,ab(u) = 0 for missing edges a-b,
    for |u| <= p. Moments are scaled by sqrt(Gamma_hat_aa(0) Gamma_hat_bb(0)),
    inverse covariances by sqrt(Gamma_i,aa(0) Gamma_i,bb(0)).
    """
    if gammahat.L < p:
        raise ArgumentError(f"Need empirical covariances up to lag {p}, got L={gammahat.L}")
    if theta.p != p or theta.d != G.d or gammahat.d != G.d:
        raise ArgumentError("theta, graph and covariance dimensions/orders differ")
    N = model_grid_size(p) if N is None else N
    model = cov_from_spectrum(spectrum_from_gi(theta, N), p).gamma
    emp = gammahat.gamma
    tiny = np.finfo(float).tiny
    m_scale = np.sqrt(np.maximum(np.outer(np.diag(emp[0]), np.diag(emp[0])), tiny))
    gi0 = np.diag(theta.gamma_inv[0])
    c_scale = np.sqrt(np.maximum(np.outer(gi0, gi0), tiny))

    rows = []
    for u in range(p + 1):
        for a in range(G.d):
            for b in range(G.d):
                if u == 0 and b < a:
                    continue
                if G.adjacent(a, b):
                    value = model[u, a, b] - emp[u, a, b]
                    rows.append(("moment", a, b, u, value, abs(value) / m_scale[a, b]))
                else:
                    value = theta.gamma_inv[u, a, b]
                    rows.append(("constraint", a, b, u, value, abs(value) / c_scale[a, b]))
    table = pd.DataFrame(rows, columns=["kind", "a", "b", "u", "value", "scaled"])
    by_kind = table.groupby("kind")["scaled"].max()
    return ResidualReport(
        moment_residual=float(by_kind.get("moment", 0.0)),
        constraint_residual=float(by_kind.get("constraint", 0.0)),
        table=table,
    )


# ----------------------------
# Asymptotics
# ----------------------------

def _derivative_terms(a: int, b: int, u: int) -> list[tuple[int, int, int]]:
    """d g / d theta_(a,b,u) / 2pi as a list of (r, s, e): E_rs e^{-i lambda e}."""
    if a == b and u == 0:
        return [(a, a, 0)]
    return [(a, b, u), (b, a, -u)]


def information_matrix(theta: GIParams, N: Optional[int] = None) -> np.ndarray:
    """
    Xi_ij = (1/4 pi) int tr[f dg_i f dg_j] d lambda over the full theta layout.

    Evaluated from the Fourier coefficients of the products f_st f_vr, so the
    cost is one FFT of a (N, d, d, d, d) stack.
    """
    N = model_grid_size(theta.p) if N is None else N
    f = spectrum_from_gi(theta, N).values
    prod = np.einsum("jst,jvr->jstvr", f, f)
    W = np.fft.fft(prod, axis=0) / N  # W[w] = (1/N) sum_j prod_j e^{-i lambda_j w}

    terms = [_derivative_terms(a, b, u) for a, b, u in theta.layout]
    n = len(terms)
    xi = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            acc = 0.0
            for r, s, e1 in terms[i]:
                for t, v, e2 in terms[j]:
                    acc += W[(e1 + e2) % N, s, t, v, r].real
            xi[i, j] = xi[j, i] = 2.0 * np.pi**2 * acc
    return xi


def asymptotic_covariance(
    theta: GIParams, G: UndirectedGraph, N: Optional[int] = None
) -> np.ndarray:
    """Lambda = P_G' (P_G Xi P_G')^{-1} P_G over the full theta layout."""
    if theta.d != G.d:
        raise ArgumentError(f"Dimension mismatch: theta d={theta.d}, graph d={G.d}")
    xi = information_matrix(theta, N)
    P = ZeroPattern.from_graph(theta.p, G).projector()
    reduced = P @ xi @ P.T
    if reduced.size and np.linalg.cond(reduced) > MAX_CONDITION:
        raise IdentifiabilityError("Projected information matrix is singular")
    try:
        inv = linalg.inv(reduced) if reduced.size else reduced
    except linalg.LinAlgError as exc:
        raise IdentifiabilityError("Projected information matrix is singular") from exc
    lam = P.T @ inv @ P
    return 0.5 * (lam + lam.T)


def standard_errors(
    theta: GIParams, G: UndirectedGraph, T: int, N: Optional[int] = None
) -> np.ndarray:
    """Asymptotic standard errors sqrt(diag(Lambda) / T) over the theta layout."""
    lam = asymptotic_covariance(theta, G, N)
    return np.sqrt(np.clip(np.diag(lam), 0.0, None) / T)
