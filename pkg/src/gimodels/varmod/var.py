"""
VAR(p) machinery for the VAR(p,G) parameterization.

Model: X(t) = sum_{v=1..p} a(v) X(t-v) + eps(t), eps ~ N(0, Sigma),
characteristic polynomial A(z) = I - sum_v a(v) z^v.
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import linalg

from gimodels.core.params import GIParams, VarParams
from gimodels.errors import ArgumentError, DegeneracyError, StabilityError
from gimodels.spectral.grid import SpectralGrid, frequencies, mirror
from gimodels.spectral.series import CovSeq, TimeSeries

logger = logging.getLogger(__name__)

STABILITY_MARGIN = 1e-8
MAX_CONDITION = 1e12


class StabilityResult(NamedTuple):
    stable: bool
    radius: float


def block_toeplitz(gamma: CovSeq, p: int) -> np.ndarray:
    """Covariance of the stacked state [X(t-1); ...; X(t-p)]: block (u, v) = Gamma(v - u)."""
    d = gamma.d
    R = np.empty((d * p, d * p))
    for u in range(p):
        for v in range(p):
            R[u * d:(u + 1) * d, v * d:(v + 1) * d] = gamma.lag(v - u)
    return R


def _cholesky(m: np.ndarray, what: str):
    try:
        c = linalg.cho_factor(m, lower=True)
    except linalg.LinAlgError as exc:
        raise DegeneracyError(
            f"{what} is not positive definite (constant or collinear series?)"
        ) from exc
    if np.linalg.cond(m) > MAX_CONDITION:
        raise DegeneracyError(
            f"{what} is numerically singular (constant or collinear series?)"
        )
    return c


def yule_walker(gammahat: CovSeq, p: int) -> VarParams:
    """
    Solve Gamma(u) = sum_v a(v) Gamma(u - v) + Sigma delta_{u0}, u = 0..p.

    Transposed, the equations for u = 1..p form one dense symmetric block
    system R [a(1)'; ...; a(p)'] = [Gamma(1)'; ...; Gamma(p)'] of size dp.
    """
    if p < 0:
        raise ArgumentError(f"Order must be >= 0, got {p}")
    if gammahat.L < p:
        raise ArgumentError(f"Need covariances up to lag {p}, got L={gammahat.L}")
    d = gammahat.d
    g0 = gammahat.gamma[0]

    if p == 0:
        _cholesky(g0, "Gamma(0)")
        return VarParams(d=d, p=0, a=np.zeros((0, d, d)), sigma=g0)

    R = block_toeplitz(gammahat, p)
    c = _cholesky(R, f"Block-Toeplitz covariance matrix of order {p}")
    rhs = np.vstack([gammahat.gamma[u].T for u in range(1, p + 1)])  # (dp, d)
    a_t = linalg.cho_solve(c, rhs)
    a = np.stack([a_t[v * d:(v + 1) * d].T for v in range(p)])

    sigma = g0 - sum(a[v - 1] @ gammahat.gamma[v].T for v in range(1, p + 1))
    sigma = 0.5 * (sigma + sigma.T)
    _cholesky(sigma, "Innovation covariance")
    return VarParams(d=d, p=p, a=a, sigma=sigma)


def stability_check(params: VarParams, margin: float = STABILITY_MARGIN) -> StabilityResult:
    """Spectral radius of the companion matrix and whether it is < 1 - margin."""
    if params.p == 0:
        return StabilityResult(True, 0.0)
    radius = float(np.max(np.abs(np.linalg.eigvals(params.companion()))))
    return StabilityResult(radius < 1.0 - margin, radius)


def _require_stable(params: VarParams) -> None:
    stable, radius = stability_check(params)
    if not stable:
        raise StabilityError(f"VAR({params.p}) is not stable: spectral radius {radius:.10g}")


def var_spectrum(params: VarParams, N: int) -> SpectralGrid:
    """f(lambda) = (1/2pi) A(e^{-i lambda})^{-1} Sigma A(e^{-i lambda})^{-*}."""
    _require_stable(params)
    lam = frequencies(N)[: N // 2 + 1]
    H = np.linalg.inv(params.polynomial(np.exp(-1j * lam)))
    f = H @ params.sigma @ np.conj(np.swapaxes(H, 1, 2)) / (2.0 * np.pi)
    f = 0.5 * (f + np.conj(np.swapaxes(f, 1, 2)))
    return SpectralGrid(mirror(f, N))


def inv_cov_from_var(params: VarParams) -> GIParams:
    """Gamma_i(u) = sum_{v=0}^{p-u} a(v)' K a(v+u) with a(0) = -I, u = 0..p."""
    d, p = params.d, params.p
    try:
        K = params.K
    except linalg.LinAlgError as exc:
        raise DegeneracyError("Innovation covariance is singular") from exc
    coefs = [-np.eye(d)] + [params.a[v] for v in range(p)]
    gamma_inv = np.empty((p + 1, d, d))
    for u in range(p + 1):
        gamma_inv[u] = sum(coefs[v].T @ K @ coefs[v + u] for v in range(p - u + 1))
    gamma_inv[0] = 0.5 * (gamma_inv[0] + gamma_inv[0].T)
    return GIParams(d=d, p=p, gamma_inv=gamma_inv)


def var_autocovariances(params: VarParams, L: int) -> CovSeq:
    """Exact Gamma(0..L) of a stable VAR via the companion-form Lyapunov equation."""
    _require_stable(params)
    d, p = params.d, params.p
    gamma = np.zeros((L + 1, d, d))
    if p == 0:
        gamma[0] = params.sigma
        return CovSeq(d, L, gamma)

    F = params.companion()
    Q = np.zeros((d * p, d * p))
    Q[:d, :d] = params.sigma
    big = linalg.solve_discrete_lyapunov(F, Q)
    # state covariance block (i, j) = Gamma(j - i)
    for u in range(min(L, p - 1) + 1):
        gamma[u] = big[:d, u * d:(u + 1) * d]
    for u in range(p, L + 1):
        gamma[u] = sum(
            params.a[v - 1] @ (gamma[u - v] if u >= v else gamma[v - u].T)
            for v in range(1, p + 1)
        )
    return CovSeq(d, L, gamma)


def _symmetric_root(sigma: np.ndarray) -> np.ndarray:
    w, V = linalg.eigh(sigma)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def simulate_var(
    params: VarParams,
    T: int,
    burnin: Optional[int] = None,
    seed: int = 0,
    labels: Sequence[str] = (),
) -> TimeSeries:
    """
    Gaussian VAR(p) sample path of length T from a zero initial state.

    The first `burnin` (default 10p + 100) values are discarded. Identical
    (params, T, burnin, seed) give bit-identical output.
    """
    _require_stable(params)
    if T < 2:
        raise ArgumentError(f"T must be >= 2 (a TimeSeries needs two points), got {T}")
    burnin = 10 * params.p + 100 if burnin is None else int(burnin)
    if burnin < 0:
        raise ArgumentError(f"burnin must be >= 0, got {burnin}")

    d, p = params.d, params.p
    n = burnin + T
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((n, d)) @ _symmetric_root(params.sigma)

    x = np.zeros((n + p, d))
    coef = np.hstack(list(params.a)) if p else np.zeros((d, 0))  # [a(1) ... a(p)]
    for t in range(p, n + p):
        x[t] = coef @ x[t - p:t][::-1].reshape(-1) + eps[t - p]

    logger.debug(f"Simulated VAR({p}) d={d} T={T} burnin={burnin} seed={seed}")
    return TimeSeries(x[p + burnin:], tuple(labels))
