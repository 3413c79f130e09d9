"""
Parameter containers for the two equivalent model parameterizations.

GIParams holds the inverse covariances Gamma_i(0..p) of a GI(p,G) model and
VarParams the coefficients a(1..p) and innovation covariance Sigma of the
matching VAR(p,G) model. Arrays are copied and frozen on construction.

theta layout (fixed for gradients, information matrices and exports):
    vech of Gamma_i(0) as triples (a, b, 0), a <= b, row-major upper triangle
    (identical to the column-stacked lower triangle), followed by
    vec of Gamma_i(u), u = 1..p, column-stacked, as triples (a, b, u).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg

from gimodels.core.graph import UndirectedGraph
from gimodels.errors import ArgumentError, DegeneracyError

SYMMETRY_RTOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _scale(m: np.ndarray) -> float:
    return max(float(np.max(np.abs(m))), 1.0) if m.size else 1.0


@lru_cache(maxsize=64)
def theta_layout(d: int, p: int) -> tuple[tuple[int, int, int], ...]:
    """Index legend [(a, b, u), ...] of the full theta vector."""
    index = [(a, b, 0) for a in range(d) for b in range(a, d)]
    for u in range(1, p + 1):
        index.extend((a, b, u) for b in range(d) for a in range(d))
    return tuple(index)


# ----------------------------
# GI(p,G) parameterization
# ----------------------------

@dataclass(frozen=True, eq=False)
class GIParams:
    d: int
    p: int
    gamma_inv: np.ndarray  # shape (p + 1, d, d)

    def __post_init__(self) -> None:
        g = np.asarray(self.gamma_inv, dtype=float)
        if g.ndim != 3 or g.shape != (self.p + 1, self.d, self.d):
            raise ArgumentError(
                f"gamma_inv must have shape {(self.p + 1, self.d, self.d)}, got {g.shape}"
            )
        if not np.all(np.isfinite(g)):
            raise ArgumentError("gamma_inv has non-finite entries")
        if np.max(np.abs(g[0] - g[0].T)) > SYMMETRY_RTOL * _scale(g[0]):
            raise ArgumentError("Gamma_i(0) must be symmetric")
        object.__setattr__(self, "gamma_inv", _frozen(g))

    @property
    def layout(self) -> tuple[tuple[int, int, int], ...]:
        return theta_layout(self.d, self.p)

    def to_theta(self) -> np.ndarray:
        return np.array([self.gamma_inv[u, a, b] for a, b, u in self.layout])

    @classmethod
    def from_theta(cls, theta: np.ndarray, d: int, p: int) -> "GIParams":
        layout = theta_layout(d, p)
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (len(layout),):
            raise ArgumentError(f"theta must have length {len(layout)}, got {theta.shape}")
        g = np.zeros((p + 1, d, d))
        for value, (a, b, u) in zip(theta, layout):
            g[u, a, b] = value
            if u == 0:
                g[0, b, a] = value
        return cls(d=d, p=p, gamma_inv=g)

    def to_dict(self) -> dict:
        return {"d": self.d, "p": self.p, "gamma_inv": self.gamma_inv.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "GIParams":
        return cls(d=int(obj["d"]), p=int(obj["p"]), gamma_inv=np.array(obj["gamma_inv"]))


# ----------------------------
# VAR(p,G) parameterization
# ----------------------------

@dataclass(frozen=True, eq=False)
class VarParams:
    d: int
    p: int
    a: np.ndarray      # shape (p, d, d); a[v - 1] is a(v)
    sigma: np.ndarray  # shape (d, d)

    def __post_init__(self) -> None:
        if self.p < 0:
            raise ArgumentError(f"VAR order must be >= 0, got {self.p}")
        a = np.asarray(self.a, dtype=float)
        if a.size != self.p * self.d * self.d:
            raise ArgumentError(
                f"a must hold {self.p} matrices of shape {(self.d, self.d)}, got {a.shape}"
            )
        a = a.reshape(self.p, self.d, self.d)
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.shape != (self.d, self.d):
            raise ArgumentError(f"sigma must have shape {(self.d, self.d)}, got {sigma.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(sigma))):
            raise ArgumentError("VAR parameters have non-finite entries")
        if np.max(np.abs(sigma - sigma.T)) > SYMMETRY_RTOL * _scale(sigma):
            raise ArgumentError("sigma must be symmetric")
        try:
            linalg.cholesky(sigma, lower=True)
        except linalg.LinAlgError as exc:
            raise DegeneracyError("Innovation covariance sigma is not positive definite") from exc
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "sigma", _frozen(sigma))

    @property
    def K(self) -> np.ndarray:
        """Innovation precision Sigma^{-1}."""
        c = linalg.cho_factor(self.sigma, lower=True)
        return linalg.cho_solve(c, np.eye(self.d))

    def companion(self) -> np.ndarray:
        """dp x dp companion matrix of a(1..p)."""
        d, p = self.d, self.p
        comp = np.zeros((d * p, d * p))
        for v in range(p):
            comp[:d, v * d:(v + 1) * d] = self.a[v]
        if p > 1:
            comp[d:, :-d] = np.eye(d * (p - 1))
        return comp

    def polynomial(self, z: np.ndarray) -> np.ndarray:
        """A(z) = I - sum_v a(v) z^v evaluated at each point of z, shape (len(z), d, d)."""
        z = np.atleast_1d(z)
        out = np.broadcast_to(np.eye(self.d, dtype=complex), (z.size, self.d, self.d)).copy()
        for v in range(1, self.p + 1):
            out -= z[:, None, None] ** v * self.a[v - 1][None, :, :]
        return out

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "a": self.a.tolist(),
            "sigma": self.sigma.tolist(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "VarParams":
        try:
            d, p = int(obj["d"]), int(obj["p"])
            a = np.array(obj.get("a", []), dtype=float)
            return cls(d=d, p=p, a=a, sigma=np.array(obj["sigma"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"Malformed VAR parameter JSON: {exc}") from exc


# ----------------------------
# Zero pattern bookkeeping
# ----------------------------

@dataclass(frozen=True, eq=False)
class ZeroPattern:
    """Free/constrained flag for every theta coordinate of GI(p,G)."""

    p: int
    graph: UndirectedGraph
    mask: np.ndarray  # True = free

    @classmethod
    def from_graph(cls, p: int, graph: UndirectedGraph) -> "ZeroPattern":
        layout = theta_layout(graph.d, p)
        mask = np.array([graph.adjacent(a, b) for a, b, _ in layout], dtype=bool)
        mask.flags.writeable = False
        return cls(p=p, graph=graph, mask=mask)

    @property
    def layout(self) -> tuple[tuple[int, int, int], ...]:
        return theta_layout(self.graph.d, self.p)

    @property
    def n_free(self) -> int:
        return int(self.mask.sum())

    def free_indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def free_layout(self) -> list[tuple[int, int, int]]:
        return [t for t, free in zip(self.layout, self.mask) if free]

    def projector(self) -> np.ndarray:
        """P_G: selects the unconstrained coordinates, shape (n_free, n_theta)."""
        return np.eye(self.mask.size)[self.mask]


def param_count(p: int, G: UndirectedGraph) -> int:
    """Number of free parameters q of GI(p,G): d + |E| + p(d + 2|E|)."""
    if p < 0:
        raise ArgumentError(f"Model order must be >= 0, got {p}")
    return G.d + G.n_edges + p * (G.d + 2 * G.n_edges)


def apply_zero_pattern(theta: GIParams, G: UndirectedGraph) -> GIParams:
    """Copy of theta with every coordinate constrained by G set to zero."""
    if theta.d != G.d:
        raise ArgumentError(f"Dimension mismatch: theta has d={theta.d}, graph has d={G.d}")
    keep = np.eye(G.d, dtype=bool)
    for a, b in G.edges:
        keep[a, b] = keep[b, a] = True
    return GIParams(d=theta.d, p=theta.p, gamma_inv=np.where(keep[None], theta.gamma_inv, 0.0))
