import numpy as np
import pytest

from gimodels.core.graph import UndirectedGraph
from gimodels.core.params import VarParams
from gimodels.spectral.series import TimeSeries
from gimodels.varmod.var import simulate_var


def chain_var() -> VarParams:
    """VAR(1) that is Markov for the chain 0 - 1 - 2 (partial coherencies ~0.51)."""
    K = np.array([[1.0, -0.6, 0.0], [-0.6, 1.36, -0.6], [0.0, -0.6, 1.0]])
    sigma = np.linalg.inv(K)
    return VarParams(d=3, p=1, a=np.diag([0.5, 0.4, 0.5])[None], sigma=0.5 * (sigma + sigma.T))


def random_stable_var(rng: np.random.Generator, d: int, p: int, radius: float = 0.8) -> VarParams:
    a = 0.3 * rng.standard_normal((p, d, d))
    comp = VarParams(d=d, p=p, a=a, sigma=np.eye(d)).companion()
    r = float(np.max(np.abs(np.linalg.eigvals(comp)))) if p else 0.0
    if r > radius:
        c = radius / r
        a = np.stack([a[v] * c ** (v + 1) for v in range(p)])
    B = rng.standard_normal((d, d))
    return VarParams(d=d, p=p, a=a, sigma=B @ B.T + d * np.eye(d))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def chain_graph():
    return UndirectedGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def chain_params():
    return chain_var()


@pytest.fixture
def chain_series(chain_params):
    return simulate_var(chain_params, T=2000, seed=7)


@pytest.fixture
def white_noise(rng):
    return TimeSeries(rng.standard_normal((500, 2)), ("u", "v"))
