import json

import numpy as np
import pytest

from gimodels.core.graph import ModelSpec, UndirectedGraph
from gimodels.core.params import VarParams, theta_layout
from gimodels.errors import ArgumentError
from gimodels.fit.estimate import FitOptions, fit_gi
from gimodels.fit.projection import (
    constraint_sets,
    edge_projection_step,
    gi_from_spectrum,
    order_projection_step,
)
from gimodels.spectral.grid import SpectralGrid, mirror, periodogram, smooth_periodogram
from gimodels.spectral.series import TimeSeries, demean, empirical_covariances
from gimodels.spectral.taper import TaperSpec
from gimodels.spectral.transforms import (
    cov_from_spectrum,
    inv_cov_from_spectrum,
    partial_coherence,
)
from gimodels.varmod.var import inv_cov_from_var, simulate_var, var_spectrum, yule_walker
from gimodels.whittle.likelihood import standard_errors


def random_pd_grid(rng, d, N):
    half = rng.standard_normal((N // 2 + 1, d, d)) + 1j * rng.standard_normal((N // 2 + 1, d, d))
    half = half @ np.conj(np.swapaxes(half, 1, 2)) + 0.5 * np.eye(d)
    return SpectralGrid(mirror(half, N))


# ----------------------------
# Constraint sets
# ----------------------------

def test_constraint_sets():
    assert constraint_sets(1, UndirectedGraph.complete(4)).m == 0
    assert constraint_sets(1, UndirectedGraph.empty(3)).missing_edges == ((0, 1), (0, 2), (1, 2))
    G = UndirectedGraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (1, 4)])
    assert constraint_sets(2, G).m == 4


# ----------------------------
# Projection steps
# ----------------------------

@pytest.mark.parametrize("seed", range(50))
def test_edge_projection_zeroes_inverse_entry(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(3, 6))
    f = random_pd_grid(rng, d, 256)
    a, b = sorted(rng.choice(d, size=2, replace=False))
    out = edge_projection_step(f, (int(a), int(b)))

    inv = np.linalg.inv(out.values)
    assert np.max(np.abs(inv[:, a, b])) < 1e-12
    keep = np.ones((d, d), dtype=bool)
    keep[a, b] = keep[b, a] = False
    assert np.array_equal(out.values[:, keep], f.values[:, keep])
    assert out.is_positive_definite()


def test_edge_projection_without_conditioning_set(rng):
    out = edge_projection_step(random_pd_grid(rng, 2, 64), (0, 1))
    assert np.all(out.values[:, 0, 1] == 0)
    assert np.all(out.values[:, 1, 0] == 0)


def test_edge_projection_fixed_point(rng):
    once = edge_projection_step(random_pd_grid(rng, 4, 128), (1, 3))
    twice = edge_projection_step(once, (1, 3))
    np.testing.assert_allclose(twice.values, once.values, atol=1e-12)


def test_edge_projection_rejects_bad_pair(rng):
    with pytest.raises(ArgumentError):
        edge_projection_step(random_pd_grid(rng, 3, 16), (1, 1))


def test_order_projection_fixed_point(chain_params):
    f = var_spectrum(chain_params, 512)
    out, params = order_projection_step(f, 1)
    np.testing.assert_allclose(out.values, f.values, atol=1e-8)
    np.testing.assert_allclose(params.a, chain_params.a, atol=1e-8)


def test_order_projection_preserves_low_lags(rng):
    f = random_pd_grid(rng, 3, 256)
    out, _ = order_projection_step(f, 2)
    scale = np.max(np.abs(cov_from_spectrum(f, 0).gamma))
    np.testing.assert_allclose(
        cov_from_spectrum(out, 2).gamma, cov_from_spectrum(f, 2).gamma, atol=1e-8 * scale
    )
    tail = inv_cov_from_spectrum(out, 5).gamma[3:]
    assert np.max(np.linalg.norm(tail, axis=(1, 2))) < 1e-8


def test_order_projection_of_white_noise(white_noise):
    S = smooth_periodogram(periodogram(demean(white_noise)), 11)
    _, params = order_projection_step(S, 1)
    assert np.max(np.abs(params.a)) < 0.2


def test_gi_from_spectrum(chain_params):
    gi = gi_from_spectrum(var_spectrum(chain_params, 512), 1)
    np.testing.assert_allclose(gi.gamma_inv, inv_cov_from_var(chain_params).gamma_inv, atol=1e-10)


# ----------------------------
# fit_gi
# ----------------------------

def test_complete_graph_is_yule_walker(chain_series):
    result = fit_gi(chain_series, ModelSpec(2, UndirectedGraph.complete(3)))
    assert result.converged
    assert result.cycles == 1
    expected = yule_walker(empirical_covariances(demean(chain_series), 2, TaperSpec()), 2)
    np.testing.assert_allclose(result.var.a, expected.a, atol=1e-8)
    np.testing.assert_allclose(result.var.sigma, expected.sigma, atol=1e-8)
    np.testing.assert_allclose(
        result.gi.gamma_inv, inv_cov_from_var(expected).gamma_inv, atol=1e-8
    )


def test_empty_graph_two_series_single_cycle(white_noise):
    result = fit_gi(white_noise, ModelSpec(1, UndirectedGraph.empty(2)))
    assert result.converged
    assert result.cycles == 1
    assert result.var.a[0, 0, 1] == 0.0 and result.var.sigma[0, 1] == 0.0


def test_empty_graph_is_univariate_yule_walker():
    truth = VarParams(d=3, p=2, a=np.stack([np.diag([0.5, -0.3, 0.2]), np.diag([0.2, 0.1, -0.3])]),
                      sigma=np.diag([1.0, 2.0, 0.5]))
    X = simulate_var(truth, 1500, seed=5)
    result = fit_gi(X, ModelSpec(2, UndirectedGraph.empty(3)), FitOptions(tolerance=1e-10))
    assert result.converged
    for k in range(3):
        uni = yule_walker(empirical_covariances(demean(X.select([k])), 2, TaperSpec()), 2)
        np.testing.assert_allclose(result.var.a[:, k, k], uni.a[:, 0, 0], atol=1e-6)
        assert result.var.sigma[k, k] == pytest.approx(uni.sigma[0, 0], abs=1e-6)
    off = ~np.eye(3, dtype=bool)
    assert np.max(np.abs(result.var.a[:, off])) < 1e-6
    assert np.max(np.abs(result.var.sigma[off])) < 1e-6


def test_chain_fit_satisfies_likelihood_equations(chain_series, chain_graph):
    result = fit_gi(chain_series, ModelSpec(1, chain_graph))
    assert result.converged
    assert result.residuals.moment_residual <= 1e-6
    assert result.residuals.constraint_residual <= 1e-6
    assert len(result.trace) == result.cycles


def test_chain_fit_partial_coherence_vanishes(chain_series, chain_graph):
    result = fit_gi(chain_series, ModelSpec(1, chain_graph), FitOptions(tolerance=1e-10))
    assert result.converged
    R = partial_coherence(var_spectrum(result.var, result.N))
    assert np.max(np.abs(R[(0, 2)])) <= 1e-8
    assert np.max(np.abs(R[(0, 1)])) > 0.3


def test_chain_fit_within_three_standard_errors(chain_series, chain_graph, chain_params):
    opts = FitOptions(taper=TaperSpec.none())
    result = fit_gi(chain_series, ModelSpec(1, chain_graph), opts)
    se = standard_errors(result.gi, chain_graph, result.T, result.N)
    truth = inv_cov_from_var(chain_params).to_theta()
    estimate = result.gi.to_theta()
    free = se > 0
    assert np.all(np.abs(estimate[free] - truth[free]) <= 3 * se[free])


def test_fit_is_deterministic(chain_series, chain_graph):
    r1 = fit_gi(chain_series, ModelSpec(1, chain_graph))
    r2 = fit_gi(chain_series, ModelSpec(1, chain_graph))
    assert np.array_equal(r1.gi.gamma_inv, r2.gi.gamma_inv)
    assert np.array_equal(r1.var.a, r2.var.a)
    assert r1.loglik == r2.loglik and r1.trace == r2.trace


def test_fit_is_permutation_equivariant(chain_series, chain_graph):
    perm = [1, 0, 2]
    inv = np.argsort(perm)
    G = UndirectedGraph.from_edges(3, [(inv[a], inv[b]) for a, b in chain_graph.edges])
    opts = FitOptions(tolerance=1e-10)
    base = fit_gi(chain_series, ModelSpec(1, chain_graph), opts)
    moved = fit_gi(chain_series.select(perm), ModelSpec(1, G), opts)
    np.testing.assert_allclose(
        moved.gi.gamma_inv, base.gi.gamma_inv[:, perm][:, :, perm], atol=1e-8
    )
    np.testing.assert_allclose(moved.var.a, base.var.a[:, perm][:, :, perm], atol=1e-8)


def test_non_convergence_is_reported(chain_series):
    opts = FitOptions(tolerance=1e-12, max_cycles=1)
    result = fit_gi(chain_series, ModelSpec(1, UndirectedGraph.empty(3)), opts)
    assert not result.converged
    assert result.cycles == 1
    assert len(result.trace) == 1


def test_fit_preconditions(rng):
    X = TimeSeries(rng.standard_normal((6, 3)))
    with pytest.raises(ArgumentError):
        fit_gi(X, ModelSpec(1, UndirectedGraph.complete(3)))
    with pytest.raises(ArgumentError):
        fit_gi(X, ModelSpec(0, UndirectedGraph.complete(2)))


@pytest.mark.parametrize("kwargs", [{"tolerance": 0.0}, {"max_cycles": 0}, {"N": 511}])
def test_fit_options_validation(kwargs):
    with pytest.raises(ArgumentError):
        FitOptions(**kwargs)


def test_fit_result_json(chain_series, chain_graph):
    result = fit_gi(chain_series, ModelSpec(1, chain_graph))
    obj = json.loads(json.dumps(result.to_dict(include_asymptotics=True)))
    for key in ("spec", "var", "gamma_inv", "loglik", "residuals", "cycles", "converged", "N", "taper"):
        assert key in obj
    assert set(obj["residuals"]) == {"moment", "constraint"}
    assert len(obj["asymptotics"]["index"]) == len(theta_layout(3, 1))
    assert ModelSpec.from_dict(obj["spec"]) == ModelSpec(1, chain_graph)
