"""Grid construction, seeding, and sweep orchestration."""

import numpy as np
import pytest

from temperlab.hmc import HmcConfig
from temperlab.models import ConjugateGaussianModel, make_synthetic_dataset
from temperlab.sweep import chain_rng, make_beta_grid, run_sweep


def test_grid_monotone_positive():
    g = make_beta_grid(0.01, 3.0, 20, n=200, include_unity=True, include_wbic=True)
    v = g.values
    assert np.all(v > 0)
    assert np.all(np.diff(v) > 0)
    assert any(abs(x - 1.0) < 1e-12 for x in v)
    bn = 1.0 / np.log(200)
    assert abs(v[g.wbic_index] - bn) < 1e-12
    assert g.includes_unity


def test_grid_dedup_near_special():
    # beta_max exactly 1.0 must not duplicate the unity insertion.
    g = make_beta_grid(0.1, 1.0, 5, n=100, include_unity=True)
    assert np.sum(np.abs(g.values - 1.0) < 1e-9) == 1


def test_grid_wbic_needs_n():
    with pytest.raises(ValueError):
        make_beta_grid(0.1, 1.0, 5, n=2, include_wbic=True)
    with pytest.raises(ValueError):
        make_beta_grid(0.1, 1.0, 5, include_wbic=True)


def test_grid_rejects_bad_range():
    with pytest.raises(ValueError):
        make_beta_grid(1.0, 0.1, 5)
    with pytest.raises(ValueError):
        make_beta_grid(0.0, 1.0, 5)


def test_chain_rng_streams_distinct_and_stable():
    a = chain_rng(123, 0).standard_normal(4)
    b = chain_rng(123, 1).standard_normal(4)
    a2 = chain_rng(123, 0).standard_normal(4)
    np.testing.assert_array_equal(a, a2)
    assert not np.allclose(a, b)


@pytest.fixture(scope="module")
def setup():
    model = ConjugateGaussianModel(1)
    data = make_synthetic_dataset("conjugate", {"theta": [0.5]}, 60, seed=0)
    grid = make_beta_grid(0.05, 1.0, 6, n=60, include_unity=True)
    cfg = HmcConfig(n_warmup=200, n_samples=1200, n_leapfrog=10, seed=11)
    return model, data, grid, cfg


def test_sweep_means_match_oracle(setup):
    model, data, grid, cfg = setup
    sweep = run_sweep(model, data, grid, cfg)
    assert len(sweep.chains) == len(grid.values)
    for chain in sweep.chains:
        mean, var = model.tempered_moments(data, chain.beta)
        ess = chain.ess_by_coordinate[0]
        se = np.sqrt(var / ess)
        assert abs(chain.samples.mean() - mean[0]) < 3 * se


def test_warm_vs_cold_agree(setup):
    model, data, grid, cfg = setup
    warm = run_sweep(model, data, grid, cfg, warm_start=True)
    cold = run_sweep(model, data, grid, cfg, warm_start=False)
    for cw, cc in zip(warm.chains, cold.chains):
        _, var = model.tempered_moments(data, cw.beta)
        se = np.sqrt(var / min(cw.ess_by_coordinate[0], cc.ess_by_coordinate[0]))
        assert abs(cw.samples.mean() - cc.samples.mean()) < 3 * np.sqrt(2) * se


def test_sweep_deterministic(setup):
    model, data, grid, cfg = setup
    a = run_sweep(model, data, grid, cfg)
    b = run_sweep(model, data, grid, cfg)
    for ca, cb in zip(a.chains, b.chains):
        np.testing.assert_array_equal(ca.samples, cb.samples)


def test_prior_chain_optional(setup):
    model, data, grid, cfg = setup
    sweep = run_sweep(model, data, grid, cfg, include_prior_chain=False)
    assert sweep.prior_chain is None
