"""Concrete models against independent oracles (mpmath, closed forms)."""

import mpmath as mp
import numpy as np
import pytest

from temperlab.model import check_gradient
from temperlab.models import (
    ConjugateGaussianModel,
    MixtureModel,
    RRRModel,
    TwoLayerNetModel,
    make_synthetic_dataset,
)

mp.mp.dps = 50


# ---------------------------------------------------------------- mixture


def test_mixture_pointwise_mpmath_oracle():
    model = MixtureModel(noise_sd=1.3, prior_sd=2.0)
    xs = np.array([-2.1, 0.0, 0.4, 3.7])
    data = make_synthetic_dataset("mixture", {"mu": 1.0, "noise_sd": 1.0}, 4, seed=0)
    data = type(data)(n=4, x=xs)
    mu = 0.8
    got = model.loglik_pointwise(np.array([mu]), data)
    s = mp.mpf("1.3")
    for xi, g in zip(xs, got):
        z = mp.mpf(repr(float(xi)))
        m = mp.mpf(repr(mu))
        dens = mp.mpf("0.5") * (
            mp.exp(-((z - m) ** 2) / (2 * s**2)) + mp.exp(-((z + m) ** 2) / (2 * s**2))
        ) / (mp.sqrt(2 * mp.pi) * s)
        assert abs(g - float(mp.log(dens))) < 1e-12


def test_mixture_symmetry_exact():
    model = MixtureModel()
    data = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 30, seed=1)
    a = model.loglik_pointwise(np.array([0.9]), data)
    b = model.loglik_pointwise(np.array([-0.9]), data)
    np.testing.assert_array_equal(a, b)


def test_mixture_gradient_large_arguments():
    # The responsibility term must not overflow for extreme mu.
    model = MixtureModel()
    data = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 20, seed=2)
    g = model.grad_loglik_total(np.array([50.0]), data)
    assert np.all(np.isfinite(g))


# ---------------------------------------------------------------- conjugate


@pytest.fixture(scope="module")
def conj():
    model = ConjugateGaussianModel(2)
    data = make_synthetic_dataset("conjugate", {"theta": [1.0, 0.5]}, 60, seed=9)
    return model, data


def test_conjugate_posterior_moments(conj):
    model, data = conj
    beta = 0.37
    mean, var = model.tempered_moments(data, beta)
    xbar = data.x.mean(axis=0)
    denom = 1.0 + beta * data.n
    np.testing.assert_allclose(mean, beta * data.n * xbar / denom, rtol=1e-12)
    assert var == pytest.approx(1.0 / denom, rel=1e-12)


def test_conjugate_log_partition_brute_force(conj):
    model, data = conj
    # Monte Carlo over the prior gives an independent (noisy) estimate of
    # Z(beta) = E_prior[exp(beta * loglik)] for small beta.
    beta = 0.02
    rng = np.random.default_rng(4)
    thetas = rng.standard_normal((400_000, 2))
    sq = ((data.x[None, :, :] - thetas[:, None, :]) ** 2).sum(axis=(1, 2))
    ll = -0.5 * data.n * 2 * np.log(2 * np.pi) - 0.5 * sq
    est = np.log(np.mean(np.exp(beta * (ll - ll.max())))) + beta * ll.max()
    assert model.log_partition(data, beta) == pytest.approx(est, abs=0.01)


def test_conjugate_var_loglik_formula(conj):
    model, data = conj
    beta = 0.8
    # Var_beta(l) = n^2 sigma^2 ||xbar - mu||^2 + d n^2 sigma^4 / 2
    _, var = model.tempered_moments(data, beta)
    mean, _ = model.tempered_moments(data, beta)
    xbar = data.x.mean(axis=0)
    expect = data.n**2 * var * np.sum((xbar - mean) ** 2) + 2 * data.n**2 * var**2 / 2
    assert model.var_loglik(data, beta) == pytest.approx(expect, rel=1e-12)


def test_conjugate_curvature_is_second_derivative(conj):
    model, data = conj
    # Var_beta(l) must equal d^2/dbeta^2 log Z(beta).
    beta, h = 0.5, 1e-4
    fd = (
        model.log_partition(data, beta + h)
        - 2 * model.log_partition(data, beta)
        + model.log_partition(data, beta - h)
    ) / h**2
    assert model.var_loglik(data, beta) == pytest.approx(fd, rel=1e-5)


def test_conjugate_expected_loglik_is_first_derivative(conj):
    model, data = conj
    beta, h = 0.9, 1e-5
    fd = (
        model.log_partition(data, beta + h) - model.log_partition(data, beta - h)
    ) / (2 * h)
    assert model.expected_loglik(data, beta) == pytest.approx(fd, rel=1e-6)


def test_conjugate_waic_complexity_closed_form(conj):
    model, data = conj
    beta = 1.0
    _, var = model.tempered_moments(data, beta)
    mean, _ = model.tempered_moments(data, beta)
    expect = sum(
        var * np.sum((xi - mean) ** 2) + 2 * var**2 / 2 for xi in data.x
    )
    assert model.waic_complexity_exact(data, beta) == pytest.approx(expect, rel=1e-12)


# ---------------------------------------------------------------- rrr / nn


def test_rrr_split_round_trip():
    model = RRRModel(3, 3, 2)
    rng = np.random.default_rng(0)
    theta = rng.standard_normal(model.dim)
    u, v = model.split(theta)
    assert u.shape == (3, 2) and v.shape == (3, 2)
    np.testing.assert_allclose(model.coefficient_matrix(theta), u @ v.T, rtol=1e-12)


def test_rrr_gradient_check():
    model = RRRModel(3, 3, 2, noise_sd=0.8)
    teacher = {"B": np.outer([1.0, -0.5, 0.3], [0.7, 0.2, -0.4]).tolist(),
               "noise_sd": 0.8}
    data = make_synthetic_dataset("rrr", teacher, 25, seed=6)
    rng = np.random.default_rng(1)
    for _ in range(5):
        assert check_gradient(model, rng.standard_normal(model.dim), data) < 1e-5


def test_rrr_gauge_preserves_likelihood():
    model = RRRModel(3, 3, 2)
    teacher = {"B": np.outer([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]).tolist(),
               "noise_sd": 1.0}
    data = make_synthetic_dataset("rrr", teacher, 10, seed=7)
    rng = np.random.default_rng(2)
    theta = rng.standard_normal(model.dim)
    ll = model.loglik_total(theta, data)
    for g in model.gauge_transforms():
        assert model.loglik_total(g(theta, rng), data) == pytest.approx(ll, rel=1e-9)


def test_nn_gradient_check():
    model = TwoLayerNetModel(4, noise_sd=0.5)
    teacher = {"a": [1.0, -0.5], "w": [1.0, 2.0], "b": [0.1, -0.2], "c": 0.0,
               "noise_sd": 0.5}
    data = make_synthetic_dataset("nn", teacher, 30, seed=8)
    rng = np.random.default_rng(3)
    for _ in range(5):
        assert check_gradient(model, rng.standard_normal(model.dim) * 0.7, data) < 1e-5


def test_nn_permutation_gauge():
    model = TwoLayerNetModel(5)
    teacher = {"a": [1.0], "w": [1.0], "b": [0.0], "c": 0.0, "noise_sd": 0.5}
    data = make_synthetic_dataset("nn", teacher, 15, seed=4)
    rng = np.random.default_rng(5)
    theta = rng.standard_normal(model.dim)
    ll = model.loglik_total(theta, data)
    for g in model.gauge_transforms():
        out = g(theta, rng)
        assert model.loglik_total(out, data) == pytest.approx(ll, rel=1e-10)


def test_make_synthetic_dataset_deterministic():
    a = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 20, seed=42)
    b = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 20, seed=42)
    np.testing.assert_array_equal(a.x, b.x)
