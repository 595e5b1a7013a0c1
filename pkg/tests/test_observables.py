"""Jacobi SVD oracle checks and gauge invariance of observables."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from temperlab.models import (
    MixtureModel,
    RRRModel,
    TwoLayerNetModel,
    make_synthetic_dataset,
)
from temperlab.observables import (
    OBSERVABLES,
    check_invariance,
    eval_observable,
    get_observable,
    n_eff,
    singular_values,
)


def cubic_charpoly_singulars(B):
    """Independent 3x3 oracle: sqrt of eigenvalues of B^T B via the
    characteristic cubic solved with numpy roots."""
    M = B.T @ B
    coeffs = np.poly(M)
    ev = np.roots(coeffs)
    ev = np.sort(np.clip(ev.real, 0.0, None))[::-1]
    return np.sqrt(ev)


def test_jacobi_matches_numpy_svd():
    rng = np.random.default_rng(0)
    for _ in range(30):
        B = rng.standard_normal((rng.integers(1, 6), rng.integers(1, 6)))
        got = singular_values(B)
        want = np.linalg.svd(B, compute_uv=False)
        np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-10)


def test_jacobi_matches_charpoly_cubic():
    rng = np.random.default_rng(1)
    for _ in range(10):
        B = rng.standard_normal((3, 3))
        np.testing.assert_allclose(
            singular_values(B), cubic_charpoly_singulars(B), rtol=1e-7, atol=1e-8
        )


def test_jacobi_rank_deficient():
    u = np.array([[1.0], [2.0], [-1.0]])
    v = np.array([[0.5, 1.5, 1.0]])
    s = singular_values(u @ v)
    assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-10)
    assert abs(s[1]) < 1e-9 and abs(s[2]) < 1e-9


def test_jacobi_wide_matrix():
    B = np.array([[1.0, 2.0, 3.0], [0.0, 1.0, -1.0]])
    np.testing.assert_allclose(
        singular_values(B), np.linalg.svd(B, compute_uv=False), rtol=1e-9
    )


def test_jacobi_rejects_nonfinite():
    with pytest.raises(ValueError):
        singular_values(np.array([[np.inf, 0.0], [0.0, 1.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_jacobi_property_random(seed):
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((4, 4)) * 10.0 ** rng.integers(-3, 3)
    np.testing.assert_allclose(
        singular_values(B),
        np.linalg.svd(B, compute_uv=False),
        rtol=1e-7,
        atol=1e-12 * max(1.0, np.abs(B).max()),
    )


def test_n_eff_range_and_extremes():
    assert n_eff([1.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert n_eff([2.0, 2.0, 2.0, 2.0]) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        n_eff([0.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.1, 100.0), min_size=1, max_size=10))
def test_n_eff_bounds_property(s):
    v = n_eff(s)
    assert 1.0 - 1e-12 <= v <= len(s) + 1e-12


def test_registry_flags():
    for name in ("abs_mean", "loglik", "second_singular_value",
                 "effective_rank", "n_eff_units"):
        assert get_observable(name).invariant
    assert not get_observable("first_coordinate").invariant
    with pytest.raises(KeyError):
        get_observable("nope")


def test_invariance_mixture():
    model = MixtureModel()
    data = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 20, seed=0)
    rng = np.random.default_rng(1)
    thetas = [rng.standard_normal(1) for _ in range(5)]
    dev = check_invariance(get_observable("abs_mean"), model, data, thetas, 50, rng)
    assert dev <= 1e-12


def test_invariance_rrr_under_gl():
    model = RRRModel(3, 3, 2)
    teacher = {"B": np.outer([1.2, -0.8, 0.6], [1.0, 0.7, -0.9]).tolist(),
               "noise_sd": 1.0}
    data = make_synthetic_dataset("rrr", teacher, 20, seed=2)
    rng = np.random.default_rng(3)
    thetas = [rng.standard_normal(model.dim) for _ in range(5)]
    for name in ("second_singular_value", "effective_rank"):
        dev = check_invariance(get_observable(name), model, data, thetas, 50, rng)
        assert dev <= 1e-9


def test_noninvariant_observable_detected():
    model = RRRModel(3, 3, 2)
    teacher = {"B": np.outer([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]).tolist(),
               "noise_sd": 1.0}
    data = make_synthetic_dataset("rrr", teacher, 10, seed=4)
    rng = np.random.default_rng(5)
    theta = rng.standard_normal(model.dim)
    obs = get_observable("first_coordinate")
    # check_invariance refuses non-invariant observables by contract ...
    with pytest.raises(ValueError):
        check_invariance(obs, model, data, [theta], 20, rng)
    # ... and the observable really does move under a GL(r) gauge.
    from temperlab.model import apply_gauge

    moved = max(
        abs(eval_observable(obs, apply_gauge(model, theta, 2, rng), model, data)
            - eval_observable(obs, theta, model, data))
        for _ in range(20)
    )
    assert moved > 1e-6


def test_invariance_nn_permutations():
    model = TwoLayerNetModel(6)
    teacher = {"a": [1.0], "w": [1.0], "b": [0.0], "c": 0.0, "noise_sd": 0.5}
    data = make_synthetic_dataset("nn", teacher, 15, seed=6)
    rng = np.random.default_rng(7)
    thetas = [rng.standard_normal(model.dim) for _ in range(4)]
    dev = check_invariance(get_observable("n_eff_units"), model, data, thetas, 50, rng)
    assert dev <= 1e-9


def test_eval_observable_rejects_nonfinite():
    model = MixtureModel()
    data = make_synthetic_dataset("mixture", {"mu": 1.0, "noise_sd": 1.0}, 5, seed=8)
    with pytest.raises(ValueError):
        eval_observable(OBSERVABLES["abs_mean"], np.array([np.nan]), model, data)
