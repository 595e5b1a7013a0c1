"""Streaming moments, ESS, and finite-difference helpers against oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from temperlab.stats import (
    MomentAccumulator,
    accumulate,
    covariance,
    effective_sample_size,
    nonuniform_derivative,
)

rng = np.random.default_rng(7)


def accumulate_all(values):
    acc = MomentAccumulator()
    for v in values:
        accumulate(acc, v)
    return acc


def test_moments_match_two_pass():
    x = rng.standard_normal(1000) * 3.0 + 5.0
    acc = accumulate_all(x)
    assert acc.count == 1000
    assert acc.mean == pytest.approx(np.mean(x), rel=1e-12)
    assert acc.variance() == pytest.approx(np.var(x, ddof=1), rel=1e-12)


def test_moments_extreme_offset():
    # Welford stays accurate where the naive sum-of-squares cancels.
    x = 1e9 + rng.standard_normal(500)
    acc = accumulate_all(x)
    assert acc.variance() == pytest.approx(np.var(x, ddof=1), rel=1e-6)


def test_paired_covariance_matches_numpy():
    x = rng.standard_normal(400)
    y = 0.3 * x + rng.standard_normal(400)
    acc = MomentAccumulator(paired=True)
    for a, b in zip(x, y):
        acc.push(a, b)
    expect = np.cov(x, y, ddof=1)[0, 1]
    assert acc.covariance() == pytest.approx(expect, rel=1e-12)
    assert covariance(x, y) == pytest.approx(expect, rel=1e-12)


def test_vector_valued_accumulator():
    x = rng.standard_normal((200, 5))
    acc = MomentAccumulator()
    for row in x:
        acc.push(row)
    np.testing.assert_allclose(acc.mean, x.mean(axis=0), rtol=1e-12)
    np.testing.assert_allclose(acc.variance(), x.var(axis=0, ddof=1), rtol=1e-12)


def test_merge_equals_single_pass():
    x = rng.standard_normal(300)
    whole = accumulate_all(x)
    left = accumulate_all(x[:120])
    right = accumulate_all(x[120:])
    merged = left.merge(right)
    assert merged.count == whole.count
    assert merged.mean == pytest.approx(whole.mean, rel=1e-12)
    assert merged.variance() == pytest.approx(whole.variance(), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-100, 100), min_size=2, max_size=30),
    st.lists(st.floats(-100, 100), min_size=2, max_size=30),
    st.lists(st.floats(-100, 100), min_size=2, max_size=30),
)
def test_merge_associative(a, b, c):
    ab_c = accumulate_all(a).merge(accumulate_all(b)).merge(accumulate_all(c))
    a_bc = accumulate_all(a).merge(accumulate_all(b).merge(accumulate_all(c)))
    whole = accumulate_all(a + b + c)
    for acc in (ab_c, a_bc):
        assert acc.count == whole.count
        assert acc.mean == pytest.approx(whole.mean, rel=1e-9, abs=1e-9)
        assert acc.variance() == pytest.approx(whole.variance(), rel=1e-7, abs=1e-7)


def test_variance_requires_two_points():
    acc = MomentAccumulator()
    acc.push(1.0)
    with pytest.raises(ValueError):
        acc.variance()


def test_ess_iid_near_n():
    x = np.random.default_rng(0).standard_normal(4000)
    d = effective_sample_size(x)
    assert 0.8 * 4000 <= d.ess <= 4000


def test_ess_ar1_oracle():
    # AR(1) with coefficient phi has tau = (1+phi)/(1-phi).
    phi = 0.9
    n = 200_000
    e = np.random.default_rng(1).standard_normal(n)
    x = np.empty(n)
    x[0] = e[0]
    for i in range(1, n):
        x[i] = phi * x[i - 1] + e[i]
    d = effective_sample_size(x)
    tau_true = (1 + phi) / (1 - phi)
    assert d.autocorrelation_time == pytest.approx(tau_true, rel=0.1)
    assert d.ess == pytest.approx(n / tau_true, rel=0.1)


def test_ess_constant_series():
    d = effective_sample_size(np.full(100, 3.5))
    assert d.ess == 100


def test_ess_capped_at_n():
    # Strong antithetic alternation would give tau < 1 without the cap.
    x = np.tile([1.0, -1.0], 500)
    assert effective_sample_size(x).ess <= 1000


def test_nonuniform_derivative_exact_on_quadratics():
    x = np.array([0.1, 0.17, 0.4, 1.1, 2.0, 2.3])
    y = 3.0 * x**2 - 2.0 * x + 0.5
    d = nonuniform_derivative(x, y)
    np.testing.assert_allclose(d, 6.0 * x - 2.0, rtol=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
    st.integers(min_value=3, max_value=12),
)
def test_nonuniform_derivative_quadratic_property(a, b, c, npts):
    x = np.sort(np.random.default_rng(npts).uniform(0.1, 2.0, npts))
    if np.min(np.diff(x)) < 1e-3:
        return
    y = a * x**2 + b * x + c
    np.testing.assert_allclose(
        nonuniform_derivative(x, y), 2 * a * x + b, rtol=1e-6, atol=1e-6
    )
