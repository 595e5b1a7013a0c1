"""Oracle and invariance validation suite backing `temperlab validate`.

Each check compares a measured value against its tolerance and reports a
row; the CLI renders the table and fails if any row fails. Checks reuse
the same estimators the experiments use, with the conjugate model and
the Simpson-grid oracle as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hmc import HmcConfig, run_chain
from .model import Dataset, ModelSpec, check_gradient
from .models import (
    ConjugateGaussianModel,
    MixtureModel,
    RRRModel,
    TwoLayerNetModel,
    make_synthetic_dataset,
)
from .observables import check_invariance, get_observable
from .quadrature import default_spec
from .responses import (
    log_partition_curve,
    observable_series,
    quadrature_identity_check,
    response_speed_bound_check,
)
from .sweep import make_beta_grid, run_sweep

__all__ = ["CheckResult", "gradient_check_model", "run_validation"]


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


def gradient_check_model(model: ModelSpec, data: Dataset, n_points: int = 20,
                         seed: int = 0) -> float:
    """Worst check_gradient deviation over random prior draws."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        theta = model.sample_prior(rng)
        worst = max(worst, check_gradient(model, theta, data, h=1e-5))
    return worst


def _test_fixtures():
    mixture = MixtureModel(noise_sd=1.0, prior_sd=1.0)
    mix_data = make_synthetic_dataset("mixture", {"mu": 1.5, "noise_sd": 1.0}, 50, 7)
    rrr = RRRModel(3, 3, 2, noise_sd=1.0)
    rrr_data = make_synthetic_dataset(
        "rrr", {"B": np.outer([1.0, -0.5, 0.5], [1.0, 0.5, -1.0]), "noise_sd": 1.0}, 50, 7
    )
    nn = TwoLayerNetModel(4, noise_sd=0.5)
    nn_data = make_synthetic_dataset(
        "nn",
        {"a": [1.0, -0.8], "w": [1.0, 1.5], "b": [0.2, -0.2], "c": 0.1, "noise_sd": 0.5},
        50,
        7,
    )
    conj = ConjugateGaussianModel(1)
    conj_data = make_synthetic_dataset("conjugate", {"theta": [1.0]}, 20, 7)
    return (mixture, mix_data), (rrr, rrr_data), (nn, nn_data), (conj, conj_data)


def run_validation(seed: int = 0) -> list[CheckResult]:
    results: list[CheckResult] = []
    (mixture, mix_data), (rrr, rrr_data), (nn, nn_data), (conj, conj_data) = _test_fixtures()

    # 1. gradient consistency on every shipped model
    for name, model, data in (
        ("mixture", mixture, mix_data),
        ("rrr", rrr, rrr_data),
        ("nn", nn, nn_data),
        ("conjugate", conj, conj_data),
    ):
        dev = gradient_check_model(model, data, n_points=20, seed=seed)
        results.append(CheckResult(f"gradient/{name}", dev, 1e-5, dev <= 1e-5))

    # 2. gauge invariance of the invariant observables
    rng = np.random.default_rng(seed + 1)
    for name, obs_name, model, data in (
        ("mixture/abs_mean", "abs_mean", mixture, mix_data),
        ("rrr/second_singular_value", "second_singular_value", rrr, rrr_data),
        ("rrr/effective_rank", "effective_rank", rrr, rrr_data),
        ("nn/n_eff_units", "n_eff_units", nn, nn_data),
        ("mixture/loglik", "loglik", mixture, mix_data),
    ):
        thetas = [model.sample_prior(rng) for _ in range(10)]
        dev = check_invariance(get_observable(obs_name), model, data, thetas,
                               n_gauges=10, rng=rng)
        results.append(CheckResult(f"gauge/{name}", dev, 1e-9, dev <= 1e-9))

    # 3. log-spaced beta grid with the WBIC temperature inserted
    grid = make_beta_grid(0.01, 1.0, 10, n=100, include_unity=True, include_wbic=True)
    wbic_dev = abs(grid.values[grid.wbic_index] - 1.0 / np.log(100))
    results.append(CheckResult("grid/wbic_insertion", wbic_dev, 1e-12, wbic_dev <= 1e-12))

    # 4. HMC moments against the conjugate closed form
    config = HmcConfig(n_warmup=400, n_samples=3000, n_leapfrog=16, seed=seed + 2)
    chain = run_chain(conj, conj_data, 0.5, config)
    mean, var = conj.tempered_moments(conj_data, 0.5)
    se = np.sqrt(var / chain.ess_by_coordinate[0])
    dev = abs(float(np.mean(chain.samples[:, 0])) - mean[0])
    results.append(
        CheckResult("hmc/conjugate_mean", dev, 3 * se, dev <= 3 * se,
                    detail=f"3*SE={3 * se:.3g}")
    )

    # 5. covariance identity with quadrature expectations
    rep = quadrature_identity_check(
        conj, conj_data, lambda t: t[0], 0.5,
        lambda b: default_spec(conj, b, points_per_dim=2001), h=1e-3,
    )
    results.append(
        CheckResult("identity/quadrature_residual", abs(rep.residual), 1e-6,
                    abs(rep.residual) <= 1e-6)
    )

    # 6. sample Cauchy-Schwarz across a small mixture sweep
    small_grid = make_beta_grid(0.05, 2.0, 6)
    sweep = run_sweep(mixture, mix_data,
                      small_grid,
                      HmcConfig(n_warmup=300, n_samples=800, n_leapfrog=16, seed=seed + 3))
    abs_mean = get_observable("abs_mean")
    n_checked = 0
    worst_excess = -np.inf
    for ch in sweep.chains:
        series = observable_series(ch, abs_mean, mixture, mix_data)
        lhs, rhs = response_speed_bound_check(ch, series)
        worst_excess = max(worst_excess, lhs - rhs)
        n_checked += 1
    results.append(
        CheckResult("bound/cauchy_schwarz", worst_excess, 0.0, worst_excess <= 0.0,
                    detail=f"verified on {n_checked} chains")
    )

    # 7. thermodynamic integration vs the closed-form conjugate log Z.
    # Relative error is measured at beta = 1, where log Z is O(n); at
    # tiny beta log Z itself is near zero and a relative metric would
    # only amplify the Monte Carlo noise of E[loglik].
    conj_sweep = run_sweep(
        conj, conj_data, make_beta_grid(0.01, 1.0, 16, include_unity=True),
        HmcConfig(n_warmup=400, n_samples=2000, n_leapfrog=16, seed=seed + 4),
    )
    logZ, _ = log_partition_curve(conj_sweep)
    exact = np.array([conj.log_partition(conj_data, b) for b in conj_sweep.grid.values])
    abs_err = np.abs(logZ - exact)
    rel = float(abs_err[-1] / abs(exact[-1]))
    results.append(
        CheckResult("ti/conjugate_logZ", rel, 0.01,
                    rel <= 0.01 and float(abs_err.max()) <= 0.2,
                    detail=f"rel at beta=1; max abs err {abs_err.max():.3f}")
    )

    return results
