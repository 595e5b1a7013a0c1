"""Quickstart: sampled response functions vs exact closed forms.

The conjugate Gaussian model (x_i ~ N(theta, I), standard normal prior)
has every tempered quantity in closed form, so it shows the whole
pipeline with a built-in answer key: run a beta sweep, build the
response curve, and compare the sampled order parameter, heat capacity
and log Z against the exact values.

Run:  python demos/quickstart_conjugate.py
"""

import numpy as np

from temperlab.hmc import HmcConfig
from temperlab.models import ConjugateGaussianModel, make_synthetic_dataset
from temperlab.observables import get_observable
from temperlab.responses import build_response_curve
from temperlab.sweep import make_beta_grid, run_sweep

model = ConjugateGaussianModel(d=1)
data = make_synthetic_dataset("conjugate", {"theta": [1.0]}, n=100, seed=42)

grid = make_beta_grid(0.02, 2.0, 9, n=data.n, include_unity=True)
config = HmcConfig(n_warmup=300, n_samples=2000, n_leapfrog=16, seed=42)
sweep = run_sweep(model, data, grid, config)
curve = build_response_curve(
    sweep, model, data, get_observable("first_coordinate")
)

print(f"{'beta':>8} {'m (HMC)':>10} {'m exact':>10} {'C (HMC)':>10} "
      f"{'C exact':>10} {'logZ (TI)':>10} {'logZ exact':>11}")
for k, beta in enumerate(curve.beta):
    mean, _ = model.tempered_moments(data, beta)
    print(f"{beta:8.3f} {curve.m[k]:10.4f} {mean[0]:10.4f} "
          f"{curve.heat_capacity[k]:10.3f} {model.var_loglik(data, beta):10.3f} "
          f"{curve.logZ[k]:10.3f} {model.log_partition(data, beta):11.3f}")

k1 = int(np.argmin(np.abs(curve.beta - 1.0)))
print(f"\nevidence: TI logZ(1) = {curve.logZ[k1]:.3f}, "
      f"exact = {model.evidence(data):.3f}")
print(f"p_WAIC at beta=1: sampled {curve.p_waic[k1]:.3f}, "
      f"exact {model.waic_complexity_exact(data):.3f} "
      f"(averages to d = {model.dim} over datasets)")
