"""RLCT estimation on a model where the answer is known.

For a regular model the real log canonical threshold is lambda = d/2:
the tempered expectation E_beta[-loglik] behaves like const + lambda /
beta, so the slope of E[-loglik] against 1/beta recovers lambda. Here
we run the d = 2 conjugate Gaussian (lambda = 1) at two temperatures
and compare the sampled slope with the closed-form one. The same
two-temperature estimator applied to the singular experiments (rrr, nn)
is how the effective lambda of a truncated model is measured.

Run:  python demos/rlct_regular_model.py
"""

import numpy as np

from temperlab.hmc import HmcConfig
from temperlab.models import ConjugateGaussianModel, make_synthetic_dataset
from temperlab.responses import rlct_estimate
from temperlab.sweep import make_beta_grid, run_sweep

model = ConjugateGaussianModel(d=2)
data = make_synthetic_dataset("conjugate", {"theta": [1.0, 0.5]}, n=1000, seed=7)

beta1, beta2 = 0.1, 0.2
grid = make_beta_grid(beta1, beta2, 2)
config = HmcConfig(n_warmup=500, n_samples=8000, n_leapfrog=32, seed=7)
sweep = run_sweep(model, data, grid, config, include_prior_chain=False)

lam_hat = rlct_estimate(sweep, beta1, beta2)

exact = (
    (-model.expected_loglik(data, beta1) + model.expected_loglik(data, beta2))
    / (1.0 / beta1 - 1.0 / beta2)
)
for chain in sweep.chains:
    e = float(np.mean(chain.loglik_series))
    print(f"beta = {chain.beta:.2f}: E[-loglik] = {-e:10.3f} "
          f"(accept {chain.accept_rate:.2f})")
print(f"\nlambda_hat = {lam_hat:.4f}")
print(f"closed-form slope for this dataset = {exact:.4f}")
print(f"regular-model value d/2 = {model.dim / 2:.1f}")
