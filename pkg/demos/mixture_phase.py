"""Mixture sweep: watch the symmetric phase melt as beta grows.

The two-component location mixture 0.5 N(mu, s^2) + 0.5 N(-mu, s^2) is
symmetric under mu -> -mu, so the posterior of mu is bimodal and the
distribution-invariant order parameter is |mu|. At small beta the prior
dominates and E|mu| sits near its prior value; as beta grows the
posterior condenses onto the teacher at |mu| = 1.5. The susceptibility
chi(beta) = beta Var|mu| peaks where that reorganization is fastest.

This is a reduced-size version of the shipped "mixture" default (fewer
temperatures and samples) so it finishes in about half a minute. For
the full-size run write the default config to JSON and use the CLI:

    python -c "import json; from temperlab.defaults import default_config; \
print(json.dumps(default_config('mixture'), indent=2))" > mixture.json
    temperlab run --config mixture.json --out out/mixture

Run:  python demos/mixture_phase.py [curve.csv]
"""

import sys

import numpy as np

from temperlab.defaults import build_experiment, default_config
from temperlab.responses import build_response_curve, find_susceptibility_peak
from temperlab.sweep import make_beta_grid, run_sweep

config = default_config("mixture")
config["grid"]["K"] = 13
config["sampler"]["n_samples"] = 800
config["sampler"]["n_warmup"] = 300
model, data, grid, hmc_config, observables = build_experiment(config)

sweep = run_sweep(model, data, grid, hmc_config)
curve = build_response_curve(sweep, model, data, observables[0])

beta_peak, chi_peak = find_susceptibility_peak(curve)
bar_scale = 40 / max(chi_peak, 1e-12)
print(f"{'beta':>8} {'E|mu|':>8} {'se':>7}  chi")
for k, beta in enumerate(curve.beta):
    bar = "#" * int(round(curve.chi[k] * bar_scale))
    print(f"{beta:8.3f} {curve.m[k]:8.3f} {curve.m_se[k]:7.3f}  {bar}")
print(f"\nsusceptibility peaks at beta = {beta_peak:.3f} "
      f"(teacher |mu| = 1.5, E|mu| ends at {curve.m[-1]:.3f})")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(curve.to_csv())
    print(f"wrote {sys.argv[1]} (render it with: "
          f"plot --csv {sys.argv[1]} --out figure.svg)")
