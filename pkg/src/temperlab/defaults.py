"""Default experiment configurations and config -> objects assembly."""

from __future__ import annotations

import numpy as np

from .hmc import HmcConfig
from .model import Dataset
from .models import (
    ConjugateGaussianModel,
    MixtureModel,
    RRRModel,
    TwoLayerNetModel,
    make_synthetic_dataset,
)
from .observables import get_observable
from .sweep import make_beta_grid

__all__ = ["DEFAULT_CONFIGS", "default_config", "build_experiment"]

_GRID = {
    "beta_min": 0.01,
    "beta_max": 3.1622776601683795,  # 10^0.5
    "K": 25,
    "include_unity": True,
    "include_wbic": True,
}

_SAMPLER = {
    "n_warmup": 500,
    "n_samples": 2000,
    "n_leapfrog": 32,
    "target_accept": 0.8,
    "init_step": 0.1,
}

_RRR_TEACHER_B = (
    np.outer([1.2, -0.8, 0.6], [1.0, 0.7, -0.9]).tolist()
)

DEFAULT_CONFIGS: dict[str, dict] = {
    "mixture": {
        "experiment": "mixture",
        "n": 200,
        "seed": 20260826,
        "teacher": {"mu": 1.5, "noise_sd": 2.0},
        "model": {"noise_sd": 2.0, "prior_sd": 1.0},
        "grid": dict(_GRID),
        "sampler": dict(_SAMPLER),
        "observables": ["abs_mean"],
    },
    "rrr": {
        "experiment": "rrr",
        "n": 200,
        "seed": 20260826,
        "teacher": {"B": _RRR_TEACHER_B, "noise_sd": 1.0},
        "model": {"p": 3, "q": 3, "r": 2, "noise_sd": 1.0},
        "grid": dict(_GRID),
        "sampler": dict(_SAMPLER),
        "observables": ["second_singular_value"],
    },
    "nn": {
        "experiment": "nn",
        "n": 200,
        "seed": 20260826,
        "teacher": {
            "a": [2.4, -2.0, 1.6],
            "w": [2.0, -3.0, 4.0],
            "b": [0.5, -0.3, 0.0],
            "c": 0.2,
            "noise_sd": 0.3,
        },
        "model": {"H": 10, "noise_sd": 0.3},
        "grid": dict(_GRID),
        "sampler": dict(_SAMPLER),
        "observables": ["n_eff_units"],
    },
    "conjugate": {
        "experiment": "conjugate",
        "n": 100,
        "seed": 20260826,
        "teacher": {"theta": [1.0, 0.5]},
        "model": {"d": 2},
        "grid": dict(_GRID),
        "sampler": dict(_SAMPLER),
        "observables": ["first_coordinate"],
    },
}


def default_config(experiment: str) -> dict:
    import copy

    if experiment not in DEFAULT_CONFIGS:
        raise KeyError(f"unknown experiment {experiment!r}")
    return copy.deepcopy(DEFAULT_CONFIGS[experiment])


def build_experiment(config: dict):
    """(model, data, grid, sampler config, observables) from a config dict."""
    kind = config["experiment"]
    teacher = config["teacher"]
    mp = config.get("model", {})
    if kind == "mixture":
        model = MixtureModel(
            noise_sd=mp.get("noise_sd", 1.0), prior_sd=mp.get("prior_sd", 1.0)
        )
    elif kind == "rrr":
        model = RRRModel(mp["p"], mp["q"], mp["r"], noise_sd=mp.get("noise_sd", 1.0))
    elif kind == "nn":
        model = TwoLayerNetModel(mp["H"], noise_sd=mp.get("noise_sd", 0.5))
    elif kind == "conjugate":
        model = ConjugateGaussianModel(mp.get("d", len(np.atleast_1d(teacher["theta"]))))
    else:
        raise ValueError(f"unknown experiment kind {kind!r}")
    data = make_synthetic_dataset(kind, teacher, config["n"], config["seed"])
    g = config["grid"]
    grid = make_beta_grid(
        g["beta_min"], g["beta_max"], g["K"], n=config["n"],
        include_unity=g.get("include_unity", True),
        include_wbic=g.get("include_wbic", True),
    )
    s = config["sampler"]
    hmc_config = HmcConfig(
        n_warmup=s.get("n_warmup", 500),
        n_samples=s.get("n_samples", 2000),
        n_leapfrog=s.get("n_leapfrog", 32),
        target_accept=s.get("target_accept", 0.8),
        init_step=s.get("init_step", 0.1),
        seed=config["seed"],
    )
    observables = [get_observable(name) for name in config["observables"]]
    return model, data, grid, hmc_config, observables
