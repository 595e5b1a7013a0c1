"""Hamiltonian Monte Carlo for the tempered target log pi + beta * loglik.

Plain HMC: fixed leapfrog length, unit mass matrix, full momentum
refresh, Metropolis correction, and Nesterov dual-averaging step-size
adaptation during warmup only. Chains are deterministic functions of
(model, data, beta, config, initial state).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Dataset, ModelSpec
from .stats import MomentAccumulator, effective_sample_size

__all__ = [
    "HmcConfig",
    "ChainOutput",
    "SamplerAbort",
    "leapfrog",
    "run_chain",
    "DualAveraging",
    "adapt_step_size",
]

_DIVERGENCE_ENERGY = 1000.0


class SamplerAbort(RuntimeError):
    """Raised when a chain cannot equilibrate (e.g. warmup divergence storm)."""


@dataclass(frozen=True)
class HmcConfig:
    n_warmup: int = 500
    n_samples: int = 2000
    n_leapfrog: int = 32
    target_accept: float = 0.8
    init_step: float = 0.1
    seed: int = 0
    adapt: bool = True

    def __post_init__(self):
        if not (0.5 <= self.target_accept <= 0.95):
            raise ValueError("target_accept must lie in [0.5, 0.95]")
        if self.init_step <= 0:
            raise ValueError("init_step must be positive")
        if self.n_samples < 1 or self.n_warmup < 0 or self.n_leapfrog < 0:
            raise ValueError("iteration counts must be nonnegative")


@dataclass
class ChainOutput:
    beta: float
    samples: np.ndarray  # (n_samples, d), post-warmup
    loglik_series: np.ndarray  # (n_samples,)
    pointwise_moments: MomentAccumulator  # vector-valued, one slot per datum
    accept_rate: float
    step_size_final: float
    ess_by_coordinate: np.ndarray
    n_divergent: int

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]


def leapfrog(theta, momentum, eps: float, L: int, gradfn):
    """L leapfrog steps; returns (theta', momentum', diverged flag).

    Time-reversible and volume preserving; a non-finite intermediate
    state is reported as a divergence instead of propagating.
    """
    theta = np.array(theta, dtype=float)
    p = np.array(momentum, dtype=float)
    if L == 0:
        return theta, p, False
    g = gradfn(theta)
    p = p + 0.5 * eps * g
    for step in range(L):
        theta = theta + eps * p
        if not np.all(np.isfinite(theta)):
            return theta, p, True
        g = gradfn(theta)
        if not np.all(np.isfinite(g)):
            return theta, p, True
        p = p + (eps if step < L - 1 else 0.5 * eps) * g
    return theta, p, False


class DualAveraging:
    """Nesterov dual averaging of log step size toward a target accept rate.

    Parameters follow the standard NUTS warmup choices.
    """

    def __init__(self, init_step: float, target_accept: float,
                 gamma: float = 0.05, t0: float = 10.0, kappa: float = 0.75):
        self.mu = np.log(10.0 * init_step)
        self.target = target_accept
        self.gamma = gamma
        self.t0 = t0
        self.kappa = kappa
        self.h_bar = 0.0
        self.log_step_bar = np.log(init_step)
        self.log_step = np.log(init_step)
        self.m = 0

    @property
    def step(self) -> float:
        return float(np.exp(self.log_step))

    @property
    def averaged_step(self) -> float:
        return float(np.exp(self.log_step_bar))

    def update(self, accept_prob: float) -> float:
        self.m += 1
        frac = 1.0 / (self.m + self.t0)
        self.h_bar = (1.0 - frac) * self.h_bar + frac * (self.target - accept_prob)
        self.log_step = self.mu - np.sqrt(self.m) / self.gamma * self.h_bar
        eta = self.m ** (-self.kappa)
        self.log_step_bar = eta * self.log_step + (1.0 - eta) * self.log_step_bar
        return self.step


def adapt_step_size(accept_history, target_accept: float, init_step: float = 0.1) -> np.ndarray:
    """Step-size schedule produced by dual averaging over an accept history."""
    da = DualAveraging(init_step, target_accept)
    return np.array([da.update(a) for a in accept_history])


def run_chain(
    model: ModelSpec,
    data: Dataset,
    beta: float,
    config: HmcConfig,
    theta0=None,
    rng: np.random.Generator | None = None,
) -> ChainOutput:
    """Metropolis-corrected HMC chain at one inverse temperature.

    Warmup iterations adapt the step size and are discarded; divergent
    trajectories are rejected and counted. More than 50% divergences
    during warmup aborts with a diagnostic.
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    d = model.dim
    if rng is None:
        rng = np.random.default_rng(config.seed)
    theta = (
        np.array(theta0, dtype=float)
        if theta0 is not None
        else model.sample_prior(rng)
    )
    if theta.shape != (d,):
        raise ValueError("initial state has wrong dimension")

    use_lik = beta != 0.0 and data.n > 0

    def logdens(t):
        lp = model.log_prior(t)
        return lp + beta * model.loglik_total(t, data) if use_lik else lp

    def gradfn(t):
        g = model.grad_log_prior(t)
        if use_lik:
            g = g + beta * model.grad_loglik_total(t, data)
        return g

    da = DualAveraging(config.init_step, config.target_accept)
    eps = config.init_step
    current_ld = logdens(theta)

    n_total = config.n_warmup + config.n_samples
    samples = np.empty((config.n_samples, d))
    loglik_series = np.empty(config.n_samples)
    pointwise = MomentAccumulator()
    n_accept = 0
    n_div_warmup = 0
    n_div = 0

    for it in range(n_total):
        warmup = it < config.n_warmup
        p0 = rng.standard_normal(d)
        # oversized warmup steps can overflow transiently; the energy
        # check below turns those into counted divergences
        with np.errstate(over="ignore", invalid="ignore"):
            prop, p1, diverged = leapfrog(theta, p0, eps, config.n_leapfrog, gradfn)
            if not diverged:
                prop_ld = logdens(prop)
                delta_h = (prop_ld - 0.5 * p1 @ p1) - (current_ld - 0.5 * p0 @ p0)
                if not np.isfinite(delta_h) or delta_h < -_DIVERGENCE_ENERGY:
                    diverged = True
        if diverged:
            accept_prob = 0.0
            if warmup:
                n_div_warmup += 1
            else:
                n_div += 1
        else:
            accept_prob = float(min(1.0, np.exp(min(delta_h, 0.0))))
            if np.log(rng.random()) < delta_h:
                theta = prop
                current_ld = prop_ld
                if not warmup:
                    n_accept += 1
        if warmup and config.adapt:
            eps = da.update(accept_prob)
            if it == config.n_warmup - 1:
                eps = da.averaged_step
        if warmup and it == config.n_warmup - 1:
            if config.n_warmup >= 20 and n_div_warmup > 0.5 * config.n_warmup:
                raise SamplerAbort(
                    f"{n_div_warmup}/{config.n_warmup} divergent warmup "
                    f"trajectories at beta={beta:g} (step={eps:g})"
                )
        if not warmup:
            k = it - config.n_warmup
            samples[k] = theta
            if data.n > 0:
                pw = model.loglik_pointwise(theta, data)
                pointwise.push(pw)
                loglik_series[k] = float(np.sum(pw))
            else:
                loglik_series[k] = 0.0

    ess = np.array(
        [effective_sample_size(samples[:, j]).ess for j in range(d)]
        if config.n_samples >= 10
        else [float(config.n_samples)] * d
    )
    return ChainOutput(
        beta=beta,
        samples=samples,
        loglik_series=loglik_series,
        pointwise_moments=pointwise,
        accept_rate=n_accept / config.n_samples,
        step_size_final=float(eps),
        ess_by_coordinate=ess,
        n_divergent=n_div,
    )
