"""Beta grids and per-temperature chain orchestration.

Chains run in ascending beta with warm starts: the chain at the next
temperature initializes from the final state of the previous one. Each
temperature gets its own RNG stream derived from (experiment seed, beta
index), so a sweep is reproducible and a single-temperature rerun
matches the sweep exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hmc import ChainOutput, HmcConfig, SamplerAbort, run_chain
from .model import Dataset, ModelSpec

__all__ = ["BetaGrid", "SweepResult", "make_beta_grid", "run_sweep", "chain_rng"]


@dataclass(frozen=True)
class BetaGrid:
    values: np.ndarray  # strictly increasing, positive
    includes_unity: bool
    wbic_index: int | None  # index of beta_n = 1/log n, when inserted

    def __len__(self):
        return self.values.size


@dataclass
class SweepResult:
    grid: BetaGrid
    chains: list[ChainOutput]
    prior_chain: ChainOutput | None  # beta = 0, for the left TI segment
    seed: int


def make_beta_grid(
    beta_min: float,
    beta_max: float,
    K: int,
    n: int | None = None,
    include_unity: bool = False,
    include_wbic: bool = False,
) -> BetaGrid:
    """K log-spaced temperatures, optionally with beta=1 and 1/log n inserted."""
    if not (0 < beta_min < beta_max):
        raise ValueError("need 0 < beta_min < beta_max")
    if K < 2:
        raise ValueError("need K >= 2")
    values = list(np.geomspace(beta_min, beta_max, K))
    specials = []
    if include_unity:
        specials.append(1.0)
    wbic_beta = None
    if include_wbic:
        if n is None or n < 3:
            raise ValueError("include_wbic requires the dataset size n >= 3")
        wbic_beta = 1.0 / np.log(n)
        specials.append(wbic_beta)
    for s in specials:
        if not any(abs(s - v) <= 1e-9 * max(s, v) for v in values):
            values.append(s)
    values = np.array(sorted(values))
    wbic_index = None
    if wbic_beta is not None:
        wbic_index = int(np.argmin(np.abs(values - wbic_beta)))
    includes_unity = bool(np.any(np.abs(values - 1.0) <= 1e-9))
    return BetaGrid(values=values, includes_unity=includes_unity, wbic_index=wbic_index)


def chain_rng(seed: int, beta_index: int) -> np.random.Generator:
    """Deterministic per-temperature RNG stream. Index -1 is the prior chain."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(beta_index + 1,)))


def run_sweep(
    model: ModelSpec,
    data: Dataset,
    grid: BetaGrid,
    config: HmcConfig,
    warm_start: bool = True,
    include_prior_chain: bool = True,
) -> SweepResult:
    """One chain per grid temperature, ascending, warm-started by default."""
    prior_chain = None
    theta0 = None
    if include_prior_chain:
        try:
            prior_chain = run_chain(model, data, 0.0, config, rng=chain_rng(config.seed, -1))
        except SamplerAbort as exc:
            raise SamplerAbort(f"prior chain (beta=0): {exc}") from exc
        if warm_start:
            theta0 = prior_chain.samples[-1]
    chains = []
    for k, beta in enumerate(grid.values):
        try:
            chain = run_chain(
                model, data, float(beta), config,
                theta0=theta0 if warm_start else None,
                rng=chain_rng(config.seed, k),
            )
        except SamplerAbort as exc:
            raise SamplerAbort(f"chain {k} (beta={beta:g}): {exc}") from exc
        chains.append(chain)
        if warm_start:
            theta0 = chain.samples[-1]
    return SweepResult(grid=grid, chains=chains, prior_chain=prior_chain, seed=config.seed)
