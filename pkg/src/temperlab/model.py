"""Uniform model interface: priors, per-datum likelihoods, gradients, gauges.

Every statistical model exposes the same small surface so the sampler,
the quadrature oracle, and the response estimators never need to know
which model they are driving. Gauge transforms are declared per model as
an explicit (possibly randomized) family of parameter maps that leave
every per-datum likelihood unchanged; invariance is tested on sampled
group elements rather than derived symbolically.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Dataset",
    "ModelSpec",
    "log_tempered_density",
    "grad_log_tempered",
    "check_gradient",
    "apply_gauge",
]


@dataclass(frozen=True)
class Dataset:
    """n observations; payload arrays are model specific.

    Scalar-observation models use ``x`` alone; regression models use
    ``(x, y)`` with one row per observation.
    """

    n: int
    x: np.ndarray | None = None
    y: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("dataset size must be nonnegative")
        for arr in (self.x, self.y):
            if arr is not None and len(arr) != self.n:
                raise ValueError("payload length must equal n")


# A gauge transform maps (theta, rng) -> theta'. Randomized families
# (random permutations, random GL(r) elements) draw from the supplied rng.
GaugeTransform = Callable[[np.ndarray, np.random.Generator], np.ndarray]


class ModelSpec(ABC):
    """Interface implemented by every shipped model."""

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def log_prior(self, theta: np.ndarray) -> float:
        ...

    @abstractmethod
    def grad_log_prior(self, theta: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def loglik_point(self, theta: np.ndarray, i: int, data: Dataset) -> float:
        ...

    @abstractmethod
    def grad_loglik_total(self, theta: np.ndarray, data: Dataset) -> np.ndarray:
        ...

    def loglik_pointwise(self, theta: np.ndarray, data: Dataset) -> np.ndarray:
        """Vector of per-datum log likelihoods; models override with a
        vectorized version where it matters."""
        return np.array([self.loglik_point(theta, i, data) for i in range(data.n)])

    def loglik_total(self, theta: np.ndarray, data: Dataset) -> float:
        return float(np.sum(self.loglik_pointwise(theta, data)))

    def gauge_transforms(self) -> list[GaugeTransform]:
        return [lambda theta, rng: theta]

    def sample_prior(self, rng: np.random.Generator) -> np.ndarray:
        """Default: standard normal; models with scaled priors override."""
        return rng.standard_normal(self.dim)


def _check_theta(model: ModelSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (model.dim,):
        raise ValueError(f"theta must have shape ({model.dim},)")
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    return theta


def log_tempered_density(model: ModelSpec, theta, beta: float, data: Dataset) -> float:
    """Unnormalized log density log pi(theta) + beta * loglik(theta)."""
    theta = _check_theta(model, theta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    lp = model.log_prior(theta)
    if beta == 0.0:
        return lp
    return lp + beta * model.loglik_total(theta, data)


def grad_log_tempered(model: ModelSpec, theta, beta: float, data: Dataset) -> np.ndarray:
    theta = _check_theta(model, theta)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    g = model.grad_log_prior(theta)
    if beta != 0.0:
        g = g + beta * model.grad_loglik_total(theta, data)
    if not np.all(np.isfinite(g)):
        raise FloatingPointError("non-finite gradient")
    return g


def check_gradient(model: ModelSpec, theta, data: Dataset, h: float = 1e-5) -> float:
    """Max |analytic - central difference| of the beta=1 log density."""
    if not (1e-7 <= h <= 1e-3):
        raise ValueError("h must lie in [1e-7, 1e-3]")
    theta = _check_theta(model, theta)
    if model.dim == 0:
        return 0.0
    analytic = grad_log_tempered(model, theta, 1.0, data)
    fd = np.empty(model.dim)
    for k in range(model.dim):
        tp = theta.copy()
        tm = theta.copy()
        tp[k] += h
        tm[k] -= h
        fd[k] = (
            log_tempered_density(model, tp, 1.0, data)
            - log_tempered_density(model, tm, 1.0, data)
        ) / (2 * h)
    return float(np.max(np.abs(analytic - fd)))


def apply_gauge(model: ModelSpec, theta, g: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Apply the g-th declared gauge transform to theta."""
    theta = _check_theta(model, theta)
    gauges = model.gauge_transforms()
    if not (0 <= g < len(gauges)):
        raise IndexError(f"gauge index {g} out of range (model declares {len(gauges)})")
    if rng is None:
        rng = np.random.default_rng(0)
    out = np.asarray(gauges[g](theta, rng), dtype=float)
    if out.shape != theta.shape:
        raise ValueError("gauge transform changed parameter dimension")
    return out
