"""Deterministic Simpson-grid expectations for models of dimension <= 2.

Serves as ground truth for the sampled estimators: tempered means,
variances, covariance-identity sides, and log-normalizer values, all to
quadrature precision on a fixed rectangle with an explicit tail check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Dataset, ModelSpec, log_tempered_density

__all__ = ["QuadratureSpec", "grid_expectation", "grid_log_normalizer", "default_spec"]


@dataclass(frozen=True)
class QuadratureSpec:
    bounds: tuple  # ((lo, hi), ...) one pair per dimension
    points_per_dim: int = 801
    beta: float = 1.0

    def __post_init__(self):
        if self.points_per_dim < 3 or self.points_per_dim % 2 == 0:
            raise ValueError("points_per_dim must be odd and >= 3")
        for lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError("bounds must be finite with lo < hi")


def default_spec(model: ModelSpec, beta: float, center=None, half_width: float = 12.0,
                 points_per_dim: int = 801) -> QuadratureSpec:
    """Rectangle of +/- 12 prior standard deviations around the center."""
    sd = getattr(model, "prior_sd", 1.0)
    if center is None:
        center = np.zeros(model.dim)
    center = np.atleast_1d(np.asarray(center, dtype=float))
    bounds = tuple((float(c - half_width * sd), float(c + half_width * sd)) for c in center)
    return QuadratureSpec(bounds=bounds, points_per_dim=points_per_dim, beta=beta)


def _simpson_weights(m: int) -> np.ndarray:
    w = np.ones(m)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def _log_density_grid(model: ModelSpec, data: Dataset, beta: float, spec: QuadratureSpec):
    d = len(spec.bounds)
    if d != model.dim or d > 2:
        raise ValueError("quadrature supports model dimension 1 or 2")
    m = spec.points_per_dim
    axes = [np.linspace(lo, hi, m) for lo, hi in spec.bounds]
    steps = [ax[1] - ax[0] for ax in axes]
    if d == 1:
        pts = axes[0][:, None]
    else:
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        pts = np.column_stack([g0.ravel(), g1.ravel()])
    logw = np.array([log_tempered_density(model, p, beta, data) for p in pts])
    # tail check: density at every boundary point must be negligible
    # relative to the peak
    peak = logw.max()
    if d == 1:
        boundary = logw[[0, -1]]
    else:
        mask = np.zeros((m, m), dtype=bool)
        mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
        boundary = logw[mask.ravel()]
    if np.any(boundary - peak > np.log(1e-12)):
        raise ValueError("integration bounds too narrow: boundary density ratio above 1e-12")
    if d == 1:
        weights = _simpson_weights(m) * steps[0]
    else:
        weights = np.outer(_simpson_weights(m) * steps[0], _simpson_weights(m) * steps[1]).ravel()
    return pts, weights, logw


def grid_expectation(model: ModelSpec, data: Dataset, beta: float, f, spec: QuadratureSpec) -> float:
    """E_beta[f] by composite Simpson; f maps a parameter vector to a real."""
    pts, weights, logw = _log_density_grid(model, data, beta, spec)
    w = np.exp(logw - logw.max())
    fv = np.array([f(p) for p in pts])
    denom = float(np.sum(weights * w))
    return float(np.sum(weights * w * fv) / denom)


def grid_log_normalizer(model: ModelSpec, data: Dataset, beta: float, spec: QuadratureSpec) -> float:
    """log of the unnormalized mass, i.e. log Z(beta) for a normalized prior."""
    _, weights, logw = _log_density_grid(model, data, beta, spec)
    peak = logw.max()
    return float(peak + np.log(np.sum(weights * np.exp(logw - peak))))
