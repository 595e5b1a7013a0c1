"""Distribution-invariant observables and their invariance checker.

An observable is a named real-valued function of (theta, model, data)
carrying a flag for claimed invariance under the model's declared gauge
family. The flag is a promise that ``check_invariance`` verifies
operationally on sampled gauge elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import Dataset, ModelSpec, apply_gauge
from .models import MixtureModel, RRRModel, TwoLayerNetModel

__all__ = [
    "Observable",
    "eval_observable",
    "singular_values",
    "n_eff",
    "check_invariance",
    "get_observable",
    "OBSERVABLES",
]


@dataclass(frozen=True)
class Observable:
    name: str
    invariant: bool
    fn: Callable[[np.ndarray, ModelSpec, Dataset], float]


def eval_observable(obs: Observable, theta, model: ModelSpec, data: Dataset) -> float:
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    return float(obs.fn(theta, model, data))


def singular_values(B) -> np.ndarray:
    """Singular values of a small dense matrix, descending.

    One-sided Jacobi: rotate column pairs of (a copy of) B until all
    pairs are mutually orthogonal to relative 1e-10; singular values are
    then the column norms. Intended for the <= 16 x 16 matrices that
    arise as regression coefficient blocks.
    """
    A = np.array(B, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    if A.shape[0] < A.shape[1]:
        A = A.T.copy()
    m, k = A.shape
    tol = 1e-10
    for _ in range(60):
        off = 0.0
        for i in range(k - 1):
            for j in range(i + 1, k):
                ai = A[:, i].copy()
                aj = A[:, j].copy()
                aa = ai @ ai
                bb = aj @ aj
                ab = ai @ aj
                if aa * bb == 0.0 or abs(ab) <= tol * np.sqrt(aa * bb):
                    continue
                off = max(off, abs(ab) / np.sqrt(aa * bb))
                zeta = (bb - aa) / (2.0 * ab)
                t = np.sign(zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                A[:, i] = c * ai - s * aj
                A[:, j] = s * ai + c * aj
        if off <= tol:
            break
    svals = np.sqrt(np.sum(A**2, axis=0))
    svals.sort()
    return svals[::-1]


def n_eff(s) -> float:
    """Participation ratio (sum s)^2 / sum s^2 of a nonnegative vector."""
    s = np.asarray(s, dtype=float)
    total_sq = float(np.sum(s**2))
    if total_sq == 0.0:
        raise ValueError("all amplitudes are zero (fully collapsed)")
    return float(np.sum(s) ** 2 / total_sq)


# ---- shipped observables ---------------------------------------------


def _abs_mean(theta, model, data):
    if not isinstance(model, MixtureModel):
        raise TypeError("abs_mean is a mixture-model observable")
    return abs(theta[0])


def _loglik(theta, model, data):
    return model.loglik_total(theta, data)


def _coefficient_singulars(theta, model):
    if not isinstance(model, RRRModel):
        raise TypeError("this observable requires the reduced-rank model")
    return singular_values(model.coefficient_matrix(theta))


def _second_singular_value(theta, model, data):
    s = _coefficient_singulars(theta, model)
    if s.size < 2:
        raise ValueError("coefficient matrix has fewer than two singular values")
    return s[1]


def _effective_rank(theta, model, data):
    return n_eff(_coefficient_singulars(theta, model))


def _n_eff_units(theta, model, data):
    if not isinstance(model, TwoLayerNetModel):
        raise TypeError("n_eff_units is a network observable")
    a, w, _, _ = model.split(theta)
    return n_eff(np.abs(a) * np.abs(w))


def _first_coordinate(theta, model, data):
    return theta[0]


OBSERVABLES: dict[str, Observable] = {
    obs.name: obs
    for obs in [
        Observable("abs_mean", True, _abs_mean),
        Observable("loglik", True, _loglik),
        Observable("second_singular_value", True, _second_singular_value),
        Observable("effective_rank", True, _effective_rank),
        Observable("n_eff_units", True, _n_eff_units),
        # theta_1 is deliberately not flagged invariant: it is a raw
        # coordinate, useful only for the regular conjugate model.
        Observable("first_coordinate", False, _first_coordinate),
    ]
}


def get_observable(name: str) -> Observable:
    try:
        return OBSERVABLES[name]
    except KeyError:
        raise KeyError(f"unknown observable {name!r}; known: {sorted(OBSERVABLES)}") from None


def check_invariance(
    obs: Observable,
    model: ModelSpec,
    data: Dataset,
    thetas,
    n_gauges: int = 10,
    rng: np.random.Generator | None = None,
) -> float:
    """Max |f(g(theta)) - f(theta)| over theta draws and sampled gauges."""
    if not obs.invariant:
        raise ValueError("check_invariance expects an invariant-flagged observable")
    if rng is None:
        rng = np.random.default_rng(0)
    n_declared = len(model.gauge_transforms())
    worst = 0.0
    for theta in thetas:
        base = eval_observable(obs, theta, model, data)
        for _ in range(n_gauges):
            g = int(rng.integers(n_declared))
            theta_g = apply_gauge(model, theta, g, rng)
            worst = max(worst, abs(eval_observable(obs, theta_g, model, data) - base))
    return worst
