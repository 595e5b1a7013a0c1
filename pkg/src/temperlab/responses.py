"""Thermodynamic response functions computed from sweep output.

Order parameter m(beta) = E[f], susceptibility chi = beta*Var(f), heat
capacity C = Var(loglik), WAIC complexity, WBIC, thermodynamic
integration of log Z, the RLCT slope, and numerical checks of the
covariance identity d/dbeta E[f] = Cov(f, loglik) and of the
Cauchy-Schwarz response-speed bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hmc import ChainOutput, HmcConfig, run_chain
from .model import Dataset, ModelSpec
from .observables import Observable, eval_observable
from .quadrature import QuadratureSpec, grid_expectation
from .stats import covariance, effective_sample_size
from .sweep import SweepResult

__all__ = [
    "ResponseCurve",
    "IdentityReport",
    "observable_series",
    "order_parameter",
    "susceptibility",
    "heat_capacity",
    "waic_complexity",
    "waic_transform",
    "wbic",
    "covariance_identity_check",
    "quadrature_identity_check",
    "response_speed_bound_check",
    "log_partition_from_expectations",
    "log_partition_curve",
    "rlct_estimate",
    "find_susceptibility_peak",
    "build_response_curve",
]

CSV_HEADER = "beta,m,m_se,chi,heat_capacity,p_waic,waic_transform,logZ,free_energy,ess,accept_rate"


@dataclass
class ResponseCurve:
    """Per-temperature table of every response quantity, rows ascending in beta."""

    beta: np.ndarray
    m: np.ndarray
    m_se: np.ndarray
    chi: np.ndarray
    heat_capacity: np.ndarray
    p_waic: np.ndarray
    waic_transform: np.ndarray
    logZ: np.ndarray
    free_energy: np.ndarray
    ess: np.ndarray
    accept_rate: np.ndarray

    def __len__(self):
        return self.beta.size

    def to_csv(self) -> str:
        cols = [getattr(self, name) for name in CSV_HEADER.split(",")]
        lines = [CSV_HEADER]
        for row in zip(*cols):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class IdentityReport:
    beta: float
    fd_derivative: float
    covariance: float
    residual: float
    mc_se: float


def observable_series(chain: ChainOutput, obs: Observable, model: ModelSpec, data: Dataset) -> np.ndarray:
    """Observable evaluated along the chain; loglik reuses the stored series."""
    if obs.name == "loglik":
        return chain.loglik_series.copy()
    return np.array([obs.fn(s, model, data) for s in chain.samples])


def _series_ess(series: np.ndarray) -> float:
    if series.size < 10:
        return float(series.size)
    return effective_sample_size(series).ess


def order_parameter(series_or_chain, obs=None, model=None, data=None):
    """(mean, Monte Carlo SE) of an observable over one chain."""
    series = (
        series_or_chain
        if isinstance(series_or_chain, np.ndarray)
        else observable_series(series_or_chain, obs, model, data)
    )
    m = float(np.mean(series))
    var = float(np.var(series, ddof=1)) if series.size > 1 else 0.0
    se = float(np.sqrt(var / _series_ess(series))) if var > 0 else 0.0
    return m, se


def susceptibility(series: np.ndarray, beta: float) -> float:
    """beta * unbiased sample variance of the observable."""
    if series.size < 2:
        return 0.0
    return float(beta * np.var(series, ddof=1))


def heat_capacity(chain: ChainOutput) -> float:
    """Unbiased sample variance of the total log likelihood."""
    if chain.loglik_series.size < 2:
        return 0.0
    return float(np.var(chain.loglik_series, ddof=1))


def waic_complexity(chain: ChainOutput) -> float:
    """Sum over data points of the posterior variance of log p(x_i | theta)."""
    acc = chain.pointwise_moments
    if acc.count == 0:
        return 0.0
    if acc.count < 2:
        raise ValueError("p_WAIC needs at least 2 samples")
    return float(np.sum(acc.variance()))


def waic_transform(p_waic: float, n: int) -> float:
    """log(1 + p_WAIC / n), the complexity transform plotted per temperature."""
    if n == 0:
        return 0.0
    return float(np.log1p(p_waic / n))


def wbic(chain: ChainOutput, n: int) -> float:
    """Tempered mean of -loglik at beta_n = 1/log n."""
    beta_n = 1.0 / np.log(n)
    if abs(chain.beta - beta_n) > 1e-9:
        raise ValueError(
            f"WBIC requires a chain at beta = 1/log n = {beta_n:.12g}, got {chain.beta:.12g}"
        )
    return float(-np.mean(chain.loglik_series))


def response_speed_bound_check(chain: ChainOutput, series: np.ndarray):
    """(|Cov(f, loglik)|, sqrt(Var f * Var loglik)); lhs <= rhs exactly."""
    lhs = abs(covariance(series, chain.loglik_series))
    rhs = float(
        np.sqrt(np.var(series, ddof=1) * np.var(chain.loglik_series, ddof=1))
    )
    return lhs, rhs


def covariance_identity_check(
    model: ModelSpec,
    data: Dataset,
    obs: Observable,
    beta: float,
    config: HmcConfig,
    h: float = 0.05,
    theta0=None,
) -> IdentityReport:
    """Sampled check of d/dbeta E[f] = Cov(f, loglik) at one temperature.

    Central difference over chains at beta*(1 -/+ h) against the sampled
    covariance at beta; mc_se propagates the Monte Carlo errors of both
    sides.
    """
    if not (0 < h < 1):
        raise ValueError("relative step h must lie in (0, 1)")
    means = {}
    ses = {}
    for stream, (tag, b) in enumerate(
        (("lo", beta * (1 - h)), ("mid", beta), ("hi", beta * (1 + h)))
    ):
        chain = run_chain(
            model, data, b, config, theta0=theta0,
            rng=np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(1000 + stream,))),
        )
        series = observable_series(chain, obs, model, data)
        means[tag], ses[tag] = order_parameter(series)
        if tag == "mid":
            cov = covariance(series, chain.loglik_series)
            ess = min(_series_ess(series), _series_ess(chain.loglik_series))
            var_f = np.var(series, ddof=1)
            var_l = np.var(chain.loglik_series, ddof=1)
            se_cov = float(np.sqrt((var_f * var_l + cov**2) / ess))
    fd = (means["hi"] - means["lo"]) / (2 * beta * h)
    se_fd = float(np.hypot(ses["hi"], ses["lo"]) / (2 * beta * h))
    mc_se = float(np.hypot(se_fd, se_cov))
    return IdentityReport(
        beta=beta, fd_derivative=fd, covariance=cov, residual=fd - cov, mc_se=mc_se
    )


def quadrature_identity_check(
    model: ModelSpec,
    data: Dataset,
    f,
    beta: float,
    spec_for,
    h: float = 1e-3,
) -> IdentityReport:
    """Noise-free identity check with Simpson-grid expectations.

    ``spec_for(beta)`` supplies the quadrature spec at each temperature;
    the residual is pure finite-difference truncation, O(h^2).
    """
    def mean_at(b):
        return grid_expectation(model, data, b, f, spec_for(b))

    e_lo = mean_at(beta * (1 - h))
    e_hi = mean_at(beta * (1 + h))
    fd = (e_hi - e_lo) / (2 * beta * h)
    spec = spec_for(beta)
    ef = mean_at(beta)
    el = grid_expectation(model, data, beta, lambda t: model.loglik_total(t, data), spec)
    efl = grid_expectation(
        model, data, beta, lambda t: f(t) * model.loglik_total(t, data), spec
    )
    cov = efl - ef * el
    return IdentityReport(beta=beta, fd_derivative=fd, covariance=cov, residual=fd - cov, mc_se=0.0)


def log_partition_from_expectations(betas, e_loglik, e0_loglik: float):
    """Trapezoidal thermodynamic integration of E_b[loglik] from b = 0.

    The [0, beta_min] segment is a single trapezoid between the prior
    expectation and the first grid value; log Z(0) = 0 for a normalized
    prior.
    """
    betas = np.asarray(betas, dtype=float)
    e = np.asarray(e_loglik, dtype=float)
    if betas.shape != e.shape or betas.ndim != 1:
        raise ValueError("betas and expectations must be matching 1-d arrays")
    logZ = np.empty_like(betas)
    logZ[0] = 0.5 * (e0_loglik + e[0]) * betas[0]
    for k in range(1, betas.size):
        logZ[k] = logZ[k - 1] + 0.5 * (e[k - 1] + e[k]) * (betas[k] - betas[k - 1])
    return logZ


def log_partition_curve(sweep: SweepResult):
    """(log Z, free energy F = -log Z / beta) along the sweep grid."""
    if sweep.prior_chain is None:
        raise ValueError("thermodynamic integration needs the beta=0 prior chain")
    e0 = float(np.mean(sweep.prior_chain.loglik_series))
    e = np.array([float(np.mean(c.loglik_series)) for c in sweep.chains])
    logZ = log_partition_from_expectations(sweep.grid.values, e, e0)
    free_energy = -logZ / sweep.grid.values
    return logZ, free_energy


def rlct_estimate(sweep: SweepResult, beta1: float, beta2: float) -> float:
    """Two-temperature slope of E[-loglik] against 1/beta near 1/log n."""
    if abs(beta1 - beta2) <= 1e-12 * max(abs(beta1), abs(beta2)):
        raise ValueError("degenerate temperature pair")

    def mean_negloglik(b):
        for chain in sweep.chains:
            if abs(chain.beta - b) <= 1e-9 * max(chain.beta, b):
                return float(-np.mean(chain.loglik_series))
        raise ValueError(f"no chain sampled at beta={b:g}")

    return (mean_negloglik(beta1) - mean_negloglik(beta2)) / (1.0 / beta1 - 1.0 / beta2)


def find_susceptibility_peak(curve: ResponseCurve):
    """(beta_peak, chi_peak); ties broken toward smaller beta."""
    if len(curve) == 0:
        raise ValueError("empty response curve")
    k = int(np.argmax(curve.chi))
    return float(curve.beta[k]), float(curve.chi[k])


def build_response_curve(
    sweep: SweepResult, model: ModelSpec, data: Dataset, obs: Observable
) -> ResponseCurve:
    """Assemble the full per-temperature response table from a sweep."""
    betas = sweep.grid.values
    m = np.empty_like(betas)
    m_se = np.empty_like(betas)
    chi = np.empty_like(betas)
    cap = np.empty_like(betas)
    p_waic = np.empty_like(betas)
    wt = np.empty_like(betas)
    ess = np.empty_like(betas)
    accept = np.empty_like(betas)
    for k, chain in enumerate(sweep.chains):
        series = observable_series(chain, obs, model, data)
        m[k], m_se[k] = order_parameter(series)
        chi[k] = susceptibility(series, chain.beta)
        cap[k] = heat_capacity(chain)
        p_waic[k] = waic_complexity(chain)
        wt[k] = waic_transform(p_waic[k], data.n)
        ess[k] = _series_ess(series)
        accept[k] = chain.accept_rate
    logZ, free_energy = log_partition_curve(sweep)
    return ResponseCurve(
        beta=betas.copy(), m=m, m_se=m_se, chi=chi, heat_capacity=cap,
        p_waic=p_waic, waic_transform=wt, logZ=logZ, free_energy=free_energy,
        ess=ess, accept_rate=accept,
    )
