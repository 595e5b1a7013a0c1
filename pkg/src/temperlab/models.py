"""The shipped models: three singular examples plus a conjugate oracle.

Priors are proper Gaussians on every parameter (the tempered target is
then well-defined down to beta = 0), noise scales are fixed and known,
and gradients are hand-derived. Each model declares its exact gauge
family: sign flip for the mixture, GL(r) rotations for reduced-rank
regression, unit permutations and sign flips for the network.
"""

from __future__ import annotations

import numpy as np

from .model import Dataset, ModelSpec

__all__ = [
    "MixtureModel",
    "RRRModel",
    "TwoLayerNetModel",
    "ConjugateGaussianModel",
    "make_synthetic_dataset",
    "conjugate_tempered_moments",
]

_LOG_2PI = float(np.log(2.0 * np.pi))


class MixtureModel(ModelSpec):
    """Two-component Gaussian mixture with symmetric means +/-mu.

    The single parameter is mu; weights (1/2, 1/2) and the noise scale
    are fixed, so the density is exactly symmetric under mu -> -mu.
    """

    def __init__(self, noise_sd: float = 1.0, prior_sd: float = 1.0):
        if noise_sd <= 0 or prior_sd <= 0:
            raise ValueError("scales must be positive")
        self.noise_sd = noise_sd
        self.prior_sd = prior_sd

    @property
    def dim(self) -> int:
        return 1

    def log_prior(self, theta):
        s = self.prior_sd
        return float(-0.5 * theta[0] ** 2 / s**2 - 0.5 * _LOG_2PI - np.log(s))

    def grad_log_prior(self, theta):
        return np.array([-theta[0] / self.prior_sd**2])

    def loglik_pointwise(self, theta, data):
        mu = theta[0]
        s2 = self.noise_sd**2
        norm = -0.5 * _LOG_2PI - np.log(self.noise_sd)
        a = norm - 0.5 * (data.x - mu) ** 2 / s2
        b = norm - 0.5 * (data.x + mu) ** 2 / s2
        return np.logaddexp(a, b) + np.log(0.5)

    def loglik_point(self, theta, i, data):
        mu = theta[0]
        s2 = self.noise_sd**2
        norm = -0.5 * _LOG_2PI - np.log(self.noise_sd)
        a = norm - 0.5 * (data.x[i] - mu) ** 2 / s2
        b = norm - 0.5 * (data.x[i] + mu) ** 2 / s2
        return float(np.logaddexp(a, b) + np.log(0.5))

    def grad_loglik_total(self, theta, data):
        mu = theta[0]
        s2 = self.noise_sd**2
        x = data.x
        # responsibility of the +mu component, overflow-safe logistic
        d = (-0.5 * (x - mu) ** 2 + 0.5 * (x + mu) ** 2) / s2
        r = np.where(d >= 0, 1.0 / (1.0 + np.exp(-np.abs(d))), np.exp(-np.abs(d)) / (1.0 + np.exp(-np.abs(d))))
        g = np.sum(r * (x - mu) / s2 - (1.0 - r) * (x + mu) / s2)
        return np.array([g])

    def gauge_transforms(self):
        return [
            lambda theta, rng: theta,
            lambda theta, rng: -theta,
        ]

    def sample_prior(self, rng):
        return rng.standard_normal(1) * self.prior_sd


class RRRModel(ModelSpec):
    """Reduced-rank regression y = x (U V^T) + noise.

    Parameters are the entries of U (p x r) and V (q x r), flattened in
    that order. Standard normal prior on every entry.
    """

    def __init__(self, p: int, q: int, r: int, noise_sd: float = 1.0):
        if r > min(p, q):
            raise ValueError("rank must satisfy r <= min(p, q)")
        if noise_sd <= 0:
            raise ValueError("noise_sd must be positive")
        self.p, self.q, self.r = p, q, r
        self.noise_sd = noise_sd

    @property
    def dim(self) -> int:
        return self.r * (self.p + self.q)

    def split(self, theta):
        pu = self.p * self.r
        U = theta[:pu].reshape(self.p, self.r)
        V = theta[pu:].reshape(self.q, self.r)
        return U, V

    def coefficient_matrix(self, theta) -> np.ndarray:
        U, V = self.split(theta)
        return U @ V.T

    def log_prior(self, theta):
        return float(-0.5 * np.dot(theta, theta) - 0.5 * self.dim * _LOG_2PI)

    def grad_log_prior(self, theta):
        return -theta

    def loglik_pointwise(self, theta, data):
        B = self.coefficient_matrix(theta)
        resid = data.y - data.x @ B
        s2 = self.noise_sd**2
        norm = -0.5 * self.q * (_LOG_2PI + np.log(s2))
        return norm - 0.5 * np.sum(resid**2, axis=1) / s2

    def loglik_point(self, theta, i, data):
        B = self.coefficient_matrix(theta)
        resid = data.y[i] - data.x[i] @ B
        s2 = self.noise_sd**2
        return float(-0.5 * self.q * (_LOG_2PI + np.log(s2)) - 0.5 * resid @ resid / s2)

    def grad_loglik_total(self, theta, data):
        U, V = self.split(theta)
        resid = data.y - data.x @ (U @ V.T)
        gB = data.x.T @ resid / self.noise_sd**2
        return np.concatenate([(gB @ V).ravel(), (gB.T @ U).ravel()])

    def _random_gl(self, rng):
        """Random invertible r x r matrix with modest condition number."""
        q1, _ = np.linalg.qr(rng.standard_normal((self.r, self.r)))
        q2, _ = np.linalg.qr(rng.standard_normal((self.r, self.r)))
        s = rng.uniform(0.5, 2.0, self.r)
        return q1 @ np.diag(s) @ q2

    def _gauge_rotate(self, theta, rng):
        U, V = self.split(theta)
        R = self._random_gl(rng)
        return np.concatenate([(U @ R).ravel(), (V @ np.linalg.inv(R).T).ravel()])

    def gauge_transforms(self):
        return [
            lambda theta, rng: theta,
            lambda theta, rng: -theta,  # (U, V) -> (-U, -V) keeps B
            self._gauge_rotate,
        ]


class TwoLayerNetModel(ModelSpec):
    """One hidden layer, tanh units, scalar input/output.

    f(x) = sum_j a_j tanh(w_j x + b_j) + c, parameters laid out as
    [a_1..a_H, w_1..w_H, b_1..b_H, c]. Standard normal prior.
    """

    def __init__(self, H: int, noise_sd: float = 0.5):
        if H < 1:
            raise ValueError("need at least one hidden unit")
        if noise_sd <= 0:
            raise ValueError("noise_sd must be positive")
        self.H = H
        self.noise_sd = noise_sd

    @property
    def dim(self) -> int:
        return 3 * self.H + 1

    def split(self, theta):
        H = self.H
        return theta[:H], theta[H : 2 * H], theta[2 * H : 3 * H], theta[3 * H]

    def predict(self, theta, x):
        a, w, b, c = self.split(theta)
        return np.tanh(np.outer(x, w) + b) @ a + c

    def log_prior(self, theta):
        return float(-0.5 * np.dot(theta, theta) - 0.5 * self.dim * _LOG_2PI)

    def grad_log_prior(self, theta):
        return -theta

    def loglik_pointwise(self, theta, data):
        s2 = self.noise_sd**2
        resid = data.y - self.predict(theta, data.x)
        return -0.5 * (_LOG_2PI + np.log(s2)) - 0.5 * resid**2 / s2

    def loglik_point(self, theta, i, data):
        s2 = self.noise_sd**2
        a, w, b, c = self.split(theta)
        f = float(np.dot(a, np.tanh(w * data.x[i] + b)) + c)
        return float(-0.5 * (_LOG_2PI + np.log(s2)) - 0.5 * (data.y[i] - f) ** 2 / s2)

    def grad_loglik_total(self, theta, data):
        a, w, b, c = self.split(theta)
        z = np.outer(data.x, w) + b  # (n, H)
        t = np.tanh(z)
        resid = data.y - (t @ a + c)
        e = resid / self.noise_sd**2  # (n,)
        sech2 = 1.0 - t**2
        ga = t.T @ e
        gw = (sech2 * data.x[:, None]).T @ e * a
        gb = sech2.T @ e * a
        gc = np.sum(e)
        return np.concatenate([ga, gw, gb, [gc]])

    def _gauge_permute(self, theta, rng):
        a, w, b, c = self.split(theta)
        perm = rng.permutation(self.H)
        return np.concatenate([a[perm], w[perm], b[perm], [c]])

    def _gauge_sign_flip(self, theta, rng):
        a, w, b, c = self.split(theta)
        flip = np.where(rng.random(self.H) < 0.5, -1.0, 1.0)
        return np.concatenate([a * flip, w * flip, b * flip, [c]])

    def gauge_transforms(self):
        return [
            lambda theta, rng: theta,
            self._gauge_permute,
            self._gauge_sign_flip,
        ]


class ConjugateGaussianModel(ModelSpec):
    """x_i ~ N(theta, I_d) with standard normal prior: everything closed-form.

    The tempered posterior is N(beta*n*xbar/(1+beta*n), I/(1+beta*n)), and
    log Z(beta), E_beta[loglik], Var_beta[loglik], p_WAIC and the evidence
    all have exact expressions. A regular model with lambda = nu = d/2,
    used as ground truth throughout the test suite.
    """

    def __init__(self, d: int = 1):
        if d < 1:
            raise ValueError("dimension must be positive")
        self.d = d

    @property
    def dim(self) -> int:
        return self.d

    def log_prior(self, theta):
        return float(-0.5 * np.dot(theta, theta) - 0.5 * self.d * _LOG_2PI)

    def grad_log_prior(self, theta):
        return -theta

    def loglik_pointwise(self, theta, data):
        resid = data.x - theta
        return -0.5 * self.d * _LOG_2PI - 0.5 * np.sum(resid**2, axis=1)

    def loglik_point(self, theta, i, data):
        resid = data.x[i] - theta
        return float(-0.5 * self.d * _LOG_2PI - 0.5 * resid @ resid)

    def grad_loglik_total(self, theta, data):
        return np.sum(data.x, axis=0) - data.n * theta

    # ---- closed forms -------------------------------------------------

    def tempered_moments(self, data: Dataset, beta: float):
        """Posterior mean vector and per-coordinate variance at beta."""
        if beta < 0:
            raise ValueError("beta must be >= 0")
        n = data.n
        xbar = np.mean(data.x, axis=0) if n else np.zeros(self.d)
        mean = beta * n * xbar / (1.0 + beta * n)
        var = 1.0 / (1.0 + beta * n)
        return mean, var

    def log_partition(self, data: Dataset, beta: float) -> float:
        n = data.n
        if n == 0 or beta == 0.0:
            return 0.0
        xbar = np.mean(data.x, axis=0)
        sqsum = float(np.sum(data.x**2))
        bn = beta * n
        return float(
            -0.5 * bn * self.d * _LOG_2PI
            - 0.5 * beta * sqsum
            + 0.5 * np.sum((bn * xbar) ** 2) / (1.0 + bn)
            - 0.5 * self.d * np.log(1.0 + bn)
        )

    def expected_loglik(self, data: Dataset, beta: float) -> float:
        n = data.n
        xbar = np.mean(data.x, axis=0)
        sqsum = float(np.sum(data.x**2))
        mean, var = self.tempered_moments(data, beta)
        return float(
            -0.5 * n * self.d * _LOG_2PI
            - 0.5 * sqsum
            + n * xbar @ mean
            - 0.5 * n * (mean @ mean + self.d * var)
        )

    def var_loglik(self, data: Dataset, beta: float) -> float:
        n = data.n
        xbar = np.mean(data.x, axis=0)
        mean, var = self.tempered_moments(data, beta)
        resid = xbar - mean
        return float(var * n**2 * resid @ resid + 0.5 * self.d * n**2 * var**2)

    def waic_complexity_exact(self, data: Dataset, beta: float = 1.0) -> float:
        mean, var = self.tempered_moments(data, beta)
        sq = np.sum((data.x - mean) ** 2)
        return float(var * sq + 0.5 * self.d * data.n * var**2)

    def evidence(self, data: Dataset) -> float:
        """log marginal likelihood log Z(1)."""
        return self.log_partition(data, 1.0)


def conjugate_tempered_moments(model: ConjugateGaussianModel, data: Dataset, beta: float):
    return model.tempered_moments(data, beta)


def make_synthetic_dataset(model_kind: str, teacher: dict, n: int, seed: int) -> Dataset:
    """Deterministic synthetic data for one of the shipped model kinds.

    teacher keys:
      mixture   -- mu, noise_sd
      rrr       -- B (p x q array), noise_sd
      nn        -- a, w, b, c, noise_sd
      conjugate -- theta (length-d array)
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    if model_kind == "mixture":
        mu = float(teacher["mu"])
        sd = float(teacher.get("noise_sd", 1.0))
        signs = rng.choice([-1.0, 1.0], size=n)
        x = signs * mu + sd * rng.standard_normal(n)
        return Dataset(n=n, x=x)
    if model_kind == "rrr":
        B = np.asarray(teacher["B"], dtype=float)
        sd = float(teacher.get("noise_sd", 1.0))
        p, q = B.shape
        x = rng.standard_normal((n, p))
        y = x @ B + sd * rng.standard_normal((n, q))
        return Dataset(n=n, x=x, y=y)
    if model_kind == "nn":
        a = np.asarray(teacher["a"], dtype=float)
        w = np.asarray(teacher["w"], dtype=float)
        b = np.asarray(teacher["b"], dtype=float)
        if not (a.shape == w.shape == b.shape):
            raise ValueError("teacher unit arrays must share one shape")
        c = float(teacher.get("c", 0.0))
        sd = float(teacher.get("noise_sd", 0.5))
        x = rng.uniform(-3.0, 3.0, size=n)
        f = np.tanh(np.outer(x, w) + b) @ a + c
        y = f + sd * rng.standard_normal(n)
        return Dataset(n=n, x=x, y=y)
    if model_kind == "conjugate":
        theta = np.atleast_1d(np.asarray(teacher["theta"], dtype=float))
        x = theta + rng.standard_normal((n, theta.size))
        return Dataset(n=n, x=x)
    raise ValueError(f"unknown model kind: {model_kind!r}")
