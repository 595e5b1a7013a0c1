"""Streaming moments, effective sample size, and finite differences.

Everything downstream (order parameters, susceptibilities, WAIC, error
bars) funnels through the estimators in this module, so they are kept
numerically boring: Welford updates, unbiased (n-1) normalization, and
Geyer truncation for autocorrelation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MomentAccumulator",
    "EssDiagnostics",
    "accumulate",
    "covariance",
    "effective_sample_size",
    "nonuniform_derivative",
]


@dataclass
class MomentAccumulator:
    """One-pass mean/variance (and optionally covariance) accumulator.

    ``mean``/``m2`` may be scalars or numpy arrays: feeding arrays of a
    fixed shape accumulates elementwise, which is how per-datum pointwise
    log-likelihood moments are streamed without storing a samples-by-n
    matrix.

    Paired mode is entered by pushing (x, y) pairs; ``cross`` then holds
    the sum of centered cross products so ``covariance()`` is available.
    """

    count: int = 0
    mean: float | np.ndarray = 0.0
    m2: float | np.ndarray = 0.0
    paired: bool = False
    mean_y: float = 0.0
    m2_y: float = 0.0
    cross: float = 0.0

    def push(self, x, y=None):
        if self.count == 0:
            self.paired = y is not None
        elif self.paired != (y is not None):
            raise ValueError("cannot mix paired and unpaired accumulation")
        self.count += 1
        delta = x - self.mean
        self.mean = self.mean + delta / self.count
        self.m2 = self.m2 + delta * (x - self.mean)
        if y is not None:
            dy = y - self.mean_y
            self.mean_y += dy / self.count
            self.m2_y += dy * (y - self.mean_y)
            # cross uses the pre-update x-delta and post-update y-mean
            self.cross += delta * (y - self.mean_y)
        return self

    def variance(self):
        if self.count < 2:
            raise ValueError("variance requires count >= 2")
        return self.m2 / (self.count - 1)

    def variance_y(self):
        if not self.paired:
            raise ValueError("not a paired accumulator")
        if self.count < 2:
            raise ValueError("variance requires count >= 2")
        return self.m2_y / (self.count - 1)

    def covariance(self):
        if not self.paired:
            raise ValueError("not a paired accumulator")
        if self.count < 2:
            raise ValueError("covariance requires count >= 2")
        return self.cross / (self.count - 1)

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Combine two accumulators as if their streams were concatenated."""
        if other.count == 0:
            return self
        if self.count == 0:
            for f in ("count", "mean", "m2", "paired", "mean_y", "m2_y", "cross"):
                setattr(self, f, getattr(other, f))
            return self
        if self.paired != other.paired:
            raise ValueError("cannot merge paired with unpaired accumulator")
        na, nb = self.count, other.count
        n = na + nb
        delta = other.mean - self.mean
        self.m2 = self.m2 + other.m2 + delta * delta * (na * nb / n)
        if self.paired:
            dy = other.mean_y - self.mean_y
            self.m2_y += other.m2_y + dy * dy * (na * nb / n)
            self.cross += other.cross + delta * dy * (na * nb / n)
            self.mean_y += dy * nb / n
        self.mean = self.mean + delta * nb / n
        self.count = n
        return self


def accumulate(acc: MomentAccumulator, x, y=None) -> MomentAccumulator:
    """Functional wrapper over :meth:`MomentAccumulator.push`."""
    return acc.push(x, y)


@dataclass
class EssDiagnostics:
    ess: float
    autocorrelation_time: float
    truncation_lag: int


def covariance(a, b) -> float:
    """Unbiased sample covariance of two equal-length series."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("covariance requires two 1-d series of equal length")
    if a.size < 2:
        raise ValueError("covariance requires length >= 2")
    da = a - a.mean()
    db = b - b.mean()
    return float(np.dot(da, db) / (a.size - 1))


def _autocorrelation(x: np.ndarray) -> np.ndarray:
    """Normalized autocorrelation function via FFT."""
    n = x.size
    xc = x - x.mean()
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(xc, m)
    acov = np.fft.irfft(f * np.conj(f))[:n].real / n
    return acov / acov[0]


def effective_sample_size(series) -> EssDiagnostics:
    """ESS with Geyer's initial-positive-sequence truncation.

    A constant series has no autocorrelation structure to estimate and is
    defined to have ESS equal to its length.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 10:
        raise ValueError("effective_sample_size requires a 1-d series of length >= 10")
    n = x.size
    if np.all(x == x[0]):
        return EssDiagnostics(ess=float(n), autocorrelation_time=0.0, truncation_lag=0)
    rho = _autocorrelation(x)
    # Geyer: sum consecutive pairs Gamma_k = rho_{2k} + rho_{2k+1}, stop at
    # the first nonpositive pair.
    tau = 0.0
    lag = 0
    k = 0
    while 2 * k + 1 < n:
        gamma = rho[2 * k] + rho[2 * k + 1]
        if gamma <= 0.0:
            break
        tau += 2.0 * gamma
        lag = 2 * k + 1
        k += 1
    tau -= 1.0  # the k=0 pair double-counts rho_0 = 1
    tau = max(tau, 1.0 / n)
    ess = min(float(n), n / tau)
    return EssDiagnostics(ess=ess, autocorrelation_time=max(tau, 0.0), truncation_lag=lag)


def nonuniform_derivative(grid, values) -> np.ndarray:
    """First derivative on a strictly increasing non-uniform grid.

    Three-point Lagrange stencils: centered at interior nodes, one-sided
    (still second order) at the endpoints. Exact for polynomials of
    degree <= 2 on any admissible grid.
    """
    x = np.asarray(grid, dtype=float)
    f = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != f.shape or x.size < 3:
        raise ValueError("need matching 1-d grid/values of length >= 3")
    if np.any(np.diff(x) <= 0):
        raise ValueError("grid must be strictly increasing")

    out = np.empty_like(f)
    for i in range(x.size):
        j = min(max(i - 1, 0), x.size - 3)
        x0, x1, x2 = x[j], x[j + 1], x[j + 2]
        f0, f1, f2 = f[j], f[j + 1], f[j + 2]
        t = x[i]
        out[i] = (
            f0 * (2 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + f1 * (2 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + f2 * (2 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
        )
    return out
