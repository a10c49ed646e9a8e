"""Shared conjugate algebra for normal models under the 1/sigma prior.

For a sample w of size m with mean w_bar and sum of squared deviations S,
the kernel of (mu, sigma) given w is

    sigma^{-(m+1)} exp(-(S + m (w_bar - mu)^2) / (2 sigma^2)),

whose mu-marginal is a location-scale Student t with nu = m - 1 degrees of
freedom, center w_bar and scale lambda = sqrt(S / (m nu)), and whose
conditional on mu gives sigma = sqrt(B / (2 xi)) with xi ~ Gamma(m/2, 1) and
B = S + m (w_bar - mu)^2.  Integrating everything out,

    m(w) = (1/2) pi^{-(m-1)/2} m^{-1/2} Gamma((m-1)/2) S^{-(m-1)/2},

with a Student-t CDF factor when mu is restricted to a half line.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln, stdtr, stdtrit

LOG2PI = math.log(2.0 * math.pi)


def pooled_mean_ss(parts) -> tuple[int, float, float]:
    """Merge (count, mean, ssd) triples into pooled (count, mean, ssd)."""
    m = sum(p[0] for p in parts)
    mean = sum(p[0] * p[1] for p in parts) / m
    ss = sum(p[2] + p[0] * (p[1] - mean) ** 2 for p in parts)
    return m, mean, ss


def t_scale(m: int, ss: float) -> float:
    return math.sqrt(ss / (m * (m - 1)))


def log_marginal_free_mean(m: int, ss: float) -> float:
    """log m(w) with mu unrestricted."""
    a = (m - 1) / 2.0
    return (
        -math.log(2.0) + gammaln(a) - a * math.log(math.pi)
        - 0.5 * math.log(m) - a * math.log(ss)
    )


def log_marginal_sign_mean(m: int, mean: float, ss: float, sign: int) -> float:
    """log m(w) with mu restricted to mu < 0 (sign=-1) or mu > 0 (sign=+1)."""
    lam = t_scale(m, ss)
    # probability the t-distributed mu falls on the requested side of 0
    t0 = stdtr(m - 1, (0.0 - mean) / lam)
    mass = t0 if sign < 0 else 1.0 - t0
    return log_marginal_free_mean(m, ss) + math.log(mass)


def log_marginal_zero_mean(m: int, sum_sq: float) -> float:
    """log m(w) for the zero-mean normal scale model: prior 1/sigma."""
    return (
        -(m / 2.0) * math.log(math.pi) - math.log(2.0)
        + gammaln(m / 2.0) - (m / 2.0) * math.log(sum_sq)
    )


def sample_mean_sd(m: int, mean: float, ss: float, rng, size=None, sign: int = 0):
    """Draw (mu, sigma) from the conjugate posterior of a pooled sample.

    sign restricts mu to a half line (0 means unrestricted).  Vectorized when
    ``size`` is given; otherwise returns a single (mu, sigma) pair.
    """
    scalar = size is None
    nd = 1 if scalar else size
    nu = m - 1
    lam = t_scale(m, ss)
    t0 = stdtr(nu, (0.0 - mean) / lam)
    u = rng.random(nd)
    if sign < 0:
        u = u * t0
    elif sign > 0:
        u = t0 + u * (1.0 - t0)
    mu = mean + lam * stdtrit(nu, u)
    xi = rng.gamma(m / 2.0, 1.0, size=nd)
    sigma = np.sqrt((ss + m * (mean - mu) ** 2) / (2.0 * xi))
    if scalar:
        return float(mu[0]), float(sigma[0])
    return mu, sigma


def sample_zero_mean_sd(m: int, sum_sq: float, rng, size=None):
    """sigma from sigma^{-(m+1)} exp(-Q / (2 sigma^2)): xi ~ Gamma(m/2, 1)."""
    xi = rng.gamma(m / 2.0, 1.0, size=size)
    return np.sqrt(sum_sq / (2.0 * xi))


def log_kernel_mean_sd(mu, sigma, m: int, mean: float, ss: float):
    """Log of the pooled-sample normal likelihood kernel times 1/sigma."""
    return (
        -(m / 2.0) * LOG2PI - (m + 1.0) * np.log(sigma)
        - (ss + m * (mean - mu) ** 2) / (2.0 * sigma**2)
    )
