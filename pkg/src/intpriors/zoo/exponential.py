"""Exponential mean test: theta in (0, 1) against theta in (1, inf).

Both models share the likelihood f(x | theta) = theta^{-1} exp(-x / theta)
and the reference prior 1/theta; only the parameter range differs.  With a
size-one training sample z the posterior kernel is theta^{-2} exp(-z/theta),
which in phi = 1/theta is a (truncated) exponential, so posterior draws come
from explicit inverse CDFs:

    theta_1 = 1 / (1 - log(u)/z)                          on (0, 1)
    theta_2 = -z / log(u (1 - e^{-z}) + e^{-z})           on (1, inf)

Pooling z with the data keeps conjugacy: phi given a pooled sample of size m
and sum c is Gamma(m, c) truncated to (1, inf) or (0, 1).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammainc, gammaincc, gammaincinv, gammaln

from ..families import ModelFamily, PriorKernel
from ..types import Dataset, DomainError, TrainingSample


def exp_below_posterior_icdf(z: float, u: float) -> float:
    """Inverse posterior CDF on (0, 1) at level u given training sample z."""
    return 1.0 / (1.0 - math.log(u) / z)


def exp_above_posterior_icdf(z: float, u: float) -> float:
    """Inverse posterior CDF on (1, inf) at level u given training sample z."""
    return -z / math.log(u * -math.expm1(-z) + math.exp(-z))


def exp_restricted_posterior_draw(z: float, branch: str, rng) -> float:
    """One draw from pi^N(theta | z) on the requested branch.

    branch is "below-1" for the (0, 1) model or "above-1" for (1, inf).
    """
    if z <= 0.0:
        raise DomainError("training sample must be positive")
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    if branch == "below-1":
        return exp_below_posterior_icdf(z, u)
    if branch == "above-1":
        return exp_above_posterior_icdf(z, u)
    raise DomainError(f"unknown branch {branch!r}")


class RestrictedExponential(ModelFamily):
    """Exponential model with mean restricted to (0, 1) or (1, inf)."""

    param_dim = 1
    ts_size = 1

    def __init__(self, region: str):
        if region not in ("below-1", "above-1"):
            raise DomainError(f"unknown region {region!r}")
        self.region = region
        self.below = region == "below-1"
        self.name = f"exp_{'below' if self.below else 'above'}_1"

    # ---- support / prior ----

    def in_support(self, theta) -> bool:
        t = theta[0]
        return (0.0 < t < 1.0) if self.below else (t > 1.0)

    def coord_supports(self):
        return [(0.0, 1.0)] if self.below else [(1.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -math.log(theta[0])

    # ---- data ----

    def sample_data(self, theta, n, rng):
        return rng.exponential(theta[0], size=n)

    def log_likelihood(self, theta, x: Dataset) -> float:
        t = theta[0]
        return -x.n * math.log(t) - x.total / t

    def log_likelihood_many(self, thetas, x: Dataset):
        t = thetas[:, 0]
        return -x.n * np.log(t) - x.total / t

    # ---- training samples ----

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return rng.exponential(theta[0], size=size)

    def ts_admissible(self, values, slots) -> bool:
        return values[0] > 0.0

    def ts_log_likelihood(self, theta, ts) -> float:
        t = theta[0]
        return -math.log(t) - ts.values[0] / t

    # ---- conjugate machinery ----

    def sample_posterior_ts(self, ts, rng):
        z = float(ts.values[0])
        return np.array([exp_restricted_posterior_draw(z, self.region, rng)])

    def _truncated_gamma_draws(self, shape, rate, rng, size):
        """theta = 1/phi with phi ~ Gamma(shape, rate) truncated by the branch."""
        p1 = gammainc(shape, rate)  # P(phi < 1)
        u = rng.random(size)
        levels = p1 + u * (1.0 - p1) if self.below else u * p1
        phi = gammaincinv(shape, levels) / rate
        return 1.0 / phi

    def sample_posterior_ts_data(self, ts, x, rng):
        shape, rate = x.n + 1, x.total + float(ts.values[0])
        return np.array([float(self._truncated_gamma_draws(shape, rate, rng, None))])

    def sample_posterior_data(self, x, rng, size):
        draws = self._truncated_gamma_draws(x.n, x.total, rng, size)
        return draws.reshape(size, 1)

    def _log_marginal(self, m: int, c: float) -> float:
        """log of int theta^{-(m+1)} e^{-c/theta} dtheta over the branch."""
        tail = gammaincc(m, c) if self.below else gammainc(m, c)
        return gammaln(m) - m * math.log(c) + math.log(tail)

    def log_marginal_ts(self, ts) -> float:
        z = float(ts.values[0])
        if z <= 0.0:
            raise DomainError("training sample must be positive")
        if self.below:
            return -z - math.log(z)          # e^{-z} / z
        return math.log(-math.expm1(-z)) - math.log(z)  # (1 - e^{-z}) / z

    def log_marginal_ts_data(self, ts, x) -> float:
        z = float(ts.values[0])
        if z <= 0.0:
            raise DomainError("training sample must be positive")
        return self._log_marginal(x.n + 1, x.total + z)

    def log_posterior_ts_many(self, theta, ts_list):
        t = theta[0]
        if not self.in_support(theta):
            return np.full(len(ts_list), -math.inf)
        zs = np.array([ts.values[0] for ts in ts_list])
        if self.below:
            log_m = -zs - np.log(zs)
        else:
            log_m = np.log(-np.expm1(-zs)) - np.log(zs)
        return -2.0 * math.log(t) - zs / t - log_m

    def log_posterior_ts_data_many(self, theta, ts_list, x):
        t = theta[0]
        if not self.in_support(theta):
            return np.full(len(ts_list), -math.inf)
        zs = np.array([ts.values[0] for ts in ts_list])
        m = x.n + 1
        c = x.total + zs
        tail = gammaincc(m, c) if self.below else gammainc(m, c)
        log_m = gammaln(m) - m * np.log(c) + np.log(tail)
        return -(m + 1.0) * math.log(t) - c / t - log_m
