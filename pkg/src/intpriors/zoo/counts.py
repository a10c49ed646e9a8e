"""Poisson model against the negative-binomial family.

The Poisson rate theta_1 > 0 carries the Jeffreys prior theta^{-1/2}; the
negative binomial with index r >= 2 has pmf

    f_r(x | theta) = C(x + r - 2, x) theta^{r-1} (1 - theta)^x,

theta in (0, 1), with prior theta^{-1} (1 - theta)^{-1/2}.  r = 2 is the
geometric model.  Minimal training samples have size one (any z >= 0), and
the posteriors are exactly

    pi_1^N(theta | z) = Gamma(z + 1/2, 1)
    pi_r^N(theta | z) = Beta(r - 1, z + 1/2).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betaln, gammaln

from ..families import ModelFamily, PriorKernel
from ..types import Dataset, DomainError, TrainingSample


def count_posterior_draw(z: int, which: str, rng, r: int = 2) -> float:
    """Draw from the training-sample posterior of a count model.

    which is "Poisson" for Gamma(z + 1/2, 1) or "NB" for Beta(r-1, z + 1/2).
    """
    if z < 0:
        raise DomainError("z must be a nonnegative integer")
    if which == "Poisson":
        return float(rng.gamma(z + 0.5, 1.0))
    if which == "NB":
        if r < 2:
            raise DomainError("r must be >= 2")
        return float(rng.beta(r - 1.0, z + 0.5))
    raise DomainError(f"unknown model {which!r}")


def _log_binom(a, b):
    return gammaln(a + 1.0) - gammaln(b + 1.0) - gammaln(a - b + 1.0)


class PoissonModel(ModelFamily):
    """Poisson counts with the Jeffreys prior theta^{-1/2}."""

    param_dim = 1
    ts_size = 1
    obs_kind = "count"
    name = "poisson"

    def in_support(self, theta) -> bool:
        return theta[0] > 0.0

    def coord_supports(self):
        return [(0.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.SQRT_RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -0.5 * math.log(theta[0])

    def sample_data(self, theta, n, rng):
        return rng.poisson(theta[0], size=n)

    def log_likelihood(self, theta, x: Dataset) -> float:
        t = theta[0]
        return x.total * math.log(t) - x.n * t - x.sum_log_factorial

    def log_likelihood_many(self, thetas, x: Dataset):
        t = thetas[:, 0]
        return x.total * np.log(t) - x.n * t - x.sum_log_factorial

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return rng.poisson(theta[0], size=size)

    def ts_log_likelihood(self, theta, ts) -> float:
        t = theta[0]
        z = float(ts.values[0])
        return z * math.log(t) - t - gammaln(z + 1.0)

    def sample_posterior_ts(self, ts, rng):
        return np.array([count_posterior_draw(int(ts.values[0]), "Poisson", rng)])

    def sample_posterior_ts_data(self, ts, x, rng):
        z = float(ts.values[0])
        return np.array([rng.gamma(x.total + z + 0.5, 1.0 / (x.n + 1))])

    def sample_posterior_data(self, x, rng, size):
        return rng.gamma(x.total + 0.5, 1.0 / x.n, size=size).reshape(size, 1)

    def log_marginal_ts(self, ts) -> float:
        z = float(ts.values[0])
        if z < 0:
            raise DomainError("z must be nonnegative")
        return gammaln(z + 0.5) - gammaln(z + 1.0)

    def log_marginal_ts_data(self, ts, x) -> float:
        z = float(ts.values[0])
        a = x.total + z + 0.5
        return (
            gammaln(a) - a * math.log(x.n + 1.0)
            - gammaln(z + 1.0) - x.sum_log_factorial
        )

    def mle(self, x: Dataset):
        return np.array([x.mean])

    def log_posterior_ts_many(self, theta, ts_list):
        t = theta[0]
        if t <= 0.0:
            return np.full(len(ts_list), -math.inf)
        zs = np.array([float(ts.values[0]) for ts in ts_list])
        a = zs + 0.5
        return (a - 1.0) * math.log(t) - t - gammaln(a)

    def log_posterior_ts_data_many(self, theta, ts_list, x):
        t = theta[0]
        if t <= 0.0:
            return np.full(len(ts_list), -math.inf)
        zs = np.array([float(ts.values[0]) for ts in ts_list])
        a = zs + x.total + 0.5
        rate = x.n + 1.0
        return a * math.log(rate) + (a - 1.0) * math.log(t) - rate * t - gammaln(a)


class NegativeBinomialModel(ModelFamily):
    """Negative binomial with index r, success probability theta in (0, 1)."""

    param_dim = 1
    ts_size = 1
    obs_kind = "count"

    def __init__(self, r: int):
        if r < 2:
            raise DomainError("r must be >= 2")
        self.r = int(r)
        self.name = f"negbin_r{r}"

    def in_support(self, theta) -> bool:
        return 0.0 < theta[0] < 1.0

    def coord_supports(self):
        return [(0.0, 1.0)]

    def prior_coord_kernels(self):
        return [PriorKernel.NB_JEFFREYS]

    def log_prior_kernel(self, theta) -> float:
        t = theta[0]
        return -math.log(t) - 0.5 * math.log(1.0 - t)

    def sample_data(self, theta, n, rng):
        return rng.negative_binomial(self.r - 1, theta[0], size=n)

    def _loglik_const(self, x: Dataset) -> float:
        return float(_log_binom(x.observations + self.r - 2.0, x.observations).sum())

    def log_likelihood(self, theta, x: Dataset) -> float:
        t = theta[0]
        return (
            x.n * (self.r - 1.0) * math.log(t)
            + x.total * math.log(1.0 - t)
            + self._loglik_const(x)
        )

    def log_likelihood_many(self, thetas, x: Dataset):
        t = thetas[:, 0]
        return (
            x.n * (self.r - 1.0) * np.log(t)
            + x.total * np.log(1.0 - t)
            + self._loglik_const(x)
        )

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return rng.negative_binomial(self.r - 1, theta[0], size=size)

    def ts_log_likelihood(self, theta, ts) -> float:
        t = theta[0]
        z = float(ts.values[0])
        return (
            float(_log_binom(z + self.r - 2.0, z))
            + (self.r - 1.0) * math.log(t) + z * math.log(1.0 - t)
        )

    def sample_posterior_ts(self, ts, rng):
        return np.array(
            [count_posterior_draw(int(ts.values[0]), "NB", rng, r=self.r)]
        )

    def sample_posterior_ts_data(self, ts, x, rng):
        z = float(ts.values[0])
        a = (x.n + 1.0) * (self.r - 1.0)
        return np.array([rng.beta(a, x.total + z + 0.5)])

    def sample_posterior_data(self, x, rng, size):
        a = x.n * (self.r - 1.0)
        return rng.beta(a, x.total + 0.5, size=size).reshape(size, 1)

    def log_marginal_ts(self, ts) -> float:
        z = float(ts.values[0])
        if z < 0:
            raise DomainError("z must be nonnegative")
        return float(_log_binom(z + self.r - 2.0, z)) + betaln(self.r - 1.0, z + 0.5)

    def log_marginal_ts_data(self, ts, x) -> float:
        z = float(ts.values[0])
        a = (x.n + 1.0) * (self.r - 1.0)
        return (
            float(_log_binom(z + self.r - 2.0, z))
            + self._loglik_const(x)
            + betaln(a, x.total + z + 0.5)
        )

    def mle(self, x: Dataset):
        a = x.n * (self.r - 1.0)
        return np.array([a / (a + x.total)])

    def log_posterior_ts_many(self, theta, ts_list):
        t = theta[0]
        if not (0.0 < t < 1.0):
            return np.full(len(ts_list), -math.inf)
        zs = np.array([float(ts.values[0]) for ts in ts_list])
        b = zs + 0.5
        return (
            (self.r - 2.0) * math.log(t) + (b - 1.0) * math.log(1.0 - t)
            - betaln(self.r - 1.0, b)
        )

    def log_posterior_ts_data_many(self, theta, ts_list, x):
        t = theta[0]
        if not (0.0 < t < 1.0):
            return np.full(len(ts_list), -math.inf)
        zs = np.array([float(ts.values[0]) for ts in ts_list])
        a = (x.n + 1.0) * (self.r - 1.0)
        b = x.total + zs + 0.5
        return (a - 1.0) * math.log(t) + (b - 1.0) * np.log(1.0 - t) - betaln(a, b)
