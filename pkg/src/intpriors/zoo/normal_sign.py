"""Normal mean-sign test: mu < 0, mu = 0, and mu > 0 with unknown variance.

Training samples have size 2 for the signed-mean models (z_bar, s_z with
s_z != 0) and size 1 (z != 0) for the zero-mean model.  Given z the
mu-marginal is a Cauchy kernel 1 / (s_z^2 + 2 (z_bar - mu)^2) truncated to
the requested half line, inverted in closed form:

    mu_neg = z_bar - (s_z/sqrt 2) cot((u/2)   (pi - 2 arctan(sqrt 2 z_bar / s_z)))
    mu_pos = z_bar - (s_z/sqrt 2) cot(((v-1)/2)(pi + 2 arctan(sqrt 2 z_bar / s_z)))

with u, v uniform on (0, 1).  Here s_z^2 is the sum of squared deviations
sum (z_j - z_bar)^2, which for size-2 samples equals the squared sample
standard deviation.
"""

from __future__ import annotations

import math

import numpy as np

from ..families import ModelFamily, PriorKernel
from ..types import Dataset, DomainError, TrainingSample
from . import _normal

SQRT2 = math.sqrt(2.0)


def mu_negative_from_uniform(zbar: float, s_z: float, u: float) -> float:
    """Inverse CDF of the mu < 0 half-Cauchy posterior at level u in (0, 1]."""
    a = math.atan(SQRT2 * zbar / s_z)
    return zbar - (s_z / SQRT2) / math.tan(0.5 * u * (math.pi - 2.0 * a))


def mu_positive_from_uniform(zbar: float, s_z: float, v: float) -> float:
    """Inverse CDF of the mu > 0 half-Cauchy posterior at level v in [0, 1)."""
    a = math.atan(SQRT2 * zbar / s_z)
    return zbar - (s_z / SQRT2) / math.tan(0.5 * (v - 1.0) * (math.pi + 2.0 * a))


def normal_mu_draw(zbar: float, s_z: float, sign: str, rng) -> float:
    """Draw mu from pi^N(mu | z) truncated to the requested sign."""
    if s_z <= 0.0:
        raise DomainError("s_z must be positive")
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    if sign == "negative":
        return mu_negative_from_uniform(zbar, s_z, u)
    if sign == "positive":
        return mu_positive_from_uniform(zbar, s_z, 1.0 - u)
    raise DomainError(f"unknown sign {sign!r}")


def normal_sigma_draw(zbar: float, s_z: float, mu: float, rng) -> float:
    """sigma | mu, z: xi ~ Exp(1), sigma = sqrt((s_z^2 + 2(z_bar-mu)^2)/(2 xi))."""
    if s_z <= 0.0:
        raise DomainError("s_z must be positive")
    xi = rng.exponential(1.0)
    return math.sqrt((s_z * s_z + 2.0 * (zbar - mu) ** 2) / (2.0 * xi))


def normal_zero_mean_sigma_draw(z: float, rng) -> float:
    """sigma | z for the zero-mean model: xi ~ Gamma(1/2, 1), sigma = |z|/sqrt(2 xi)."""
    if z == 0.0:
        raise DomainError("z must be nonzero")
    xi = rng.gamma(0.5, 1.0)
    return abs(z) / math.sqrt(2.0 * xi)


class SignedMeanNormal(ModelFamily):
    """Normal model with mu restricted to a half line, prior 1/sigma."""

    param_dim = 2
    ts_size = 2

    def __init__(self, sign: str):
        if sign not in ("negative", "positive"):
            raise DomainError(f"unknown sign {sign!r}")
        self.sign = sign
        self._s = -1 if sign == "negative" else +1
        self.name = f"normal_mu_{sign}"

    def in_support(self, theta) -> bool:
        mu, sigma = theta
        return sigma > 0.0 and (mu < 0.0 if self._s < 0 else mu > 0.0)

    def coord_supports(self):
        mu_rng = (-math.inf, 0.0) if self._s < 0 else (0.0, math.inf)
        return [mu_rng, (0.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.FLAT, PriorKernel.RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -math.log(theta[1])

    def sample_data(self, theta, n, rng):
        return theta[0] + theta[1] * rng.standard_normal(n)

    def log_likelihood(self, theta, x: Dataset) -> float:
        mu, sigma = theta
        return float(
            _normal.log_kernel_mean_sd(mu, sigma, x.n, x.mean, x.ssd)
            + math.log(sigma)
        )

    def log_likelihood_many(self, thetas, x: Dataset):
        mu, sigma = thetas[:, 0], thetas[:, 1]
        return _normal.log_kernel_mean_sd(mu, sigma, x.n, x.mean, x.ssd) + np.log(
            sigma
        )

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return theta[0] + theta[1] * rng.standard_normal(size)

    def ts_admissible(self, values, slots) -> bool:
        return values[0] != values[1]

    @staticmethod
    def _ts_stats(ts) -> tuple[float, float]:
        z1, z2 = ts.values
        return 0.5 * (z1 + z2), abs(z1 - z2) / SQRT2  # (z_bar, s_z)

    def ts_log_likelihood(self, theta, ts) -> float:
        mu, sigma = theta
        zbar, s_z = self._ts_stats(ts)
        return (
            -_normal.LOG2PI - 2.0 * math.log(sigma)
            - (s_z * s_z + 2.0 * (zbar - mu) ** 2) / (2.0 * sigma * sigma)
        )

    def sample_posterior_ts(self, ts, rng):
        zbar, s_z = self._ts_stats(ts)
        mu = normal_mu_draw(zbar, s_z, self.sign, rng)
        sigma = normal_sigma_draw(zbar, s_z, mu, rng)
        return np.array([mu, sigma])

    def _pooled(self, ts, x):
        zbar, s_z = self._ts_stats(ts)
        return _normal.pooled_mean_ss(
            [(x.n, x.mean, x.ssd), (2, zbar, s_z * s_z)]
        )

    def sample_posterior_ts_data(self, ts, x, rng):
        m, mean, ss = self._pooled(ts, x)
        mu, sigma = _normal.sample_mean_sd(m, mean, ss, rng, sign=self._s)
        return np.array([mu, sigma])

    def sample_posterior_data(self, x, rng, size):
        mu, sigma = _normal.sample_mean_sd(
            x.n, x.mean, x.ssd, rng, size=size, sign=self._s
        )
        return np.column_stack([mu, sigma])

    def log_marginal_ts(self, ts) -> float:
        zbar, s_z = self._ts_stats(ts)
        if s_z == 0.0:
            raise DomainError("degenerate training sample: s_z = 0")
        return _normal.log_marginal_sign_mean(2, zbar, s_z * s_z, self._s)

    def log_marginal_ts_data(self, ts, x) -> float:
        zbar, s_z = self._ts_stats(ts)
        if s_z == 0.0:
            raise DomainError("degenerate training sample: s_z = 0")
        m, mean, ss = self._pooled(ts, x)
        return _normal.log_marginal_sign_mean(m, mean, ss, self._s)


class ZeroMeanNormal(ModelFamily):
    """Normal model with mean fixed at zero, prior 1/sigma."""

    param_dim = 1
    ts_size = 1
    name = "normal_mu_zero"

    def in_support(self, theta) -> bool:
        return theta[0] > 0.0

    def coord_supports(self):
        return [(0.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -math.log(theta[0])

    def sample_data(self, theta, n, rng):
        return theta[0] * rng.standard_normal(n)

    def log_likelihood(self, theta, x: Dataset) -> float:
        sigma = theta[0]
        return (
            -(x.n / 2.0) * _normal.LOG2PI - x.n * math.log(sigma)
            - x.sum_sq / (2.0 * sigma * sigma)
        )

    def log_likelihood_many(self, thetas, x: Dataset):
        sigma = thetas[:, 0]
        return (
            -(x.n / 2.0) * _normal.LOG2PI - x.n * np.log(sigma)
            - x.sum_sq / (2.0 * sigma**2)
        )

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return theta[0] * rng.standard_normal(size)

    def ts_admissible(self, values, slots) -> bool:
        return values[0] != 0.0

    def ts_log_likelihood(self, theta, ts) -> float:
        sigma = theta[0]
        z = ts.values[0]
        return (
            -0.5 * _normal.LOG2PI - math.log(sigma)
            - z * z / (2.0 * sigma * sigma)
        )

    def sample_posterior_ts(self, ts, rng):
        return np.array([normal_zero_mean_sigma_draw(float(ts.values[0]), rng)])

    def sample_posterior_ts_data(self, ts, x, rng):
        q = x.sum_sq + float(ts.values[0]) ** 2
        return np.array([float(_normal.sample_zero_mean_sd(x.n + 1, q, rng))])

    def sample_posterior_data(self, x, rng, size):
        return _normal.sample_zero_mean_sd(x.n, x.sum_sq, rng, size=size).reshape(
            size, 1
        )

    def log_marginal_ts(self, ts) -> float:
        z = float(ts.values[0])
        if z == 0.0:
            raise DomainError("degenerate training sample: z = 0")
        return -math.log(2.0 * abs(z))

    def log_marginal_ts_data(self, ts, x) -> float:
        z = float(ts.values[0])
        if z == 0.0:
            raise DomainError("degenerate training sample: z = 0")
        return _normal.log_marginal_zero_mean(x.n + 1, x.sum_sq + z * z)
