"""One-way layout: k normal groups, common mean against separate means.

Under the single-mean model the parameters are (mu, sigma); under the
group-means model they are (mu_1, ..., mu_k, sigma).  Both take the 1/sigma
reference prior.  Training samples follow the one-extra-observation scheme:

  * toward the group-means model: one draw per group plus a second draw for
    a uniformly chosen group j, so the doubled group identifies sigma;
  * toward the single-mean model: two draws, each from an independently and
    uniformly chosen group.

Given such a z the posteriors are sampled exactly:

    xi ~ Gamma(1/2, 1),  sigma = |z_a - z_b| / (2 sqrt(xi)),
    mu ~ N(z_bar, sigma^2 / 2)            (single mean)
    mu_i ~ N(x_bar_i, sigma^2 / n_i)      (group means)

where (z_a, z_b) are the two observations sharing a group.
"""

from __future__ import annotations

import math

import numpy as np

from ..families import ModelFamily, PriorKernel
from ..types import Dataset, DomainError, GroupSummary, TrainingSample
from . import _normal

SQRT2 = math.sqrt(2.0)


def anova_training_sample(theta, direction: str, k: int, rng) -> TrainingSample:
    """Generate an imaginary training sample for the one-way layout.

    ``direction`` is "to-M2" (target: group means; k+1 observations, one
    group doubled) or "to-M1" (target: single mean; 2 observations).  The
    source parameters may come from either model family or its compact copy;
    a length-2 theta is read as (mu, sigma) and a length-(k+1) theta as
    (mu_1..mu_k, sigma).
    """
    theta = np.asarray(theta, dtype=float)
    if k < 2:
        raise DomainError("k must be >= 2")
    sigma = theta[-1]
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    single_mean = theta.shape[0] == 2

    if direction == "to-M2":
        j = int(rng.integers(k))
        groups = np.append(np.arange(k), j)
        if single_mean:
            values = theta[0] + sigma * rng.standard_normal(k + 1)
        else:
            values = theta[groups] + sigma * rng.standard_normal(k + 1)
        return TrainingSample(values, groups=groups)
    if direction == "to-M1":
        if single_mean:
            values = theta[0] + sigma * rng.standard_normal(2)
        else:
            picks = rng.integers(k, size=2)  # independent, j1 = j2 allowed
            values = theta[picks] + sigma * rng.standard_normal(2)
        return TrainingSample(values)
    raise DomainError(f"unknown direction {direction!r}")


def anova_posterior_draw(ts: TrainingSample, which: str, rng) -> np.ndarray:
    """Exact posterior draw given a training sample, per model."""
    if which == "M1":
        z1, z2 = ts.values
        if z1 == z2:
            raise DomainError("degenerate training sample: z_1 = z_2")
        xi = rng.gamma(0.5, 1.0)
        sigma = abs(z1 - z2) / (2.0 * math.sqrt(xi))
        mu = 0.5 * (z1 + z2) + sigma / SQRT2 * rng.standard_normal()
        return np.array([mu, sigma])
    if which == "M2":
        values, groups = ts.values, ts.groups
        if groups is None:
            raise DomainError("group-means training sample needs group labels")
        k = int(groups.max()) + 1
        sums = np.zeros(k)
        counts = np.zeros(k)
        np.add.at(sums, groups, values)
        np.add.at(counts, groups, 1.0)
        j = int(np.argmax(counts))
        pair = values[groups == j]
        if pair[0] == pair[1]:
            raise DomainError("degenerate training sample: doubled group tied")
        xi = rng.gamma(0.5, 1.0)
        sigma = abs(pair[0] - pair[1]) / (2.0 * math.sqrt(xi))
        mus = sums / counts + sigma * rng.standard_normal(k) / np.sqrt(counts)
        return np.append(mus, sigma)
    raise DomainError(f"unknown model {which!r}")


def _ts_group_stats(ts: TrainingSample):
    """Counts, sums, and the doubled-group gap of a grouped training sample."""
    k = int(ts.groups.max()) + 1
    sums = np.zeros(k)
    counts = np.zeros(k)
    np.add.at(sums, ts.groups, ts.values)
    np.add.at(counts, ts.groups, 1.0)
    j = int(np.argmax(counts))
    pair = ts.values[ts.groups == j]
    return counts, sums, j, float(pair[0] - pair[1])


class AnovaSingleMean(ModelFamily):
    """All k groups share one mean: parameters (mu, sigma)."""

    param_dim = 2
    ts_size = 2
    name = "anova_single_mean"

    def __init__(self, k: int):
        if k < 2:
            raise DomainError("k must be >= 2")
        self.k = k

    def in_support(self, theta) -> bool:
        return theta[1] > 0.0

    def coord_supports(self):
        return [(-math.inf, math.inf), (0.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.FLAT, PriorKernel.RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -math.log(theta[1])

    def sample_data(self, theta, n, rng):
        return theta[0] + theta[1] * rng.standard_normal(n)

    def log_likelihood(self, theta, x: Dataset) -> float:
        gs = x.group_summary
        mu, sigma = theta
        return float(
            _normal.log_kernel_mean_sd(
                mu, sigma, gs.n_total, gs.grand_mean, gs.total_ss
            )
            + math.log(sigma)
        )

    def log_likelihood_many(self, thetas, x: Dataset):
        gs = x.group_summary
        mu, sigma = thetas[:, 0], thetas[:, 1]
        return _normal.log_kernel_mean_sd(
            mu, sigma, gs.n_total, gs.grand_mean, gs.total_ss
        ) + np.log(sigma)

    def sample_ts_values(self, theta, slots, rng):
        size = self.ts_size if slots is None else len(slots)
        return theta[0] + theta[1] * rng.standard_normal(size)

    def ts_admissible(self, values, slots) -> bool:
        return values[0] != values[1]

    def ts_log_likelihood(self, theta, ts) -> float:
        mu, sigma = theta
        z1, z2 = ts.values
        return (
            -_normal.LOG2PI - 2.0 * math.log(sigma)
            - ((z1 - mu) ** 2 + (z2 - mu) ** 2) / (2.0 * sigma * sigma)
        )

    def sample_posterior_ts(self, ts, rng):
        return anova_posterior_draw(ts, "M1", rng)

    def _pooled(self, ts, x):
        gs = x.group_summary
        z1, z2 = ts.values
        zbar = 0.5 * (z1 + z2)
        return _normal.pooled_mean_ss(
            [
                (gs.n_total, gs.grand_mean, gs.total_ss),
                (2, zbar, 0.5 * (z1 - z2) ** 2),
            ]
        )

    def sample_posterior_ts_data(self, ts, x, rng):
        m, mean, ss = self._pooled(ts, x)
        mu, sigma = _normal.sample_mean_sd(m, mean, ss, rng)
        return np.array([mu, sigma])

    def sample_posterior_data(self, x, rng, size):
        gs = x.group_summary
        mu, sigma = _normal.sample_mean_sd(
            gs.n_total, gs.grand_mean, gs.total_ss, rng, size=size
        )
        return np.column_stack([mu, sigma])

    def log_marginal_ts(self, ts) -> float:
        z1, z2 = ts.values
        if z1 == z2:
            raise DomainError("degenerate training sample: z_1 = z_2")
        return -math.log(2.0 * abs(z1 - z2))

    def log_marginal_ts_data(self, ts, x) -> float:
        z1, z2 = ts.values
        if z1 == z2:
            raise DomainError("degenerate training sample: z_1 = z_2")
        m, mean, ss = self._pooled(ts, x)
        return _normal.log_marginal_free_mean(m, ss)

    def log_posterior_ts_many(self, theta, ts_list):
        mu, sigma = theta
        if sigma <= 0.0:
            return np.full(len(ts_list), -math.inf)
        zs = np.array([ts.values for ts in ts_list])
        gap = np.abs(zs[:, 0] - zs[:, 1])
        dev = (zs[:, 0] - mu) ** 2 + (zs[:, 1] - mu) ** 2
        return (
            -_normal.LOG2PI - 3.0 * math.log(sigma)
            - dev / (2.0 * sigma * sigma) + np.log(2.0 * gap)
        )

    def log_posterior_ts_data_many(self, theta, ts_list, x):
        return np.array(
            [self.log_posterior_ts_data(theta, ts, x) for ts in ts_list]
        )


class AnovaGroupMeans(ModelFamily):
    """Each group has its own mean: parameters (mu_1..mu_k, sigma)."""

    grouped_ts = True
    name = "anova_group_means"

    def __init__(self, k: int):
        if k < 2:
            raise DomainError("k must be >= 2")
        self.k = k
        self.param_dim = k + 1
        self.ts_size = k + 1

    def in_support(self, theta) -> bool:
        return theta[self.k] > 0.0

    def coord_supports(self):
        return [(-math.inf, math.inf)] * self.k + [(0.0, math.inf)]

    def prior_coord_kernels(self):
        return [PriorKernel.FLAT] * self.k + [PriorKernel.RECIPROCAL]

    def log_prior_kernel(self, theta) -> float:
        return -math.log(theta[self.k])

    def sample_data(self, theta, n, rng):
        picks = rng.integers(self.k, size=n)
        return theta[picks] + theta[self.k] * rng.standard_normal(n)

    def _data_dev(self, theta, gs: GroupSummary):
        return (gs.sizes * (gs.means - theta[: self.k]) ** 2).sum()

    def log_likelihood(self, theta, x: Dataset) -> float:
        gs = x.group_summary
        sigma = theta[self.k]
        return float(
            -(gs.n_total / 2.0) * _normal.LOG2PI
            - gs.n_total * math.log(sigma)
            - (gs.within_ss + self._data_dev(theta, gs)) / (2.0 * sigma * sigma)
        )

    def log_likelihood_many(self, thetas, x: Dataset):
        gs = x.group_summary
        sigma = thetas[:, self.k]
        dev = (
            gs.sizes[None, :] * (thetas[:, : self.k] - gs.means[None, :]) ** 2
        ).sum(axis=1)
        return (
            -(gs.n_total / 2.0) * _normal.LOG2PI
            - gs.n_total * np.log(sigma)
            - (gs.within_ss + dev) / (2.0 * sigma**2)
        )

    def new_ts_slots(self, rng):
        j = int(rng.integers(self.k))
        return np.append(np.arange(self.k), j)

    def sample_ts_values(self, theta, slots, rng):
        sigma = theta[self.k]
        n = len(slots)
        if slots[0] < 0:
            # unlabelled target slots: each observation from a uniform group
            picks = rng.integers(self.k, size=n)
        else:
            picks = slots
        return theta[picks] + sigma * rng.standard_normal(n)

    def ts_admissible(self, values, slots) -> bool:
        doubled = slots[-1]
        pair = values[slots == doubled]
        return pair[0] != pair[1]

    def ts_log_likelihood(self, theta, ts) -> float:
        sigma = theta[self.k]
        dev = ((ts.values - theta[ts.groups]) ** 2).sum()
        m = len(ts)
        return (
            -(m / 2.0) * _normal.LOG2PI - m * math.log(sigma)
            - dev / (2.0 * sigma * sigma)
        )

    def sample_posterior_ts(self, ts, rng):
        return anova_posterior_draw(ts, "M2", rng)

    def _pooled_groups(self, ts, x):
        """Per-group pooled (sizes, means) and pooled within-group SS."""
        gs = x.group_summary
        counts, sums, j, gap = _ts_group_stats(ts)
        n_pool = gs.sizes + counts
        mean_pool = (gs.sizes * gs.means + sums) / n_pool
        ss = gs.within_ss + 0.5 * gap * gap
        ss += (gs.sizes * (gs.means - mean_pool) ** 2).sum()
        zmeans = sums / counts
        ss += (counts * (zmeans - mean_pool) ** 2).sum()
        return n_pool, mean_pool, ss

    def sample_posterior_ts_data(self, ts, x, rng):
        n_pool, mean_pool, ss = self._pooled_groups(ts, x)
        n_tot = n_pool.sum()
        xi = rng.gamma((n_tot - self.k) / 2.0, 1.0)
        sigma = math.sqrt(ss / (2.0 * xi))
        mus = mean_pool + sigma * rng.standard_normal(self.k) / np.sqrt(n_pool)
        return np.append(mus, sigma)

    def sample_posterior_data(self, x, rng, size):
        gs = x.group_summary
        xi = rng.gamma((gs.n_total - self.k) / 2.0, 1.0, size=size)
        sigma = np.sqrt(gs.within_ss / (2.0 * xi))
        mus = gs.means[None, :] + sigma[:, None] * rng.standard_normal(
            (size, self.k)
        ) / np.sqrt(gs.sizes)[None, :]
        return np.column_stack([mus, sigma])

    def log_marginal_ts(self, ts) -> float:
        _, _, _, gap = _ts_group_stats(ts)
        if gap == 0.0:
            raise DomainError("degenerate training sample: doubled group tied")
        return -math.log(2.0 * abs(gap))

    def log_marginal_ts_data(self, ts, x) -> float:
        _, _, _, gap = _ts_group_stats(ts)
        if gap == 0.0:
            raise DomainError("degenerate training sample: doubled group tied")
        n_pool, _, ss = self._pooled_groups(ts, x)
        n_tot = n_pool.sum()
        a = (n_tot - self.k) / 2.0
        from scipy.special import gammaln

        return (
            -math.log(2.0) - 0.5 * np.log(n_pool).sum() + gammaln(a)
            - a * math.log(math.pi) - a * math.log(ss)
        )

    def log_posterior_ts_many(self, theta, ts_list):
        sigma = theta[self.k]
        if sigma <= 0.0:
            return np.full(len(ts_list), -math.inf)
        m = self.k + 1
        out = np.empty(len(ts_list))
        for i, ts in enumerate(ts_list):
            dev = ((ts.values - theta[ts.groups]) ** 2).sum()
            _, _, _, gap = _ts_group_stats(ts)
            out[i] = (
                -(m / 2.0) * _normal.LOG2PI - (m + 1.0) * math.log(sigma)
                - dev / (2.0 * sigma * sigma) + math.log(2.0 * abs(gap))
            )
        return out
