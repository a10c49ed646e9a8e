"""Compact copies: credible-box construction and truncated proper priors.

A copy shares its base model's likelihood but restricts the parameters to a
box, so the reference prior becomes proper and directly sampleable.  Every
prior in the catalog factors across coordinates into one of four kernels,
each with a closed-form truncated inverse CDF.
"""

from __future__ import annotations

import math

import numpy as np

from .families import ModelFamily, PriorKernel
from .types import DomainError

MIN_QUANTILE_DRAWS = 1000


def _nb_g(x: float) -> float:
    """Antiderivative helper for u^{-1}(1-u)^{-1/2}: G(x) = 2 atanh(sqrt(1-x))."""
    return 2.0 * math.atanh(math.sqrt(1.0 - x))


class _Flat:
    @staticmethod
    def log_mass(lo, hi):
        return math.log(hi - lo)

    @staticmethod
    def ppf(lo, hi, u):
        return lo + u * (hi - lo)

    @staticmethod
    def cdf(lo, hi, x):
        return (x - lo) / (hi - lo)


class _Reciprocal:
    @staticmethod
    def log_mass(lo, hi):
        return math.log(math.log(hi / lo))

    @staticmethod
    def ppf(lo, hi, u):
        return lo * math.exp(u * math.log(hi / lo))

    @staticmethod
    def cdf(lo, hi, x):
        return math.log(x / lo) / math.log(hi / lo)


class _SqrtReciprocal:
    @staticmethod
    def log_mass(lo, hi):
        return math.log(2.0 * (math.sqrt(hi) - math.sqrt(lo)))

    @staticmethod
    def ppf(lo, hi, u):
        root = math.sqrt(lo) + u * (math.sqrt(hi) - math.sqrt(lo))
        return root * root

    @staticmethod
    def cdf(lo, hi, x):
        return (math.sqrt(x) - math.sqrt(lo)) / (math.sqrt(hi) - math.sqrt(lo))


class _NBJeffreys:
    @staticmethod
    def log_mass(lo, hi):
        return math.log(_nb_g(lo) - _nb_g(hi))

    @staticmethod
    def ppf(lo, hi, u):
        c = _nb_g(lo) - u * (_nb_g(lo) - _nb_g(hi))
        w = math.tanh(0.5 * c)
        return 1.0 - w * w

    @staticmethod
    def cdf(lo, hi, x):
        return (_nb_g(lo) - _nb_g(x)) / (_nb_g(lo) - _nb_g(hi))


_KERNELS = {
    PriorKernel.FLAT: _Flat,
    PriorKernel.RECIPROCAL: _Reciprocal,
    PriorKernel.SQRT_RECIPROCAL: _SqrtReciprocal,
    PriorKernel.NB_JEFFREYS: _NBJeffreys,
}


def invert_cdf_by_bisection(cdf, lo: float, hi: float, u: float,
                            tol: float = 1e-10) -> float:
    """Generic inverse of a monotone CDF on [lo, hi] to absolute tolerance."""
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if cdf(mid) < u:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def posterior_quantile_box(model: ModelFamily, x, alpha: float,
                           n_draws: int = 100_000, rng=None) -> np.ndarray:
    """Per-coordinate (alpha/2, 1 - alpha/2) posterior quantile box.

    Quantiles are empirical (numpy's default linear interpolation) over
    ``n_draws`` Monte Carlo draws from the full-data reference posterior.
    Returns a (param_dim, 2) array of [lo, hi] rows.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    if n_draws < MIN_QUANTILE_DRAWS:
        raise DomainError(f"n_draws must be >= {MIN_QUANTILE_DRAWS}")
    draws = model.sample_posterior_data(x, rng, size=n_draws)
    lo = np.quantile(draws, alpha / 2.0, axis=0)
    hi = np.quantile(draws, 1.0 - alpha / 2.0, axis=0)
    return np.column_stack([lo, hi])


class CompactCopy(ModelFamily):
    """A base model restricted to a box, with a proper truncated prior.

    The copy needs no training sample (ts_size = 0) and its prior is
    sampled exactly through per-coordinate inverse CDFs.
    """

    ts_size = 0
    proper_prior = True

    def __init__(self, base: ModelFamily, box, alpha: float | None = None):
        box = np.asarray(box, dtype=float)
        if box.shape != (base.param_dim, 2):
            raise DomainError("box must be (param_dim, 2)")
        if np.any(box[:, 0] >= box[:, 1]):
            raise DomainError("box must have lo < hi in every coordinate")
        for (lo, hi), (slo, shi) in zip(box, base.coord_supports()):
            if lo < slo or hi > shi:
                raise DomainError("box must lie inside the base support")
        self.base = base
        self.box = box
        self.alpha = alpha
        self.name = f"{base.name}_copy"
        self.param_dim = base.param_dim
        self.obs_kind = base.obs_kind
        self.grouped_ts = base.grouped_ts
        self._kernels = [_KERNELS[k] for k in base.prior_coord_kernels()]
        self.log_norm = sum(
            k.log_mass(lo, hi) for k, (lo, hi) in zip(self._kernels, box)
        )
        if not math.isfinite(self.log_norm):
            raise DomainError("truncated prior mass is zero or not finite")

    # ---- proper prior ----

    def sample_prior(self, rng) -> np.ndarray:
        return np.array(
            [
                k.ppf(lo, hi, rng.random())
                for k, (lo, hi) in zip(self._kernels, self.box)
            ]
        )

    def prior_coord_ppf(self, coord: int, u: float) -> float:
        lo, hi = self.box[coord]
        return self._kernels[coord].ppf(lo, hi, u)

    def prior_coord_cdf(self, coord: int, value: float) -> float:
        lo, hi = self.box[coord]
        if value <= lo:
            return 0.0
        if value >= hi:
            return 1.0
        return self._kernels[coord].cdf(lo, hi, value)

    def prior_median(self) -> np.ndarray:
        return np.array(
            [self.prior_coord_ppf(i, 0.5) for i in range(self.param_dim)]
        )

    # ---- family surface (delegates to the base likelihood) ----

    def in_support(self, theta) -> bool:
        return bool(
            np.all(theta >= self.box[:, 0]) and np.all(theta <= self.box[:, 1])
        )

    def coord_supports(self):
        return [tuple(row) for row in self.box]

    def prior_coord_kernels(self):
        return self.base.prior_coord_kernels()

    def log_prior_kernel(self, theta) -> float:
        if not self.in_support(theta):
            return -math.inf
        return self.base.log_prior_kernel(theta) - self.log_norm

    def sample_data(self, theta, n, rng):
        return self.base.sample_data(theta, n, rng)

    def log_likelihood(self, theta, x) -> float:
        return self.base.log_likelihood(theta, x)

    def log_likelihood_many(self, thetas, x):
        return self.base.log_likelihood_many(thetas, x)

    def sample_ts_values(self, theta, slots, rng):
        return self.base.sample_ts_values(theta, slots, rng)

    def ts_log_likelihood(self, theta, ts) -> float:
        return self.base.ts_log_likelihood(theta, ts)

    def log_marginal_ts(self, ts) -> float:
        # prior predictive of an empty sample under a proper prior
        if len(ts) != 0:
            raise DomainError("compact copies take empty training samples")
        return 0.0


def make_compact_copy(model: ModelFamily, box, alpha: float | None = None
                      ) -> CompactCopy:
    """Build the compactified copy of a model restricted to ``box``."""
    return CompactCopy(model, box, alpha=alpha)
