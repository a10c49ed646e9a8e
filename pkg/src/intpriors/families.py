"""Model family abstraction: likelihood, improper reference prior,
training-sample contract, conjugate samplers, and closed-form marginals.

Every family works on plain 1-d numpy parameter vectors internally; the
:class:`~intpriors.types.ParamPoint` wrapper is only used at API edges.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .types import Dataset, DomainError, TrainingSample


class PriorKernel(enum.Enum):
    """Per-coordinate shape of the (improper) reference prior.

    All priors in the catalog factor across coordinates into these kernels,
    which is what makes truncated copies directly sampleable.
    """

    FLAT = "flat"                       # 1
    RECIPROCAL = "reciprocal"           # 1/u on (0, inf) or a subinterval
    SQRT_RECIPROCAL = "sqrt_reciprocal" # u^{-1/2} on (0, inf)
    NB_JEFFREYS = "nb_jeffreys"         # u^{-1}(1-u)^{-1/2} on (0, 1)


class ModelFamily:
    """Base class describing the capability set every model implements.

    Subclasses fill in the likelihood, the prior kernel, training-sample
    generation, and the conjugate posterior machinery.  The normalized
    posterior densities given z and given (z, x) are derived here once from
    ``ts_log_likelihood``, ``log_likelihood``, ``log_prior_kernel`` and the
    closed-form marginals, so they stay consistent by construction.
    """

    name: str = "model"
    param_dim: int = 1
    ts_size: int = 1
    proper_prior: bool = False
    obs_kind: str = "real"   # "real" | "count"
    grouped_ts: bool = False

    # ---- support / prior ----

    def in_support(self, theta: np.ndarray) -> bool:
        raise NotImplementedError

    def coord_supports(self) -> list[tuple[float, float]]:
        """Open interval of admissible values per coordinate."""
        raise NotImplementedError

    def prior_coord_kernels(self) -> list[PriorKernel]:
        raise NotImplementedError

    def log_prior_kernel(self, theta: np.ndarray) -> float:
        """Log of the improper prior kernel (multiplicative constant fixed at 1)."""
        raise NotImplementedError

    # ---- data ----

    def sample_data(self, theta: np.ndarray, n: int, rng) -> np.ndarray:
        """n iid observations from the model at theta."""
        raise NotImplementedError

    def log_likelihood(self, theta: np.ndarray, x: Dataset) -> float:
        raise NotImplementedError

    def log_likelihood_many(self, thetas: np.ndarray, x: Dataset) -> np.ndarray:
        """Vectorized log likelihood over rows of a (T, param_dim) array."""
        return np.array([self.log_likelihood(t, x) for t in thetas])

    # ---- training samples ----

    def new_ts_slots(self, rng) -> np.ndarray:
        """Slot labels for a fresh training sample; -1 marks unlabelled slots."""
        slots = getattr(self, "_slots_cache", None)
        if slots is None:
            slots = np.full(self.ts_size, -1)
            self._slots_cache = slots
        return slots

    def sample_ts_values(self, theta, slots, rng) -> np.ndarray:
        """Fill a training-sample slot structure with draws from this model.

        ``slots`` is the *target* model's labelling; its length fixes the
        sample size.  A grouped source draws each unlabelled (-1) slot from a
        uniformly chosen group, which is how a generic observation from the
        model is defined.
        """
        raise NotImplementedError

    def ts_admissible(self, values: np.ndarray, slots) -> bool:
        return True

    def ts_log_likelihood(self, theta: np.ndarray, ts: TrainingSample) -> float:
        """Log density of the training sample under this model at theta."""
        raise NotImplementedError

    # ---- conjugate machinery ----

    def sample_posterior_ts(self, ts: TrainingSample, rng) -> np.ndarray:
        raise NotImplementedError

    def sample_posterior_ts_data(self, ts, x: Dataset, rng) -> np.ndarray:
        raise NotImplementedError

    def sample_posterior_data(self, x: Dataset, rng, size: int) -> np.ndarray:
        """(size, param_dim) draws from the full-data reference posterior."""
        raise NotImplementedError

    def log_marginal_ts(self, ts: TrainingSample) -> float:
        """log m^N(z), finite for every admissible minimal training sample."""
        raise NotImplementedError

    def log_marginal_ts_data(self, ts, x: Dataset) -> float:
        """log m^N(z, x) treating z and x as one pooled sample."""
        raise NotImplementedError

    def mle(self, x: Dataset) -> np.ndarray:
        raise NotImplementedError(f"{self.name} has no closed-form MLE")

    # ---- derived quantities (implemented once) ----

    def marginal_ts(self, ts) -> float:
        value = math.exp(self.log_marginal_ts(ts))
        if not (value > 0.0 and math.isfinite(value)):
            raise DomainError(f"m^N(z) not positive and finite for {self.name}")
        return value

    def marginal_ts_data(self, ts, x) -> float:
        value = math.exp(self.log_marginal_ts_data(ts, x))
        if not (value > 0.0 and math.isfinite(value)):
            raise DomainError(f"m^N(z, x) not positive and finite for {self.name}")
        return value

    def log_posterior_ts(self, theta, ts) -> float:
        """Normalized log density of pi^N(theta | z)."""
        if not self.in_support(theta):
            return -math.inf
        return (
            self.ts_log_likelihood(theta, ts)
            + self.log_prior_kernel(theta)
            - self.log_marginal_ts(ts)
        )

    def log_posterior_ts_data(self, theta, ts, x) -> float:
        """Normalized log density of pi^N(theta | z, x)."""
        if not self.in_support(theta):
            return -math.inf
        return (
            self.ts_log_likelihood(theta, ts)
            + self.log_likelihood(theta, x)
            + self.log_prior_kernel(theta)
            - self.log_marginal_ts_data(ts, x)
        )

    def log_posterior_ts_many(self, theta, ts_list) -> np.ndarray:
        """log pi^N(theta | z_t) across a list of training samples."""
        return np.array([self.log_posterior_ts(theta, ts) for ts in ts_list])

    def log_posterior_ts_data_many(self, theta, ts_list, x) -> np.ndarray:
        return np.array(
            [self.log_posterior_ts_data(theta, ts, x) for ts in ts_list]
        )


def sample_data(model: ModelFamily, theta, n: int, rng) -> np.ndarray:
    """Draw n iid observations, validating the parameter point first."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if n < 1:
        raise DomainError("n must be >= 1")
    if not model.in_support(theta):
        raise DomainError(f"theta outside the support of {model.name}")
    return model.sample_data(theta, n, rng)


def log_likelihood(model: ModelFamily, theta, x: Dataset) -> float:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if not model.in_support(theta):
        raise DomainError(f"theta outside the support of {model.name}")
    return model.log_likelihood(theta, x)


def marginal_ts(model: ModelFamily, ts: TrainingSample) -> float:
    return model.marginal_ts(ts)


def marginal_ts_data(model: ModelFamily, ts: TrainingSample, x: Dataset) -> float:
    return model.marginal_ts_data(ts, x)
