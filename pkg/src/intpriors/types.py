"""Core value types shared by every module: parameter points, training
samples, datasets, and the exception hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

REL_TOL_STATS = 1e-10  # consistency tolerance between raw data and summaries


class IntPriorsError(Exception):
    """Base class for all library errors."""


class DomainError(IntPriorsError):
    """Input outside the mathematical domain of an operation."""


class DegenerateSampleError(DomainError):
    """Training sample violates an admissibility constraint (s_z = 0, z = 0, ...)."""


class ResamplingCapError(IntPriorsError):
    """Admissible training sample not found within the attempt cap."""


class EstimationError(IntPriorsError):
    """An estimator could not produce a finite value."""


@dataclass(frozen=True)
class ParamPoint:
    """A point in one model's parameter space."""

    values: np.ndarray
    model_index: int = -1

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class TrainingSample:
    """An imaginary training sample targeted at one model.

    ``groups`` labels each observation with a group index for models whose
    training samples are structured (the one-way layout); it is None for
    plain iid samples.
    """

    values: np.ndarray
    target_model: int = -1
    groups: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values))
        if self.groups is not None:
            object.__setattr__(self, "groups", np.asarray(self.groups, dtype=int))
            if self.groups.shape != self.values.shape:
                raise DomainError("groups must align with values")

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class GroupSummary:
    """Per-group sufficient statistics (n_i, mean_i, sd_i) for grouped data.

    ``ddof`` records the divisor convention of the stated sds
    (1 means sample standard deviation with divisor n_i - 1).
    """

    sizes: np.ndarray
    means: np.ndarray
    sds: np.ndarray
    ddof: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", np.asarray(self.sizes, dtype=int))
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "sds", np.asarray(self.sds, dtype=float))
        if not (self.sizes.shape == self.means.shape == self.sds.shape):
            raise DomainError("group stats must have equal lengths")
        if np.any(self.sizes < 1):
            raise DomainError("group sizes must be >= 1")
        if np.any(self.sds < 0):
            raise DomainError("group sds must be nonnegative")

    @property
    def k(self) -> int:
        return int(self.sizes.shape[0])

    @property
    def n_total(self) -> int:
        return int(self.sizes.sum())

    @cached_property
    def within_ss(self) -> float:
        """Total within-group sum of squared deviations."""
        return float(((self.sizes - self.ddof) * self.sds**2).sum())

    @cached_property
    def grand_mean(self) -> float:
        return float((self.sizes * self.means).sum() / self.sizes.sum())

    @cached_property
    def total_ss(self) -> float:
        """Sum of squared deviations about the grand mean."""
        return self.within_ss + float(
            (self.sizes * (self.means - self.grand_mean) ** 2).sum()
        )


class Dataset:
    """Observed data plus lazily computed sufficient statistics.

    Either raw ``observations`` (optionally with per-observation ``groups``)
    or a :class:`GroupSummary` must be supplied.  When both are present they
    are validated against each other to relative tolerance 1e-10.
    """

    def __init__(self, observations=None, groups=None, group_summary=None):
        if observations is None and group_summary is None:
            raise DomainError("dataset needs observations or a group summary")
        self.observations = (
            None if observations is None else np.asarray(observations)
        )
        if self.observations is not None and self.observations.size == 0:
            raise DomainError("empty dataset")
        self.groups = None if groups is None else np.asarray(groups, dtype=int)
        self._group_summary = group_summary
        if group_summary is not None and self.observations is not None:
            self._check_consistency()

    @classmethod
    def from_observations(cls, values) -> "Dataset":
        return cls(observations=values)

    @classmethod
    def from_grouped(cls, values, groups) -> "Dataset":
        return cls(observations=values, groups=groups)

    @classmethod
    def from_group_stats(cls, sizes, means, sds, ddof: int = 1) -> "Dataset":
        return cls(group_summary=GroupSummary(sizes, means, sds, ddof=ddof))

    def _check_consistency(self):
        gs = self._group_summary
        for i in range(gs.k):
            vals = self.observations[self.groups == i]
            if vals.size != gs.sizes[i]:
                raise DomainError("group sizes inconsistent with observations")
            mean = vals.mean()
            if abs(mean - gs.means[i]) > REL_TOL_STATS * max(1.0, abs(mean)):
                raise DomainError("group means inconsistent with observations")
            sd = vals.std(ddof=gs.ddof)
            if abs(sd - gs.sds[i]) > REL_TOL_STATS * max(1.0, sd):
                raise DomainError("group sds inconsistent with observations")

    # ---- flat-sample statistics ----

    @cached_property
    def n(self) -> int:
        if self.observations is not None:
            return int(self.observations.shape[0])
        return self._group_summary.n_total

    @cached_property
    def total(self) -> float:
        return float(self.observations.sum())

    @cached_property
    def mean(self) -> float:
        if self.observations is not None:
            return float(self.observations.mean())
        return self._group_summary.grand_mean

    @cached_property
    def ssd(self) -> float:
        """Sum of squared deviations about the mean."""
        if self.observations is not None:
            return float(((self.observations - self.mean) ** 2).sum())
        return self._group_summary.total_ss

    @cached_property
    def sum_sq(self) -> float:
        if self.observations is not None:
            return float((self.observations**2).sum())
        gs = self._group_summary
        return gs.total_ss + gs.n_total * gs.grand_mean**2

    @cached_property
    def sum_log_factorial(self) -> float:
        """Sum of log(x_j!) for count data."""
        from scipy.special import gammaln

        return float(gammaln(self.observations + 1.0).sum())

    @cached_property
    def group_summary(self) -> GroupSummary:
        if self._group_summary is not None:
            return self._group_summary
        if self.groups is None:
            raise DomainError("dataset has no group structure")
        k = int(self.groups.max()) + 1
        sizes = np.array([(self.groups == i).sum() for i in range(k)])
        means = np.array(
            [self.observations[self.groups == i].mean() for i in range(k)]
        )
        sds = np.array(
            [
                self.observations[self.groups == i].std(ddof=1)
                if sizes[i] > 1
                else 0.0
                for i in range(k)
            ]
        )
        return GroupSummary(sizes, means, sds, ddof=1)
