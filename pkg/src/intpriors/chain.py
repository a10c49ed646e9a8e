"""Cross-model Markov chain over the originals and their compact copies.

One cycle visits all 2q models in a random permutation whose first element
differs from the previous cycle's last, carrying the state through
between-model steps: into an original, simulate a training sample from the
current model's likelihood and then a posterior draw; into a copy, draw
directly from its proper truncated prior (the source is ignored).  Each
cycle therefore yields one draw per model, and a draw is independent of the
previous draw of the same model whenever a copy draw happened strictly
between them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compactify import CompactCopy
from .families import ModelFamily
from .types import (
    DomainError,
    EstimationError,
    ParamPoint,
    ResamplingCapError,
    TrainingSample,
)

BURN_IN_CYCLES = 2  # stationary from cycle 2 on: the 2-step transition is start-free
MAX_TS_ATTEMPTS = 1000


@dataclass
class ModelSet:
    """The q original models, their q compact copies, and prior probabilities."""

    originals: list[ModelFamily]
    copies: list[CompactCopy]
    prior_probs: np.ndarray

    def __post_init__(self):
        if len(self.originals) < 1:
            raise DomainError("need at least one original model")
        if len(self.copies) != len(self.originals):
            raise DomainError("need exactly one copy per original")
        for orig, copy in zip(self.originals, self.copies):
            if copy.base is not orig:
                raise DomainError("copies must restrict their own original")
            if not (copy.proper_prior and copy.ts_size == 0):
                raise DomainError("copies must be proper with ts_size 0")
        self.prior_probs = np.asarray(self.prior_probs, dtype=float)
        if self.prior_probs.shape != (2 * self.q,):
            raise DomainError("prior_probs must have length 2q")
        if abs(self.prior_probs.sum() - 1.0) > 1e-12:
            raise DomainError("prior_probs must sum to 1")

    @classmethod
    def with_uniform_priors(cls, originals, copies) -> "ModelSet":
        q = len(originals)
        probs = np.concatenate([np.full(q, 1.0 / q), np.zeros(q)])
        return cls(originals, copies, probs)

    @property
    def q(self) -> int:
        return len(self.originals)

    @property
    def families(self) -> list[ModelFamily]:
        return list(self.originals) + list(self.copies)

    def labels(self) -> list[str]:
        return [f"M{i + 1}" for i in range(2 * self.q)]


@dataclass
class ChainDraws:
    """Recorded output of one chain run: per-model draw arrays plus the
    training samples and independence bookkeeping needed downstream."""

    model_set: ModelSet
    cycles: int
    draws: list[np.ndarray]               # (T, d_j) per model
    ts_values: list[np.ndarray | None]    # (T, m_j) per original, None for copies
    ts_groups: list[np.ndarray | None]    # slot labels for grouped families
    indep: list[np.ndarray]               # (T,) bool
    copy_visited: list[np.ndarray]        # (T,) bool, literal bookkeeping
    burn_in: int = BURN_IN_CYCLES
    meta: dict = field(default_factory=dict)

    def training_sample(self, model_index: int, t: int) -> TrainingSample:
        groups = self.ts_groups[model_index]
        return TrainingSample(
            self.ts_values[model_index][t],
            target_model=model_index,
            groups=None if groups is None else groups[t],
        )


def sample_update_cycle(m: int, forbidden_first: int | None, rng) -> np.ndarray:
    """Uniform permutation of 0..m-1 whose first element avoids a value.

    Rejection sampling is exact and needs fewer than two attempts on
    average.  ``forbidden_first`` is None for the first cycle.
    """
    if m < 2:
        raise DomainError("need at least two models to cycle over")
    if forbidden_first is not None and not 0 <= forbidden_first < m:
        raise DomainError("forbidden_first out of range")
    while True:
        perm = rng.permutation(m)
        if forbidden_first is None or perm[0] != forbidden_first:
            return perm


def draw_training_sample(target: ModelFamily, source: ModelFamily, src_theta,
                         rng, max_attempts: int = MAX_TS_ATTEMPTS
                         ) -> TrainingSample:
    """Simulate a target-shaped training sample from the source likelihood,
    resampling until admissible (degenerate samples have probability zero
    for continuous models)."""
    slots = target.new_ts_slots(rng)
    for _ in range(max_attempts):
        values = source.sample_ts_values(src_theta, slots, rng)
        if target.ts_admissible(values, slots):
            return TrainingSample(
                values, groups=slots if target.grouped_ts else None
            )
    raise ResamplingCapError(
        f"no admissible training sample for {target.name} "
        f"from {source.name} in {max_attempts} attempts"
    )


def between_model_step(source, target_index: int, model_set: ModelSet, rng,
                       max_attempts: int = MAX_TS_ATTEMPTS):
    """One between-model transition.

    ``source`` is (model_index, theta).  Returns (theta_target, ts) where
    ts is None when the target is a copy (copies need no training sample
    and ignore the source entirely).
    """
    src_index, src_theta = source
    if isinstance(src_theta, ParamPoint):
        src_theta = src_theta.values
    src_theta = np.asarray(src_theta, dtype=float)
    if src_index == target_index:
        raise DomainError("source and target must differ")
    families = model_set.families
    if not families[src_index].in_support(src_theta):
        raise DomainError("source point outside its model's support")
    if target_index >= model_set.q:
        copy = model_set.copies[target_index - model_set.q]
        return copy.sample_prior(rng), None
    target = model_set.originals[target_index]
    ts = draw_training_sample(target, families[src_index], src_theta, rng,
                              max_attempts)
    return target.sample_posterior_ts(ts, rng), ts


def run_integral_chains(model_set: ModelSet, cycles: int, rng,
                        initial=None) -> ChainDraws:
    """Simulate ``cycles`` update cycles and record one draw per model each.

    Parameters
    ----------
    model_set : ModelSet
        Originals plus compact copies.
    cycles : int
        Number of full update cycles (>= 2).
    rng : numpy.random.Generator
        The only source of randomness; a fixed generator state makes the
        output bit-identical.
    initial : (model_index, theta), optional
        Starting state.  Defaults to the prior median of the first copy,
        which is always admissible and forgotten after burn-in.
    """
    if cycles < 2:
        raise DomainError("cycles must be >= 2")
    q = model_set.q
    m = 2 * q
    families = model_set.families
    is_copy = [j >= q for j in range(m)]

    if initial is None:
        cur_index, cur_theta = q, model_set.copies[0].prior_median()
    else:
        cur_index, cur_theta = initial
        if isinstance(cur_theta, ParamPoint):
            cur_theta = cur_theta.values
        cur_theta = np.asarray(cur_theta, dtype=float)
        if not families[cur_index].in_support(cur_theta):
            raise DomainError("initial point outside its model's support")

    draws = [np.empty((cycles, fam.param_dim)) for fam in families]
    ts_values = []
    ts_groups = []
    for j, fam in enumerate(families):
        if is_copy[j]:
            ts_values.append(None)
            ts_groups.append(None)
        else:
            dtype = int if fam.obs_kind == "count" else float
            ts_values.append(np.empty((cycles, fam.ts_size), dtype=dtype))
            ts_groups.append(
                np.empty((cycles, fam.ts_size), dtype=int)
                if fam.grouped_ts
                else None
            )
    indep = [np.empty(cycles, dtype=bool) for _ in range(m)]
    copy_visited = [np.empty(cycles, dtype=bool) for _ in range(m)]

    prev_gstep = np.full(m, -1, dtype=np.int64)
    last_copy_gstep = -1
    gstep = 0
    forbidden = None  # first cycle is unconstrained

    for t in range(cycles):
        order = sample_update_cycle(m, forbidden, rng)
        for j in order:
            visited = last_copy_gstep > prev_gstep[j]
            copy_visited[j][t] = visited
            if j >= q:
                cur_theta = families[j].sample_prior(rng)
                indep[j][t] = True
                last_copy_gstep = gstep
            else:
                target = families[j]
                ts = draw_training_sample(target, families[cur_index],
                                          cur_theta, rng)
                cur_theta = target.sample_posterior_ts(ts, rng)
                ts_values[j][t] = ts.values
                if ts.groups is not None:
                    ts_groups[j][t] = ts.groups
                indep[j][t] = visited
            draws[j][t] = cur_theta
            prev_gstep[j] = gstep
            cur_index = j
            gstep += 1
        forbidden = int(order[-1])

    return ChainDraws(
        model_set=model_set,
        cycles=cycles,
        draws=draws,
        ts_values=ts_values,
        ts_groups=ts_groups,
        indep=indep,
        copy_visited=copy_visited,
    )


def extract_iid_subsequence(chain: ChainDraws, model_index: int,
                            start: int | None = None):
    """Retain the maximal draw subsequence with a copy visit between
    consecutive retained draws.

    Returns (thetas, ts_list): a (n_kept, d) array and the paired training
    samples (empty list for copy models).  The retained training samples are
    iid from the stationary training-sample law.
    """
    if start is None:
        start = chain.burn_in
    flags = chain.indep[model_index]
    T = chain.cycles
    if start >= T:
        raise EstimationError("no draws after the requested start cycle")
    kept = [start]  # vacuous condition for the first retained draw
    pending = False
    for t in range(start + 1, T):
        pending = pending or bool(flags[t])
        if pending:
            kept.append(t)
            pending = False
    thetas = chain.draws[model_index][kept]
    if chain.ts_values[model_index] is None:
        return thetas, []
    ts_list = [chain.training_sample(model_index, t) for t in kept]
    return thetas, ts_list
