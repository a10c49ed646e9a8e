"""Estimators on top of the chain output: Monte Carlo Bayes factors,
posterior model probabilities, Rao-Blackwellized density estimates, the
completion Metropolis-Hastings sampler, plug-in evidence estimates, and
Akaike weights.

All likelihood accumulation happens on the log scale via log-sum-exp; count
data of size a few hundred underflows otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .families import ModelFamily
from .types import (
    Dataset,
    DomainError,
    EstimationError,
    TrainingSample,
)


def log_mean_likelihood(model: ModelFamily, thetas: np.ndarray, x: Dataset
                        ) -> float:
    """log of the average likelihood f(x | theta_t) over draws."""
    if len(thetas) == 0:
        raise EstimationError("no draws to average over")
    logs = model.log_likelihood_many(np.asarray(thetas, dtype=float), x)
    return float(logsumexp(logs) - math.log(len(logs)))


def estimate_log_bf_mc(model_num, draws_num, model_den, draws_den, x: Dataset
                       ) -> float:
    """log of the Monte Carlo Bayes factor of ``model_num`` over ``model_den``.

    Computed as the difference of log-average likelihoods over the two
    models' integral-prior draws; with equal draw counts this is exactly the
    ratio-of-sums estimator.
    """
    num = log_mean_likelihood(model_num, draws_num, x)
    den = log_mean_likelihood(model_den, draws_den, x)
    if not (math.isfinite(num) or math.isfinite(den)):
        raise EstimationError(
            "both likelihood sums vanished; draws carry no mass at the data"
        )
    return num - den


def estimate_bf_mc(draws_i, draws_j, x: Dataset, model_i, model_j) -> float:
    """Monte Carlo estimate of B_ji(x) = sum_t f_j / sum_t f_i."""
    return math.exp(estimate_log_bf_mc(model_j, draws_j, model_i, draws_i, x))


def log_bf_matrix(models, draws_list, x: Dataset) -> np.ndarray:
    """Antisymmetric matrix of log B_ij from shared per-model sums."""
    levels = np.array(
        [log_mean_likelihood(m, d, x) for m, d in zip(models, draws_list)]
    )
    return levels[:, None] - levels[None, :]


def posterior_model_probs(log_bf_vs_ref, prior_probs) -> np.ndarray:
    """P(M_i | x) proportional to prior_i * B_{i,ref}, in log space.

    Models with prior probability zero (the compact copies) get posterior
    zero; the result is invariant to the choice of reference model because
    a reference change shifts every log Bayes factor by a constant.
    """
    log_bf = np.asarray(log_bf_vs_ref, dtype=float)
    priors = np.asarray(prior_probs, dtype=float)
    if log_bf.shape != priors.shape:
        raise DomainError("log_bf_vs_ref and prior_probs must align")
    if np.any(priors < 0) or priors.sum() <= 0:
        raise DomainError("prior probabilities must be nonnegative, not all zero")
    active = priors > 0
    logs = np.full(priors.shape, -math.inf)
    logs[active] = np.log(priors[active]) + log_bf[active]
    out = np.zeros(priors.shape)
    out[active] = np.exp(logs[active] - logsumexp(logs[active]))
    return out / out.sum()


# ---------------------------------------------------------------------------
# Rao-Blackwellized density estimates
# ---------------------------------------------------------------------------


def log_integral_prior_density(model, ts_list, theta) -> float:
    """log of (1/T) sum_t pi^N(theta | z_t): the mixture estimate of the
    integral prior density."""
    if len(ts_list) == 0:
        raise EstimationError("empty training-sample list")
    logs = model.log_posterior_ts_many(np.asarray(theta, dtype=float), ts_list)
    return float(logsumexp(logs) - math.log(len(logs)))


def integral_prior_density(ts_list, theta, model) -> float:
    return math.exp(log_integral_prior_density(model, ts_list, theta))


def log_integral_posterior_density(model, ts_list, theta, x: Dataset) -> float:
    """log of (1/T) sum_t pi^N(theta | z_t, x)."""
    if len(ts_list) == 0:
        raise EstimationError("empty training-sample list")
    logs = model.log_posterior_ts_data_many(
        np.asarray(theta, dtype=float), ts_list, x
    )
    return float(logsumexp(logs) - math.log(len(logs)))


def integral_posterior_density(ts_list, theta, x: Dataset, model) -> float:
    return math.exp(log_integral_posterior_density(model, ts_list, theta, x))


# ---------------------------------------------------------------------------
# Completion Metropolis-Hastings
# ---------------------------------------------------------------------------


@dataclass
class CompletionState:
    """Current (theta, z) of the completion sampler with cached marginals."""

    theta: np.ndarray
    ts: TrainingSample
    log_m_ts: float
    log_m_ts_data: float

    @classmethod
    def from_ts(cls, model, ts, x, rng) -> "CompletionState":
        theta = model.sample_posterior_ts_data(ts, x, rng)
        return cls(
            theta=theta,
            ts=ts,
            log_m_ts=model.log_marginal_ts(ts),
            log_m_ts_data=model.log_marginal_ts_data(ts, x),
        )

    def validate(self, model, x, tol: float = 1e-12):
        if abs(self.log_m_ts - model.log_marginal_ts(self.ts)) > tol:
            raise EstimationError("cached m^N(z) out of date")
        if abs(self.log_m_ts_data - model.log_marginal_ts_data(self.ts, x)) > tol:
            raise EstimationError("cached m^N(z, x) out of date")


@dataclass
class CompletionResult:
    """Full completion-MH chain plus acceptance diagnostics."""

    thetas: np.ndarray
    ts_list: list[TrainingSample]
    acceptance_rate: float
    stream_cycled: bool = False

    def __len__(self):
        return len(self.ts_list)


def run_completion_mh(model, x: Dataset, ts_stream, n_steps: int, rng,
                      init: CompletionState | None = None) -> CompletionResult:
    """Metropolis-Hastings targeting the completed integral posterior.

    Proposals take the next iid training sample z' from ``ts_stream`` and
    theta' from pi^N(. | z', x); the acceptance probability reduces to

        min(1, [m^N(z', x) / m^N(z')] * [m^N(z) / m^N(z, x)]).

    The stream is consumed in order; if it runs out it wraps around from a
    random offset, which preserves the marginal law of the proposals but is
    flagged in the result.  The chain (including the initial state) and the
    empirical acceptance rate are returned; burn-in is the caller's choice.
    """
    if len(ts_stream) == 0:
        raise EstimationError("empty training-sample stream")
    pos = 0
    if init is None:
        init = CompletionState.from_ts(model, ts_stream[0], x, rng)
        pos = 1
    state = init
    total = len(ts_stream)
    cycled = False
    thetas = np.empty((n_steps + 1, model.param_dim))
    ts_list: list[TrainingSample] = [state.ts]
    thetas[0] = state.theta
    accepted = 0
    for step in range(1, n_steps + 1):
        if pos >= total:
            pos = int(rng.integers(total))
            cycled = True
        ts_prop = ts_stream[pos]
        pos += 1
        log_m_ts = model.log_marginal_ts(ts_prop)
        log_m_ts_data = model.log_marginal_ts_data(ts_prop, x)
        log_ratio = (log_m_ts_data - log_m_ts) + (state.log_m_ts
                                                  - state.log_m_ts_data)
        if log_ratio >= 0.0 or math.log(rng.random()) < log_ratio:
            theta = model.sample_posterior_ts_data(ts_prop, x, rng)
            state = CompletionState(theta, ts_prop, log_m_ts, log_m_ts_data)
            accepted += 1
        thetas[step] = state.theta
        ts_list.append(state.ts)
    return CompletionResult(
        thetas=thetas,
        ts_list=ts_list,
        acceptance_rate=accepted / n_steps,
        stream_cycled=cycled,
    )


def completion_acceptance_log_ratio(state: CompletionState, log_m_ts_prop: float,
                                    log_m_ts_data_prop: float) -> float:
    """Log acceptance ratio of the completion sampler (exposed for tests)."""
    return (log_m_ts_data_prop - log_m_ts_prop) + (state.log_m_ts
                                                   - state.log_m_ts_data)


# ---------------------------------------------------------------------------
# Evidence and model weights
# ---------------------------------------------------------------------------


def chib_log_evidence(model, x: Dataset, theta_star, prior_ts_list,
                      posterior_ts_list) -> float:
    """log m(x) by the plug-in identity at theta*:

        m(x) = pi(theta*) f(x | theta*) / pi(theta* | x)

    with both densities replaced by their mixture estimates."""
    theta_star = np.asarray(theta_star, dtype=float)
    log_prior = log_integral_prior_density(model, prior_ts_list, theta_star)
    log_post = log_integral_posterior_density(
        model, posterior_ts_list, theta_star, x
    )
    if not (math.isfinite(log_prior) and math.isfinite(log_post)):
        raise EstimationError(
            "estimated density vanished at theta*; pick a higher-density point"
        )
    return log_prior + model.log_likelihood(theta_star, x) - log_post


def chib_evidence(model, x: Dataset, theta_star, prior_est, posterior_est
                  ) -> float:
    """Plug-in evidence from bound density estimators (callables theta -> density)."""
    theta_star = np.asarray(theta_star, dtype=float)
    prior_value = prior_est(theta_star)
    post_value = posterior_est(theta_star)
    if prior_value <= 0.0 or post_value <= 0.0:
        raise EstimationError(
            "estimated density vanished at theta*; pick a higher-density point"
        )
    return (
        prior_value * math.exp(model.log_likelihood(theta_star, x)) / post_value
    )


def akaike_weights(models, x: Dataset) -> np.ndarray:
    """Model weights proportional to exp(-AIC/2) at the closed-form MLEs."""
    if x.n == 0:
        raise DomainError("empty dataset")
    aic = np.array(
        [
            -2.0 * m.log_likelihood(m.mle(x), x) + 2.0 * m.param_dim
            for m in models
        ]
    )
    w = np.exp(-(aic - aic.min()) / 2.0)
    return w / w.sum()
