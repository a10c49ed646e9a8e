"""Bayesian model selection with integral priors.

Integral priors are the stationary marginals of a Markov chain that hops
across the models under comparison plus a compactified copy of each, built
from imaginary-training-sample posteriors.  The chain makes the priors
proper and directly simulable; Bayes factors follow either from a direct
Monte Carlo likelihood average or from a completion Metropolis-Hastings
sampler combined with a plug-in evidence estimate.
"""

from .chain import (
    BURN_IN_CYCLES,
    ChainDraws,
    ModelSet,
    between_model_step,
    extract_iid_subsequence,
    run_integral_chains,
    sample_update_cycle,
)
from .compactify import CompactCopy, make_compact_copy, posterior_quantile_box
from .estimators import (
    CompletionResult,
    CompletionState,
    akaike_weights,
    chib_evidence,
    chib_log_evidence,
    estimate_bf_mc,
    estimate_log_bf_mc,
    integral_posterior_density,
    integral_prior_density,
    log_bf_matrix,
    posterior_model_probs,
    run_completion_mh,
)
from .experiments import (
    ExperimentConfig,
    build_model_set,
    build_preset,
    load_config,
    run_experiment,
    simulate_study,
)
from .families import (
    ModelFamily,
    PriorKernel,
    log_likelihood,
    marginal_ts,
    marginal_ts_data,
    sample_data,
)
from .report import EstimateReport
from .types import (
    Dataset,
    DegenerateSampleError,
    DomainError,
    EstimationError,
    GroupSummary,
    IntPriorsError,
    ParamPoint,
    ResamplingCapError,
    TrainingSample,
)

__version__ = "0.1.0"

__all__ = [
    "BURN_IN_CYCLES",
    "ChainDraws",
    "CompactCopy",
    "CompletionResult",
    "CompletionState",
    "Dataset",
    "DegenerateSampleError",
    "DomainError",
    "EstimateReport",
    "EstimationError",
    "ExperimentConfig",
    "GroupSummary",
    "IntPriorsError",
    "ModelFamily",
    "ModelSet",
    "ParamPoint",
    "PriorKernel",
    "ResamplingCapError",
    "TrainingSample",
    "akaike_weights",
    "between_model_step",
    "build_model_set",
    "build_preset",
    "chib_evidence",
    "chib_log_evidence",
    "estimate_bf_mc",
    "estimate_log_bf_mc",
    "extract_iid_subsequence",
    "integral_posterior_density",
    "integral_prior_density",
    "load_config",
    "log_bf_matrix",
    "log_likelihood",
    "make_compact_copy",
    "marginal_ts",
    "marginal_ts_data",
    "posterior_model_probs",
    "posterior_quantile_box",
    "run_completion_mh",
    "run_experiment",
    "run_integral_chains",
    "sample_data",
    "sample_update_cycle",
    "simulate_study",
]
