"""Catalog of the case-study model families."""

from .anova import (
    AnovaGroupMeans,
    AnovaSingleMean,
    anova_posterior_draw,
    anova_training_sample,
)
from .counts import NegativeBinomialModel, PoissonModel, count_posterior_draw
from .exponential import RestrictedExponential, exp_restricted_posterior_draw
from .normal_sign import (
    SignedMeanNormal,
    ZeroMeanNormal,
    normal_mu_draw,
    normal_sigma_draw,
    normal_zero_mean_sigma_draw,
)

__all__ = [
    "AnovaGroupMeans",
    "AnovaSingleMean",
    "NegativeBinomialModel",
    "PoissonModel",
    "RestrictedExponential",
    "SignedMeanNormal",
    "ZeroMeanNormal",
    "anova_posterior_draw",
    "anova_training_sample",
    "count_posterior_draw",
    "exp_restricted_posterior_draw",
    "normal_mu_draw",
    "normal_sigma_draw",
    "normal_zero_mean_sigma_draw",
    "restricted_exponential_pair",
    "normal_mean_sign_triple",
    "anova_pair",
    "count_family",
]


def restricted_exponential_pair():
    """The exponential mean test: theta in (0,1) vs theta in (1,inf)."""
    return [RestrictedExponential("below-1"), RestrictedExponential("above-1")]


def normal_mean_sign_triple():
    """The normal mean-sign test: mu < 0, mu = 0, mu > 0."""
    return [
        SignedMeanNormal("negative"),
        ZeroMeanNormal(),
        SignedMeanNormal("positive"),
    ]


def anova_pair(k: int):
    """The one-way layout test: common mean vs separate group means."""
    return [AnovaSingleMean(k), AnovaGroupMeans(k)]


def count_family(q: int = 15):
    """Poisson plus negative binomials r = 2..q."""
    return [PoissonModel()] + [NegativeBinomialModel(r) for r in range(2, q + 1)]
