import math

import numpy as np
import pytest
from scipy.stats import kstest

import oracles
from intpriors.datasets import example1_dataset
from intpriors.types import Dataset, DomainError, TrainingSample
from intpriors.zoo.exponential import (
    RestrictedExponential,
    exp_above_posterior_icdf,
    exp_below_posterior_icdf,
    exp_restricted_posterior_draw,
)

BELOW = RestrictedExponential("below-1")
ABOVE = RestrictedExponential("above-1")


def test_sample_data_law_of_large_numbers(rng):
    n = 200_000
    draws = BELOW.sample_data(np.array([0.5]), n, rng)
    se = 0.5 / math.sqrt(n)
    assert abs(draws.mean() - 0.5) < 3 * se


def test_log_likelihood_matches_sum_of_terms():
    x = Dataset.from_observations([0.3, 1.1, 0.7])
    theta = np.array([0.6])
    per_obs = sum(-math.log(0.6) - v / 0.6 for v in [0.3, 1.1, 0.7])
    assert BELOW.log_likelihood(theta, x) == pytest.approx(per_obs, abs=1e-12)


def test_posterior_icdf_closed_forms():
    # u = e^{-z} makes log u = -z, so theta_1 = 1/2
    z = 0.8
    assert exp_below_posterior_icdf(z, math.exp(-z)) == pytest.approx(0.5)
    # u -> 0+ drives theta_2 to the boundary 1 from above
    assert exp_above_posterior_icdf(1.0, 1e-12) == pytest.approx(1.0, abs=1e-9)


def test_posterior_icdf_matches_numeric_inversion():
    # median of pi^N(theta | z = 1) on (1, inf), inverted numerically
    from intpriors.compactify import invert_cdf_by_bisection

    kern = lambda t: t**-2 * math.exp(-1.0 / t)
    total = oracles.quad_kernel(kern, 1.0, np.inf)
    cdf = lambda t: oracles.quad_kernel(kern, 1.0, t) / total
    oracle_value = invert_cdf_by_bisection(cdf, 1.0, 100.0, 0.5, tol=1e-9)
    assert exp_above_posterior_icdf(1.0, 0.5) == pytest.approx(
        oracle_value, abs=1e-6
    )
    assert oracle_value == pytest.approx(2.631, abs=2e-3)


@pytest.mark.parametrize("model,branch", [(BELOW, "below-1"), (ABOVE, "above-1")])
def test_posterior_draws_ks_vs_quadrature(model, branch, rng):
    z = 0.7
    draws = np.array(
        [exp_restricted_posterior_draw(z, branch, rng) for _ in range(30_000)]
    )
    lo, hi = model.coord_supports()[0]
    pval = oracles.ks_pvalue_vs_kernel(
        draws, lambda t: t**-2 * math.exp(-z / t), lo, hi
    )
    assert pval > 0.001


@pytest.mark.parametrize("model", [BELOW, ABOVE])
def test_marginal_ts_vs_quadrature(model, rng):
    lo, hi = model.coord_supports()[0]
    hi = min(hi, np.inf)
    for z in rng.exponential(0.8, size=100) + 1e-3:
        ts = TrainingSample(np.array([z]))
        exact = model.marginal_ts(ts)
        quad = oracles.exp_marginal_quad(z, lo, hi)
        assert exact == pytest.approx(quad, rel=1e-6)


@pytest.mark.parametrize("model", [BELOW, ABOVE])
def test_marginal_ts_data_vs_quadrature(model, rng):
    x = example1_dataset()
    lo, hi = model.coord_supports()[0]
    for z in rng.exponential(0.8, size=20) + 1e-3:
        ts = TrainingSample(np.array([z]))
        exact = model.marginal_ts_data(ts, x)
        quad = oracles.exp_marginal_data_quad(x.observations, z, lo, hi)
        assert exact == pytest.approx(quad, rel=1e-6)


def test_posterior_predictive_identity():
    # m(z, x) / m(z) equals the predictive of x given z: check via quadrature
    x = Dataset.from_observations([0.4])
    ts = TrainingSample(np.array([0.9]))
    ratio = BELOW.marginal_ts_data(ts, x) / BELOW.marginal_ts(ts)
    kern = lambda t: (1.0 / t) * math.exp(-0.4 / t) * t**-2 * math.exp(-0.9 / t)
    quad = oracles.quad_kernel(kern, 0.0, 1.0)
    quad /= oracles.exp_marginal_quad(0.9, 0.0, 1.0)
    assert ratio == pytest.approx(quad, rel=1e-8)


def test_posterior_ts_density_normalized():
    ts = TrainingSample(np.array([0.7]))
    kern = lambda t: math.exp(BELOW.log_posterior_ts(np.array([t]), ts))
    assert oracles.quad_kernel(kern, 0.0, 1.0) == pytest.approx(1.0, rel=1e-8)


def test_full_data_posterior_ks(rng):
    x = example1_dataset()
    draws = BELOW.sample_posterior_data(x, rng, size=30_000)[:, 0]
    n, s = x.n, x.total
    kern = lambda t: t ** -(n + 1) * math.exp(-s / t)
    assert oracles.ks_pvalue_vs_kernel(draws, kern, 0.0, 1.0) > 0.001
    draws2 = ABOVE.sample_posterior_data(x, rng, size=30_000)[:, 0]
    assert oracles.ks_pvalue_vs_kernel(draws2, kern, 1.0, 10.0) > 0.001


def test_posterior_ts_data_ks(rng):
    x = example1_dataset()
    ts = TrainingSample(np.array([0.5]))
    draws = np.array(
        [ABOVE.sample_posterior_ts_data(ts, x, rng)[0] for _ in range(20_000)]
    )
    n, s = x.n + 1, x.total + 0.5
    kern = lambda t: t ** -(n + 1) * math.exp(-s / t)
    assert oracles.ks_pvalue_vs_kernel(draws, kern, 1.0, 10.0) > 0.001


@pytest.mark.parametrize("model", [BELOW, ABOVE])
def test_pit_pooled_over_random_ts(model, rng):
    """Posterior draws across 1000 random z, checked via the probability
    integral transform against numerically integrated CDFs."""
    lo, hi = model.coord_supports()[0]
    hi = min(hi, 200.0)
    zs = rng.exponential(0.8, size=1000) + 1e-3
    pits = np.empty(len(zs))
    for i, z in enumerate(zs):
        ts = TrainingSample(np.array([z]))
        theta = model.sample_posterior_ts(ts, rng)[0]
        kern = lambda t: t**-2 * math.exp(-z / t)
        pits[i] = oracles.quad_kernel(kern, lo, theta) / oracles.quad_kernel(
            kern, lo, hi
        )
    assert kstest(pits, "uniform").pvalue > 0.001


def test_domain_errors():
    with pytest.raises(DomainError):
        BELOW.marginal_ts(TrainingSample(np.array([-0.1])))
    with pytest.raises(DomainError):
        exp_restricted_posterior_draw(0.0, "below-1", None)
    with pytest.raises(DomainError):
        RestrictedExponential("sideways")
