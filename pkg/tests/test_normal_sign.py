import math

import numpy as np
import pytest
from scipy.stats import kstest

import oracles
from intpriors.datasets import normal_sign_dataset
from intpriors.types import Dataset, DomainError, TrainingSample
from intpriors.zoo.normal_sign import (
    SignedMeanNormal,
    ZeroMeanNormal,
    mu_negative_from_uniform,
    mu_positive_from_uniform,
    normal_mu_draw,
    normal_sigma_draw,
    normal_zero_mean_sigma_draw,
)

NEG = SignedMeanNormal("negative")
ZERO = ZeroMeanNormal()
POS = SignedMeanNormal("positive")


def _ts(z1, z2):
    return TrainingSample(np.array([z1, z2]))


def test_log_likelihood_standard_normal_at_zero():
    x = Dataset.from_observations([0.0])
    assert ZERO.log_likelihood(np.array([1.0]), x) == pytest.approx(
        -0.5 * math.log(2 * math.pi), abs=1e-14
    )


def test_log_likelihood_iid_factorization():
    x = Dataset.from_observations([-0.4, 1.2, -2.1])
    theta = np.array([-0.7, 1.3])
    total = sum(
        NEG.log_likelihood(theta, Dataset.from_observations([v]))
        for v in [-0.4, 1.2, -2.1]
    )
    assert NEG.log_likelihood(theta, x) == pytest.approx(total, abs=1e-12)


def test_mu_boundary_values():
    # z_bar = 0, u = 1: cot(pi/2) = 0 so mu = 0 exactly
    assert mu_negative_from_uniform(0.0, 1.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    # v = 0 lands on the 0 boundary of the positive branch
    assert mu_positive_from_uniform(0.5, 1.0, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_mu_draw_signs(rng):
    for _ in range(2000):
        assert normal_mu_draw(0.3, 1.1, "negative", rng) < 0.0
        assert normal_mu_draw(-0.5, 0.8, "positive", rng) > 0.0


def _trunc_cauchy_cdf(zbar, s_z, sign):
    """Analytic CDF of the Cauchy(zbar, s_z/sqrt 2) kernel truncated by sign."""
    gamma = s_z / math.sqrt(2.0)

    def full(v):
        return 0.5 + np.arctan((v - zbar) / gamma) / math.pi

    f0 = full(0.0)
    if sign < 0:
        return lambda v: np.clip(full(np.minimum(v, 0.0)) / f0, 0.0, 1.0)
    return lambda v: np.clip(
        (full(np.maximum(v, 0.0)) - f0) / (1.0 - f0), 0.0, 1.0
    )


@pytest.mark.parametrize("sign,name", [(-1, "negative"), (+1, "positive")])
def test_mu_draw_ks_vs_truncated_cauchy(sign, name, rng):
    zbar, s_z = 2.0, math.sqrt(2.0)
    draws = np.array(
        [normal_mu_draw(zbar, s_z, name, rng) for _ in range(50_000)]
    )
    pval = kstest(draws, _trunc_cauchy_cdf(zbar, s_z, sign)).pvalue
    assert pval > 0.001


def test_sigma_draw_plug_in(stub_rng_factory):
    # xi = 1/2 gives sigma^2 = s_z^2 + 2 (z_bar - mu)^2
    sigma = normal_sigma_draw(1.0, 0.9, -0.3, stub_rng_factory(exponentials=[0.5]))
    assert sigma**2 == pytest.approx(0.9**2 + 2 * 1.3**2)
    # xi_2 = 1/2 gives sigma_2 = |z|
    sigma2 = normal_zero_mean_sigma_draw(-1.7, stub_rng_factory(gammas=[0.5]))
    assert sigma2 == pytest.approx(1.7)


def test_zero_mean_sigma_ks_vs_quadrature(rng):
    z = 1.0
    draws = np.array(
        [normal_zero_mean_sigma_draw(z, rng) for _ in range(50_000)]
    )
    kern = lambda s: s**-2 * math.exp(-z * z / (2 * s * s))
    assert oracles.ks_pvalue_vs_kernel(draws, kern, 0.0, np.inf) > 0.001


@pytest.mark.parametrize("model,sign", [(NEG, -1), (POS, +1)])
def test_marginal_ts_vs_quadrature(model, sign, rng):
    for _ in range(100):
        z = rng.standard_normal(2) * 1.4 + rng.uniform(-1, 1)
        ts = TrainingSample(z)
        quad = oracles.normal_mean_sd_marginal_quad(z, mu_sign=sign)
        assert model.marginal_ts(ts) == pytest.approx(quad, rel=1e-5)


def test_zero_mean_marginal_vs_quadrature(rng):
    for _ in range(100):
        z = float(rng.standard_normal() * 2 + 0.1)
        if z == 0.0:
            continue
        ts = TrainingSample(np.array([z]))
        # m^N(z) = int sigma^{-1} N(z | 0, sigma^2) dsigma = 1 / (2 |z|)
        quad = oracles.zero_mean_marginal_quad([z])
        assert ZERO.marginal_ts(ts) == pytest.approx(quad, rel=1e-6)
        assert ZERO.marginal_ts(ts) == pytest.approx(1.0 / (2 * abs(z)), rel=1e-12)


def test_marginal_ts_data_vs_quadrature(rng):
    x = normal_sign_dataset()
    for _ in range(10):
        z = rng.standard_normal(2) * 2.0
        ts = TrainingSample(z)
        pooled = np.concatenate([x.observations, z])
        quad = oracles.normal_mean_sd_marginal_quad(pooled, mu_sign=-1)
        assert NEG.marginal_ts_data(ts, x) == pytest.approx(quad, rel=1e-5)
    z = float(rng.standard_normal())
    ts = TrainingSample(np.array([z]))
    pooled = np.concatenate([x.observations, [z]])
    quad = oracles.zero_mean_marginal_quad(pooled)
    assert ZERO.marginal_ts_data(ts, x) == pytest.approx(quad, rel=1e-6)


def test_posterior_ts_joint_density_normalized():
    """exp(log_posterior_ts) integrates to 1 over (mu, sigma)."""
    from scipy import integrate

    ts = _ts(0.4, -1.0)

    def inner(mu):
        f = lambda s: math.exp(NEG.log_posterior_ts(np.array([mu, s]), ts))
        v, _ = integrate.quad(f, 0, np.inf)
        return v

    total, _ = integrate.quad(inner, -np.inf, 0.0, limit=200)
    assert total == pytest.approx(1.0, rel=1e-6)


def test_full_data_posterior_mu_ks(rng):
    """mu-marginal of the full-data posterior against its quadrature CDF."""
    x = normal_sign_dataset()
    draws = NEG.sample_posterior_data(x, rng, size=30_000)
    n, xb, ss = x.n, x.mean, x.ssd

    def mu_kernel(mu):
        return (ss + n * (xb - mu) ** 2) ** (-n / 2.0)

    assert oracles.ks_pvalue_vs_kernel(draws[:, 0], mu_kernel, -np.inf, 0.0) > 0.001
    # conditional sigma given mu: B/(2 sigma^2) ~ Gamma(n/2) (PIT check)
    from scipy.special import gammaincc

    b = ss + n * (xb - draws[:, 0]) ** 2
    pit = gammaincc(n / 2.0, b / (2.0 * draws[:, 1] ** 2))
    assert kstest(pit, "uniform").pvalue > 0.001


def test_pit_pooled_over_random_ts(rng):
    for model, sign in ((NEG, -1), (POS, +1)):
        pits = np.empty(400)
        for i in range(400):
            z = rng.standard_normal(2) * 1.5 + 0.3
            ts = TrainingSample(z)
            mu, sigma = model.sample_posterior_ts(ts, rng)
            zbar = z.mean()
            s2 = ((z - zbar) ** 2).sum()
            kern = lambda m: 1.0 / (s2 + 2.0 * (zbar - m) ** 2)
            lo, hi = (-np.inf, 0.0) if sign < 0 else (0.0, np.inf)
            lo = max(lo, zbar - 60 * math.sqrt(s2) - 10)
            hi = min(hi, zbar + 60 * math.sqrt(s2) + 10)
            pits[i] = oracles.quad_kernel(kern, lo, mu) / oracles.quad_kernel(
                kern, lo, hi
            )
        assert kstest(pits, "uniform").pvalue > 0.001


def test_degenerate_training_samples():
    with pytest.raises(DomainError):
        NEG.marginal_ts(_ts(1.3, 1.3))
    with pytest.raises(DomainError):
        ZERO.marginal_ts(TrainingSample(np.array([0.0])))
    with pytest.raises(DomainError):
        normal_mu_draw(0.0, 0.0, "negative", None)
    with pytest.raises(DomainError):
        normal_zero_mean_sigma_draw(0.0, None)


def test_support_constraints_in_sampling(rng):
    ts = _ts(0.8, -0.2)
    for _ in range(3000):
        mu, sigma = NEG.sample_posterior_ts(ts, rng)
        assert mu < 0.0 and sigma > 0.0
        mu, sigma = POS.sample_posterior_ts(ts, rng)
        assert mu > 0.0 and sigma > 0.0
