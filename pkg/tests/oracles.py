"""Independent numerical oracles used by the tests: quadrature marginals,
CDFs built by cumulative integration, and KS helpers.

Everything here integrates raw density kernels directly with scipy.quad;
none of it reuses the library's closed forms.
"""

import math

import numpy as np
from scipy import integrate
from scipy.stats import kstest

LOG2PI = math.log(2.0 * math.pi)


def quad_kernel(kernel, lo, hi, points=None):
    value, _ = integrate.quad(kernel, lo, hi, points=points, limit=200)
    return value


def cdf_from_kernel(kernel, lo, hi, grid_size=4000, spacing="auto"):
    """Normalized CDF of a 1-d density kernel on (lo, hi), via a cumulative
    trapezoid on a fine grid.  Semi-infinite supports must be cut off by the
    caller at a point carrying negligible mass.  Heavy-tailed kernels on wide
    positive ranges get a log-spaced grid."""
    if spacing == "auto":
        spacing = "log" if lo > 0 and hi / lo > 50 else "linear"
    if spacing == "log":
        xs = np.geomspace(lo, hi, grid_size)
    else:
        xs = np.linspace(lo, hi, grid_size)
    ys = np.array([kernel(v) for v in xs])
    cum = np.concatenate([[0.0], np.cumsum((ys[1:] + ys[:-1]) * np.diff(xs) / 2.0)])
    cum /= cum[-1]

    def cdf(v):
        return np.interp(v, xs, cum)

    return cdf


def ks_pvalue_vs_kernel(samples, kernel, lo, hi, grid_size=4000):
    """KS p-value of samples against the CDF of a density kernel on (lo, hi).

    Non-finite bounds are replaced by the padded sample range; finite bounds
    delimit the support and are kept.
    """
    samples = np.asarray(samples, dtype=float)
    pad = 0.05 * (samples.max() - samples.min() + 1e-12)
    if not math.isfinite(lo):
        lo = samples.min() - pad
    if not math.isfinite(hi):
        hi = samples.max() + pad
    eps = 1e-9 * (hi - lo)
    cdf = cdf_from_kernel(kernel, lo + eps, hi - eps, grid_size)
    return kstest(samples, cdf).pvalue


# ---- quadrature marginals for the zoo models (raw kernels only) ----


def exp_marginal_quad(z, lo, hi):
    """int theta^{-2} e^{-z/theta} dtheta over (lo, hi)."""
    return quad_kernel(lambda t: t**-2 * math.exp(-z / t), lo, hi)


def exp_marginal_data_quad(observations, z, lo, hi):
    obs = np.asarray(observations, dtype=float)
    c = obs.sum() + z
    m = len(obs) + 1

    def kern(t):
        return t ** -(m + 1) * math.exp(-c / t)

    return quad_kernel(kern, lo, hi)


def normal_mean_sd_marginal_quad(values, mu_sign=0):
    """int f(values | mu, sigma) / sigma dmu dsigma by nested quadrature.

    mu_sign restricts mu to a half line; 0 integrates over the whole line.
    Infinite mu limits are left to scipy's adaptive transformation; the
    mu-marginal has Cauchy-like tails, so any finite cutoff loses real mass.
    """
    vals = np.asarray(values, dtype=float)
    n = len(vals)

    def inner(mu):
        dev = ((vals - mu) ** 2).sum()

        def kern(s):
            return math.exp(
                -(n / 2.0) * LOG2PI - (n + 1.0) * math.log(s) - dev / (2 * s * s)
            )

        v, _ = integrate.quad(kern, 0.0, np.inf)
        return v

    if mu_sign < 0:
        lo, hi = -np.inf, 0.0
    elif mu_sign > 0:
        lo, hi = 0.0, np.inf
    else:
        lo, hi = -np.inf, np.inf
    v, _ = integrate.quad(inner, lo, hi, limit=200)
    return v


def zero_mean_marginal_quad(values):
    vals = np.asarray(values, dtype=float)
    n = len(vals)
    q = (vals**2).sum()

    def kern(s):
        return math.exp(
            -(n / 2.0) * LOG2PI - (n + 1.0) * math.log(s) - q / (2 * s * s)
        )

    return quad_kernel(kern, 0.0, np.inf)


def grouped_normal_marginal_quad(values, groups, k):
    """Nested quadrature of the k-group normal marginal (k = 2 only, so the
    integral stays 3-dimensional)."""
    assert k == 2
    vals = np.asarray(values, dtype=float)
    groups = np.asarray(groups)
    n = len(vals)
    spread = max(vals.std(), 1e-2) * 40
    lo = vals.min() - spread
    hi = vals.max() + spread

    def joint(mu1, mu2, s):
        mus = np.array([mu1, mu2])
        dev = ((vals - mus[groups]) ** 2).sum()
        return math.exp(
            -(n / 2.0) * LOG2PI - (n + 1.0) * math.log(s) - dev / (2 * s * s)
        )

    def inner_mu2(mu1, s):
        v, _ = integrate.quad(lambda m2: joint(mu1, m2, s), lo, hi)
        return v

    def inner_mu1(s):
        v, _ = integrate.quad(lambda m1: inner_mu2(m1, s), lo, hi)
        return v

    v, _ = integrate.quad(inner_mu1, 1e-6, np.inf, limit=200)
    return v


def poisson_marginal_quad(z):
    """int theta^{z - 1/2} e^{-theta} dtheta / z!"""
    kern = lambda t: t ** (z - 0.5) * math.exp(-t)
    v, _ = integrate.quad(kern, 0.0, np.inf)
    return v / math.factorial(z)


def nb_marginal_quad(z, r):
    """int C(z+r-2, z) theta^{r-2} (1-theta)^{z - 1/2} dtheta."""
    binom = math.comb(z + r - 2, z)
    kern = lambda t: t ** (r - 2.0) * (1.0 - t) ** (z - 0.5)
    v, _ = integrate.quad(kern, 0.0, 1.0)
    return binom * v
