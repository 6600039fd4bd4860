"""Validation statistics: Gini, CoV, decile APCs, log-normal KS test.

One convention throughout: population (not sample) standard deviations, and
the plain mean-absolute-difference Gini without small-sample correction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

# Asymptotic two-sided Kolmogorov quantiles c(alpha); critical value is
# c(alpha)/sqrt(n). 1.358 at the 5% level.
KS_CRITICAL_TABLE = {
    0.10: 1.224,
    0.05: 1.358,
    0.025: 1.480,
    0.01: 1.628,
}

KS_MIN_N = 30  # below this the asymptotic critical value is unreliable


@dataclass(frozen=True)
class DistributionSummary:
    mean: float
    coefficient_of_variation: float
    gini: float
    decile_means: np.ndarray


@dataclass(frozen=True)
class LogNormalityResult:
    mu_hat: float
    sigma_hat: float
    ks_statistic: float
    critical_value: float
    reject: bool
    alpha: float


def _check_positive(values, what):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError(f"{what} must be nonempty")
    if np.any(values <= 0):
        raise ValueError(f"{what} must be strictly positive")
    return values


def gini(values):
    """Mean-absolute-difference Gini: sum_ij |x_i - x_j| / (2 n^2 mean).

    Computed via the sorted-order identity, which is algebraically equal to
    the double sum but O(n log n).
    """
    x = np.sort(_check_positive(values, "gini input"))
    n = x.size
    total = x.sum()
    ranks = np.arange(1, n + 1, dtype=float)
    return float((2.0 * np.sum(ranks * x) - (n + 1) * total) / (n * total))


def coefficient_of_variation(values):
    """Population standard deviation over mean."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("coefficient_of_variation input must be nonempty")
    m = x.mean()
    if m <= 0:
        raise ValueError("coefficient_of_variation needs a positive mean")
    return float(x.std() / m)


def decile_means(values, deciles):
    """Mean of values within each decile 1..10."""
    out = np.empty(10)
    for d in range(1, 11):
        out[d - 1] = values[deciles == d].mean()
    return out


def decile_apcs(incomes, solution, convention="ratio_of_sums"):
    """Average propensity to consume per income decile.

    'ratio_of_sums' (default) divides decile consumption by decile income;
    'mean_of_ratios' averages the individual APCs instead. Both are exposed
    because aggregate figures of this kind rarely state which they use.
    """
    y = incomes.incomes
    c = solution.consumption
    out = np.empty(10)
    for d in range(1, 11):
        sel = incomes.deciles == d
        if convention == "ratio_of_sums":
            out[d - 1] = c[sel].sum() / y[sel].sum()
        elif convention == "mean_of_ratios":
            out[d - 1] = (c[sel] / y[sel]).mean()
        else:
            raise ValueError(f"unknown decile APC convention {convention!r}")
    return out


def fit_lognormal_mle(values):
    """MLE of (mu, sigma) for a log-normal: moments of the log-values.

    sigma_hat is the population standard deviation; it is 0 for a constant
    sample (degenerate, rejected by the KS test downstream).
    """
    x = _check_positive(values, "lognormal fit input")
    if x.size < 2:
        raise ValueError("need at least 2 values to fit")
    logs = np.log(x)
    return float(logs.mean()), float(logs.std())


def lognormal_cdf(x, mu, sigma):
    """CDF of LogNormal(mu, sigma) at positive x."""
    return ndtr((np.log(x) - mu) / sigma)


def ks_lognormality(values, alpha=0.05):
    """Kolmogorov-Smirnov test of log-normality with MLE-fitted parameters.

    Uses the standard asymptotic critical value (1.358/sqrt(n) at 5%), not
    the Lilliefors correction, so the test is conservative under estimated
    parameters. Requires n >= 30.
    """
    x = _check_positive(values, "KS input")
    n = x.size
    if n < KS_MIN_N:
        raise ValueError(f"KS test needs n >= {KS_MIN_N}, got {n}")
    if alpha not in KS_CRITICAL_TABLE:
        raise ValueError(
            f"alpha must be one of {sorted(KS_CRITICAL_TABLE)}, got {alpha}"
        )
    mu_hat, sigma_hat = fit_lognormal_mle(x)
    if sigma_hat == 0.0:
        raise ValueError("degenerate sample: sigma_hat is zero")
    xs = np.sort(x)
    f_hat = lognormal_cdf(xs, mu_hat, sigma_hat)
    i = np.arange(1, n + 1, dtype=float)
    d_plus = np.max(i / n - f_hat)
    d_minus = np.max(f_hat - (i - 1) / n)
    ks_stat = float(max(d_plus, d_minus))
    critical = KS_CRITICAL_TABLE[alpha] / np.sqrt(n)
    return LogNormalityResult(
        mu_hat=mu_hat,
        sigma_hat=sigma_hat,
        ks_statistic=ks_stat,
        critical_value=float(critical),
        reject=bool(ks_stat > critical),
        alpha=alpha,
    )


def aggregate_saving_rate(incomes, solution):
    """One minus aggregate consumption over aggregate income."""
    y = incomes.incomes
    c = solution.consumption
    if y.shape != c.shape:
        raise ValueError("incomes and solution disagree on n")
    return float(1.0 - c.sum() / y.sum())


def summarize_distribution(values, deciles):
    """DistributionSummary of one positive-valued cross-section."""
    x = _check_positive(values, "distribution input")
    return DistributionSummary(
        mean=float(x.mean()),
        coefficient_of_variation=coefficient_of_variation(x),
        gini=gini(x),
        decile_means=decile_means(x, deciles),
    )


def lognormal_theoretical_gini(sigma):
    """Gini of a LogNormal(mu, sigma): 2*Phi(sigma/sqrt(2)) - 1."""
    return float(2.0 * ndtr(sigma / np.sqrt(2.0)) - 1.0)
