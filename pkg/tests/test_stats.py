import numpy as np
import pytest
from scipy import stats as spstats

from conftest import make_graph, make_incomes
from expcascade.consumption import ConsumptionParams, solve_fixed_point
from expcascade.income import IncomeRegime, sample_incomes
from expcascade.network import generate_network
from expcascade.stats import (
    aggregate_saving_rate,
    coefficient_of_variation,
    decile_apcs,
    fit_lognormal_mle,
    gini,
    ks_lognormality,
    lognormal_cdf,
    lognormal_theoretical_gini,
    summarize_distribution,
)


def gini_double_sum(values):
    """Brute-force mean-absolute-difference Gini (the defining formula)."""
    x = np.asarray(values, dtype=float)
    n = x.size
    return float(np.abs(x[:, None] - x[None, :]).sum() / (2 * n * n * x.mean()))


class TestGini:
    def test_constant_vector_is_zero(self):
        assert gini([3.0, 3.0, 3.0]) == pytest.approx(0.0, abs=1e-15)
        assert gini([1.0, 1.0, 1.0, 1.0]) == pytest.approx(0.0, abs=1e-15)

    def test_two_point_hand_value(self):
        # |0.5-1.5|*2 / (2 * 4 * 1) = 0.25
        assert gini([0.5, 1.5]) == pytest.approx(0.25, abs=1e-15)

    def test_matches_double_sum(self, rng):
        for _ in range(25):
            x = rng.exponential(1.0, int(rng.integers(2, 60)))
            assert gini(x) == pytest.approx(gini_double_sum(x), abs=1e-12)

    def test_scale_invariance(self, rng):
        x = rng.exponential(1.0, 200)
        for omega in (0.3, 2.0, 1000.0):
            assert abs(gini(omega * x) - gini(x)) < 1e-12

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            gini([])
        with pytest.raises(ValueError):
            gini([1.0, 0.0])
        with pytest.raises(ValueError):
            gini([1.0, -2.0])


class TestCoefficientOfVariation:
    def test_constant_vector(self):
        assert coefficient_of_variation([2.0, 2.0, 2.0]) == 0.0

    def test_hand_value(self):
        # population sd of (1, 3) is 1, mean is 2
        assert coefficient_of_variation([1.0, 3.0]) == pytest.approx(0.5, abs=1e-15)

    def test_exponential_sample_near_one(self):
        rng = np.random.default_rng(4)
        x = -np.log1p(-rng.random(1000))
        assert 0.9 < coefficient_of_variation(x) < 1.1

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            coefficient_of_variation([])


class TestDecileApcs:
    def test_isolation_gives_constant_w(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 200, rng)
        g = generate_network(iv, 5, 1.0, rng)
        sol = solve_fixed_point(g, iv, ConsumptionParams(w=0.42, c=0.0))
        assert np.allclose(decile_apcs(iv, sol), 0.42, atol=1e-12, rtol=0)

    def test_toy_case_matches_hand_aggregation(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 20, rng)
        g = generate_network(iv, 3, 0.5, rng)
        sol = solve_fixed_point(g, iv, ConsumptionParams(w=0.5, c=0.4))
        ratio = decile_apcs(iv, sol, "ratio_of_sums")
        mean = decile_apcs(iv, sol, "mean_of_ratios")
        for d in range(1, 11):
            sel = iv.deciles == d
            assert ratio[d - 1] == pytest.approx(
                sol.consumption[sel].sum() / iv.incomes[sel].sum(), abs=1e-14
            )
            assert mean[d - 1] == pytest.approx(
                (sol.consumption[sel] / iv.incomes[sel]).mean(), abs=1e-14
            )

    def test_rejects_unknown_convention(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 20, rng)
        g = generate_network(iv, 3, 0.5, rng)
        sol = solve_fixed_point(g, iv, ConsumptionParams(w=0.5, c=0.4))
        with pytest.raises(ValueError):
            decile_apcs(iv, sol, "median")


class TestLogNormalFit:
    def test_hand_value(self):
        mu, sigma = fit_lognormal_mle([1.0, np.e**2])
        assert mu == pytest.approx(1.0, abs=1e-12)
        assert sigma == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_sample(self):
        mu, sigma = fit_lognormal_mle([np.e, np.e, np.e])
        assert mu == pytest.approx(1.0, abs=1e-12)
        assert sigma == 0.0

    def test_monte_carlo_consistency(self):
        rng = np.random.default_rng(12)
        x = np.exp(0.0 + 0.5 * rng.standard_normal(10_000))
        mu, sigma = fit_lognormal_mle(x)
        assert abs(mu - 0.0) < 0.02
        assert abs(sigma - 0.5) < 0.02

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            fit_lognormal_mle([1.0, -1.0])
        with pytest.raises(ValueError):
            fit_lognormal_mle([2.0])


class TestKsLognormality:
    def test_statistic_matches_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            x = np.exp(rng.standard_normal(200) * 0.7 + 0.2)
            res = ks_lognormality(x)
            ref = spstats.kstest(
                x, lambda v: lognormal_cdf(v, res.mu_hat, res.sigma_hat)
            )
            assert res.ks_statistic == pytest.approx(ref.statistic, abs=1e-12)

    def test_lognormal_samples_rarely_rejected(self):
        rng = np.random.default_rng(21)
        nonreject = sum(
            not ks_lognormality(np.exp(0.4 * rng.standard_normal(1000))).reject
            for _ in range(100)
        )
        assert nonreject >= 90

    def test_exponential_samples_rejected(self):
        rng = np.random.default_rng(22)
        reject = sum(
            ks_lognormality(-np.log1p(-rng.random(1000))).reject for _ in range(100)
        )
        assert reject >= 95

    def test_rejection_monotone_toward_exponential(self):
        # blending a log-normal sample toward an exponential one raises the
        # rejection frequency
        rng = np.random.default_rng(23)
        freqs = []
        for blend in (0.0, 0.7):
            rejects = 0
            for _ in range(40):
                ln = np.exp(0.4 * rng.standard_normal(1000))
                ex = -np.log1p(-rng.random(1000))
                x = (1 - blend) * ln + blend * ex
                rejects += ks_lognormality(x).reject
            freqs.append(rejects / 40)
        assert freqs[1] > freqs[0]

    def test_statistic_in_unit_interval(self, rng):
        x = rng.exponential(1.0, 500)
        res = ks_lognormality(x)
        assert 0.0 <= res.ks_statistic <= 1.0
        assert res.reject == (res.ks_statistic > res.critical_value)

    def test_critical_value_at_five_percent(self):
        res = ks_lognormality(np.exp(np.linspace(-1, 1, 100)) + np.arange(100) * 1e-6)
        assert res.critical_value == pytest.approx(1.358 / 10.0, abs=1e-12)

    def test_input_validation(self):
        rng = np.random.default_rng(1)
        with pytest.raises(ValueError):
            ks_lognormality(rng.exponential(1, 29))
        with pytest.raises(ValueError):
            ks_lognormality(rng.exponential(1, 100), alpha=0.07)
        with pytest.raises(ValueError):
            ks_lognormality(np.full(100, 2.0))


class TestSavingRate:
    def test_isolation_rate(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 100, rng)
        g = generate_network(iv, 5, 1.0, rng)
        sol = solve_fixed_point(g, iv, ConsumptionParams(w=0.64, c=0.0))
        assert aggregate_saving_rate(iv, sol) == pytest.approx(0.36, abs=1e-12)

    def test_three_agent_hand_value(self):
        iv = make_incomes([1.0, 2.0, 4.0])
        g = make_graph([[1], [2], [0]])
        sol = solve_fixed_point(g, iv, ConsumptionParams(w=0.5, c=0.5))
        assert aggregate_saving_rate(iv, sol) == pytest.approx(0.4375, abs=1e-12)

    def test_rescaling_invariance(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 300, rng)
        g = generate_network(iv, 5, 1.0, rng)
        params = ConsumptionParams(w=0.5, c=0.3)
        base = aggregate_saving_rate(iv, solve_fixed_point(g, iv, params))
        for omega in (0.5, 2.0, 10.0):
            scaled_iv = iv.rescaled(omega)
            scaled = aggregate_saving_rate(
                scaled_iv, solve_fixed_point(g, scaled_iv, params)
            )
            assert abs(scaled - base) < 1e-12


class TestSummaries:
    def test_summarize_distribution(self, rng):
        iv = sample_incomes(IncomeRegime.exponential(), 500, rng)
        s = summarize_distribution(iv.incomes, iv.deciles)
        assert s.mean == pytest.approx(iv.incomes.mean())
        assert s.decile_means.shape == (10,)
        assert np.all(np.diff(s.decile_means) > 0)

    def test_theoretical_lognormal_gini(self):
        assert lognormal_theoretical_gini(1.0) == pytest.approx(
            2 * spstats.norm.cdf(1 / np.sqrt(2)) - 1, abs=1e-12
        )
        assert lognormal_theoretical_gini(1e-9) < 1e-8
