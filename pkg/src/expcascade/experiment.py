"""Run orchestration: seeded runs, ensembles, sweeps, stylised-facts checks.

A run is a pure function of (config, run_index): incomes and network draws
come from numpy SeedSequence([seed, run_index]) substreams, so ensembles
are reproducible, embarrassingly parallel in principle, and independent of
execution order. Sweeps over (w, c) reuse phase-1 state (incomes, network)
across cells because those phases do not consume the consumption
parameters; results are identical to running each cell from scratch.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import stats
from .consumption import ConsumptionParams, SolverError, solve_fixed_point
from .income import (
    EXPONENTIAL,
    LOGNORMAL,
    IncomeRegime,
    IncomeVector,
    sample_incomes,
)
from .network import generate_network, segregation_diagnostics

DEFAULT_WC_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))  # 0.05 .. 0.95
DEFAULT_RHO_GRID = (0.5, 1.0, 1.5, 4.0)
DEFAULT_SIGMA_GRID = (
    0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.85, 1.0, 1.2, 1.5,
)
SCALE_TEST_OMEGAS = (0.5, 2.0, 10.0)

# run-level scalar statistics tracked across ensembles
SCALAR_STATS = (
    "income_gini",
    "income_cov",
    "expenditure_cov",
    "cov_ratio",
    "saving_rate",
    "aggregate_apc",
    "mean_perception_gap",
    "iterations_used",
)


class ConfigError(ValueError):
    """Invalid run configuration (maps to CLI exit code 1)."""


@dataclass(frozen=True)
class SimConfig:
    """Full parameterisation of one simulation run."""

    n: int = 1000
    k: int = 5
    regime: IncomeRegime = IncomeRegime.exponential()
    params: ConsumptionParams = ConsumptionParams(w=0.5, c=0.5)
    rho: float = 1.0
    seed: int = 0
    tol: float = 1e-12
    max_iter: int = 10_000
    clamp: bool = True
    decile_apc: str = "ratio_of_sums"

    def __post_init__(self):
        if self.n <= self.k:
            raise ConfigError(f"need n > k, got n={self.n}, k={self.k}")
        if self.n < 30:
            # run statistics (KS log-normality, decile tables) need n >= 30
            raise ConfigError(f"n must be >= 30, got {self.n}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.rho < 0:
            raise ConfigError(f"rho must be nonnegative, got {self.rho}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit nonnegative integer, got {self.seed}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.decile_apc not in ("ratio_of_sums", "mean_of_ratios"):
            raise ConfigError(f"unknown decile_apc convention {self.decile_apc!r}")

    def to_dict(self):
        """Flat JSON-ready dict; inverse of from_dict."""
        d = {
            "n": self.n,
            "k": self.k,
            "regime": self.regime.kind,
            "w": self.params.w,
            "c": self.params.c,
            "rho": self.rho,
            "seed": self.seed,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "clamp": self.clamp,
            "decile_apc": self.decile_apc,
        }
        if self.regime.kind == EXPONENTIAL:
            d["rate"] = self.regime.lam
        else:
            d["sigma"] = self.regime.sigma
            d["mu"] = self.regime.mu
        return d

    @classmethod
    def from_dict(cls, d):
        """Build a config from flat keys, reporting the offending key."""
        known = {
            "n", "k", "regime", "rate", "sigma", "mu", "w", "c", "rho",
            "seed", "tol", "max_iter", "clamp", "decile_apc",
        }
        for key in d:
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")

        def take(key, kind, default=None):
            if key not in d:
                if default is None:
                    raise ConfigError(f"missing config key {key!r}")
                return default
            if kind is bool:
                # bool("false") would be True; demand a real JSON boolean
                if not isinstance(d[key], bool):
                    raise ConfigError(
                        f"bad value for config key {key!r}: {d[key]!r} (expected true/false)"
                    )
                return d[key]
            try:
                return kind(d[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for config key {key!r}: {d[key]!r}") from exc

        kind = take("regime", str, EXPONENTIAL)
        if kind == EXPONENTIAL:
            regime = IncomeRegime.exponential(lam=take("rate", float, 1.0))
        elif kind == LOGNORMAL:
            sigma = take("sigma", float, 1.0)
            mu = d.get("mu")
            regime = IncomeRegime.lognormal(
                sigma=sigma, mu=None if mu is None else float(mu)
            )
        else:
            raise ConfigError(f"bad value for config key 'regime': {kind!r}")
        try:
            params = ConsumptionParams(w=take("w", float, 0.5), c=take("c", float, 0.5))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        try:
            return cls(
                n=take("n", int, 1000),
                k=take("k", int, 5),
                regime=regime,
                params=params,
                rho=take("rho", float, 1.0),
                seed=take("seed", int, 0),
                tol=take("tol", float, 1e-12),
                max_iter=take("max_iter", int, 10_000),
                clamp=take("clamp", bool, True),
                decile_apc=take("decile_apc", str, "ratio_of_sums"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def with_params(self, **kwargs):
        """Convenience: replace(w=..., c=..., rho=..., sigma=..., seed=...)."""
        cfg = self
        if "w" in kwargs or "c" in kwargs:
            cfg = replace(
                cfg,
                params=ConsumptionParams(
                    w=kwargs.pop("w", cfg.params.w), c=kwargs.pop("c", cfg.params.c)
                ),
            )
        if "sigma" in kwargs:
            cfg = replace(cfg, regime=IncomeRegime.lognormal(sigma=kwargs.pop("sigma")))
        if kwargs:
            cfg = replace(cfg, **kwargs)
        return cfg


@dataclass(frozen=True)
class RunResult:
    """All per-run outputs: agent-level arrays plus summary statistics."""

    config: SimConfig
    run_index: int
    incomes: IncomeVector
    consumption: np.ndarray
    apc: np.ndarray
    perception_gap: np.ndarray
    max_observed_income: np.ndarray
    income_summary: stats.DistributionSummary
    expenditure_summary: stats.DistributionSummary
    lognormality: stats.LogNormalityResult
    saving_rate: float
    decile_apcs: np.ndarray
    iterations_used: int
    converged: bool

    @property
    def cov_ratio(self):
        return (
            self.expenditure_summary.coefficient_of_variation
            / self.income_summary.coefficient_of_variation
        )

    def scalar_stats(self):
        return {
            "income_gini": self.income_summary.gini,
            "income_cov": self.income_summary.coefficient_of_variation,
            "expenditure_cov": self.expenditure_summary.coefficient_of_variation,
            "cov_ratio": self.cov_ratio,
            "saving_rate": self.saving_rate,
            "aggregate_apc": 1.0 - self.saving_rate,
            "mean_perception_gap": float(self.perception_gap.mean()),
            "iterations_used": float(self.iterations_used),
        }


def phase_rngs(config, run_index):
    """Independent income/network generators for (seed, run_index)."""
    ss = np.random.SeedSequence([config.seed, run_index])
    income_ss, network_ss = ss.spawn(2)
    return np.random.default_rng(income_ss), np.random.default_rng(network_ss)


def simulate_phase1(config, run_index):
    """Incomes and network only (phase 1)."""
    income_rng, network_rng = phase_rngs(config, run_index)
    incomes = sample_incomes(config.regime, config.n, income_rng)
    graph = generate_network(incomes, config.k, config.rho, network_rng)
    return incomes, graph


def simulate(config, run_index=0):
    """Phase 1 (incomes, network) then phase 2 (consumption solve).

    Returns (incomes, graph, solution); raises SolverError on
    non-convergence, which cannot happen for valid parameters.
    """
    incomes, graph = simulate_phase1(config, run_index)
    solution = solve_fixed_point(
        graph,
        incomes,
        config.params,
        tol=config.tol,
        max_iter=config.max_iter,
        clamp=config.clamp,
    )
    if not solution.converged:
        raise SolverError(
            f"fixed point not converged after {config.max_iter} iterations "
            f"(seed={config.seed}, run={run_index})"
        )
    return incomes, graph, solution


def _build_result(config, run_index, incomes, graph, solution, income_summary=None):
    seg = segregation_diagnostics(graph, incomes)
    if income_summary is None:
        income_summary = stats.summarize_distribution(incomes.incomes, incomes.deciles)
    return RunResult(
        config=config,
        run_index=run_index,
        incomes=incomes,
        consumption=solution.consumption,
        apc=solution.apc,
        perception_gap=seg.perception_gap,
        max_observed_income=seg.max_observed_income,
        income_summary=income_summary,
        expenditure_summary=stats.summarize_distribution(
            solution.consumption, incomes.deciles
        ),
        lognormality=stats.ks_lognormality(solution.consumption),
        saving_rate=stats.aggregate_saving_rate(incomes, solution),
        decile_apcs=stats.decile_apcs(incomes, solution, config.decile_apc),
        iterations_used=solution.iterations_used,
        converged=solution.converged,
    )


def run_single(config, run_index=0):
    """One full seeded run with all statistics."""
    incomes, graph, solution = simulate(config, run_index)
    return _build_result(config, run_index, incomes, graph, solution)


def run_single_with_graph(config, run_index=0):
    """run_single plus the generated graph (for the edge-list dump)."""
    incomes, graph, solution = simulate(config, run_index)
    return _build_result(config, run_index, incomes, graph, solution), graph


@dataclass
class EnsembleSummary:
    """Statistics aggregated over independent runs of one config."""

    config: SimConfig
    runs: int
    per_run: dict  # stat name -> (runs,) array, in run-index order
    ks_nonreject_fraction: float
    decile_apcs_mean: np.ndarray
    decile_apcs_sd: np.ndarray

    def mean(self, stat):
        return float(self.per_run[stat].mean())

    def sd(self, stat):
        return float(self.per_run[stat].std())


def summarize_runs(config, results):
    """Aggregate RunResults (already in run-index order) into a summary."""
    per_run = {
        name: np.array([r.scalar_stats()[name] for r in results])
        for name in SCALAR_STATS
    }
    rejects = np.array([r.lognormality.reject for r in results])
    apcs = np.vstack([r.decile_apcs for r in results])
    return EnsembleSummary(
        config=config,
        runs=len(results),
        per_run=per_run,
        ks_nonreject_fraction=float(1.0 - rejects.mean()),
        decile_apcs_mean=apcs.mean(axis=0),
        decile_apcs_sd=apcs.std(axis=0),
    )


def run_ensemble(config, runs):
    """Execute ``runs`` independent seeded runs and aggregate."""
    if runs < 1:
        raise ConfigError(f"runs must be >= 1, got {runs}")
    results = [run_single(config, run_index=r) for r in range(runs)]
    return summarize_runs(config, results)


def sweep_wc_grid(base, w_values=None, c_values=None, runs=100):
    """EnsembleSummary per (w, c) cell, reusing phase-1 state across cells.

    Incomes and the network depend only on (seed, run_index, regime, rho,
    n, k), so each run's phase-1 state is generated once and every (w, c)
    cell re-solves consumption on it. Returns the summaries as a dict keyed
    by (w, c) in grid order.
    """
    if runs < 1:
        raise ConfigError(f"runs must be >= 1, got {runs}")
    w_values = DEFAULT_WC_GRID if w_values is None else tuple(w_values)
    c_values = DEFAULT_WC_GRID if c_values is None else tuple(c_values)
    for w in w_values:
        if not 0 < w <= 1:
            raise ConfigError(f"grid w values must lie in (0, 1], got {w}")
    for c in c_values:
        if not 0 <= c < 1:
            raise ConfigError(f"grid c values must lie in [0, 1), got {c}")

    phase1 = [simulate_phase1(base, r) for r in range(runs)]
    income_summaries = [
        stats.summarize_distribution(incomes.incomes, incomes.deciles)
        for incomes, _ in phase1
    ]
    grid = {}
    for w in w_values:
        for c in c_values:
            config = base.with_params(w=w, c=c)
            results = []
            for r, (incomes, graph) in enumerate(phase1):
                solution = solve_fixed_point(
                    graph,
                    incomes,
                    config.params,
                    tol=config.tol,
                    max_iter=config.max_iter,
                    clamp=config.clamp,
                )
                if not solution.converged:
                    raise SolverError(
                        f"fixed point not converged (w={w}, c={c}, run={r})"
                    )
                results.append(
                    _build_result(
                        config, r, incomes, graph, solution,
                        income_summary=income_summaries[r],
                    )
                )
            grid[(w, c)] = summarize_runs(config, results)
    return grid


def sweep_inequality(base, sigma_values=None, rho_values=None, runs=100):
    """Mean income Gini vs mean saving rate per (rho, sigma) cell.

    Incomes are log-normal with unit mean; sigma varies inequality while
    the distribution shape stays fixed. Returns rows in (rho, sigma) grid
    order: dicts with gini/saving-rate means and sds plus the theoretical
    log-normal Gini for reference.
    """
    sigma_values = DEFAULT_SIGMA_GRID if sigma_values is None else tuple(sigma_values)
    rho_values = DEFAULT_RHO_GRID if rho_values is None else tuple(rho_values)
    if not sigma_values or not rho_values:
        raise ConfigError("sigma and rho grids must be nonempty")
    for sigma in sigma_values:
        if sigma <= 0:
            raise ConfigError(f"sigma values must be positive, got {sigma}")
    for rho in rho_values:
        if rho < 0:
            raise ConfigError(f"rho values must be nonnegative, got {rho}")

    rows = []
    for rho in rho_values:
        for sigma in sigma_values:
            config = base.with_params(sigma=sigma, rho=rho)
            summary = run_ensemble(config, runs)
            rows.append(
                {
                    "rho": rho,
                    "sigma": sigma,
                    "gini_mean": summary.mean("income_gini"),
                    "saving_rate_mean": summary.mean("saving_rate"),
                    "saving_rate_sd": summary.sd("saving_rate"),
                    "gini_theoretical": stats.lognormal_theoretical_gini(sigma),
                }
            )
    return rows


def scale_invariance_check(config, omegas=SCALE_TEST_OMEGAS, run_index=0):
    """Rescale incomes on a fixed graph and measure invariance violations.

    Returns one dict per omega with the aggregate-APC absolute error, the
    saving-rate absolute error and the worst per-agent relative consumption
    error against the predicted omega-scaling.
    """
    incomes, graph, solution = simulate(config, run_index)
    base_apc = 1.0 - stats.aggregate_saving_rate(incomes, solution)
    out = []
    for omega in omegas:
        scaled = incomes.rescaled(omega)
        scaled_solution = solve_fixed_point(
            graph,
            scaled,
            config.params,
            tol=config.tol,
            max_iter=config.max_iter,
            clamp=config.clamp,
        )
        apc = 1.0 - stats.aggregate_saving_rate(scaled, scaled_solution)
        rel_err = np.max(
            np.abs(scaled_solution.consumption - omega * solution.consumption)
            / (omega * solution.consumption)
        )
        out.append(
            {
                "omega": omega,
                "apc_abs_err": abs(apc - base_apc),
                "max_rel_consumption_err": float(rel_err),
            }
        )
    return out


@dataclass(frozen=True)
class FactResult:
    fact: str
    name: str
    applicable: bool
    passed: bool
    detail: str


@dataclass(frozen=True)
class StylisedFactsReport:
    config: SimConfig
    runs: int
    facts: tuple

    @property
    def all_applicable_pass(self):
        return all(f.passed for f in self.facts if f.applicable)


def stylised_facts_report(config, runs):
    """Evaluate the four expenditure stylised facts for one config.

    (i) decile APCs decline in income; (ii) aggregate APC is invariant to
    proportional income rescaling; (iii) expenditures are more homogeneous
    than incomes (CoV ratio < 1 on every run); (iv) expenditures pass the
    log-normality KS test in the majority of runs.
    """
    summary = run_ensemble(config, runs)
    facts = []

    apcs = summary.decile_apcs_mean
    if config.params.c == 0.0 or config.params.w == 1.0:
        facts.append(
            FactResult(
                fact="i",
                name="declining decile APCs",
                applicable=False,
                passed=False,
                detail="constant APCs: no social consumption channel",
            )
        )
    else:
        decreasing = bool(np.all(np.diff(apcs) < 0))
        facts.append(
            FactResult(
                fact="i",
                name="declining decile APCs",
                applicable=True,
                passed=decreasing,
                detail=f"ensemble-mean decile APCs {np.round(apcs, 4).tolist()}",
            )
        )

    scale = scale_invariance_check(config)
    apc_err = max(row["apc_abs_err"] for row in scale)
    rel_err = max(row["max_rel_consumption_err"] for row in scale)
    facts.append(
        FactResult(
            fact="ii",
            name="aggregate APC scale invariance",
            applicable=True,
            passed=bool(apc_err < 1e-12 and rel_err < 1e-9),
            detail=f"max |dAPC|={apc_err:.3e}, max rel C err={rel_err:.3e} "
            f"over omegas {[row['omega'] for row in scale]}",
        )
    )

    ratios = summary.per_run["cov_ratio"]
    strict = bool(np.all(ratios < 1.0))
    facts.append(
        FactResult(
            fact="iii",
            name="expenditure homogenisation (CoV ratio < 1)",
            applicable=True,
            passed=strict,
            detail=f"cov ratio mean={ratios.mean():.4f}, max={ratios.max():.6f}",
        )
    )

    frac = summary.ks_nonreject_fraction
    facts.append(
        FactResult(
            fact="iv",
            name="log-normal expenditures (KS non-rejection majority)",
            applicable=True,
            passed=bool(frac > 0.5),
            detail=f"non-rejection fraction {frac:.2f} over {runs} runs",
        )
    )
    return StylisedFactsReport(config=config, runs=runs, facts=tuple(facts))
