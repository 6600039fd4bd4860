"""Homophilic perception network generation and segregation diagnostics.

Each agent draws k link targets (default 5) by sequential weighted sampling
without replacement. A candidate's weight falls exponentially in the income
distance to the chooser, scaled by the homophily strength rho: rho = 0 is a
uniform random graph, large rho concentrates draws on income-similar agents.
Links are directed outward: an agent observes exactly the agents it chose.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class PerceptionGraph:
    """Directed out-link structure: who observes whom.

    out_links[i] holds agent i's k distinct targets in draw order.
    """

    n: int
    k: int
    rho: float
    out_links: np.ndarray

    def __post_init__(self):
        if self.out_links.shape != (self.n, self.k):
            raise ValueError("out_links must have shape (n, k)")


@dataclass(frozen=True)
class SegregationDiagnostics:
    """Per-agent view of how much richer the richest observed agent is."""

    max_observed_income: np.ndarray
    perception_gap: np.ndarray  # max observed income - own income, floored at 0


def link_weight(y_i, y_j, rho):
    """Link weight exp(-rho * |y_j - y_i|); symmetric, in (0, 1]."""
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    return np.exp(-rho * np.abs(np.asarray(y_j, dtype=float) - y_i))


def choice_probabilities(chooser, incomes, rho, excluded=None):
    """Probability of each candidate being the chooser's next draw.

    Weights are normalised over all agents outside ``excluded`` (which
    always contains the chooser). Computed with the weights rescaled by the
    minimum income distance, which leaves the normalised probabilities
    unchanged but stays finite for arbitrarily large rho; in the rho -> inf
    limit the whole mass sits on the minimum-distance candidate.

    Returns an (n,) vector with zeros at excluded positions, summing to 1.
    """
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    y = np.asarray(incomes, dtype=float)
    n = y.shape[0]
    if not 0 <= chooser < n:
        raise ValueError(f"chooser {chooser} out of range for {n} agents")
    mask = np.zeros(n, dtype=bool)
    mask[chooser] = True
    if excluded is not None:
        mask[list(excluded)] = True
    if mask.all():
        raise ValueError("no candidates remain after exclusions")
    dist = np.abs(y - y[chooser])
    dist_cand = np.where(mask, np.inf, dist)
    shifted = dist_cand - dist_cand.min()
    probs = np.zeros(n)
    with np.errstate(invalid="ignore"):
        w = np.exp(-rho * shifted)
    w[mask] = 0.0
    total = w.sum()
    if total > 0.0:
        probs = w / total
    else:
        # every candidate weight underflowed: point mass on the nearest
        probs[np.argmin(dist_cand)] = 1.0
    return probs


def _weight_and_distance_matrices(incomes, rho):
    """Row-stabilised weight matrix and raw distance matrix for the sampler.

    Row i is shifted by agent i's minimum candidate distance, so the largest
    weight per row is exactly 1; this never changes relative weights within
    a row. Diagonals: weight 0 (no self links), distance +inf.
    """
    y = np.asarray(incomes, dtype=float)
    dist = np.abs(y[:, None] - y[None, :])
    np.fill_diagonal(dist, np.inf)
    row_min = dist.min(axis=1)
    with np.errstate(invalid="ignore"):
        weights = np.exp(-rho * (dist - row_min[:, None]))
    np.fill_diagonal(weights, 0.0)
    return weights, dist


def generate_network(incomes, k, rho, rng):
    """Draw the full perception graph for one run.

    Every agent draws k targets sequentially; after each draw the chosen
    target is excluded and the remaining weights renormalised (which the
    cumulative-sum inverse-CDF draw does implicitly). All uniforms are
    pre-drawn as an (n, k) block so the result is a pure function of the
    generator state and independent of agent scheduling.
    """
    y = incomes.incomes
    n = y.shape[0]
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if rho < 0:
        raise ValueError(f"rho must be nonnegative, got {rho}")
    uniforms = rng.random((n, k))
    weights, dist = _weight_and_distance_matrices(y, rho)
    links = _kernels.draw_targets(weights, dist, uniforms)
    return PerceptionGraph(n=n, k=k, rho=float(rho), out_links=links)


def segregation_diagnostics(graph, incomes):
    """Max observed income and clamped perception gap per agent."""
    y = incomes.incomes
    if y.shape[0] != graph.n:
        raise ValueError("graph and incomes disagree on n")
    max_obs = y[graph.out_links].max(axis=1)
    gap = np.maximum(max_obs - y, 0.0)
    return SegregationDiagnostics(max_observed_income=max_obs, perception_gap=gap)


def graph_edge_rows(graph):
    """Edge list as (source, target, draw_index) rows for the CSV dump."""
    rows = []
    for i in range(graph.n):
        for d in range(graph.k):
            rows.append((i, int(graph.out_links[i, d]), d))
    return rows
