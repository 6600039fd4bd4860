"""Upward-looking social consumption: fixed point and expansion oracle.

Every agent consumes its isolated share w*Y plus a catching-up term
proportional to how far the highest consumption it observes exceeds that
share:

    C(i) = w*Y(i) + (1-w)*c * max(0, max_{j in out(i)} C(j) - w*Y(i))

The map is a sup-norm contraction with modulus q = (1-w)*c < 1, so the
fixed point is unique and synchronous iteration from the isolation solution
converges geometrically. The clamp at zero makes comparisons purely
upward-looking: an agent richer than everyone it observes consumes w*Y
exactly. The unclamped variant is kept behind a flag for sensitivity runs.
"""

import sys
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


class SolverError(RuntimeError):
    """Fixed-point iteration failed to converge (indicates a bug: the map
    is a contraction, so this must not happen for valid parameters)."""


@dataclass(frozen=True)
class ConsumptionParams:
    """Idiosyncratic propensity w and catching-up intensity c."""

    w: float
    c: float

    def __post_init__(self):
        if not 0.0 < self.w <= 1.0:
            raise ValueError(f"w must be in (0, 1], got {self.w}")
        if not 0.0 <= self.c < 1.0:
            raise ValueError(f"c must be in [0, 1), got {self.c}")

    @property
    def q(self):
        """Contraction modulus (1-w)*c of the consumption map."""
        return (1.0 - self.w) * self.c


@dataclass(frozen=True)
class ConsumptionSolution:
    consumption: np.ndarray
    apc: np.ndarray
    iterations_used: int
    converged: bool


def isolated_consumption(income, params):
    """Consumption absent any social comparison: w * income."""
    income = np.asarray(income, dtype=float)
    if np.any(income <= 0):
        raise ValueError("income must be strictly positive")
    out = params.w * income
    return float(out) if out.ndim == 0 else out


def solve_fixed_point(
    graph,
    incomes,
    params,
    tol=DEFAULT_TOL,
    max_iter=DEFAULT_MAX_ITER,
    clamp=True,
    method="jacobi",
):
    """Solve for the unique consumption fixed point on a given graph.

    method='jacobi' is the synchronous default; 'gauss_seidel' updates in
    agent order and must land on the same fixed point (used as a uniqueness
    cross-check). w = 1 is handled as pass-through C = Y without iterating.
    """
    y = incomes.incomes
    if graph.n != y.shape[0]:
        raise ValueError("graph and incomes disagree on n")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    iso = params.w * y
    if params.w == 1.0:
        cons = iso.copy()
        return ConsumptionSolution(
            consumption=cons, apc=cons / y, iterations_used=0, converged=True
        )

    if method == "jacobi":
        kernel = _kernels.jacobi_fixed_point
    elif method == "gauss_seidel":
        kernel = _kernels.gauss_seidel_fixed_point
    else:
        raise ValueError(f"unknown method {method!r}")
    cons, iters, converged, _ = kernel(
        graph.out_links, iso, params.q, clamp, tol, max_iter
    )
    apc = cons / y
    # agents whose social term clamps consume exactly w*Y; pin their APC to
    # w rather than leaving division round-off on it
    apc[cons == iso] = params.w
    return ConsumptionSolution(
        consumption=cons, apc=apc, iterations_used=iters, converged=converged
    )


def apc_vector(solution, incomes):
    """Individual average propensities to consume, C(i)/Y(i)."""
    if solution.consumption.shape != incomes.incomes.shape:
        raise ValueError("solution and incomes disagree on n")
    return solution.consumption / incomes.incomes


@dataclass
class OracleResult:
    """Output of the recursive-expansion oracle (test-only machinery)."""

    consumption: np.ndarray
    chain_length: np.ndarray  # realised steps to the clamped terminal agent
    truncated: np.ndarray  # chains cut off at depth_cap (flagged, not fatal)
    unresolved: list = field(default_factory=list)  # agents needing a reference


class _Unresolvable(Exception):
    def __init__(self, agent):
        self.agent = agent


def recursive_expansion_oracle(
    graph, incomes, params, depth_cap, reference_consumption=None
):
    """Recompute consumption by literally unrolling the recursion.

    Independently of the fixed-point solver, each agent's consumption is
    expanded along its realised richest-observed chain: with q = (1-w)*c,

        C(i) = sum_{t<d} (1-q) q^t w Y(chain_t)  +  q^d w Y(chain_d)

    where the chain follows argmax consumption among out-neighbours and
    terminates at the first agent whose social term clamps. Chain targets
    are resolved bottom-up by memoised recursion; an agent holding the
    global maximum income always clamps, which resolves the cycles that a
    terminating chain can pass through. Structurally cyclic cases that
    never reach such an agent are resolvable only when a converged
    ``reference_consumption`` is supplied for argmax/clamp decisions; they
    are otherwise reported in ``unresolved``.

    This is a test oracle; the simulation pipeline never calls it.
    """
    y = incomes.incomes
    n = graph.n
    if depth_cap < 1:
        raise ValueError(f"depth_cap must be >= 1, got {depth_cap}")
    w = params.w
    q = params.q
    iso = w * y
    y_max = y.max()

    next_in_chain = np.full(n, -1, dtype=np.int64)  # -1 = clamped terminal
    unresolved = []

    if reference_consumption is not None:
        ref = np.asarray(reference_consumption, dtype=float)
        for i in range(n):
            nbrs = graph.out_links[i]
            j = nbrs[int(np.argmax(ref[nbrs]))]
            if ref[j] - iso[i] > 0.0:
                next_in_chain[i] = j
    else:
        # bottom-up: resolve consumption values only to decide argmax/clamp
        value = {}
        on_stack = set()

        def resolve(i):
            if i in value:
                return value[i]
            if y[i] == y_max:
                # nobody's consumption can exceed w*y_max, so this clamps
                value[i] = iso[i]
                return value[i]
            if i in on_stack:
                raise _Unresolvable(i)
            on_stack.add(i)
            try:
                nbr_vals = [resolve(int(j)) for j in graph.out_links[i]]
            finally:
                on_stack.discard(i)
            best = max(range(len(nbr_vals)), key=lambda t: nbr_vals[t])
            if nbr_vals[best] - iso[i] > 0.0:
                next_in_chain[i] = graph.out_links[i][best]
                value[i] = iso[i] + q * (nbr_vals[best] - iso[i])
            else:
                value[i] = iso[i]
            return value[i]

        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 10 * n + 100))
        try:
            for i in range(n):
                try:
                    resolve(i)
                except _Unresolvable:
                    unresolved.append(i)
        finally:
            sys.setrecursionlimit(old_limit)

    cons = np.full(n, np.nan)
    chain_length = np.zeros(n, dtype=np.int64)
    truncated = np.zeros(n, dtype=bool)
    for i in range(n):
        if i in unresolved:
            continue
        total = 0.0
        node = i
        depth = 0
        while next_in_chain[node] >= 0 and depth < depth_cap:
            total += (1.0 - q) * q**depth * w * y[node]
            node = int(next_in_chain[node])
            depth += 1
        if next_in_chain[node] >= 0:
            truncated[i] = True
        total += q**depth * w * y[node]
        cons[i] = total
        chain_length[i] = depth
    return OracleResult(
        consumption=cons,
        chain_length=chain_length,
        truncated=truncated,
        unresolved=unresolved,
    )
