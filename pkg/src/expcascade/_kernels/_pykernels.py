"""Pure numpy kernel implementations (fallback backend).

These are the reference semantics for the compiled kernels. Every floating
point operation here has a one-to-one counterpart in ``_ckernels.pyx`` with
the same evaluation order, so both backends produce bit-identical output.
Do not "optimise" either side independently: np.cumsum accumulates strictly
in index order, which is what the C loop mirrors.
"""

import numpy as np


def draw_targets(weights, distances, uniforms):
    """Sequential weighted sampling without replacement, one row per chooser.

    weights   : (n, n) float64, weights[i, j] = chooser i's (stabilised)
                link weight for candidate j; the diagonal must be 0.
    distances : (n, n) float64 income distances with +inf on the diagonal;
                only consulted when every remaining weight has underflowed
                to zero, in which case the nearest remaining candidate by
                income is picked (the intensity-of-choice limit).
    uniforms  : (n, k) float64 in [0, 1), one draw per link slot.

    Returns (n, k) int64 target ids in draw order.
    """
    n = weights.shape[0]
    k = uniforms.shape[1]
    links = np.empty((n, k), dtype=np.int64)
    row = np.empty(n, dtype=np.float64)
    taken = np.empty(n, dtype=bool)
    for i in range(n):
        np.copyto(row, weights[i])
        taken[:] = False
        taken[i] = True
        for d in range(k):
            cum = np.cumsum(row)
            total = cum[-1]
            if total > 0.0:
                t = uniforms[i, d] * total
                j = int(np.searchsorted(cum, t, side="right"))
                if j >= n:
                    # u*total rounded up to the full mass: take the last
                    # candidate that still has positive weight
                    j = int(np.flatnonzero(row)[-1])
            else:
                # all remaining weights underflowed: nearest income wins
                masked = np.where(taken, np.inf, distances[i])
                j = int(np.argmin(masked))
            links[i, d] = j
            row[j] = 0.0
            taken[j] = True
    return links


def jacobi_fixed_point(links, isolated, q, clamp, tol, max_iter):
    """Synchronous fixed-point iteration of the social consumption map.

    links    : (n, k) int64 out-neighbour ids
    isolated : (n,) float64 isolated consumption levels (the w*Y vector)
    q        : contraction modulus (1-w)*c
    clamp    : floor the social term at zero when True
    Stops when the sup-norm change drops below ``tol``.

    Returns (consumption, iterations_used, converged, last_diff).
    """
    cons = isolated.copy()
    new = np.empty_like(cons)
    gathered = np.empty(links.shape, dtype=np.float64)
    diff = np.inf
    for it in range(1, max_iter + 1):
        np.take(cons, links, out=gathered)
        social = gathered.max(axis=1)
        np.subtract(social, isolated, out=social)
        if clamp:
            np.maximum(social, 0.0, out=social)
        np.multiply(social, q, out=social)
        np.add(isolated, social, out=new)
        diff = float(np.max(np.abs(new - cons)))
        cons, new = new, cons
        if diff < tol:
            return cons.copy(), it, True, diff
    return cons.copy(), max_iter, False, diff


def gauss_seidel_fixed_point(links, isolated, q, clamp, tol, max_iter):
    """Like jacobi_fixed_point but updating in place in agent index order."""
    n, k = links.shape
    cons = isolated.copy()
    diff = np.inf
    for it in range(1, max_iter + 1):
        diff = 0.0
        for i in range(n):
            m = cons[links[i, 0]]
            for j in range(1, k):
                v = cons[links[i, j]]
                if v > m:
                    m = v
            s = m - isolated[i]
            if clamp and s < 0.0:
                s = 0.0
            s = s * q
            v = isolated[i] + s
            d = abs(v - cons[i])
            if d > diff:
                diff = d
            cons[i] = v
        if diff < tol:
            return cons.copy(), it, True, diff
    return cons.copy(), max_iter, False, diff
