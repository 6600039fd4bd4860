#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure numpy fallback.

Times the two hot loops (network target draws and the Jacobi fixed point)
at the production scale n=1000, k=5 and prints a comparison table.

    python3 benchmarks/bench_kernels.py [--n 1000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from expcascade._kernels import _pykernels

try:
    from expcascade._kernels import _ckernels
except ImportError:
    _ckernels = None


def kernel_inputs(n, k, rho, seed):
    rng = np.random.default_rng(seed)
    y = rng.exponential(1.0, n)
    dist = np.abs(y[:, None] - y[None, :])
    np.fill_diagonal(dist, np.inf)
    row_min = dist.min(axis=1)
    weights = np.exp(-rho * (dist - row_min[:, None]))
    np.fill_diagonal(weights, 0.0)
    uniforms = rng.random((n, k))
    return weights, dist, uniforms, y


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--rho", type=float, default=1.0)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    weights, dist, uniforms, y = kernel_inputs(args.n, args.k, args.rho, seed=0)
    links = _pykernels.draw_targets(weights, dist, uniforms)
    iso = 0.5 * y
    q = 0.25

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled kernels not built; benchmarking the fallback only")

    results = {}
    for name, mod in backends:
        t_draw = best_of(
            lambda: mod.draw_targets(weights, dist, uniforms), args.repeats
        )
        t_solve = best_of(
            lambda: mod.jacobi_fixed_point(links, iso, q, True, 1e-12, 10_000),
            args.repeats,
        )
        results[name] = (t_draw, t_solve)
        out = mod.draw_targets(weights, dist, uniforms)
        assert np.array_equal(out, links), "backends disagree on draws"

    print(f"\nn={args.n}, k={args.k}, rho={args.rho} (best of {args.repeats})")
    print(f"{'kernel':<22}{'python':>12}{'cython':>12}{'speedup':>10}")
    for label, idx in (("draw_targets", 0), ("jacobi_fixed_point", 1)):
        py = results["python"][idx]
        row = f"{label:<22}{py * 1e3:>10.2f}ms"
        if "cython" in results:
            cy = results["cython"][idx]
            row += f"{cy * 1e3:>10.2f}ms{py / cy:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
