#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the raw pointwise kernels on raveled arrays and one full
right-hand-side evaluation per backend.

    python3 benchmarks/bench_kernels.py --n 64 --repeat 20
"""

import argparse
import time

import numpy as np

from nscrit import kernels
from nscrit.fields import forward_vector, random_solenoidal
from nscrit.grid import GridSpec
from nscrit.solver import _nonlinear_raw


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_backend(name, n, repeat):
    kernels.set_backend(name)
    rng = np.random.default_rng(0)
    size = n**3
    x, y, z = (np.ascontiguousarray(rng.standard_normal(size)) for _ in range(3))
    g = [np.ascontiguousarray(rng.standard_normal(size)) for _ in range(9)]
    w = [np.empty(size) for _ in range(3)]
    c = [np.ascontiguousarray(rng.standard_normal(size) + 1j * rng.standard_normal(size)) for _ in range(3)]
    k = [np.ascontiguousarray(rng.standard_normal(size)) for _ in range(3)]
    ksq = k[0] ** 2 + k[1] ** 2 + k[2] ** 2
    inv = 1.0 / ksq
    mask = np.ones(size)

    grid = GridSpec.cubic(n)
    u_hat = forward_vector(random_solenoidal(grid, 4.0, 3.0, 1))

    results = {
        "abs_pow_sum(p=9)": best_of(lambda: kernels.abs_pow_sum(x, 9.0), repeat),
        "abs_pow_sum(p=2.5)": best_of(lambda: kernels.abs_pow_sum(x, 2.5), repeat),
        "abs_pow_sum(p=8/3)": best_of(lambda: kernels.abs_pow_sum(x, 8.0 / 3.0), repeat),
        "mag_pow_sum(p=4)": best_of(lambda: kernels.mag_pow_sum(x, y, z, 4.0), repeat),
        "triple_product_sum": best_of(lambda: kernels.triple_product_sum(x, y, z), repeat),
        "advect": best_of(lambda: kernels.advect(x, y, z, *g, *w), repeat),
        "project_and_mask": best_of(
            lambda: kernels.project_and_mask(c[0].copy(), c[1].copy(), c[2].copy(), *k, inv, mask), repeat
        ),
        "nonlinear rhs (FFT-bound)": best_of(lambda: _nonlinear_raw(grid, u_hat.coeffs), max(3, repeat // 4)),
    }
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=64, help="cubic grid resolution")
    parser.add_argument("--repeat", type=int, default=20, help="repetitions, best-of timing")
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; timing the python backend only")
    timings = {name: bench_backend(name, args.n, args.repeat) for name in backends}

    width = max(len(k) for k in next(iter(timings.values())))
    header = f"{'kernel':<{width}}" + "".join(f"  {b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(f"n = {args.n}^3 points, best of {args.repeat}")
    print(header)
    for key in next(iter(timings.values())):
        row = f"{key:<{width}}"
        for b in backends:
            row += f"  {timings[b][key] * 1e3:>10.3f}ms"
        if len(backends) == 2:
            row += f"  {timings['python'][key] / timings['compiled'][key]:>7.2f}x"
        print(row)


if __name__ == "__main__":
    main()
