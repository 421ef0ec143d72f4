"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Run once with the default backend; the numpy reference functions are
called directly so both columns come from the same process.
"""

import argparse
import time

import numpy as np

from slice_bergman import _kernels as K
from slice_bergman.bergman import DiskQuadrature


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    quad = DiskQuadrature()
    nodes = np.c_[quad.z.real, quad.z.imag, np.zeros((quad.z.size, 2))]
    coeffs = rng.normal(size=(17, 4))
    a, b = rng.normal(size=(2, 100_000, 4))
    batch_c = rng.normal(size=(10_000, 17, 4))
    batch_p = 0.3 * rng.normal(size=(10_000, 4))
    vals = rng.normal(size=(quad.z.size, 4))
    yield "qmul 1e5 rows", lambda: K.qmul(a, b), lambda: K.qmul_numpy(a, b)
    yield "series eval on 4096 nodes", lambda: K.series_eval(coeffs, nodes), lambda: K.series_eval_numpy(coeffs, nodes)
    yield "batched eval 1e4 series", lambda: K.series_eval_batched(batch_c, batch_p), \
        lambda: K.series_eval_batched_numpy(batch_c, batch_p)
    yield "convolve degree 16", lambda: K.quat_convolve(coeffs, coeffs, 32), \
        lambda: K.quat_convolve_numpy(coeffs, coeffs, 32)
    yield "weighted sum 4096", lambda: K.weighted_sum(vals, quad.weights), \
        lambda: K.weighted_sum_numpy(vals, quad.weights)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    print(f"backend: {K.backend()}")
    print(f"{'kernel':28s} {'active ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fast, ref in cases(rng):
        tf, tr = best_of(fast, args.repeat), best_of(ref, args.repeat)
        print(f"{name:28s} {1e3 * tf:10.3f} {1e3 * tr:10.3f} {tr / tf:8.1f}x")


if __name__ == "__main__":
    main()
