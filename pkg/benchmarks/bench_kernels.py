"""Timing for the float64 approximant kernels.

Run with and without ``GAMMACF_DISABLE_NUMBA=1`` to compare the compiled
and numpy paths:

    python benchmarks/bench_kernels.py
    GAMMACF_DISABLE_NUMBA=1 python benchmarks/bench_kernels.py
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from gammacf import kernels


def bauer_terms(x: float, n: int):
    # 4 / (x + 1^2/(2x + 3^2/(2x + ...)))
    k = np.arange(1, n + 1, dtype=np.float64)
    a = np.where(k == 1, 4.0, (2 * k - 3) ** 2)
    b = np.where(k == 1, x, 2 * x)
    return a, b


def timed(fn, repeat):
    fn()  # warm-up, includes compilation when numba is active
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--terms", type=int, default=1_000_000)
    p.add_argument("--rows", type=int, default=2_000)
    p.add_argument("--depth", type=int, default=500)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    print(f"numba enabled: {kernels.NUMBA_ENABLED}")
    a, b = bauer_terms(1.0, args.terms)
    t = timed(lambda: kernels.approximant_f64(a, b, 0.0), args.repeat)
    A, B, *_ = kernels.approximant_f64(a, b, 0.0)
    print(f"approximant_f64        n={args.terms:>9d}  {t * 1e3:8.2f} ms  value={A / B:.15f} (pi={math.pi:.15f})")

    t = timed(lambda: kernels.approximant_sequence_f64(a, b, 0.0), args.repeat)
    print(f"approximant_sequence   n={args.terms:>9d}  {t * 1e3:8.2f} ms")

    xs = np.linspace(1.0, 20.0, args.rows)
    rows = [bauer_terms(x, args.depth) for x in xs]
    A2 = np.stack([r[0] for r in rows])
    B2 = np.stack([r[1] for r in rows])
    b0 = np.zeros(args.rows)
    t = timed(lambda: kernels.approximants_batch_f64(A2, B2, b0), args.repeat)
    print(f"approximants_batch     {args.rows}x{args.depth}  {t * 1e3:8.2f} ms")

    t = timed(lambda: kernels.log1p_ratio_sum_f64(0.5, args.terms), args.repeat)
    print(f"log1p_ratio_sum        n={args.terms:>9d}  {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
