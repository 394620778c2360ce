"""Benchmark: compiled relaxation kernels against the numpy fallback.

Times a fixed number of red-black SOR sweeps on a square grid with both
backends and verifies that the final iterates are bit-identical.

    python3 benchmarks/bench_sor.py --n 257 --sweeps 400
"""

import argparse
import time

import numpy as np

from pslab import _kernels_py

try:
    from pslab import _kernels
except ImportError:
    _kernels = None


def make_state(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.random((n, n)), rng.random((n, n))


def run_backend(mod, n, sweeps, beta=1.0, omega=1.9):
    a, b = make_state(n)
    h2 = (2.0 / (n - 1)) ** 2
    t0 = time.perf_counter()
    for _ in range(sweeps):
        mod.relax_2d(a, b, beta, h2, omega)
        mod.relax_2d(b, a, beta, h2, omega)
    dt = time.perf_counter() - t0
    return dt, a, b


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=257)
    ap.add_argument("--sweeps", type=int, default=400)
    args = ap.parse_args()

    t_py, a_py, b_py = run_backend(_kernels_py, args.n, args.sweeps)
    rate_py = args.sweeps / t_py
    print(f"python   backend: {t_py:8.3f} s  ({rate_py:8.1f} sweeps/s)")

    if _kernels is None:
        print("compiled backend: unavailable")
        return

    t_c, a_c, b_c = run_backend(_kernels, args.n, args.sweeps)
    rate_c = args.sweeps / t_c
    print(f"compiled backend: {t_c:8.3f} s  ({rate_c:8.1f} sweeps/s)")
    print(f"speedup: {t_py / t_c:.2f}x")

    identical = np.array_equal(a_py, a_c) and np.array_equal(b_py, b_c)
    print(f"iterates bit-identical: {identical}")
    if not identical:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
