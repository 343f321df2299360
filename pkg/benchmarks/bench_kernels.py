"""Compare the numba and numpy log-domain kernels on random term arrays.

    python benchmarks/bench_kernels.py [--terms N] [--repeat R]
"""
import argparse
import time

import numpy as np

from germlab.orbitlab import _kernels


def _inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    base_log = rng.normal(0.0, 3.0, n)
    base_arg = rng.uniform(-np.pi, np.pi, n)
    scale = rng.integers(1, 10**6, n).astype(np.float64)
    frac = rng.integers(0, 7776, n) / 7776.0
    return base_log, base_arg, scale, frac


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    data = _inputs(args.terms)
    re_w, im_w = -1.0, 0.3

    def run_numpy():
        return _kernels.log_sum_numpy(*_kernels.log_terms_numpy(*data, re_w, im_w))

    results = {"numpy": (run_numpy(), _time(run_numpy, args.repeat))}
    try:
        nb_terms, nb_sum = _kernels._build_numba()
    except ImportError:
        print("numba not installed; numpy only")
    else:
        def run_numba():
            return nb_sum(*nb_terms(*data, re_w, im_w))

        run_numba()  # compile outside the timed region
        results["numba"] = (run_numba(), _time(run_numba, args.repeat))

    for name, ((lg, ph), secs) in results.items():
        print(f"{name:>6}: {secs * 1e3:9.3f} ms  log10|sum| = {lg:.12f}  arg = {ph:+.12f}")
    if len(results) == 2:
        (a, ta), (b, tb) = results["numpy"], results["numba"]
        print(f"speedup numba/numpy: {ta / tb:.2f}x, |delta log10| = {abs(a[0] - b[0]):.2e}")


if __name__ == "__main__":
    main()
