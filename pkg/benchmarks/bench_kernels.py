#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python reference backend.

Both backends are bit-identical by contract; this script verifies that on
each workload while measuring the speedup. Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from seqbatch import _kernels_py as pure
from seqbatch.kernels import derive_state

try:
    from seqbatch import _kernels as compiled
except ImportError:
    compiled = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_shuffle(impl, n=200_000):
    arr = np.arange(n, dtype=np.int64)
    elapsed, _ = time_call(lambda: impl.fisher_yates(arr.copy(), derive_state(1)))
    check = np.arange(n, dtype=np.int64)
    impl.fisher_yates(check, derive_state(1))
    return elapsed, check


def bench_assign(impl, n=500_000):
    rng = np.random.default_rng(0)
    lengths = rng.integers(1, 3000, size=n).astype(np.int64)
    edges = np.asarray(sorted(rng.choice(np.arange(2, 3000), size=24, replace=False)),
                       dtype=np.int64)
    elapsed, result = time_call(lambda: impl.assign_buckets(lengths, edges))
    return elapsed, result


def bench_pack(impl, n=500_000):
    rng = np.random.default_rng(1)
    lengths = rng.integers(1, 400, size=n).astype(np.int64)
    elapsed, result = time_call(lambda: impl.greedy_budget_ends(lengths, 5000, True))
    return elapsed, result


def bench_same_bin(impl, trials=100_000):
    elapsed, result = time_call(lambda: impl.same_bin_trials(12, 3, trials, derive_state(9)))
    return elapsed, result


BENCHES = [
    ("fisher_yates shuffle (200k)", bench_shuffle),
    ("assign_buckets (500k x 24 edges)", bench_assign),
    ("greedy_budget_ends (500k)", bench_pack),
    ("same_bin_trials (100k x M=12)", bench_same_bin),
]


def main():
    if compiled is None:
        print("compiled backend not available; showing pure-Python timings only")
    print(f"{'kernel':<36} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>9}")
    for name, bench in BENCHES:
        pure_time, pure_result = bench(pure)
        if compiled is None:
            print(f"{name:<36} {pure_time:>10.4f} {'-':>13} {'-':>9}")
            continue
        fast_time, fast_result = bench(compiled)
        if isinstance(pure_result, np.ndarray):
            assert np.array_equal(pure_result, fast_result), f"{name}: backends diverge"
        else:
            assert pure_result == fast_result, f"{name}: backends diverge"
        print(f"{name:<36} {pure_time:>10.4f} {fast_time:>13.4f} "
              f"{pure_time / fast_time:>8.1f}x")
    if compiled is not None:
        print("all outputs bit-identical across backends")


if __name__ == "__main__":
    main()
