#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot paths (batched masked dominant eigenvalue, Brandes
betweenness) plus one end-to-end targeted-enumeration run per backend.

Usage:
    python benchmarks/bench_kernels.py [--sizes 200,500] [--batch 2000]
"""

import argparse
import time

import numpy as np

from netdis import newman_watts, random_baseline, targeted_enumeration
from netdis._kernels import _fallback

try:
    from netdis._kernels import _speedups
except ImportError:
    _speedups = None


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lambda1(g, batch, impl):
    rng = np.random.default_rng(0)
    sets = np.array([sorted(rng.choice(g.n, 5, replace=False))
                     for _ in range(batch)], dtype=np.int32)
    dt = time_call(impl.lambda1_batch, g.indptr, g.indices, g.n, sets)
    return dt / batch


def bench_brandes(g, impl):
    return time_call(impl.brandes_betweenness, g.indptr, g.indices, g.n,
                     repeats=2)


def bench_te(g):
    # the evaluator picks its kernel at import; this times whichever backend
    # the current process loaded
    baseline = random_baseline(g, 5, trials=50, seed=1, method="approx")
    t0 = time.perf_counter()
    targeted_enumeration(g, 5, 0.05, method="approx", baseline=baseline)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,500",
                        help="comma-separated node counts")
    parser.add_argument("--batch", type=int, default=2000,
                        help="subsets per eigenvalue batch")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    impls = [("pure-python", _fallback)]
    if _speedups is not None:
        impls.insert(0, ("compiled", _speedups))
    else:
        print("note: compiled extension unavailable, timing fallback only")

    print(f"{'kernel':<28}{'N':>6}  {'compiled':>12}  {'pure-python':>12}  {'speedup':>8}")
    for n in sizes:
        g = newman_watts(n, 6, 0.2, seed=42)
        rows = {}
        for name, impl in impls:
            rows[name] = (bench_lambda1(g, args.batch, impl),
                          bench_brandes(g, impl))
        for label, idx, unit in (("lambda1_batch (per eval)", 0, 1e6),
                                 ("brandes_betweenness", 1, 1e3)):
            c = rows.get("compiled", (None, None))[idx]
            p = rows["pure-python"][idx]
            suffix = "us" if unit == 1e6 else "ms"
            cs = f"{c * unit:.1f} {suffix}" if c is not None else "-"
            ratio = f"{p / c:.1f}x" if c else "-"
            print(f"{label:<28}{n:>6}  {cs:>12}  {p * unit:>9.1f} {suffix}  {ratio:>8}")

    g = newman_watts(sizes[0], 6, 0.2, seed=42)
    print(f"\nend-to-end targeted enumeration on N={sizes[0]} "
          f"(n=5, alpha=0.05), current backend:")
    print(f"  {bench_te(g):.2f} s")
    print("set NETDIS_PURE_PYTHON=1 and rerun to time the fallback end to end")


if __name__ == "__main__":
    main()
