"""Benchmark the compiled counting kernel against the pure-Python fallback.

The below/tied counts are the hot loop of batch conversion: every document
in every reference set needs them before any percentile can be formed.

Usage: python benchmarks/bench_counts.py [--sizes 1000,10000,100000] [--repeats 5]
"""
from __future__ import annotations

import argparse
import random
import time

from pctrank import _counts_py

try:
    from pctrank import _counts_cy
except ImportError:
    _counts_cy = None


def synthetic_counts(rng: random.Random, n: int) -> list[int]:
    counts = []
    for _ in range(n):
        if rng.random() < 0.3:
            counts.append(0)
        else:
            c = 1
            while rng.random() < 0.6:
                c += 1
            counts.append(c)
    return counts


def time_kernel(kernel, counts: list[int], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        kernel(counts)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,10000,100000")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=2012)
    args = parser.parse_args()

    if _counts_cy is None:
        print("compiled kernel not built; run: pip install -e . --no-build-isolation")
        return 1

    rng = random.Random(args.seed)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'set size':>10}  {'pure (ms)':>10}  {'compiled (ms)':>13}  {'speedup':>8}")
    for n in sizes:
        counts = synthetic_counts(rng, n)
        pure = time_kernel(_counts_py.below_tied, counts, args.repeats)
        compiled = time_kernel(_counts_cy.below_tied, counts, args.repeats)

        got_pure = _counts_py.below_tied(counts)
        got_compiled = _counts_cy.below_tied(counts)
        assert got_pure == got_compiled, "kernels disagree"

        print(
            f"{n:>10}  {pure * 1e3:>10.2f}  {compiled * 1e3:>13.2f}"
            f"  {pure / compiled:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
