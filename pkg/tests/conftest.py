"""Shared helpers: set builders and independent brute-force oracles."""
from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from pctrank.model import Document, GroupKey, ReferenceSet

DATA_DIR = Path(__file__).parent / "data"


def make_set(counts, **attrs) -> ReferenceSet:
    """Reference set with one document per citation count, in given order."""
    docs = tuple(
        Document(id=f"d{i}", times_cited=c, **attrs) for i, c in enumerate(counts)
    )
    return ReferenceSet(GroupKey(), docs)


def brute_below_tied(counts):
    """Quadratic-scan oracle for per-member (below, tied) counts."""
    below = [sum(1 for other in counts if other < c) for c in counts]
    tied = [sum(1 for other in counts if other == c) for c in counts]
    return below, tied


def random_counts(rng: random.Random, n: int) -> list[int]:
    """Zero-inflated geometric citation counts, the shape real batches have."""
    counts = []
    for _ in range(n):
        if rng.random() < 0.3:
            counts.append(0)
        else:
            c = 0
            while rng.random() < 0.6:
                c += 1
            counts.append(1 + c)
    return counts


def enumerate_wplus_tails(n: int, w_plus: int) -> Fraction:
    """Exhaustive two-sided p over all 2^n sign assignments of ranks 1..n."""
    total = 1 << n
    upper = 0
    lower = 0
    for mask in range(total):
        w = 0
        for rank in range(1, n + 1):
            if mask & (1 << (rank - 1)):
                w += rank
        if w >= w_plus:
            upper += 1
        if w <= w_plus:
            lower += 1
    p = Fraction(2 * min(upper, lower), total)
    return min(Fraction(1), p)
