"""One-sample Wilcoxon signed-rank tests against fixed baselines.

Percentile batches are tested against 50 (the median of a uniform
percentile) and class scores against the scheme's random-attribution
expectation. The exact method enumerates the full rank-sum distribution by
dynamic programming; larger or tied samples use the normal approximation
with tie-corrected variance.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import erfc, sqrt
from typing import Iterable, Sequence

from .binning import scheme_expected_value
from .model import (
    ClassScheme,
    CountingRule,
    QuantileResult,
    WilcoxonMethod,
    WilcoxonResult,
)

#: Largest tie-free sample tested with the exact rank-sum distribution.
EXACT_LIMIT = 25


@lru_cache(maxsize=64)
def exact_wplus_counts(n: int) -> tuple[int, ...]:
    """Number of sign assignments of ranks 1..n reaching each W+ value.

    Entry w counts the subsets of {1, .., n} that sum to w; dividing by 2^n
    gives the null distribution of the positive rank sum.
    """
    total = n * (n + 1) // 2
    counts = [0] * (total + 1)
    counts[0] = 1
    for rank in range(1, n + 1):
        for w in range(total, rank - 1, -1):
            counts[w] += counts[w - rank]
    return tuple(counts)


def exact_two_sided_p(n: int, w_plus: int) -> Fraction:
    """Exact two-sided p for an integer rank sum: doubled smaller tail, capped at 1."""
    counts = exact_wplus_counts(n)
    upper = sum(counts[w_plus:])
    lower = sum(counts[: w_plus + 1])
    p = Fraction(2 * min(upper, lower), 2**n)
    return min(Fraction(1), p)


def _midranks(magnitudes: Sequence[Fraction]) -> tuple[list[Fraction], list[int]]:
    """Ranks of the magnitudes with mid-ranks for ties, plus tie-group sizes."""
    n = len(magnitudes)
    order = sorted(range(n), key=lambda i: magnitudes[i])
    ranks: list[Fraction] = [Fraction(0)] * n
    group_sizes: list[int] = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        midrank = Fraction(i + 1 + j + 1, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        group_sizes.append(j - i + 1)
        i = j + 1
    return ranks, group_sizes


def wilcoxon_signed_rank(
    values: Iterable, mu0, method: WilcoxonMethod | None = None
) -> WilcoxonResult:
    """Test whether ``values`` are symmetric around ``mu0``.

    Differences of zero are dropped. By default the p value comes from the
    exact W+ distribution when at most EXACT_LIMIT differences remain and
    none tie in magnitude, and otherwise from the normal approximation with
    variance n(n+1)(2n+1)/24 - sum(t^3 - t)/48 over tie groups. Passing
    ``method`` forces one path (the exact path refuses tied magnitudes,
    whose mid-ranks are fractional). The approximate tail is
    continuity-corrected, while the reported z statistic is the plain
    standardized rank sum.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be nonempty")
    center = Fraction(mu0)
    diffs = [Fraction(v) - center for v in values]
    diffs = [d for d in diffs if d != 0]
    n = len(diffs)
    if n == 0:
        return WilcoxonResult(
            n_nonzero=0,
            w_plus=0.0,
            w_minus=0.0,
            statistic_z=None,
            p_two_sided=1.0,
            method=WilcoxonMethod.EXACT,
        )

    ranks, group_sizes = _midranks([abs(d) for d in diffs])
    w_plus = sum((r for d, r in zip(diffs, ranks) if d > 0), Fraction(0))
    w_minus = Fraction(n * (n + 1), 2) - w_plus
    tie_free = all(size == 1 for size in group_sizes)

    if method is WilcoxonMethod.EXACT and not tie_free:
        raise ValueError("exact method requires integer ranks (no tied magnitudes)")
    use_exact = (
        method is WilcoxonMethod.EXACT
        if method is not None
        else tie_free and n <= EXACT_LIMIT
    )
    if use_exact:
        p = exact_two_sided_p(n, int(w_plus))
        return WilcoxonResult(
            n_nonzero=n,
            w_plus=float(w_plus),
            w_minus=float(w_minus),
            statistic_z=None,
            p_two_sided=float(p),
            method=WilcoxonMethod.EXACT,
        )

    mean = Fraction(n * (n + 1), 4)
    tie_term = sum(t**3 - t for t in group_sizes)
    variance = Fraction(n * (n + 1) * (2 * n + 1), 24) - Fraction(tie_term, 48)
    sigma = sqrt(variance)
    z = float(w_plus - mean) / sigma
    shifted = max(0.0, abs(float(w_plus - mean)) - 0.5)
    one_sided = 0.5 * erfc(shifted / sigma / sqrt(2.0))
    return WilcoxonResult(
        n_nonzero=n,
        w_plus=float(w_plus),
        w_minus=float(w_minus),
        statistic_z=z,
        p_two_sided=min(1.0, 2.0 * one_sided),
        method=WilcoxonMethod.NORMAL_APPROX,
    )


def test_percentiles_vs_median(
    results: Sequence[QuantileResult], rule: CountingRule
) -> WilcoxonResult:
    """Test a batch of percentile ranks against the uniform median of 50."""
    if not results:
        raise ValueError("results must be nonempty")
    return wilcoxon_signed_rank([r.percentile(rule) for r in results], 50)


def test_scores_vs_baseline(
    scores: Sequence, scheme: ClassScheme
) -> WilcoxonResult:
    """Test class scores against the scheme's random-attribution expectation."""
    if not len(scores):
        raise ValueError("scores must be nonempty")
    return wilcoxon_signed_rank(scores, scheme_expected_value(scheme))
