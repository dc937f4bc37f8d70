"""Percentile ranks, below/tied counts, and uncertainty intervals.

For a member cited c times in a reference set of n documents, with
``below`` members cited strictly less and ``tied`` members cited exactly c
times (itself included):

* cited-less rule:           100 * below / n
* cited-less-or-equal rule:  100 * (below + tied) / n
* midpoint rule (default):   100 * (below + tied/2) / n

The first two are the bounds of the member's uncertainty interval; the
midpoint halves it. All arithmetic is exact rational.
"""
from __future__ import annotations

from fractions import Fraction

from .kernels import below_tied_counts
from .model import (
    CountingRule,
    QuantileResult,
    ReferenceSet,
    UncertaintyInterval,
)


def count_below_tied(ref_set: ReferenceSet, cited: int) -> tuple[int, int]:
    """Members cited strictly less than ``cited`` and members tied with it."""
    below = 0
    tied = 0
    for doc in ref_set.members:
        if doc.times_cited < cited:
            below += 1
        elif doc.times_cited == cited:
            tied += 1
    return below, tied


def uncertainty_interval(ref_set: ReferenceSet, cited: int) -> UncertaintyInterval:
    """Interval [100*below/n, 100*(below+tied)/n] for one times-cited value.

    ``cited`` must occur in the set: the interval is defined for members,
    which makes its width 100*tied/n strictly positive.
    """
    below, tied = count_below_tied(ref_set, cited)
    if tied < 1:
        raise ValueError(
            f"times-cited value {cited} does not occur in the reference set"
        )
    n = ref_set.n
    return UncertaintyInterval(Fraction(100 * below, n), Fraction(100 * (below + tied), n))


def percentile(ref_set: ReferenceSet, cited: int, rule: CountingRule) -> Fraction:
    """Percentile of a times-cited value under one counting rule."""
    below, tied = count_below_tied(ref_set, cited)
    if tied < 1:
        raise ValueError(
            f"times-cited value {cited} does not occur in the reference set"
        )
    n = ref_set.n
    if rule is CountingRule.CITED_LESS:
        return Fraction(100 * below, n)
    if rule is CountingRule.CITED_LESS_OR_EQUAL:
        return Fraction(100 * (below + tied), n)
    return Fraction(100 * (2 * below + tied), 2 * n)


def quantile_reference_set(ref_set: ReferenceSet) -> list[QuantileResult]:
    """All three percentile ranks for every member, in input order."""
    counts = [doc.times_cited for doc in ref_set.members]
    below, tied = below_tied_counts(counts)
    n = ref_set.n
    results = []
    for doc, b, t in zip(ref_set.members, below, tied):
        b = int(b)
        t = int(t)
        interval = UncertaintyInterval(
            Fraction(100 * b, n), Fraction(100 * (b + t), n)
        )
        results.append(
            QuantileResult(
                document_id=doc.id,
                group=ref_set.key,
                n=n,
                below=b,
                tied=t,
                p_cited_less=interval.lo,
                p_midpoint=Fraction(100 * (2 * b + t), 2 * n),
                p_cited_leq=interval.hi,
                interval=interval,
            )
        )
    return results
