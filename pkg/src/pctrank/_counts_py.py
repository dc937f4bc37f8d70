"""Pure-Python counting kernel, used when the compiled extension is absent."""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Sequence


def below_tied(counts: Sequence[int]) -> tuple[list[int], list[int]]:
    """Per-member (strictly below, tied) counts within one reference set.

    Returns two lists aligned with the input order.
    """
    ordered = sorted(counts)
    below: list[int] = []
    tied: list[int] = []
    for c in counts:
        lo = bisect_left(ordered, c)
        hi = bisect_right(ordered, c)
        below.append(lo)
        tied.append(hi - lo)
    return below, tied
