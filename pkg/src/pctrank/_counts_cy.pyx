# distutils: language = c++
"""Compiled counting kernel for the batch percentile hot loop."""
from libcpp.algorithm cimport lower_bound, sort, upper_bound
from libcpp.vector cimport vector


def below_tied(counts):
    """Per-member (strictly below, tied) counts within one reference set.

    Returns two lists aligned with the input order. Counts must fit in a
    signed 64-bit integer; the dispatcher falls back to the pure-Python
    kernel when they do not.
    """
    cdef Py_ssize_t n = len(counts)
    cdef vector[long long] ordered
    ordered.reserve(n)
    cdef long long c
    for value in counts:
        c = value
        ordered.push_back(c)
    sort(ordered.begin(), ordered.end())

    below = []
    tied = []
    cdef Py_ssize_t lo, hi
    for value in counts:
        c = value
        lo = lower_bound(ordered.begin(), ordered.end(), c) - ordered.begin()
        hi = upper_bound(ordered.begin(), ordered.end(), c) - ordered.begin()
        below.append(lo)
        tied.append(hi - lo)
    return below, tied
