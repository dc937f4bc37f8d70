"""Kernel selection: compiled counting core when available, pure Python otherwise.

Set ``PCTRANK_PURE_PYTHON=1`` in the environment to force the fallback.
Both kernels return identical integer counts, so results never depend on
which one is active.
"""
from __future__ import annotations

import os
from typing import Sequence

from . import _counts_py

_compiled = None
if os.environ.get("PCTRANK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _counts_cy as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure-python"


def below_tied_counts(counts: Sequence[int]) -> tuple[list[int], list[int]]:
    """Per-member (strictly below, tied) counts, aligned with input order."""
    if _compiled is not None:
        try:
            return _compiled.below_tied(counts)
        except OverflowError:
            pass  # counts beyond int64: retake in arbitrary precision
    return _counts_py.below_tied(counts)
