"""Both counting kernels against a brute-force oracle and each other."""
from __future__ import annotations

import random
import subprocess
import sys

import pytest

from pctrank import kernels
from pctrank import _counts_py

from conftest import brute_below_tied, random_counts

try:
    from pctrank import _counts_cy
except ImportError:
    _counts_cy = None

BACKENDS = [pytest.param(_counts_py.below_tied, id="pure")]
if _counts_cy is not None:
    BACKENDS.append(pytest.param(_counts_cy.below_tied, id="compiled"))


@pytest.mark.parametrize("kernel", BACKENDS)
def test_kernel_matches_brute_force(kernel):
    rng = random.Random(20120406)
    for _ in range(50):
        counts = random_counts(rng, rng.randint(1, 80))
        below, tied = kernel(counts)
        exp_below, exp_tied = brute_below_tied(counts)
        assert list(below) == exp_below
        assert list(tied) == exp_tied


@pytest.mark.parametrize("kernel", BACKENDS)
def test_kernel_handles_all_tied(kernel):
    below, tied = kernel([5, 5, 5])
    assert list(below) == [0, 0, 0]
    assert list(tied) == [3, 3, 3]


@pytest.mark.skipif(_counts_cy is None, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(7)
    for _ in range(30):
        counts = random_counts(rng, rng.randint(1, 200))
        assert _counts_cy.below_tied(counts) == _counts_py.below_tied(counts)


def test_dispatcher_survives_counts_beyond_int64():
    counts = [2**70, 3, 2**70, 0]
    below, tied = kernels.below_tied_counts(counts)
    assert list(below) == [2, 1, 2, 0]
    assert list(tied) == [2, 1, 2, 1]


def test_env_var_forces_pure_backend():
    import os

    code = "import pctrank.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, PCTRANK_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.stdout.strip() == "pure-python"
