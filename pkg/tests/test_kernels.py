from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymut import _kernels_py, kernels


def brute(A, b, lo, hi):
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    return [
        p for p in product(*ranges) if all(sum(a * x for a, x in zip(row, p)) <= r for row, r in zip(A, b))
    ]


@st.composite
def systems(draw):
    n = draw(st.integers(1, 4))
    k = draw(st.integers(0, 5))
    A = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(k)]
    b = [draw(st.integers(-4, 6)) for _ in range(k)]
    lo = [draw(st.integers(-3, 1)) for _ in range(n)]
    hi = [l + draw(st.integers(-1, 4)) for l in lo]
    return A, b, lo, hi


@settings(max_examples=150)
@given(systems())
def test_python_kernel_matches_brute_force(system):
    A, b, lo, hi = system
    expected = brute(A, b, lo, hi)
    assert _kernels_py.enumerate_points(A, b, lo, hi) == expected
    assert _kernels_py.count_points(A, b, lo, hi) == len(expected)


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")
@settings(max_examples=150)
@given(systems())
def test_backends_agree(system):
    A, b, lo, hi = system
    assert kernels.enumerate_points(A, b, lo, hi, backend="compiled") == kernels.enumerate_points(
        A, b, lo, hi, backend="python"
    )
    assert kernels.count_points(A, b, lo, hi, backend="compiled") == kernels.count_points(
        A, b, lo, hi, backend="python"
    )


def test_huge_entries_fall_back_to_python():
    A = [[1 << 62, 0]]
    b = [1 << 62]
    assert kernels.count_points(A, b, [0, 0], [1, 2]) == len(brute(A, b, [0, 0], [1, 2]))


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_python_can_be_forced_at_import():
    import os
    import subprocess
    import sys

    env = dict(os.environ, POLYMUT_PURE_PYTHON="1")
    code = "from polymut import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
