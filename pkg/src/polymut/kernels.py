"""Backend selection for the lattice-point kernels.

The compiled extension is used when it imported successfully and the
instance fits comfortably in int64; otherwise the pure-Python kernel runs.
Set ``POLYMUT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("POLYMUT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend forced by environment")
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

_INT64_HEADROOM = 1 << 60


def _fits_int64(A, b, lo, hi) -> bool:
    reach = max([abs(x) for x in lo] + [abs(x) for x in hi] + [1])
    for row, rhs in zip(A, b):
        if sum(abs(a) for a in row) * reach + abs(rhs) + reach >= _INT64_HEADROOM:
            return False
    return True


def _backend(A, b, lo, hi, backend: str | None):
    if backend == "python" or _compiled is None:
        return _kernels_py
    if backend == "compiled" or _fits_int64(A, b, lo, hi):
        return _compiled
    return _kernels_py


def enumerate_points(A, b, lo, hi, backend: str | None = None) -> list[tuple[int, ...]]:
    """Integer points of ``{lo <= x <= hi, A x <= b}`` in lexicographic order."""
    return _backend(A, b, lo, hi, backend).enumerate_points(A, b, lo, hi)


def count_points(A, b, lo, hi, backend: str | None = None) -> int:
    return _backend(A, b, lo, hi, backend).count_points(A, b, lo, hi)
