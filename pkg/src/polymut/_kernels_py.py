"""Pure-Python lattice-point enumeration (reference kernel and fallback).

Both kernels solve the same problem: list or count the integer points ``x``
with ``lo <= x <= hi`` and ``A x <= b`` (all integers).  Coordinates are
fixed left to right; at each level the admissible interval for the current
coordinate is tightened using the minimum the remaining coordinates can
contribute, so the last coordinate is never scanned point by point.
"""

from __future__ import annotations


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _rest_min(A, lo, hi):
    k = len(A)
    m = len(lo)
    rest = [[0] * m for _ in range(k)]
    for i in range(k):
        acc = 0
        for j in range(m - 1, -1, -1):
            rest[i][j] = acc
            a = A[i][j]
            acc += min(a * lo[j], a * hi[j])
    return rest


def _walk(A, b, lo, hi, emit_range):
    """Call ``emit_range(prefix, low, high)`` for every feasible last-coordinate run."""
    k = len(A)
    m = len(lo)
    if m == 0:
        if all(bi >= 0 for bi in b):
            emit_range(None, 0, 0)
        return
    rest = _rest_min(A, lo, hi)
    cur = [0] * m

    def level(l, s):
        low, high = lo[l], hi[l]
        for i in range(k):
            a = A[i][l]
            slack = b[i] - s[i] - rest[i][l]
            if a > 0:
                high = min(high, _floor_div(slack, a))
            elif a < 0:
                low = max(low, _ceil_div(slack, a))
            elif slack < 0:
                return
            if low > high:
                return
        if low > high:
            return
        if l == m - 1:
            emit_range(cur, low, high)
            return
        col = [A[i][l] for i in range(k)]
        for x in range(low, high + 1):
            cur[l] = x
            level(l + 1, [s[i] + col[i] * x for i in range(k)])

    level(0, [0] * k)


def enumerate_points(A, b, lo, hi) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def emit(cur, low, high):
        if cur is None:
            out.append(())
            return
        head = tuple(cur[:-1])
        out.extend(head + (x,) for x in range(low, high + 1))

    _walk(A, b, lo, hi, emit)
    return out


def count_points(A, b, lo, hi) -> int:
    counter = [0]

    def bump(cur, low, high):
        counter[0] += high - low + 1

    _walk(A, b, lo, hi, bump)
    return counter[0]
