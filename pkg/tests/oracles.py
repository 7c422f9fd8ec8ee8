"""Reference computations that share no code with the package."""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def _cartan(type_: str, n: int) -> list[list[int]]:
    # c[i][j] = <alpha_j, h_i>; written out independently of polymut.lie
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if type_ in ("A", "C"):
        for i in range(n - 1):
            c[i][i + 1] = c[i + 1][i] = -1
        if type_ == "C" and n >= 2:
            c[1][0] = -2
    return c


def positive_coroots(type_: str, n: int) -> list[tuple[int, ...]]:
    """Positive coroots in the simple-coroot basis, by closing the simple coroots under reflections."""
    c = _cartan(type_, n)
    # coroots form the root system with the transposed Cartan matrix
    ct = [[c[j][i] for j in range(n)] for i in range(n)]
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simple)
    todo = list(simple)
    while todo:
        beta = todo.pop()
        for i in range(n):
            pairing = sum(beta[j] * ct[i][j] for j in range(n))
            img = tuple(beta[k] - (pairing if k == i else 0) for k in range(n))
            if all(x >= 0 for x in img) and any(img) and img not in seen:
                seen.add(img)
                todo.append(img)
    return sorted(seen)


def weyl_dimension(type_: str, lam) -> int:
    """``prod <lam + rho, a^v> / <rho, a^v>`` over positive coroots."""
    n = len(lam)
    num = Fraction(1)
    for cor in positive_coroots(type_, n):
        num *= Fraction(sum(cor[i] * (lam[i] + 1) for i in range(n)), sum(cor))
    assert num.denominator == 1
    return int(num)


def gt_patterns_A(lam) -> int:
    """Count interlacing triangular arrays with top row ``(lam_{>=1}, ..., lam_{>=n}, 0)``."""
    n = len(lam)
    top = tuple(sum(lam[k:]) for k in range(n)) + (0,)

    def below(row):
        ranges = [range(row[j + 1], row[j] + 1) for j in range(len(row) - 1)]
        return product(*ranges)

    def count(row):
        if len(row) == 1:
            return 1
        return sum(count(nxt) for nxt in below(row))

    return count(top)


def gt_patterns_C(lam) -> int:
    """Count symplectic patterns: rows alternate a/b, each b row gets a trailing zero."""
    n = len(lam)
    top = tuple(sum(lam[: n - j]) for j in range(n)) + (0,)

    def interlace(row):
        return product(*[range(row[j + 1], row[j] + 1) for j in range(len(row) - 1)])

    def count_a(row_with_zero):
        # row_with_zero ends in the marker 0; the a row below has one entry fewer
        total = 0
        for a in interlace(row_with_zero):
            if len(a) == 1:
                total += 1
            else:
                total += count_b(a)
        return total

    def count_b(a_row):
        return sum(count_a(tuple(b) + (0,)) for b in interlace(a_row))

    return count_a(top)
