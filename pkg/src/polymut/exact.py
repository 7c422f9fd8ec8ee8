"""Exact rational and integer linear algebra.

Scalars are :class:`fractions.Fraction` (or plain ``int``); vectors are tuples,
matrices are tuples of row tuples.  Linear maps act on row vectors from the
right, so the image of ``x`` under ``m`` is ``vec_mat(x, m)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction
IntVector = tuple  # tuple[int, ...]
RatVector = tuple  # tuple[Fraction, ...]
IntMatrix = tuple  # tuple[tuple[int, ...], ...]


class LinearAlgebraError(ValueError):
    pass


# --- scalars -----------------------------------------------------------------


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats are rejected."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {type(text).__name__} as an exact rational")
    s = text.strip()
    if any(c in s for c in ".eE"):
        raise ValueError(f"floating-point literal not allowed: {text!r}")
    return Fraction(s)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction_vector(v: Iterable) -> tuple:
    return tuple(Fraction(x) for x in v)


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v: Iterable) -> tuple:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise LinearAlgebraError(f"non-integral entry {x}")
        out.append(x.numerator)
    return tuple(out)


# --- vectors -----------------------------------------------------------------


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def unit_vector(n: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(n))


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive_part(v: Sequence[int]) -> tuple[tuple, int]:
    """Split a nonzero integer vector as ``scale * primitive``.

    >>> primitive_part((2, 4, -6))
    ((1, 2, -3), 2)
    """
    v = to_int_vector(v)
    c = vector_gcd(v)
    if c == 0:
        raise LinearAlgebraError("primitive_part of the zero vector")
    return tuple(x // c for x in v), c


def primitive_integer_direction(v: Sequence) -> tuple:
    """Smallest integer vector that is a positive multiple of the rational ``v``."""
    fr = as_fraction_vector(v)
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    c = vector_gcd(ints)
    if c == 0:
        raise LinearAlgebraError("zero vector has no direction")
    return tuple(x // c for x in ints)


# --- matrices ----------------------------------------------------------------


def identity(n: int) -> tuple:
    return tuple(unit_vector(n, i) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m)) if m else ()


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    if not m:
        return ()
    ncols = len(m[0])
    return tuple(sum((v[i] * m[i][j] for i in range(len(m))), 0) for j in range(ncols))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(vec_mat(row, b) for row in a)


def _check_square(m: Sequence[Sequence]) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise LinearAlgebraError("matrix is not square")
    return n


def det(m: Sequence[Sequence]):
    """Determinant; Bareiss fraction-free elimination for integer input."""
    n = _check_square(m)
    if n == 0:
        return 1
    integral = all(isinstance(x, int) or Fraction(x).denominator == 1 for row in m for x in row)
    if integral:
        a = [[int(x) for x in row] for row in m]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
    a = [[Fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return result


def is_unimodular(m: Sequence[Sequence]) -> bool:
    """True iff ``m`` is an integer square matrix with determinant +-1."""
    _check_square(m)
    if not all(Fraction(x).denominator == 1 for row in m for x in row):
        return False
    return det(m) in (1, -1)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Canonical rational basis of ``{x : rows . x = 0}`` (one vector per free column)."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> tuple | None:
    """Some solution ``x`` of ``m . x = b`` (column convention), or None if inconsistent."""
    n = len(m[0]) if m else 0
    aug = [list(row) + [rhs] for row, rhs in zip(m, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = red[r][n]
    return tuple(x)


def inverse(m: Sequence[Sequence]) -> tuple:
    n = _check_square(m)
    aug = [[Fraction(x) for x in row] + list(unit_vector(n, i)) for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise LinearAlgebraError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def integer_inverse(m: Sequence[Sequence]) -> tuple:
    inv = inverse(m)
    return tuple(to_int_vector(row) for row in inv)


# --- Hermite normal form -----------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[tuple, tuple]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U . m = H``.  ``H`` is in
    row echelon form, pivots are positive, entries above a pivot lie in
    ``[0, pivot)``, and zero rows come last.  The rows of ``U`` matching the
    zero rows of ``H`` are a basis of the integer left kernel of ``m``.
    """
    if not m or not m[0]:
        raise LinearAlgebraError("hermite_normal_form of an empty matrix")
    rows = len(m)
    cols = len(m[0])
    h = [[int(Fraction(x)) if Fraction(x).denominator == 1 else _nonint(x) for x in row] for row in m]
    u = [list(r) for r in identity(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # gcd-combine column c into row r
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return tuple(tuple(row) for row in h), tuple(tuple(row) for row in u)


def _nonint(x):
    raise LinearAlgebraError(f"non-integral entry {x} in integer matrix")


def integer_rank(m: Sequence[Sequence[int]]) -> int:
    h, _ = hermite_normal_form(m)
    return sum(1 for row in h if any(row))


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> tuple[tuple, tuple]:
    """Saturated integer basis of ``{x in Z^ncols : m . x = 0}`` and a unimodular completion.

    Returns ``(basis, completion)`` where ``completion`` is an ``ncols x ncols``
    unimodular matrix whose first ``len(basis)`` rows are ``basis``.
    """
    if not m:
        eye = identity(ncols)
        return eye, eye
    h, u = hermite_normal_form(transpose(m))
    zero = [i for i, row in enumerate(h) if not any(row)]
    nonzero = [i for i, row in enumerate(h) if any(row)]
    basis = tuple(u[i] for i in zero)
    completion = tuple(u[i] for i in zero + nonzero)
    return basis, completion
