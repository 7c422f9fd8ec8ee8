from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymut.exact import (
    LinearAlgebraError,
    det,
    format_rational,
    hermite_normal_form,
    integer_kernel,
    integer_rank,
    inverse,
    is_unimodular,
    mat_mul,
    nullspace,
    parse_rational,
    primitive_integer_direction,
    primitive_part,
    rank,
    solve,
    vec_mat,
)

small = st.integers(min_value=-6, max_value=6)
fractions = st.fractions(max_denominator=12).filter(lambda q: abs(q) < 100)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(fractions)
def test_rational_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("text", ["1.5", "2e3", "1E-1"])
def test_floats_rejected(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_parse_forms():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(" 7 ") == 7
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(TypeError):
        parse_rational(1.5)


def test_primitive_helpers():
    assert primitive_part((2, 4, -6)) == ((1, 2, -3), 2)
    assert primitive_integer_direction((Fraction(1, 2), Fraction(-1, 3))) == (3, -2)
    with pytest.raises(LinearAlgebraError):
        primitive_part((0, 0))


def test_det_small():
    assert det([[2, 1], [1, 1]]) == 1
    assert det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert is_unimodular([[0, 1], [1, 0]])
    assert not is_unimodular([[2, 0], [0, 1]])


@given(matrices(3, 3))
def test_inverse_when_regular(m):
    if det(m) == 0:
        with pytest.raises(LinearAlgebraError):
            inverse(m)
        return
    inv = inverse(m)
    assert mat_mul(m, inv) == tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


@given(matrices(3, 4))
def test_nullspace_and_solve(m):
    for v in nullspace(m, 4):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
    assert len(nullspace(m, 4)) == 4 - rank(m)
    b = [sum(row) for row in m]
    x = solve(m, b)
    assert x is not None
    assert [sum(a * y for a, y in zip(row, x)) for row in m] == b


@settings(max_examples=80)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_hermite_normal_form(m):
    h, u = hermite_normal_form(m)
    assert is_unimodular(u)
    assert mat_mul(u, m) == h
    last_pivot = -1
    seen_zero = False
    for i, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero
        p = nz[0]
        assert p > last_pivot and row[p] > 0
        for k in range(i):
            assert 0 <= h[k][p] < row[p]
        last_pivot = p
    assert integer_rank(m) == rank(m)


@settings(max_examples=60)
@given(st.integers(1, 3).flatmap(lambda r: matrices(r, 4)))
def test_integer_kernel(m):
    basis, completion = integer_kernel(m, 4)
    assert len(basis) == 4 - rank(m)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
    assert is_unimodular(completion)
    assert completion[: len(basis)] == basis


def test_vec_mat_row_convention():
    assert vec_mat((1, 2), [[1, 0, 1], [0, 1, 1]]) == (1, 2, 3)
