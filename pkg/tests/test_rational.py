from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lcdbound.rational import (Q, RationalMatrix, clear_denominators, format_rational,
                               independent_rows_modp, nullspace_basis, parse_rational, rank, rref,
                               solve_linear)
from oracles import frac_rank

ints = st.integers(-40, 40)
rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 30))
small_matrix = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=6))


def test_coercion_and_text():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(Fraction(-4, 6)) == Q(-2, 3)
    assert format_rational(Q(-2, 3)) == "-2/3"
    assert format_rational(Q(5)) == "5"
    assert parse_rational(" 7 ") == 7
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(ValueError):
        parse_rational("1/0")


@given(rationals, rationals)
def test_exact_round_trip(p, q):
    p, q = Q(p), Q(q)
    assert (p + q) - q == p
    if q:
        assert (p * q) / q == p


@given(small_matrix)
@settings(max_examples=150)
def test_rank_matches_fraction_elimination(rows):
    assert rank(rows) == frac_rank(rows)
    assert rank(RationalMatrix.from_rows(rows)) == frac_rank(rows)


def test_rank_with_dependent_rows():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1], [0, 2, 2]]
    assert rank(rows) == 2
    assert rank([[0, 0]]) == 0


@given(small_matrix, st.data())
@settings(max_examples=100)
def test_solve_consistent(rows, data):
    cols = len(rows[0])
    x0 = data.draw(st.lists(ints, min_size=cols, max_size=cols))
    b = [sum(a * x for a, x in zip(r, x0)) for r in rows]
    x = solve_linear(rows, b)
    assert x is not None
    assert [sum(a * v for a, v in zip(r, x)) for r in rows] == b


def test_solve_inconsistent():
    assert solve_linear([[1, 1], [2, 2]], [1, 3]) is None
    assert solve_linear([[1, 0], [0, 1]], [Q(1, 3), 2]) == [Q(1, 3), 2]


@given(small_matrix)
@settings(max_examples=100)
def test_nullspace(rows):
    basis = nullspace_basis(rows)
    assert len(basis) == len(rows[0]) - frac_rank(rows)
    for v in basis:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in rows)


def test_rref_pivots():
    reduced, pivots = rref([[0, 2, 4], [1, 1, 1]])
    assert pivots == [0, 1]
    assert reduced == [[1, 0, -1], [0, 1, 2]]


@given(small_matrix)
@settings(max_examples=100)
def test_independent_rows_really_independent(rows):
    chosen = independent_rows_modp(rows)
    assert frac_rank([rows[i] for i in chosen]) == len(chosen) == frac_rank(rows)


def test_matrix_algebra():
    a = RationalMatrix.from_rows([[1, 2], [3, 4]])
    i = RationalMatrix.identity(2)
    assert a @ i == a
    assert (a - a) == RationalMatrix.zeros(2, 2)
    assert a.transpose()[0, 1] == 3
    assert (-a).scale(Q(1, 2))[1, 1] == -2
    assert a.apply([1, 1]) == [3, 7]
    with pytest.raises(ValueError):
        RationalMatrix(2, 2, [1, 2, 3])


def test_clear_denominators():
    coeffs, rhs = clear_denominators([Q(1, 2), Q(-1, 3)], Q(5, 6))
    assert coeffs == (3, -2) and rhs == 5
    coeffs, rhs = clear_denominators([4, 6], 2)
    assert coeffs == (2, 3) and rhs == 1
