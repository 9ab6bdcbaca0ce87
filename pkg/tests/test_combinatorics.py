from math import comb

import pytest
from hypothesis import given, strategies as st

from lcdbound.combinatorics import (TWO_H, Composition, binomial, composition_index,
                                    enumerate_compositions, krawtchuk_table,
                                    macwilliams_monomial_matrix, substitution_matrix)
from lcdbound.gf2 import BinaryCode, dual, joint_enumerator
from lcdbound.rational import Q, RationalMatrix
from oracles import krawtchuk_direct, substitute_monomial


@pytest.mark.parametrize("n", range(0, 17))
def test_composition_count_and_order(n):
    comps = enumerate_compositions(n)
    assert len(comps) == comb(n + 3, 3)
    assert comps[0] == (n, 0, 0, 0)
    assert list(comps) == sorted(comps, reverse=True)
    assert all(c.n == n for c in comps)
    assert composition_index(n)[comps[-1]] == len(comps) - 1


def test_n16_has_969_monomials():
    assert len(enumerate_compositions(16)) == 969


def test_composition_label():
    assert Composition(1, 0, 2, 0).label() == "M(1,0,2,0)"


def test_binomial_edges():
    assert binomial(5, 2) == 10
    assert binomial(3, 4) == 0
    assert binomial(3, -1) == 0


@given(st.integers(0, 14), st.data())
def test_krawtchuk_matches_sum_formula(n, data):
    i = data.draw(st.integers(0, n))
    x = data.draw(st.integers(0, n))
    assert krawtchuk_table(n)(i, x) == krawtchuk_direct(n, i, x)


def test_krawtchuk_small_values():
    kt = krawtchuk_table(3)
    assert kt(1, 1) == 1
    assert kt(2, 1) == -1
    assert [kt(i, 0) for i in range(4)] == [1, 3, 3, 1]


def test_macwilliams_n1():
    t = macwilliams_monomial_matrix(1)
    assert t == RationalMatrix.from_rows([[Q(x, 2) for x in row] for row in TWO_H]).transpose()


def test_macwilliams_against_direct_expansion():
    n = 3
    t = macwilliams_monomial_matrix(n)
    comps = enumerate_compositions(n)
    index = composition_index(n)
    for j, m in enumerate(comps):
        expansion = substitute_monomial(TWO_H, m)
        for i in range(len(comps)):
            expected = expansion.get(tuple(comps[i]), 0) / 2 ** n
            assert t[i, j] == expected
        assert set(expansion) <= {tuple(c) for c in index}


@pytest.mark.parametrize("n", range(1, 7))
def test_macwilliams_is_involution(n):
    t = macwilliams_monomial_matrix(n)
    assert t @ t == RationalMatrix.identity(t.rows)


def test_general_substitution_matches_oracle():
    g = [[1, 2, 0, 0], [0, 1, 0, -1], [Q(1, 2), 0, 1, 0], [0, 0, 0, 3]]
    s = substitution_matrix(g, 2)
    comps = enumerate_compositions(2)
    for j, m in enumerate(comps):
        expansion = substitute_monomial(g, m)
        for i, c in enumerate(comps):
            assert s[i, j] == expansion.get(tuple(c), 0)


def test_parity_enumerator_is_fixed_point():
    code = BinaryCode.parity_check(3)
    v = [Q(x) for x in joint_enumerator(code, dual(code)).vector()]
    assert macwilliams_monomial_matrix(3).apply(v) == v
