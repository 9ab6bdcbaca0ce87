"""Compositions of n into four parts, binomials, Krawtchuk polynomials and
linear substitutions acting on degree-n monomials in four variables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from .rational import Q, RationalMatrix


class Composition(NamedTuple):
    """Coordinate-pair profile of a pair of binary words.

    ``n00, n01, n10, n11`` count positions where ``(u_i, v_i)`` equals
    (0,0), (0,1), (1,0), (1,1); they are the exponents of a, b, c, d.
    """

    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def n(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    def label(self) -> str:
        return f"M({self.n00},{self.n01},{self.n10},{self.n11})"


def binomial(n: int, r: int) -> int:
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


@lru_cache(maxsize=None)
def enumerate_compositions(n: int) -> tuple[Composition, ...]:
    """All compositions of ``n`` into four nonnegative parts, in descending
    lexicographic order starting from ``(n, 0, 0, 0)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    for i in range(n, -1, -1):
        for j in range(n - i, -1, -1):
            for k in range(n - i - j, -1, -1):
                out.append(Composition(i, j, k, n - i - j - k))
    return tuple(out)


@lru_cache(maxsize=None)
def composition_index(n: int) -> dict[Composition, int]:
    return {m: idx for idx, m in enumerate(enumerate_compositions(n))}


@dataclass(frozen=True)
class KrawtchukTable:
    n: int
    values: tuple[tuple[int, ...], ...]

    def __call__(self, i: int, x: int) -> int:
        return self.values[i][x]


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


@lru_cache(maxsize=None)
def krawtchuk_table(n: int) -> KrawtchukTable:
    """``values[i][x]`` is the coefficient of ``z**i`` in
    ``(1+z)**(n-x) * (1-z)**x``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    columns = []
    for x in range(n + 1):
        poly = [1]
        for _ in range(n - x):
            poly = _poly_mul(poly, [1, 1])
        for _ in range(x):
            poly = _poly_mul(poly, [1, -1])
        columns.append(poly)
    values = tuple(tuple(columns[x][i] for x in range(n + 1)) for i in range(n + 1))
    return KrawtchukTable(n, values)


def _integer_scaling(matrix: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    rows = [[Q(x) for x in r] for r in matrix]
    den = 1
    for r in rows:
        for x in r:
            den = math.lcm(den, int(x.denominator))
    return [[int(x * den) for x in r] for r in rows], den


def substitution_columns(matrix, degree: int) -> tuple[list[dict[int, int]], int]:
    """Expand every degree-``degree`` monomial under ``x_t <- sum_s g[t][s] x_s``.

    Returns one sparse column per composition (index -> integer coefficient)
    together with a scale ``s``; the true coefficients are the returned ones
    divided by ``s**degree``. Built degree by degree: the expansion of
    ``m`` is that of ``m - e_t`` times the linear form of the last nonzero
    part ``t``.
    """
    if isinstance(matrix, RationalMatrix):
        matrix = matrix.tolist()
    forms, scale = _integer_scaling(matrix)
    linear = [[(s, c) for s, c in enumerate(form) if c] for form in forms]
    layer: list[dict[int, int]] = [{0: 1}]
    for deg in range(1, degree + 1):
        prev_index = composition_index(deg - 1)
        index = composition_index(deg)
        prev_succ = [
            [index[tuple(m[i] + (i == s) for i in range(4))] for s in range(4)]
            for m in enumerate_compositions(deg - 1)
        ]
        nxt = []
        for m in enumerate_compositions(deg):
            t = max(i for i in range(4) if m[i])
            prev = layer[prev_index[tuple(m[i] - (i == t) for i in range(4))]]
            acc: dict[int, int] = {}
            for mono, coeff in prev.items():
                succ = prev_succ[mono]
                for s, c in linear[t]:
                    key = succ[s]
                    acc[key] = acc.get(key, 0) + coeff * c
            nxt.append({key: v for key, v in acc.items() if v})
        layer = nxt
    return layer, scale


def substitution_matrix(matrix, degree: int) -> RationalMatrix:
    """Matrix ``S`` with ``S[m, m']`` the coefficient of monomial ``m`` after
    substituting the change of variables into monomial ``m'``."""
    columns, scale = substitution_columns(matrix, degree)
    size = len(columns)
    denom = scale ** degree
    grid = [[0] * size for _ in range(size)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            grid[i][j] = Q(v, denom)
    return RationalMatrix.from_rows(grid, size)


TWO_H = ((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1))


@lru_cache(maxsize=None)
def macwilliams_columns(n: int) -> tuple[tuple[dict[int, int], ...], int]:
    """Sparse integer columns of the joint MacWilliams transform and its
    common denominator ``2**n``."""
    columns, _ = substitution_columns(TWO_H, n)
    return tuple(columns), 2 ** n


def macwilliams_monomial_matrix(n: int) -> RationalMatrix:
    """Coefficient map of ``J -> 2**-n J(a+b+c+d, a+b-c-d, a-b+c-d, a-b-c+d)``
    in the basis of ``enumerate_compositions(n)``."""
    columns, denom = macwilliams_columns(n)
    size = len(columns)
    grid = [[0] * size for _ in range(size)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            grid[i][j] = Q(v, denom)
    return RationalMatrix.from_rows(grid, size)
