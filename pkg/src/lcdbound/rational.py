"""Exact rational scalars and dense rational linear algebra.

Scalars are GMP rationals (``gmpy2.mpq``): always reduced, denominator
positive, interoperable with ``int`` and ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def Q(value, denominator=None) -> Rational:
    """Coerce ``value`` (int, Fraction, mpq, or ``"p/q"`` string) to a rational."""
    if denominator is not None:
        return mpq(value, denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an exact value")
    return mpq(value)


def format_rational(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


def parse_rational(text: str) -> Rational:
    text = text.strip()
    if "/" in text:
        p, s = text.split("/", 1)
        den = int(s)
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return mpq(int(p), den)
    return mpq(int(text))


def dot(u: Sequence, v: Sequence):
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def clear_denominators(coeffs: Sequence, rhs=ZERO) -> tuple[tuple[Rational, ...], Rational]:
    """Scale a row ``coeffs . x (op) rhs`` by a positive factor so every entry
    is an integer with overall content 1."""
    values = [Q(c) for c in coeffs] + [Q(rhs)]
    den = 1
    for v in values:
        den = lcm(den, int(v.denominator))
    ints = [int(v * den) for v in values]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g > 1:
        ints = [i // g for i in ints]
    return tuple(mpq(i) for i in ints[:-1]), mpq(ints[-1])


class RationalMatrix:
    """Immutable dense matrix of rationals stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        flat = tuple(Q(x) for x in entries)
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        self.rows = rows
        self.cols = cols
        self.entries = flat

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def apply(self, vector: Sequence) -> list:
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch")
        return [dot(self.row(i), vector) for i in range(self.rows)]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RationalMatrix(self.rows, other.cols,
                              (dot(self.row(i), c) for i in range(self.rows) for c in cols))

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, (-x for x in self.entries))

    def scale(self, factor) -> "RationalMatrix":
        factor = Q(factor)
        return RationalMatrix(self.rows, self.cols, (factor * x for x in self.entries))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return RationalMatrix(self.rows, self.cols,
                              (a - b for a, b in zip(self.entries, other.entries)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"


def _as_rows(a) -> tuple[list[list], int]:
    if isinstance(a, RationalMatrix):
        return a.tolist(), a.cols
    rows = [[Q(x) for x in r] for r in a]
    return rows, (len(rows[0]) if rows else 0)


def rref(a, ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Returns the nonzero rows and their pivot columns. Columns are scanned
    left to right; the first row with a nonzero entry is the pivot.
    """
    rows, cols = _as_rows(a)
    if ncols is not None:
        cols = ncols
    pivots: list[int] = []
    r = 0
    m = len(rows)
    for c in range(cols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = rows[r] = [x * inv for x in pr]
        nz = [j for j in range(c, len(pr)) if pr[j]]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nz:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


PRIME = 2_147_483_629  # largest prime below 2**31; products fit in int64


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        vals = [Q(x) for x in r]
        den = 1
        for v in vals:
            if v.denominator != 1:
                den = lcm(den, int(v.denominator))
        out.append([int(v * den) for v in vals])
    return out


def independent_rows_modp(rows: Sequence[Sequence], prime: int = PRIME) -> list[int]:
    """Indices of a maximal set of rows independent modulo ``prime``,
    greedily in row order.

    Rows independent mod p are independent over the rationals; the
    converse can fail for unlucky primes, so callers that drop the other
    rows must verify their results against the full system.
    """
    if not rows:
        return []
    ints = _integer_rows(rows)
    width = len(ints[0])
    if width == 0:
        return []
    work = (np.array([[x % prime for x in r] for r in ints], dtype=np.int64)).T.copy()
    m = work.shape[1]
    r = 0
    chosen = []
    for c in range(m):
        if r == width:
            break
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            work[[r, i]] = work[[i, r]]
        inv = pow(int(work[r, c]), prime - 2, prime)
        work[r, c:] = (work[r, c:] * inv) % prime
        below = work[r + 1:, c].copy()
        mask = below != 0
        if mask.any():
            sub = work[r + 1:, c:]
            sub[mask] = (sub[mask] - np.outer(below[mask], work[r, c:]) % prime) % prime
        chosen.append(c)
        r += 1
    return chosen


def rank(m) -> int:
    """Exact rank. A candidate basis found modulo a prime is confirmed over
    the rationals: every other row must annihilate the exact nullspace of
    the candidate rows, otherwise it is added and the check repeats."""
    rows, cols = _as_rows(m)
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ints = _integer_rows(rows)
    chosen = independent_rows_modp(ints)
    while True:
        basis = nullspace_basis([rows[i] for i in chosen]) if chosen else [
            [ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
        scaled = _integer_rows(basis)
        chosen_set = set(chosen)
        extra = None
        for idx, r in enumerate(ints):
            if idx in chosen_set:
                continue
            nz = [(j, x) for j, x in enumerate(r) if x]
            if any(sum(x * v[j] for j, x in nz) for v in scaled):
                extra = idx
                break
        if extra is None:
            return len(chosen)
        chosen = sorted(chosen + [extra])


def solve_linear(a, b: Sequence) -> list | None:
    """One exact solution of ``a x = b`` (free variables set to zero), or
    ``None`` when the system is inconsistent."""
    rows, cols = _as_rows(a)
    if len(rows) != len(b):
        raise ValueError("a.rows must equal len(b)")
    aug = [r + [Q(v)] for r, v in zip(rows, b)]
    reduced, pivots = rref(aug, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [ZERO] * cols
    for row, p in zip(reduced, pivots):
        x[p] = row[cols]
    return x


def nullspace_basis(a) -> list[list]:
    """Basis of ``{x : a x = 0}``, one vector per free column."""
    rows, cols = _as_rows(a)
    if isinstance(a, RationalMatrix):
        cols = a.cols
    reduced, pivots = rref(rows, cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [ZERO] * cols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def as_fraction(q) -> Fraction:
    q = Q(q)
    return Fraction(int(q.numerator), int(q.denominator))


def is_integer(q) -> bool:
    return Q(q).denominator == 1


__all__ = [
    "ONE", "Q", "Rational", "RationalMatrix", "ZERO", "as_fraction", "clear_denominators",
    "dot", "format_rational", "is_integer", "nullspace_basis", "parse_rational",
    "independent_rows_modp", "rank", "rref", "solve_linear",
]
