"""The 4x4 matrix group fixing joint enumerators of a code and its dual,
its Molien series and the dimensions of its invariant spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .combinatorics import TWO_H, composition_index, enumerate_compositions, substitution_columns
from .gf2 import JointEnumerator
from .rational import ONE, Q, ZERO, RationalMatrix

DEFAULT_CLOSURE_CAP = 10_000

H = RationalMatrix.from_rows([[Q(x, 2) for x in row] for row in TWO_H])
J = RationalMatrix.from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])
MINUS_I = -RationalMatrix.identity(4)


class ClosureCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MatrixGroup:
    generators: tuple[RationalMatrix, ...]
    elements: tuple[RationalMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: RationalMatrix) -> bool:
        return m in set(self.elements)


def close_group(generators: Sequence[RationalMatrix], cap: int = DEFAULT_CLOSURE_CAP) -> MatrixGroup:
    """Breadth-first closure of ``generators`` under multiplication."""
    gens = tuple(generators)
    if not gens:
        raise ValueError("need at least one generator")
    size = gens[0].rows
    for g in gens:
        if g.rows != size or g.cols != size:
            raise ValueError("generators must be square of equal size")
        if determinant(g) == 0:
            raise ValueError("generators must be invertible")
    identity = RationalMatrix.identity(size)
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(order) > cap:
                        raise ClosureCapExceeded(f"group has more than {cap} elements")
        frontier = nxt
    return MatrixGroup(gens, tuple(order))


def standard_group() -> MatrixGroup:
    return close_group([H, J, MINUS_I])


def determinant(m: RationalMatrix):
    rows = m.tolist()
    size = m.rows
    det = ONE
    for c in range(size):
        p = next((i for i in range(c, size) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, size):
            f = rows[i][c] * inv
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def characteristic_coefficients(m: RationalMatrix) -> list:
    """``[1, c1, ..., cn]`` with ``det(x I - m) = x^n + c1 x^(n-1) + ... + cn``,
    by the Faddeev-LeVerrier recurrence."""
    size = m.rows
    coeffs = [ONE]
    acc = RationalMatrix.identity(size)
    for k in range(1, size + 1):
        prod = m @ acc
        c = -sum((prod[i, i] for i in range(size)), ZERO) / k
        coeffs.append(c)
        acc = RationalMatrix(size, size, (prod[i, j] + (c if i == j else 0)
                                          for i in range(size) for j in range(size)))
    return coeffs


@dataclass(frozen=True)
class PowerSeries:
    """Power series truncated after ``max_degree``."""

    coefficients: tuple
    max_degree: int

    @classmethod
    def from_polynomial(cls, coeffs: Iterable, max_degree: int) -> "PowerSeries":
        c = [Q(x) for x in coeffs][:max_degree + 1]
        c += [ZERO] * (max_degree + 1 - len(c))
        return cls(tuple(c), max_degree)

    def __getitem__(self, degree: int):
        return self.coefficients[degree]

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        top = min(self.max_degree, other.max_degree)
        return PowerSeries(tuple(a + b for a, b in zip(self.coefficients[:top + 1],
                                                        other.coefficients[:top + 1])), top)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        top = min(self.max_degree, other.max_degree)
        out = [ZERO] * (top + 1)
        for i, a in enumerate(self.coefficients[:top + 1]):
            if a:
                for j in range(top + 1 - i):
                    out[i + j] += a * other.coefficients[j]
        return PowerSeries(tuple(out), top)

    def scale(self, factor) -> "PowerSeries":
        factor = Q(factor)
        return PowerSeries(tuple(factor * a for a in self.coefficients), self.max_degree)

    def inverse(self) -> "PowerSeries":
        c = self.coefficients
        if not c[0]:
            raise ZeroDivisionError("constant term is zero")
        inv = [ZERO] * (self.max_degree + 1)
        inv[0] = 1 / c[0]
        for k in range(1, self.max_degree + 1):
            s = sum((c[j] * inv[k - j] for j in range(1, k + 1)), ZERO)
            inv[k] = -s * inv[0]
        return PowerSeries(tuple(inv), self.max_degree)


def molien_series(group: MatrixGroup, max_degree: int) -> PowerSeries:
    """``|G|^-1 sum_g 1/det(I - t g)``; ``det(I - t g)`` has the
    characteristic coefficients of ``g`` in increasing degree."""
    total = PowerSeries.from_polynomial([], max_degree)
    for g in group.elements:
        total = total + PowerSeries.from_polynomial(characteristic_coefficients(g), max_degree).inverse()
    return total.scale(Q(1, group.order))


def expand_rational_function(numerator: Sequence, denominator_factors: Sequence[Sequence],
                             max_degree: int) -> PowerSeries:
    """Series of ``numerator / prod(denominator_factors)``; polynomials are
    coefficient lists in increasing degree."""
    series = PowerSeries.from_polynomial(numerator, max_degree)
    for factor in denominator_factors:
        series = series * PowerSeries.from_polynomial(factor, max_degree).inverse()
    return series


# (1 + 2t^2 + t^4) / ((1 - t^2)^3 (1 - t^6))
MOLIEN_NUMERATOR = (1, 0, 2, 0, 1)
MOLIEN_DENOMINATOR = ((1, 0, -1),) * 3 + ((1, 0, 0, 0, 0, 0, -1),)


def closed_form_molien(max_degree: int) -> PowerSeries:
    return expand_rational_function(MOLIEN_NUMERATOR, MOLIEN_DENOMINATOR, max_degree)


def invariant_dimension(group: MatrixGroup, degree: int):
    """Average trace of the action on degree-``degree`` monomials."""
    total = ZERO
    for g in group.elements:
        columns, scale = substitution_columns(g, degree)
        trace = sum(col.get(m, 0) for m, col in enumerate(columns))
        total += Q(trace, scale ** degree)
    dim = total / group.order
    if dim.denominator != 1 or dim < 0:
        raise ArithmeticError(f"invariant dimension {dim} is not a nonnegative integer")
    return int(dim)


def substitute(je: JointEnumerator, g: RationalMatrix) -> dict:
    """Coefficients of ``je(g x)``, keyed by composition."""
    n = je.n
    columns, scale = substitution_columns(g, n)
    index = composition_index(n)
    comps = enumerate_compositions(n)
    acc: dict[int, int] = {}
    for m, c in je.coeffs.items():
        if c:
            for i, v in columns[index[m]].items():
                acc[i] = acc.get(i, 0) + c * v
    denom = scale ** n
    return {comps[i]: Q(v, denom) for i, v in acc.items() if v}


def is_fixed_by(je: JointEnumerator, g: RationalMatrix) -> bool:
    image = substitute(je, g)
    return image == {m: Q(c) for m, c in je.coeffs.items() if c}


def check_enumerator_invariance(je: JointEnumerator, group: MatrixGroup) -> bool:
    """Every element must fix ``je``. A degree-n form picks up ``(-1)^n``
    under ``-I``, so for odd n an element also passes when its negative
    fixes ``je``."""
    for g in group.elements:
        if is_fixed_by(je, g):
            continue
        if je.n % 2 == 1 and is_fixed_by(je, -g):
            continue
        return False
    return True


def enumerator_checks(je: JointEnumerator) -> dict[str, bool]:
    """``odd_n11_vanish``: coefficients with odd n11 are zero (fixed by J).
    ``macwilliams_fixed``: fixed by the MacWilliams substitution H.
    ``homogeneity``: ``-I`` multiplies the form by ``(-1)^n``."""
    sign = 1 if je.n % 2 == 0 else -1
    return {
        "odd_n11_vanish": all(m.n11 % 2 == 0 for m, c in je.coeffs.items() if c),
        "macwilliams_fixed": is_fixed_by(je, H),
        "homogeneity": substitute(je, MINUS_I) == {m: Q(sign * c) for m, c in je.coeffs.items() if c},
    }
