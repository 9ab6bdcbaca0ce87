"""Vertices, facets and integral points of low-dimensional polytopes.

Everything happens in affine-hull coordinates. If the hull is cut out by
equalities in reduced row echelon form, the non-pivot coordinates ``x_F``
parametrize it: ``x = x0 + sum_f x_f v_f``. An integral point has integral
``x_F``, so enumerating integers in the ``x_F`` box misses nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .lp import EmptyPolytope, LinearProgram, PolytopeSummary, summarize, variable_bounds
from .polytope import Constraint, ConstraintSystem, custom_system
from .rational import ONE, Q, ZERO, format_rational, independent_rows_modp, rref

DEFAULT_DIM_THRESHOLD = 6
DEFAULT_POINT_CAP = 100_000


class DimensionTooHigh(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass
class PolytopeGeometry:
    dimension: int
    facet_count: int
    vertex_count: int
    integral_point_count: int | None
    vertices: list = field(default_factory=list)
    integral_points: list = field(default_factory=list)
    facets: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "facets": self.facet_count,
            "vertices": self.vertex_count,
            "integral_points": self.integral_point_count,
            "facet_rows": list(self.facets),
            "vertex_list": [[format_rational(x) for x in v] for v in self.vertices],
            "integral_point_list": [list(p) for p in self.integral_points],
        }


class AffineChart:
    """``x = origin + sum_f t_f * directions[f]`` with ``t_f = x_{free[f]}``."""

    def __init__(self, nvars: int, rows: Sequence[Sequence], rhs: Sequence):
        self.nvars = nvars
        rows = [list(r) for r in rows]
        rhs = [Q(b) for b in rhs]
        keep = independent_rows_modp([r + [b] for r, b in zip(rows, rhs)]) if rows else []
        aug = [[Q(x) for x in rows[i]] + [rhs[i]] for i in keep]
        reduced, pivots = rref(aug, nvars + 1)
        if pivots and pivots[-1] == nvars:
            raise EmptyPolytope("affine hull is empty")
        pivot_set = set(pivots)
        self.free = [j for j in range(nvars) if j not in pivot_set]
        origin = [ZERO] * nvars
        for row, p in zip(reduced, pivots):
            origin[p] = row[nvars]
        self.origin = origin
        self.directions = []
        for f in self.free:
            v = [ZERO] * nvars
            v[f] = ONE
            for row, p in zip(reduced, pivots):
                if row[f]:
                    v[p] = -row[f]
            self.directions.append(v)
        # rows dropped mod p must still hold on the whole chart
        for r, b in zip(rows, rhs):
            if _dot(r, origin) != b or any(_dot(r, v) for v in self.directions):
                raise ArithmeticError("affine chart does not satisfy the hull equations")

    @property
    def dimension(self) -> int:
        return len(self.free)

    def to_ambient(self, t: Sequence) -> list:
        x = list(self.origin)
        for tf, v in zip(t, self.directions):
            if tf:
                for j, c in enumerate(v):
                    if c:
                        x[j] += tf * c
        return x

    def pull_back(self, row: Constraint) -> tuple[list, object]:
        """``a . x <= b`` rewritten as ``g . t <= h``."""
        g = [_dot(row.coeffs, v) for v in self.directions]
        return g, row.rhs - _dot(row.coeffs, self.origin)


def _dot(a, b):
    total = ZERO
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


def hull_chart(system: ConstraintSystem, summary: PolytopeSummary) -> AffineChart:
    rows, rhs = summary.affine_hull
    chart = AffineChart(len(system.variables), rows, rhs)
    if chart.dimension != summary.dimension:
        raise ArithmeticError("chart dimension disagrees with the summary")
    return chart


def _prepare(system, summary, threshold):
    if summary is None:
        summary = summarize(system)
    if summary.empty:
        raise EmptyPolytope("polytope is empty")
    if threshold is not None and summary.dimension > threshold:
        raise DimensionTooHigh(f"dimension {summary.dimension} exceeds threshold {threshold}")
    return summary, hull_chart(system, summary)


def enumerate_integral_points(system: ConstraintSystem, summary: PolytopeSummary | None = None,
                              cap: int = DEFAULT_POINT_CAP,
                              threshold: int | None = DEFAULT_DIM_THRESHOLD,
                              order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """All integer points of the polytope, sorted.

    Depth-first over the free coordinates (in ``order`` if given), each
    level's range cut down by the inequalities given the coordinates fixed
    so far and the box of the rest.
    """
    summary, chart = _prepare(system, summary, threshold)
    dim = chart.dimension
    if dim == 0:
        x = chart.origin
        if all(v.denominator == 1 for v in x) and system.satisfies(x):
            return [tuple(int(v) for v in x)]
        return []
    perm = list(range(dim)) if order is None else list(order)
    if sorted(perm) != list(range(dim)):
        raise ValueError("order must permute the free coordinates")
    bounds = variable_bounds(system, [chart.free[p] for p in perm])
    lo, hi = [], []
    for a, b in bounds:
        if a is None or b is None:
            raise ValueError("polytope is unbounded")
        lo.append(math.ceil(a))
        hi.append(math.floor(b))
    if any(a > b for a, b in zip(lo, hi)):
        return []
    rows = []
    for row in system.inequalities:
        g, h = chart.pull_back(row)
        g = [g[p] for p in perm]
        if any(g):
            rows.append((g, h))
    # smallest possible contribution of coordinates level+1.. of each row
    tail = []
    for g, _ in rows:
        acc = [ZERO] * (dim + 1)
        for l in range(dim - 1, -1, -1):
            acc[l] = acc[l + 1] + min(g[l] * lo[l], g[l] * hi[l])
        tail.append(acc)

    found: list[tuple[int, ...]] = []
    t = [0] * dim
    partial = [ZERO] * len(rows)

    def visit(level: int):
        a, b = lo[level], hi[level]
        for i, (g, h) in enumerate(rows):
            c = g[level]
            if not c:
                if partial[i] + tail[i][level + 1] > h:
                    return
                continue
            bound = (h - partial[i] - tail[i][level + 1]) / c
            if c > 0:
                b = min(b, math.floor(bound))
            else:
                a = max(a, math.ceil(bound))
            if a > b:
                return
        for value in range(a, b + 1):
            t[level] = value
            for i, (g, _) in enumerate(rows):
                if g[level]:
                    partial[i] += g[level] * value
            if level + 1 < dim:
                visit(level + 1)
            else:
                params = [0] * dim
                for pos, p in enumerate(perm):
                    params[p] = t[pos]
                x = chart.to_ambient([Q(v) for v in params])
                if all(v.denominator == 1 for v in x) and system.satisfies(x):
                    found.append(tuple(int(v) for v in x))
                    if len(found) > cap:
                        raise CapExceeded(f"more than {cap} integral points")
            for i, (g, _) in enumerate(rows):
                if g[level]:
                    partial[i] -= g[level] * value

    visit(0)
    return sorted(found)


def redundancy_filter(system: ConstraintSystem) -> list[int]:
    """Indices of essential inequalities.

    Rows are examined from the last to the first; a row is redundant when
    maximizing its left side over the other surviving rows stays within
    its right side, and a redundant row is dropped before the next test.
    Of two identical rows the one with the lower index survives.
    """
    if LinearProgram(system).feasibility().status == "infeasible":
        raise EmptyPolytope("polytope is empty")
    alive = list(range(len(system.inequalities)))
    for i in reversed(range(len(system.inequalities))):
        others = tuple(system.inequalities[j] for j in alive if j != i)
        res = LinearProgram(replace(system, inequalities=others)).optimize(
            system.inequalities[i].coeffs, "max")
        if res.status != "unbounded" and res.objective_value <= system.inequalities[i].rhs:
            alive.remove(i)
    return alive


def _primitive(v: Sequence) -> tuple:
    den = 1
    for x in v:
        if x:
            den = math.lcm(den, int(x.denominator))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(Q(x // g) for x in ints) if g > 1 else tuple(Q(x) for x in ints)


def _cone_rays(rows: list[list], width: int) -> list[tuple]:
    """Extreme rays of the pointed cone ``{y : a . y <= 0}`` by the double
    description method with a combinatorial adjacency test."""
    reduced, pivots = rref([list(r) for r in rows], width)
    if len(pivots) < width:
        raise ArithmeticError("cone is not pointed")
    # choose ``width`` independent rows greedily to seed the iteration
    basis_rows: list[int] = []
    current: list[list] = []
    for i, r in enumerate(rows):
        trial = current + [list(r)]
        if len(rref(trial, width)[1]) == len(trial):
            current = trial
            basis_rows.append(i)
            if len(current) == width:
                break
    # rays of {A_K y <= 0}: columns of -A_K^{-1}
    inverse = _inverse(current, width)
    rays = [_primitive([-inverse[r][c] for r in range(width)]) for c in range(width)]
    processed = list(basis_rows)

    def zero_set(ray):
        mask = 0
        for pos, i in enumerate(processed):
            if not _dot(rows[i], ray):
                mask |= 1 << pos
        return mask

    zeros = [zero_set(r) for r in rays]
    rest = [i for i in range(len(rows)) if i not in set(basis_rows)]
    rest.sort(key=lambda i: (sum(1 for x in rows[i] if x), i))
    for i in rest:
        a = rows[i]
        values = [_dot(a, r) for r in rays]
        plus = [j for j, v in enumerate(values) if v > 0]
        if not plus:
            processed.append(i)
            bit = 1 << (len(processed) - 1)
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, values)]
            continue
        minus = [j for j, v in enumerate(values) if v < 0]
        new_rays, new_zeros = [], []
        for p in plus:
            for q in minus:
                common = zeros[p] & zeros[q]
                if common.bit_count() < width - 2:
                    continue
                if any(j != p and j != q and common & zeros[j] == common for j in range(len(rays))):
                    continue
                vp, vq = values[p], values[q]
                ray = _primitive([vp * y - vq * x for x, y in zip(rays[p], rays[q])])
                new_rays.append(ray)
                new_zeros.append(common)
        keep = [j for j, v in enumerate(values) if v <= 0]
        processed.append(i)
        bit = 1 << (len(processed) - 1)
        rays = [rays[j] for j in keep] + new_rays
        zeros = [zeros[j] | bit if values[j] == 0 else zeros[j] for j in keep] + [z | bit for z in new_zeros]
    return rays


def _inverse(rows: list[list], size: int) -> list[list]:
    aug = [list(r) + [ONE if i == j else ZERO for j in range(size)] for i, r in enumerate(rows)]
    reduced, pivots = rref(aug, size)
    return [r[size:] for r in reduced]


def double_description(system: ConstraintSystem, summary: PolytopeSummary | None = None,
                       threshold: int | None = DEFAULT_DIM_THRESHOLD,
                       cap: int | None = DEFAULT_POINT_CAP) -> PolytopeGeometry:
    """Vertices and facets of a bounded polytope; integral points too
    unless ``cap`` is None."""
    summary, chart = _prepare(system, summary, threshold)
    dim = chart.dimension
    points = None
    if cap is not None:
        points = enumerate_integral_points(system, summary, cap=cap, threshold=threshold)
    if dim == 0:
        vertex = chart.origin
        return PolytopeGeometry(0, 0, 1, None if points is None else len(points),
                                [vertex], points or [], [])
    pulled = [chart.pull_back(row) for row in system.inequalities]
    local = custom_system(dim, (), [(g, h) for g, h in pulled])
    facets = redundancy_filter(local)
    # homogenized cone over (s, t): g . t - h s <= 0 and s >= 0
    cone = [[-pulled[i][1]] + list(pulled[i][0]) for i in facets]
    cone.append([-ONE] + [ZERO] * dim)
    rays = _cone_rays(cone, dim + 1)
    vertices = []
    for ray in rays:
        s = ray[0]
        if s <= 0:
            raise ValueError("polytope is unbounded")
        vertices.append(chart.to_ambient([x / s for x in ray[1:]]))
    vertices.sort()
    for v in vertices:
        if not system.satisfies(v):
            raise ArithmeticError("vertex violates the system")
    return PolytopeGeometry(dim, len(facets), len(vertices),
                            None if points is None else len(points),
                            vertices, points or [], facets)
