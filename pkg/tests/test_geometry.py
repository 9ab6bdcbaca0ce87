from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from lcdbound.geometry import (AffineChart, CapExceeded, DimensionTooHigh, double_description,
                               enumerate_integral_points, redundancy_filter)
from lcdbound.gf2 import dual, iter_lcd_codes, joint_enumerator
from lcdbound.lp import EmptyPolytope, summarize
from lcdbound.polytope import build_joint_system, custom_system, enumerator_point
from lcdbound.rational import Q
from oracles import BOX, vertex_oracle


def cube(dim, lo=0, hi=1):
    rows = []
    for j in range(dim):
        e = [0] * dim
        e[j] = 1
        rows.append((tuple(e), hi))
        rows.append((tuple(-x for x in e), -lo))
    return rows


cuts = st.lists(st.tuples(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-6, 6)),
                max_size=4)


@given(cuts)
@settings(max_examples=60, deadline=None)
def test_polygon_against_brute_force(extra):
    rows = BOX + extra
    system = custom_system(2, inequalities=rows)
    vertices = vertex_oracle(rows)
    if not vertices:
        with pytest.raises(EmptyPolytope):
            double_description(system)
        return
    geo = double_description(system)
    assert {tuple(v) for v in geo.vertices} == vertices
    lattice = sorted(p for p in product(range(-5, 6), repeat=2)
                     if all(a[0] * p[0] + a[1] * p[1] <= b for a, b in rows))
    assert geo.integral_points == lattice
    if geo.dimension == 2:
        # a polygon has as many edges as corners
        assert geo.facet_count == geo.vertex_count
    elif geo.dimension == 1:
        assert (geo.facet_count, geo.vertex_count) == (2, 2)


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_cube(dim):
    geo = double_description(custom_system(dim, inequalities=cube(dim)))
    assert (geo.dimension, geo.facet_count, geo.vertex_count) == (dim, 2 * dim, 2 ** dim)
    assert geo.integral_point_count == 2 ** dim


def test_simplex_in_hyperplane():
    system = custom_system(3, equalities=[((1, 1, 1), 1)], inequalities=[
        ((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0)])
    geo = double_description(system)
    assert (geo.dimension, geo.facet_count, geo.vertex_count) == (2, 3, 3)
    assert geo.integral_points == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_scaled_simplex_lattice_count():
    rows = [((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0), ((1, 1, 1), 4)]
    geo = double_description(custom_system(3, inequalities=rows))
    assert geo.vertex_count == 4 and geo.facet_count == 4
    assert geo.integral_point_count == 35  # binomial(4 + 3, 3)


def test_duplicate_rows_keep_lower_index():
    rows = cube(2) + [((1, 0), 1), ((2, 0), 2), ((1, 1), 5)]
    assert redundancy_filter(custom_system(2, inequalities=rows)) == [0, 1, 2, 3]
    rows = [((1, 0), 1), ((1, 0), 1)] + cube(2)[1:]
    assert redundancy_filter(custom_system(2, inequalities=rows)) == [0, 2, 3, 4]


def test_diagonal_cut():
    rows = cube(2) + [((1, 1), 1)]
    geo = double_description(custom_system(2, inequalities=rows))
    assert geo.vertex_count == 3 and geo.facet_count == 3
    assert geo.integral_points == [(0, 0), (0, 1), (1, 0)]


def test_fractional_vertices_no_lattice_points():
    rows = [((3, 0), 2), ((-3, 0), -1), ((0, 1), 5), ((0, -1), 5)]
    geo = double_description(custom_system(2, inequalities=rows))
    assert geo.integral_points == []
    assert [Q(1, 3), Q(-5)] in geo.vertices


def test_point_polytope():
    system = custom_system(2, equalities=[((1, 0), 2), ((0, 1), Q(1, 2))])
    geo = double_description(system)
    assert (geo.dimension, geo.facet_count, geo.vertex_count) == (0, 0, 1)
    assert geo.integral_point_count == 0


def test_threshold_and_cap():
    system = custom_system(3, inequalities=cube(3, 0, 9))
    with pytest.raises(DimensionTooHigh):
        double_description(system, threshold=2)
    with pytest.raises(CapExceeded):
        enumerate_integral_points(system, cap=100)


def test_affine_chart():
    chart = AffineChart(3, [[1, 1, 1], [2, 2, 2]], [3, 6])
    assert chart.dimension == 2
    x = chart.to_ambient([Q(1), Q(5)])
    assert sum(x) == 3
    with pytest.raises(EmptyPolytope):
        AffineChart(2, [[1, 1], [1, 1]], [0, 1])


def test_to_dict_is_json_ready():
    data = double_description(custom_system(1, inequalities=[((2,), 1), ((-1,), 0)])).to_dict()
    assert data["vertex_list"] == [["0"], ["1/2"]]
    assert data["integral_point_list"] == [[0]]


@pytest.mark.parametrize("n,k,d", [(3, 2, 2), (4, 2, 2), (4, 1, 2), (4, 3, 1), (5, 2, 2), (5, 3, 2), (5, 1, 3)])
def test_joint_polytopes_contain_their_codes(n, k, d):
    system = build_joint_system(n, k, d)
    summary = summarize(system)
    geo = double_description(system, summary)
    points = set(geo.integral_points)
    for code in iter_lcd_codes(n, k):
        if code.minimum_distance() >= d:
            point = enumerator_point(system, joint_enumerator(code, dual(code)))
            assert tuple(int(x) for x in point) in points
    for v in geo.vertices:
        # each vertex is cut out by dimension-many tight facets
        tight = [i for i in geo.facets if system.inequalities[i].value(v) == system.inequalities[i].rhs]
        assert len(tight) >= geo.dimension
    reverse = list(reversed(range(geo.dimension)))
    assert enumerate_integral_points(system, summary, order=reverse) == geo.integral_points


def test_empty_joint_polytope():
    with pytest.raises(EmptyPolytope):
        double_description(build_joint_system(5, 2, 3))
