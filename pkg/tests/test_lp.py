import time

import pytest
from hypothesis import given, settings, strategies as st

from lcdbound.gf2 import best_lcd_distances
from lcdbound.lp import (BudgetExceeded, EmptyPolytope, solve, summarize,
                         variable_bounds, verify_certificate)
from lcdbound.polytope import build_joint_system, build_restricted_system, custom_system
from lcdbound.rational import Q
from oracles import BOX, vertex_oracle

rows2 = st.lists(st.tuples(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-6, 6)),
                 max_size=5)


@given(rows2, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
@settings(max_examples=200, deadline=None)
def test_planar_lp_against_vertex_enumeration(extra, objective):
    rows = BOX + extra
    vertices = vertex_oracle(rows)
    system = custom_system(2, inequalities=rows)
    res = solve(system, objective, "max")
    if not vertices:
        assert res.status == "infeasible"
        assert verify_certificate(system, res.certificate)
        return
    assert res.status == "feasible"
    best = max(objective[0] * x + objective[1] * y for x, y in vertices)
    assert res.objective_value == best
    assert system.satisfies(res.point)


@given(rows2)
@settings(max_examples=100, deadline=None)
def test_planar_dimension(extra):
    rows = BOX + extra
    vertices = vertex_oracle(rows)
    summary = summarize(custom_system(2, inequalities=rows))
    if not vertices:
        assert summary.empty
        return
    vs = [tuple(v) for v in vertices]
    if len(vs) == 1:
        expected = 0
    else:
        x0, y0 = vs[0]
        collinear = all((x - x0) * (vs[1][1] - y0) == (y - y0) * (vs[1][0] - x0) for x, y in vs)
        expected = 1 if collinear else 2
    assert summary.dimension == expected


def test_equalities_and_free_variables():
    # x + y = 1, x - y <= 0, y <= 3: max x is 1/2
    system = custom_system(2, equalities=[((1, 1), 1)], inequalities=[((1, -1), 0), ((0, 1), 3)])
    res = solve(system, (1, 0), "max")
    assert res.objective_value == Q(1, 2)
    assert solve(system, (1, 0), "min").objective_value == -2
    assert solve(system, (0, 1), "min").objective_value == Q(1, 2)
    assert solve(custom_system(1, inequalities=[((1,), 2)]), (1,), "min").status == "unbounded"


def test_degenerate_redundant_equalities():
    eqs = [((1, 1, 1), 1), ((2, 2, 2), 2), ((1, 0, -1), 0)]
    ineqs = [((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0)]
    system = custom_system(3, eqs, ineqs)
    s = summarize(system)
    assert s.dimension == 1
    assert variable_bounds(system) == [(0, Q(1, 2)), (0, 1), (0, Q(1, 2))]


def test_variable_bounds_empty():
    with pytest.raises(EmptyPolytope):
        variable_bounds(custom_system(1, inequalities=[((1,), -1), ((-1,), -1)]))


def test_certificate_checker_rejects_bad_input():
    system = custom_system(1, inequalities=[((1,), -1), ((-1,), -1)])
    assert verify_certificate(system, [1, 1])
    assert not verify_certificate(system, [1, 0])
    assert not verify_certificate(system, [-1, 1])
    assert not verify_certificate(system, [1])


def test_known_triples():
    assert solve(build_joint_system(3, 2, 2)).status == "feasible"
    for system in (build_joint_system(4, 2, 4), build_restricted_system(4, 2, 4)):
        res = solve(system)
        assert res.status == "infeasible"
        assert verify_certificate(system, res.certificate)
    s = summarize(build_joint_system(5, 5, 1))
    assert not s.empty and s.dimension == 0


@pytest.mark.parametrize("n", range(2, 6))
def test_grid_is_sound(n):
    """Every triple realised by an LCD code must be feasible; every
    infeasible answer carries a verified certificate."""
    for k in range(1, n + 1):
        best = best_lcd_distances(n, k)[0]
        for d in range(1, n + 1):
            for system in (build_joint_system(n, k, d), build_restricted_system(n, k, d)):
                res = solve(system)
                if d <= best:
                    assert res.status == "feasible"
                if res.status == "feasible":
                    assert system.satisfies(res.point)
                else:
                    assert verify_certificate(system, res.certificate)


def test_joint_never_looser_than_restricted():
    for n in range(2, 7):
        for k in range(1, n + 1):
            for d in range(1, n + 1):
                if solve(build_restricted_system(n, k, d)).status == "infeasible":
                    assert solve(build_joint_system(n, k, d)).status == "infeasible"


def test_summary_is_deterministic():
    system = build_joint_system(6, 3, 2)
    a, b = summarize(system), summarize(system)
    assert a.dimension == b.dimension
    assert a.implicit_equalities == b.implicit_equalities
    assert system.satisfies(a.point)


def test_deadline():
    with pytest.raises(BudgetExceeded):
        solve(build_joint_system(11, 5, 4), deadline=time.monotonic() - 1)
