"""Exact rational linear programming.

A dictionary-form primal simplex: only nonbasic columns are stored, so the
tableau has ``rows x (columns - rows)`` entries. Entering variables are
priced by steepest edge. After a long run of degenerate pivots Bland's rule
takes over until the objective moves again; a Bland run cannot cycle and
every nondegenerate pivot strictly improves the objective, so the method
terminates.

Every answer is checked against the original system before it is
returned: feasible points satisfy every row exactly, and infeasibility is
reported with a Farkas certificate that has been verified exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from .polytope import Constraint, ConstraintSystem
from .rational import ONE, Q, ZERO, independent_rows_modp, rank

DEGENERATE_SWITCH = 200


class SolverError(RuntimeError):
    """An internal consistency check failed."""


class BudgetExceeded(RuntimeError):
    pass


class EmptyPolytope(ValueError):
    pass


@dataclass
class LpResult:
    status: str  # "feasible", "infeasible" or "unbounded"
    point: list | None = None
    objective_value: object = None
    certificate: list | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


@dataclass
class PolytopeSummary:
    empty: bool
    dimension: int
    implicit_equalities: list[int] = field(default_factory=list)
    affine_hull: tuple[list, list] = ((), ())
    point: list | None = None
    certificate: list | None = None


def verify_certificate(system: ConstraintSystem, certificate: Sequence) -> bool:
    """``certificate`` holds one multiplier per equality, then one per
    inequality (nonnegative). Valid iff the combination of rows reads
    ``0 . x <= negative``."""
    eqs, ineqs = system.equalities, system.inequalities
    if len(certificate) != len(eqs) + len(ineqs):
        return False
    mult = [Q(u) for u in certificate]
    if any(u < 0 for u in mult[len(eqs):]):
        return False
    total = [ZERO] * len(system.variables)
    rhs = ZERO
    for u, row in zip(mult, eqs + ineqs):
        if not u:
            continue
        rhs += u * row.rhs
        for j, c in enumerate(row.coeffs):
            if c:
                total[j] += u * c
    return not any(total) and rhs < 0


class LinearProgram:
    """Simplex state for one constraint system.

    :meth:`feasibility` runs phase 1 once; :meth:`optimize` then starts
    phase 2 from the current feasible basis, so a sequence of objectives
    over the same polytope is cheap.
    """

    def __init__(self, system: ConstraintSystem, deadline: float | None = None, presolve: bool = True):
        self.system = system
        self.deadline = deadline
        self.presolve = presolve
        self.pivots = 0
        self._phase1: LpResult | None = None
        self._build()

    # standard form ----------------------------------------------------

    def _build(self) -> None:
        system = self.system
        nv = len(system.variables)
        eqs, ineqs = system.equalities, system.inequalities

        bound_row: dict[int, int] = {}
        for i, row in enumerate(ineqs):
            if row.rhs == 0:
                nz = [(j, c) for j, c in enumerate(row.coeffs) if c]
                if len(nz) == 1 and nz[0][1] < 0 and nz[0][0] not in bound_row:
                    bound_row[nz[0][0]] = i
        self.bound_row = bound_row
        bounded_rows = set(bound_row.values())

        # structural columns: (variable, sign)
        structural = []
        for j in range(nv):
            structural.append((j, 1))
            if j not in bound_row:
                structural.append((j, -1))
        self.structural = structural
        ns = len(structural)

        eq_used = list(range(len(eqs)))
        if self.presolve and len(eqs) > 1:
            eq_used = independent_rows_modp([list(r.coeffs) + [r.rhs] for r in eqs])
        ineq_used = [i for i in range(len(ineqs)) if i not in bounded_rows]

        rows = []  # (kind, system index, sigma)
        for i in eq_used:
            rows.append(("eq", i, -1 if eqs[i].rhs < 0 else 1))
        for i in ineq_used:
            rows.append(("ineq", i, -1 if ineqs[i].rhs < 0 else 1))
        self.rows = rows
        m = len(rows)

        slack_of_row = {}
        col_ids = list(range(ns))
        for r, (kind, i, _) in enumerate(rows):
            if kind == "ineq":
                slack_of_row[r] = ns + len(slack_of_row)
        self.n_slack = len(slack_of_row)
        self.art_base = ns + self.n_slack
        self.slack_row = {c: r for r, c in slack_of_row.items()}

        # sparse standard-form columns for certificate recovery
        colvec: dict[int, dict[int, object]] = {c: {} for c in range(ns + self.n_slack)}
        sign_of = {}
        for r, (kind, i, sigma) in enumerate(rows):
            row = eqs[i] if kind == "eq" else ineqs[i]
            for c, (j, s) in enumerate(structural):
                v = row.coeffs[j]
                if v:
                    colvec[c][r] = sigma * s * v
            if kind == "ineq":
                colvec[slack_of_row[r]][r] = Q(sigma)
            sign_of[r] = sigma
        self.colvec = colvec

        basis = []
        for r, (kind, i, sigma) in enumerate(rows):
            if kind == "ineq" and sigma == 1:
                basis.append(slack_of_row[r])
            else:
                basis.append(self.art_base + r)
        basic_set = set(basis)
        nonbasic = [c for c in col_ids + list(range(ns, ns + self.n_slack)) if c not in basic_set]
        pos = {c: k for k, c in enumerate(nonbasic)}
        T = [[ZERO] * len(nonbasic) for _ in range(m)]
        beta = []
        for r, (kind, i, sigma) in enumerate(rows):
            row = eqs[i] if kind == "eq" else ineqs[i]
            beta.append(sigma * row.rhs)
        for c in nonbasic:
            k = pos[c]
            for r, v in colvec[c].items():
                T[r][k] = v
        self.T = T
        self.beta = beta
        self.delta = [ZERO] * m
        self._rng = random.Random(m)
        self.basis = basis
        self.nonbasic = nonbasic
        self.bland = False
        self.degenerate_run = 0

    def _is_artificial(self, c: int) -> bool:
        return c >= self.art_base

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("LP budget exhausted")

    # pivoting ---------------------------------------------------------

    def _pivot(self, r: int, c: int, d: list) -> object:
        T = self.T
        prow = T[r]
        inv = 1 / prow[c]
        prow = [v * inv for v in prow]
        prow[c] = inv
        T[r] = prow
        br = self.beta[r] * inv
        self.beta[r] = br
        delta = self.delta
        dr = delta[r] * inv
        delta[r] = dr
        nz = [j for j, v in enumerate(prow) if v and j != c]
        dense = len(nz) * 3 > len(prow)
        beta = self.beta
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if not f:
                continue
            if dense:
                row = [a - f * b for a, b in zip(row, prow)]
                T[i] = row
            else:
                for j in nz:
                    row[j] -= f * prow[j]
            row[c] = -f * inv
            if br:
                beta[i] -= f * br
            if dr:
                delta[i] -= f * dr
        z_shift = ZERO
        f = d[c]
        if f:
            for j in nz:
                d[j] -= f * prow[j]
            d[c] = -f * inv
            z_shift = f * br
        leaving = self.basis[r]
        self.basis[r] = self.nonbasic[c]
        self.nonbasic[c] = leaving
        if self._is_artificial(leaving):
            for row in T:
                del row[c]
            del d[c]
            del self.nonbasic[c]
        self.pivots += 1
        return z_shift

    def _choose_entering(self, d: list) -> int | None:
        best = None
        if self.bland:
            for j, v in enumerate(d):
                if v < 0 and (best is None or self.nonbasic[j] < self.nonbasic[best]):
                    best = j
            return best
        # steepest edge, priced in floating point: the choice of column
        # only steers the path, every value computed stays exact
        best_score = 0.0
        T = self.T
        for j, v in enumerate(d):
            if v < 0:
                norm = 1.0
                for row in T:
                    a = row[j]
                    if a:
                        norm += float(a) ** 2
                score = float(v) ** 2 / norm
                if best is None or score > best_score:
                    best, best_score = j, score
        return best

    def _choose_leaving(self, c: int) -> int | None:
        """Ratio test on ``beta + eps * delta``: ties in ``beta / a`` are
        broken by ``delta / a``, then by the smaller basic column."""
        best = None
        best_ratio = None
        for i, row in enumerate(self.T):
            a = row[c]
            if a > 0:
                ratio = self.beta[i] / a
                if best is None or ratio < best_ratio:
                    best, best_ratio = i, ratio
                elif ratio == best_ratio:
                    key = self.delta[i] / a
                    best_key = self.delta[best] / self.T[best][c]
                    if key < best_key or (key == best_key and self.basis[i] < self.basis[best]):
                        best = i
        return best

    def _perturb(self) -> None:
        # a fresh positive perturbation of the current basic values; it only
        # breaks ratio ties, so the true values are never touched
        self.delta = [Q(self._rng.randint(1, 1 << 20)) for _ in self.beta]

    def _run(self, d: list, z, stop_at_zero: bool = False):
        """Minimize ``z + d . x_N``; returns ``(z, unbounded_column)``."""
        self._perturb()
        while True:
            if stop_at_zero and z == 0:
                return z, None
            self._check_deadline()
            c = self._choose_entering(d)
            if c is None:
                return z, None
            r = self._choose_leaving(c)
            if r is None:
                return z, c
            if self.beta[r] == 0:
                self.degenerate_run += 1
                if self.degenerate_run > DEGENERATE_SWITCH:
                    self.bland = True
            else:
                self.degenerate_run = 0
                self.bland = False
            z += self._pivot(r, c, d)

    # phases -----------------------------------------------------------

    def feasibility(self) -> LpResult:
        if self._phase1 is not None:
            return self._phase1
        self._crash()
        art_rows = [i for i, b in enumerate(self.basis) if self._is_artificial(b)]
        d = [ZERO] * len(self.nonbasic)
        z = ZERO
        for i in art_rows:
            row = self.T[i]
            for j, v in enumerate(row):
                if v:
                    d[j] -= v
            z += self.beta[i]
        z, _ = self._run(d, z, stop_at_zero=True)
        if z > 0:
            cert = self._farkas()
            if not verify_certificate(self.system, cert):
                raise SolverError("Farkas certificate failed verification")
            self._phase1 = LpResult("infeasible", certificate=cert, pivots=self.pivots)
            return self._phase1
        self._drive_out_artificials()
        point = self._point()
        if not self.system.satisfies(point):
            if self.presolve:
                return self._restart_without_presolve().feasibility()
            raise SolverError("phase 1 point violates the system")
        self._phase1 = LpResult("feasible", point=point, pivots=self.pivots)
        return self._phase1

    def _crash(self) -> None:
        """Pivot artificials out of rows whose value is zero.

        Such a pivot moves no basic value, so any nonzero entry will do;
        the column with the fewest nonzeros is used to limit fill-in.
        """
        dummy = [ZERO] * len(self.nonbasic)
        for r in range(len(self.basis)):
            if not self._is_artificial(self.basis[r]) or self.beta[r] != 0:
                continue
            self._check_deadline()
            row = self.T[r]
            best, best_count = None, None
            for j, v in enumerate(row):
                if v:
                    count = sum(1 for other in self.T if other[j])
                    if best is None or count < best_count:
                        best, best_count = j, count
            if best is None:
                continue
            self._pivot(r, best, dummy)
            dummy = [ZERO] * len(self.nonbasic)

    def _restart_without_presolve(self) -> "LinearProgram":
        self.presolve = False
        self._phase1 = None
        self._build()
        return self

    def _drive_out_artificials(self) -> None:
        dummy = [ZERO] * len(self.nonbasic)
        r = 0
        while r < len(self.basis):
            if self._is_artificial(self.basis[r]):
                row = self.T[r]
                c = next((j for j, v in enumerate(row) if v), None)
                if c is None:
                    # redundant equality
                    del self.T[r]
                    del self.beta[r]
                    del self.delta[r]
                    del self.basis[r]
                    del self.rows[r]
                    continue
                self._pivot(r, c, dummy)
                dummy = [ZERO] * len(self.nonbasic)
            r += 1

    def _point(self) -> list:
        nv = len(self.system.variables)
        x = [ZERO] * nv
        for b, val in zip(self.basis, self.beta):
            if b < len(self.structural) and val:
                j, s = self.structural[b]
                x[j] += s * val
        return x

    def _farkas(self) -> list:
        """Multipliers for the original rows proving infeasibility.

        Phase-1 duals ``y`` solve ``B^T y = c_B``; then ``y . A_j <= 0`` on
        every column and ``y . b > 0``. Rows are mapped back to their
        original orientation and the nonnegativity rows absorb the
        remaining column sums.
        """
        m = len(self.rows)
        bt_rows = []
        rhs = []
        for b in self.basis:
            vec = [ZERO] * m
            if self._is_artificial(b):
                vec[b - self.art_base] = ONE
                rhs.append(ONE)
            else:
                for r, v in self.colvec[b].items():
                    vec[r] = v
                rhs.append(ZERO)
            bt_rows.append(vec)
        from .rational import solve_linear

        y = solve_linear(bt_rows, rhs)
        if y is None:
            raise SolverError("singular basis while extracting duals")
        system = self.system
        neq = len(system.equalities)
        cert = [ZERO] * (neq + len(system.inequalities))
        for yi, (kind, i, sigma) in zip(y, self.rows):
            idx = i if kind == "eq" else neq + i
            cert[idx] = -sigma * yi
        colsum = [ZERO] * len(system.variables)
        for u, row in zip(cert, system.equalities + system.inequalities):
            if u:
                for j, c in enumerate(row.coeffs):
                    if c:
                        colsum[j] += u * c
        for j, i in self.bound_row.items():
            if colsum[j]:
                coeff = system.inequalities[i].coeffs[j]
                cert[neq + i] += colsum[j] / (-coeff)
        return cert

    def optimize(self, objective: Sequence, sense: str = "max") -> LpResult:
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        first = self.feasibility()
        if first.status == "infeasible":
            return first
        obj = [Q(c) for c in objective]
        if len(obj) != len(self.system.variables):
            raise ValueError("objective length must equal the number of variables")
        if sense == "max":
            obj = [-c for c in obj]
        cost = {}
        for c, (j, s) in enumerate(self.structural):
            if obj[j]:
                cost[c] = s * obj[j]
        d = [cost.get(c, ZERO) for c in self.nonbasic]
        z = ZERO
        for i, b in enumerate(self.basis):
            cb = cost.get(b)
            if cb:
                z += cb * self.beta[i]
                row = self.T[i]
                for j, v in enumerate(row):
                    if v:
                        d[j] -= cb * v
        z, unbounded = self._run(d, z)
        point = self._point()
        if not self.system.satisfies(point):
            if self.presolve:
                self._restart_without_presolve()
                return self.optimize(objective, sense)
            raise SolverError("phase 2 point violates the system")
        if unbounded is not None:
            return LpResult("unbounded", point=point, pivots=self.pivots)
        value = -z if sense == "max" else z
        check = sum((Q(c) * x for c, x in zip(objective, point)), ZERO)
        if check != value:
            raise SolverError("objective value mismatch")
        return LpResult("feasible", point=point, objective_value=value, pivots=self.pivots)


def solve(system: ConstraintSystem, objective: Sequence | None = None, sense: str = "max",
          deadline: float | None = None) -> LpResult:
    """Feasibility (no objective) or exact optimization over ``system``."""
    lp = LinearProgram(system, deadline=deadline)
    if objective is None:
        return lp.feasibility()
    return lp.optimize(objective, sense)


def _hull_rank(system: ConstraintSystem, implicit: Sequence[int]) -> tuple[int, list, list]:
    rows = [list(r.coeffs) for r in system.equalities]
    rhs = [r.rhs for r in system.equalities]
    for i in implicit:
        rows.append(list(system.inequalities[i].coeffs))
        rhs.append(system.inequalities[i].rhs)
    # coordinates pinned by a single-entry row drop out of the rank computation
    pinned = set()
    for r in rows:
        nz = [j for j, c in enumerate(r) if c]
        if len(nz) == 1:
            pinned.add(nz[0])
    keep = [j for j in range(len(system.variables)) if j not in pinned]
    reduced = [[r[j] for j in keep] for r in rows]
    reduced = [r for r in reduced if any(r)]
    return len(pinned) + rank(reduced), rows, rhs


def summarize(system: ConstraintSystem, deadline: float | None = None) -> PolytopeSummary:
    """Emptiness, implicit equalities, affine hull and dimension.

    An inequality is an implicit equality iff its left side cannot drop
    below the right side anywhere on the polytope; each surviving
    candidate is minimized from a warm feasible basis, and every optimum
    found also clears all other candidates it satisfies strictly.
    """
    lp = LinearProgram(system, deadline=deadline)
    first = lp.feasibility()
    if first.status == "infeasible":
        return PolytopeSummary(True, -1, certificate=first.certificate)
    ineqs = system.inequalities

    def slack_free(point):
        return {i for i in candidates if ineqs[i].value(point) < ineqs[i].rhs}

    candidates = {i for i, row in enumerate(ineqs) if row.value(first.point) == row.rhs}
    implicit = []
    points = [first.point]
    for i in sorted(candidates):
        if i not in candidates:
            continue
        res = lp.optimize(ineqs[i].coeffs, "min")
        if res.status == "unbounded" or res.objective_value < ineqs[i].rhs:
            points.append(res.point)
            candidates -= slack_free(res.point)
            candidates.discard(i)
        else:
            implicit.append(i)
            candidates.discard(i)
    implicit.sort()
    r, rows, rhs = _hull_rank(system, implicit)
    dimension = len(system.variables) - r
    # average of the points found lies in the relative interior of their hull
    center = [sum(p[j] for p in points) / len(points) for j in range(len(system.variables))]
    return PolytopeSummary(False, dimension, implicit, (rows, rhs), point=center)


def variable_bounds(system: ConstraintSystem, indices: Sequence[int] | None = None,
                    deadline: float | None = None) -> list[tuple[object, object]]:
    """Exact ``(min, max)`` of each variable; ``max`` is ``None`` when
    unbounded above (and ``min`` is ``None`` when unbounded below)."""
    lp = LinearProgram(system, deadline=deadline)
    if lp.feasibility().status == "infeasible":
        raise EmptyPolytope("polytope is empty")
    nv = len(system.variables)
    if indices is None:
        indices = range(nv)
    out = []
    for j in indices:
        e = [ZERO] * nv
        e[j] = ONE
        lo = lp.optimize(e, "min")
        hi = lp.optimize(e, "max")
        out.append((lo.objective_value if lo.status == "feasible" else None,
                    hi.objective_value if hi.status == "feasible" else None))
    return out


def as_equality(row: Constraint) -> Constraint:
    return Constraint(row.coeffs, row.rhs, row.tag)
