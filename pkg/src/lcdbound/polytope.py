"""H-representations of the joint LCD polytope K(n,k,d) and of the
restricted polytope K_res(n,k,d) over weight distributions only.

Rows carry a provenance tag naming the constraint family that produced
them. Joint-model tags: ``"1"``..``"10"`` for the ten coefficient
relations, ``"prop1"`` (sign invariance in d), ``"prop2"`` (MacWilliams
fixed point), ``"norm"`` (``M(n,0,0,0) = 1``). Restricted-model tags are
``"res1"``..``"res5"``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace
from typing import IO, NamedTuple, Sequence

from .combinatorics import (
    Composition,
    binomial,
    enumerate_compositions,
    krawtchuk_table,
    macwilliams_columns,
)
from .gf2 import JointEnumerator
from .rational import Q, ZERO, clear_denominators, format_rational, parse_rational

JOINT_TAGS = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "prop1", "prop2", "norm")
RESTRICTED_TAGS = ("res1", "res2", "res3", "res4", "res5")


class InvalidParameters(ValueError):
    pass


class VariableIndex(NamedTuple):
    kind: str  # "M", "A" or "B"
    key: object  # Composition for M, weight for A/B

    def label(self) -> str:
        if self.kind == "M":
            return "M:" + ",".join(str(x) for x in self.key)
        return f"{self.kind}:{self.key}"

    @classmethod
    def from_label(cls, text: str) -> "VariableIndex":
        kind, _, key = text.partition(":")
        if kind == "M":
            return cls("M", Composition(*(int(x) for x in key.split(","))))
        if kind in ("A", "B"):
            return cls(kind, int(key))
        raise ValueError(f"bad variable label {text!r}")


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x == rhs`` (equality) or ``coeffs . x <= rhs`` (inequality)."""

    coeffs: tuple
    rhs: object
    tag: str

    def value(self, point: Sequence):
        return sum((c * x for c, x in zip(self.coeffs, point) if c), ZERO)


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    k: int
    d: int
    variables: tuple[VariableIndex, ...]
    equalities: tuple[Constraint, ...]
    inequalities: tuple[Constraint, ...]
    model: str = "custom"
    options: tuple[tuple[str, bool], ...] = ()
    # forced-zero coordinates removed from the variable list
    eliminated: tuple[tuple[VariableIndex, str], ...] = ()
    # coordinates replaced by linear expressions in the retained variables
    substituted: tuple[tuple[VariableIndex, str], ...] = ()
    # families whose index range is empty for these parameters
    vacuous: tuple[str, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        size = len(self.variables)
        for row in self.equalities + self.inequalities:
            if len(row.coeffs) != size:
                raise ValueError("constraint length does not match variable count")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.variables)})

    @property
    def dimension_bound(self) -> int:
        return len(self.variables)

    def index_of(self, var: VariableIndex) -> int | None:
        return self._index.get(var)

    def option(self, name: str, default=None):
        return dict(self.options).get(name, default)

    def violations(self, point: Sequence) -> list[tuple[str, int]]:
        """Rows not satisfied exactly by ``point``."""
        point = [Q(x) for x in point]
        if len(point) != len(self.variables):
            raise ValueError("point has wrong length")
        bad = []
        for i, row in enumerate(self.equalities):
            if row.value(point) != row.rhs:
                bad.append(("eq", i))
        for i, row in enumerate(self.inequalities):
            if row.value(point) > row.rhs:
                bad.append(("ineq", i))
        return bad

    def satisfies(self, point: Sequence) -> bool:
        return not self.violations(point)

    def provenance_tags(self) -> set[str]:
        tags = set()
        for row in self.equalities + self.inequalities:
            tags.update(row.tag.split("+"))
        for _, tag in self.eliminated + self.substituted:
            tags.update(tag.split("+"))
        tags.update(self.vacuous)
        return tags

    def with_extra(self, equalities: Sequence[Constraint] = (), inequalities: Sequence[Constraint] = ()) -> "ConstraintSystem":
        return replace(
            self,
            equalities=self.equalities + tuple(equalities),
            inequalities=self.inequalities + tuple(inequalities),
        )

    def without_inequality(self, index: int) -> "ConstraintSystem":
        rows = self.inequalities[:index] + self.inequalities[index + 1:]
        return replace(self, inequalities=rows)


def _row(size: int, entries: dict[int, object], rhs, tag: str) -> Constraint | None:
    coeffs = [ZERO] * size
    for j, v in entries.items():
        coeffs[j] += Q(v)
    if not any(coeffs) and Q(rhs) == 0:
        return None
    ints, r = clear_denominators(coeffs, rhs)
    return Constraint(ints, r, tag)


def _check_parameters(n: int, k: int, d: int) -> None:
    if n < 1 or not 1 <= k <= n or not 1 <= d <= n:
        raise InvalidParameters(f"need 1 <= k <= n and 1 <= d <= n, got n={n} k={k} d={d}")


def _joint_zero_tags(n: int, d: int) -> dict[Composition, str]:
    zeros = {}
    for m in enumerate_compositions(n):
        tags = []
        if m.n11 % 2:
            tags += ["2", "prop1"]
        if m.n01 == 0 and m.n10 == 0 and m.n00 < n:
            tags.append("7")
        if m.n01 == 0 and m.n11 == 0 and 0 < m.n10 < d:
            tags.append("8")
        if tags:
            zeros[m] = "+".join(tags)
    return zeros


def build_joint_system(n: int, k: int, d: int, *, normalization: bool = True,
                       prop2: bool = True, strict_paper: bool = False) -> ConstraintSystem:
    """Constraint system of K(n,k,d) over the nonzero-able coefficients ``M``.

    ``strict_paper`` drops the normalization row, keeping only what the
    ten coefficient relations and the invariance equations imply.
    """
    _check_parameters(n, k, d)
    if strict_paper:
        normalization = False
    comps = enumerate_compositions(n)
    zeros = _joint_zero_tags(n, d)
    retained = [m for m in comps if m not in zeros]
    col = {m: j for j, m in enumerate(retained)}
    size = len(retained)

    def a_slice(w):
        return Composition(n - w, 0, w, 0)

    def b_slice(w):
        return Composition(n - w, w, 0, 0)

    eqs: list[Constraint] = []
    ineqs: list[Constraint] = []

    def add(target, entries, rhs, tag):
        row = _row(size, entries, rhs, tag)
        if row is not None:
            target.append(row)

    if normalization:
        add(eqs, {col[Composition(n, 0, 0, 0)]: 1}, 1, "norm")

    add(eqs, {col[a_slice(w)]: 1 for w in range(n + 1) if a_slice(w) in col}, 2 ** k, "1")

    for p in range(n + 1):
        entries: dict[int, object] = {}
        if a_slice(p) in col:
            entries[col[a_slice(p)]] = 2 ** (n - k)
        for m in retained:
            if m.n10 + m.n11 == p:
                entries[col[m]] = entries.get(col[m], 0) - 1
        add(eqs, entries, 0, "9")
    for p in range(n + 1):
        entries = {}
        if b_slice(p) in col:
            entries[col[b_slice(p)]] = 2 ** k
        for m in retained:
            if m.n01 + m.n11 == p:
                entries[col[m]] = entries.get(col[m], 0) - 1
        add(eqs, entries, 0, "10")

    if prop2:
        columns, denom = macwilliams_columns(n)
        index = {m: i for i, m in enumerate(comps)}
        rows: dict[int, dict[int, int]] = {}
        for m in retained:
            j = index[m]
            for i, v in columns[j].items():
                rows.setdefault(i, {})[col[m]] = -v
        seen = set()
        for i, m in enumerate(comps):
            entries = dict(rows.get(i, {}))
            if m in col:
                entries[col[m]] = entries.get(col[m], 0) + denom
            row = _row(size, entries, 0, "prop2")
            if row is None:
                continue
            key = row.coeffs
            neg = tuple(-c for c in key)
            if key in seen or neg in seen:
                continue
            seen.add(key)
            eqs.append(row)

    for m in retained:
        add(ineqs, {col[m]: -1}, 0, "3")

    for i in range(1, n + 1):
        entries = {col[b_slice(i)]: 1}
        if a_slice(i) in col:
            entries[col[a_slice(i)]] = 1
        add(ineqs, entries, binomial(n, i), "6")

    substituted = tuple((VariableIndex("A", w), "4") for w in range(n + 1)) + tuple(
        (VariableIndex("B", w), "5") for w in range(n + 1))
    vacuous = ("8",) if d == 1 else ()
    if not normalization:
        vacuous += ("norm",)
    if not prop2:
        vacuous += ("prop2",)
    return ConstraintSystem(
        n=n, k=k, d=d,
        variables=tuple(VariableIndex("M", m) for m in retained),
        equalities=tuple(eqs),
        inequalities=tuple(ineqs),
        model="joint",
        options=(("normalization", normalization), ("prop2", prop2)),
        eliminated=tuple((VariableIndex("M", m), tag) for m, tag in zeros.items()),
        substituted=substituted,
        vacuous=vacuous,
    )


def build_restricted_system(n: int, k: int, d: int) -> ConstraintSystem:
    """Constraint system of K_res(n,k,d) over ``A_1..A_n`` with ``A_0 = 1``
    and ``B_i = 2**-k sum_j A_j P_i(j)`` substituted."""
    _check_parameters(n, k, d)
    kt = krawtchuk_table(n)
    retained = [w for w in range(1, n + 1) if w >= d]
    col = {w: j for j, w in enumerate(retained)}
    size = len(retained)
    eqs: list[Constraint] = []
    ineqs: list[Constraint] = []

    def add(target, entries, rhs, tag):
        row = _row(size, entries, rhs, tag)
        if row is not None:
            target.append(row)

    # B_0 = 1
    add(eqs, {col[w]: 1 for w in retained}, 2 ** k - 1, "res2")
    for w in retained:
        add(ineqs, {col[w]: -1}, 0, "res1")
    for i in range(1, n + 1):
        # B_i >= 0, scaled by 2**k
        add(ineqs, {col[j]: -kt(i, j) for j in retained}, kt(i, 0), "res1")
    for i in range(1, n + 1):
        entries = {col[j]: kt(i, j) for j in retained}
        if i in col:
            entries[col[i]] = entries.get(col[i], 0) + 2 ** k
        add(ineqs, entries, 2 ** k * binomial(n, i) - kt(i, 0), "res4")
    return ConstraintSystem(
        n=n, k=k, d=d,
        variables=tuple(VariableIndex("A", w) for w in retained),
        equalities=tuple(eqs),
        inequalities=tuple(ineqs),
        model="restricted",
        eliminated=tuple((VariableIndex("A", w), "res3") for w in range(1, d)),
        substituted=((VariableIndex("A", 0), "res2"), (VariableIndex("B", 0), "res2"))
        + tuple((VariableIndex("B", i), "res5") for i in range(1, n + 1)),
        vacuous=("res3",) if d == 1 else (),
    )


def build_system(model: str, n: int, k: int, d: int, **flags) -> ConstraintSystem:
    if model == "joint":
        return build_joint_system(n, k, d, **flags)
    if model == "restricted":
        return build_restricted_system(n, k, d)
    raise ValueError(f"unknown model {model!r}")


def custom_system(num_vars: int, equalities=(), inequalities=()) -> ConstraintSystem:
    """Generic system from ``(coeffs, rhs)`` pairs; ``<=`` for inequalities."""
    variables = tuple(VariableIndex("A", i) for i in range(num_vars))

    def conv(rows):
        return tuple(Constraint(tuple(Q(c) for c in coeffs), Q(rhs), "custom") for coeffs, rhs in rows)

    return ConstraintSystem(n=0, k=0, d=0, variables=variables,
                            equalities=conv(equalities), inequalities=conv(inequalities))


def enumerator_point(system: ConstraintSystem, je: JointEnumerator) -> list | None:
    """Coordinates of a joint enumerator in ``system``'s variables, or None
    when it is nonzero on an eliminated coordinate."""
    if system.model != "joint" or je.n != system.n:
        raise ValueError("enumerator does not match a joint system of this length")
    for var, _ in system.eliminated:
        if je[var.key]:
            return None
    return [Q(je[var.key]) for var in system.variables]


def contains_enumerator(system: ConstraintSystem, je: JointEnumerator) -> bool:
    point = enumerator_point(system, je)
    return point is not None and system.satisfies(point)


def distribution_point(system: ConstraintSystem, counts: Sequence[int]) -> list | None:
    """Coordinates of a weight distribution ``A_0..A_n`` in a restricted system."""
    if system.model != "restricted":
        raise ValueError("not a restricted system")
    if counts[0] != 1:
        return None
    for var, _ in system.eliminated:
        if counts[var.key]:
            return None
    return [Q(counts[var.key]) for var in system.variables]


def export_h_representation(system: ConstraintSystem, sink: IO[str]) -> None:
    """Write a cdd-style ``.ine`` text with a ``*`` comment sidecar."""
    opts = " ".join(f"{name}={int(value)}" for name, value in system.options)
    sink.write(f"* lcdbound model={system.model} n={system.n} k={system.k} d={system.d}"
               + (f" {opts}" if opts else "") + "\n")
    sink.write("* variables " + " ".join(v.label() for v in system.variables) + "\n")
    if system.eliminated:
        sink.write("* eliminated " + " ".join(f"{v.label()}={t}" for v, t in system.eliminated) + "\n")
    if system.substituted:
        sink.write("* substituted " + " ".join(f"{v.label()}={t}" for v, t in system.substituted) + "\n")
    if system.vacuous:
        sink.write("* vacuous " + " ".join(system.vacuous) + "\n")
    rows = system.equalities + system.inequalities
    sink.write("* tags " + " ".join(r.tag for r in rows) + "\n")
    sink.write("H-representation\n")
    if system.equalities:
        idx = " ".join(str(i + 1) for i in range(len(system.equalities)))
        sink.write(f"linearity {len(system.equalities)} {idx}\n")
    sink.write("begin\n")
    sink.write(f" {len(rows)} {len(system.variables) + 1} rational\n")
    for r in rows:
        sink.write(" " + " ".join([format_rational(r.rhs)] + [format_rational(-c) for c in r.coeffs]) + "\n")
    sink.write("end\n")


def export_text(system: ConstraintSystem) -> str:
    buf = io.StringIO()
    export_h_representation(system, buf)
    return buf.getvalue()


def parse_h_representation(text: str) -> ConstraintSystem:
    """Inverse of :func:`export_h_representation`.

    Files without the sidecar are accepted; variables are then named
    ``x1..xd`` and every row is tagged ``"cdd"``.
    """
    meta: dict[str, str] = {}
    variables = None
    eliminated: tuple = ()
    substituted: tuple = ()
    vacuous: tuple = ()
    tags = None
    linearity: set[int] = set()
    rows: list[list] = []
    lines = iter(text.splitlines())
    in_body = False
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("*"):
            parts = line[1:].split()
            if not parts:
                continue
            head, rest = parts[0], parts[1:]
            if head == "lcdbound":
                meta = dict(p.split("=", 1) for p in rest)
            elif head == "variables":
                variables = tuple(VariableIndex.from_label(p) for p in rest)
            elif head in ("eliminated", "substituted"):
                pairs = tuple((VariableIndex.from_label(p.split("=")[0]), p.split("=", 1)[1]) for p in rest)
                if head == "eliminated":
                    eliminated = pairs
                else:
                    substituted = pairs
            elif head == "vacuous":
                vacuous = tuple(rest)
            elif head == "tags":
                tags = rest
            continue
        if line == "H-representation":
            continue
        if line.startswith("linearity"):
            nums = [int(x) for x in line.split()[1:]]
            if nums[0] != len(nums) - 1:
                raise ValueError("linearity count mismatch")
            linearity = {i - 1 for i in nums[1:]}
            continue
        if line == "begin":
            in_body = True
            size_line = next(lines).split()
            nrows, ncols = int(size_line[0]), int(size_line[1])
            if size_line[2] not in ("rational", "integer"):
                raise ValueError(f"unsupported number type {size_line[2]!r}")
            continue
        if line == "end":
            break
        if in_body:
            rows.append([parse_rational(x) for x in line.split()])
    if not in_body:
        raise ValueError("missing begin/end block")
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ValueError("row count or width mismatch")
    num_vars = ncols - 1
    if variables is None:
        variables = tuple(VariableIndex("A", i) for i in range(num_vars))
    if tags is None:
        tags = ["cdd"] * nrows
    eqs, ineqs = [], []
    for i, r in enumerate(rows):
        c = Constraint(tuple(-x for x in r[1:]), r[0], tags[i])
        (eqs if i in linearity else ineqs).append(c)
    options = tuple((k, bool(int(v))) for k, v in meta.items() if k not in ("model", "n", "k", "d"))
    return ConstraintSystem(
        n=int(meta.get("n", 0)), k=int(meta.get("k", 0)), d=int(meta.get("d", 0)),
        variables=variables, equalities=tuple(eqs), inequalities=tuple(ineqs),
        model=meta.get("model", "custom"), options=options,
        eliminated=eliminated, substituted=substituted, vacuous=vacuous,
    )
