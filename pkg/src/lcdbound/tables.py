"""Bound tables: d_max(n, k) and k_max(n, d) from exact feasibility tests.

Feasibility is monotone in d (raising d only adds constraints), so each
(n, k) row is scanned upward from the best distance certified by a code
until the first infeasible d. Nothing is assumed about monotonicity in k:
k_max reads every k of a column and reports interleavings as gaps.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .gf2 import BinaryCode, dual, joint_enumerator, random_lcd_search, weight_distribution
from .ledger import FEASIBLE, INFEASIBLE, UNKNOWN, Ledger, LedgerEntry
from .lp import BudgetExceeded, LinearProgram, summarize
from .polytope import (build_joint_system, build_restricted_system, contains_enumerator,
                       distribution_point)

DEFAULT_TRIALS = 400


@dataclass(frozen=True)
class ModelConfig:
    model: str = "joint"
    prop2: bool = True
    normalization: bool = True
    strict_paper: bool = False

    def __post_init__(self):
        if self.model not in ("joint", "restricted"):
            raise ValueError(f"unknown model {self.model!r}")

    def flags(self) -> dict:
        if self.model == "restricted":
            return {}
        return {"normalization": self.normalization and not self.strict_paper,
                "prop2": self.prop2, "strict_paper": self.strict_paper}

    def build(self, n: int, k: int, d: int):
        if self.model == "restricted":
            return build_restricted_system(n, k, d)
        return build_joint_system(n, k, d, normalization=self.normalization,
                                  prop2=self.prop2, strict_paper=self.strict_paper)


@dataclass
class Outcome:
    n: int
    k: int
    d: int
    status: str
    source: str = "lp"
    dimension: int | None = None
    seconds: float = 0.0


def decide(config: ModelConfig, n: int, k: int, d: int, budget: float | None = None,
           dimension: bool = False) -> Outcome:
    """One LP decision; UNKNOWN when ``budget`` seconds run out."""
    start = time.monotonic()
    deadline = start + budget if budget else None
    system = config.build(n, k, d)
    try:
        if dimension:
            summary = summarize(system, deadline=deadline)
            status = INFEASIBLE if summary.empty else FEASIBLE
            dim = None if summary.empty else summary.dimension
        else:
            status = LinearProgram(system, deadline=deadline).feasibility().status
            dim = None
    except BudgetExceeded:
        status, dim = UNKNOWN, None
    return Outcome(n, k, d, status, "lp", dim, time.monotonic() - start)


def known_codes(n: int, k: int) -> list[BinaryCode]:
    """Codes that are LCD by construction: ``span(e_1..e_k)``, and for even
    k <= n-1 the parity-check code of odd length k+1 padded with zeros."""
    codes = [BinaryCode(n, tuple(1 << i for i in range(k)))]
    if k % 2 == 0 and k + 1 <= n:
        codes.append(BinaryCode(n, tuple(3 << i for i in range(k))))
    return codes


def code_in_model(config: ModelConfig, code: BinaryCode, d: int) -> bool:
    system = config.build(code.n, code.k, d)
    if config.model == "joint":
        return contains_enumerator(system, joint_enumerator(code, dual(code)))
    point = distribution_point(system, weight_distribution(code).counts)
    return point is not None and system.satisfies(point)


def witness(config: ModelConfig, n: int, k: int, trials: int = DEFAULT_TRIALS) -> tuple[int, BinaryCode]:
    """Largest distance certified by an LCD code, with the code. The code's
    enumerator is checked to satisfy the system exactly."""
    candidates = known_codes(n, k)
    found = random_lcd_search(n, k, trials) if trials else None
    if found is not None:
        candidates.append(found)
    best = max(candidates, key=lambda c: c.minimum_distance())
    d = best.minimum_distance()
    if not code_in_model(config, best, d):
        raise ArithmeticError(f"LCD code {best.row_strings()} violates the {config.model} system")
    return d, best


def scan_row(config: ModelConfig, n: int, k: int, known: dict[int, str],
             budget: float | None = None, shortcuts: bool = True,
             trials: int = DEFAULT_TRIALS) -> list[Outcome]:
    """New outcomes along the d-scan of row (n, k), given statuses ``known``."""
    lo = max((d for d, s in known.items() if s == FEASIBLE), default=0)
    hi = min((d for d, s in known.items() if s == INFEASIBLE), default=n + 1)
    out = []
    if shortcuts and hi > lo + 1:
        w, _ = witness(config, n, k, trials)
        if w > lo:
            out.append(Outcome(n, k, w, FEASIBLE, "witness"))
            lo = w
    d = lo + 1
    while d < hi:
        res = decide(config, n, k, d, budget)
        out.append(res)
        if res.status == FEASIBLE:
            lo = d
            d += 1
        else:
            break
    return out


def _scan_task(args):
    return scan_row(*args)


@dataclass
class BoundTable:
    kind: str  # "dmax" or "kmax"
    n_max: int
    model: str
    flags: dict
    entries: dict  # (n, k) -> d_max or (n, d) -> k_max; None when unknown
    gaps: list = field(default_factory=list)

    @property
    def column(self) -> str:
        return "k" if self.kind == "dmax" else "d"

    def unknown(self) -> list:
        return sorted(key for key, v in self.entries.items() if v is None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", self.column, self.kind])
        for (n, j), v in sorted(self.entries.items()):
            writer.writerow([n, j, "?" if v is None else v])
        return buf.getvalue()

    def to_text(self) -> str:
        width = max(3, len(str(self.n_max)) + 1)
        head = "n\\" + self.column
        lines = [f"{self.kind} ({self.model})",
                 head.rjust(width + 1) + "".join(str(j).rjust(width) for j in range(1, self.n_max + 1))]
        for n in sorted({n for n, _ in self.entries}):
            cells = []
            for j in range(1, self.n_max + 1):
                if (n, j) not in self.entries:
                    cells.append("".rjust(width))
                else:
                    v = self.entries[(n, j)]
                    cells.append(("?" if v is None else str(v)).rjust(width))
            lines.append(str(n).rjust(width + 1) + "".join(cells).rstrip())
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "kind": self.kind, "n_max": self.n_max, "model": self.model, "flags": self.flags,
            "entries": [{"n": n, self.column: j, self.kind: v} for (n, j), v in sorted(self.entries.items())],
            "gaps": [list(g) for g in self.gaps],
        }, sort_keys=True)

    def render(self, fmt: str) -> str:
        return {"csv": self.to_csv, "text": self.to_text, "json": self.to_json}[fmt]()


def parse_csv_table(text: str) -> dict:
    rows = list(csv.reader(io.StringIO(text)))
    out = {}
    for n, j, v in rows[1:]:
        out[(int(n), int(j))] = None if v == "?" else int(v)
    return out


def parse_text_table(text: str) -> dict:
    """Inverse of :meth:`BoundTable.to_text`."""
    lines = [line for line in text.splitlines() if line.strip()]
    header = lines[1]
    columns = [int(c) for c in header.split()[1:]]
    width = (len(header) - 1) // (len(columns) + 1)
    out = {}
    for line in lines[2:]:
        n = int(line[:width + 1])
        for pos, j in enumerate(columns):
            start = width + 1 + pos * width
            cell = line[start:start + width].strip()
            if cell:
                out[(n, j)] = None if cell == "?" else int(cell)
    return out


class TableRunner:
    """Resolves feasibility through the ledger, monotonicity in d, code
    witnesses and, when nothing else answers, exact LPs."""

    def __init__(self, config: ModelConfig, ledger: Ledger | None = None, budget: float | None = None,
                 jobs: int = 1, shortcuts: bool = True, trials: int = DEFAULT_TRIALS):
        self.config = config
        self.ledger = ledger if ledger is not None else Ledger()
        self.budget = budget
        self.jobs = max(1, jobs)
        self.shortcuts = shortcuts
        self.trials = trials

    @property
    def flags(self) -> dict:
        return self.config.flags()

    def record(self, o: Outcome) -> None:
        if o.status == UNKNOWN:
            return
        self.ledger.record(LedgerEntry(self.config.model, self.flags, o.n, o.k, o.d, o.status,
                                       dimension=o.dimension, source=o.source))

    def known(self, n: int, k: int) -> dict[int, str]:
        return self.ledger.statuses(self.config.model, self.flags, n, k)

    def status(self, n: int, k: int, d: int) -> str:
        """Status implied by recorded results, without solving."""
        known = self.known(n, k)
        if any(s == FEASIBLE and e >= d for e, s in known.items()):
            return FEASIBLE
        if any(s == INFEASIBLE and e <= d for e, s in known.items()):
            return INFEASIBLE
        return UNKNOWN

    def _run(self, fn, tasks):
        if self.jobs == 1 or len(tasks) < 2:
            for t in tasks:
                yield fn(t)
            return
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            yield from pool.map(fn, tasks)

    def resolve_rows(self, pairs) -> None:
        tasks = [(self.config, n, k, self.known(n, k), self.budget, self.shortcuts, self.trials)
                 for n, k in pairs]
        for outcomes in self._run(_scan_task, tasks):
            for o in outcomes:
                self.record(o)

    def dmax_value(self, n: int, k: int) -> int | None:
        known = self.known(n, k)
        lo = max((d for d, s in known.items() if s == FEASIBLE), default=0)
        hi = min((d for d, s in known.items() if s == INFEASIBLE), default=n + 1)
        return lo if hi == lo + 1 else None

    def dmax_table(self, n_max: int, n_min: int = 1) -> BoundTable:
        pairs = [(n, k) for n in range(n_min, n_max + 1) for k in range(1, n + 1)]
        self.resolve_rows(pairs)
        entries = {(n, k): self.dmax_value(n, k) for n, k in pairs}
        return BoundTable("dmax", n_max, self.config.model, self.flags, entries)

    def kmax_table(self, n_max: int, n_min: int = 1) -> BoundTable:
        pairs = [(n, k) for n in range(n_min, n_max + 1) for k in range(1, n + 1)]
        self.resolve_rows(pairs)
        entries, gaps = {}, []
        for n in range(n_min, n_max + 1):
            for d in range(1, n + 1):
                col = {k: self.status(n, k, d) for k in range(1, n + 1)}
                feasible = [k for k, s in col.items() if s == FEASIBLE]
                top = max(feasible, default=0)
                if any(s == UNKNOWN and k > top for k, s in col.items()):
                    entries[(n, d)] = None
                else:
                    entries[(n, d)] = top
                gaps.extend((n, d, k) for k, s in col.items() if k < top and s == INFEASIBLE)
        return BoundTable("kmax", n_max, self.config.model, self.flags, entries, gaps)

    def grid(self, n_max: int, n_min: int = 1) -> dict:
        """Status of every triple, each decided by its own LP unless the
        ledger already holds it."""
        triples = [(n, k, d) for n in range(n_min, n_max + 1)
                   for k in range(1, n + 1) for d in range(1, n + 1)]
        todo = [t for t in triples if self.ledger.get(self.config.model, self.flags, *t) is None]
        tasks = [(self.config, n, k, d, self.budget) for n, k, d in todo]
        for o in self._run(_decide_task, tasks):
            self.record(o)
        out = {}
        for t in triples:
            e = self.ledger.get(self.config.model, self.flags, *t)
            out[t] = e.status if e else UNKNOWN
        return out


def _decide_task(args):
    return decide(*args)


@dataclass
class Comparison:
    joint: BoundTable
    restricted: BoundTable

    def cells(self) -> list[tuple]:
        rows = []
        for key in sorted(self.joint.entries):
            rows.append((key, self.joint.entries[key], self.restricted.entries.get(key)))
        return rows

    def violations(self) -> list[tuple]:
        return [(key, j, r) for key, j, r in self.cells()
                if j is not None and r is not None and j > r]

    def to_text(self) -> str:
        n_max = self.joint.n_max
        width = 8
        lines = ["dmax joint (restricted where different)",
                 "n\\k".rjust(4) + "".join(str(k).rjust(width) for k in range(1, n_max + 1))]
        for n in sorted({n for n, _ in self.joint.entries}):
            cells = []
            for k in range(1, n + 1):
                j = self.joint.entries.get((n, k))
                r = self.restricted.entries.get((n, k))
                txt = "?" if j is None else str(j)
                if r != j:
                    txt += " (" + ("?" if r is None else str(r)) + ")"
                cells.append(txt.rjust(width))
            lines.append(str(n).rjust(4) + "".join(cells))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "k", "dmax_joint", "dmax_restricted"])
        for (n, k), j, r in self.cells():
            writer.writerow([n, k, "?" if j is None else j, "?" if r is None else r])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"cells": [{"n": n, "k": k, "joint": j, "restricted": r}
                                     for (n, k), j, r in self.cells()],
                           "violations": [list(key) for key, _, _ in self.violations()]})

    def render(self, fmt: str) -> str:
        return {"csv": self.to_csv, "text": self.to_text, "json": self.to_json}[fmt]()


def compare(n_max: int, joint: TableRunner, restricted: TableRunner) -> Comparison:
    return Comparison(joint.dmax_table(n_max), restricted.dmax_table(n_max))
