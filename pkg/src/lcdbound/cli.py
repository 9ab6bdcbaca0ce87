"""Command-line driver.

Exit codes: 0 on any answer (INFEASIBLE included), 2 on usage errors and
unmet preconditions, 3 when a solver budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .geometry import (DEFAULT_DIM_THRESHOLD, DEFAULT_POINT_CAP, CapExceeded, DimensionTooHigh,
                       double_description)
from .gf2 import (DEFAULT_SEARCH_CAP, CapExceeded as SearchCapExceeded, dual,
                  exhaustive_lcd_search, gaussian_binomial, is_lcd, joint_enumerator,
                  read_generator, write_generator)
from .invariants import (MINUS_I, characteristic_coefficients, closed_form_molien, determinant,
                         molien_series, enumerator_checks, standard_group)
from .ledger import INFEASIBLE, UNKNOWN, Ledger, LedgerConflict, LedgerEntry, default_path
from .lp import BudgetExceeded, summarize
from .polytope import InvalidParameters, contains_enumerator, export_text
from .rational import format_rational
from .tables import ModelConfig, TableRunner, compare, decide

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _config(args) -> ModelConfig:
    return ModelConfig(model=args.model, prop2=not args.no_prop2, strict_paper=args.strict_paper)


def _ledger(args) -> Ledger:
    return Ledger(args.ledger or default_path())


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check_triple(n: int, k: int, d: int) -> None:
    if not (1 <= k <= n and 1 <= d <= n):
        raise UsageError(f"need 1 <= k <= n and 1 <= d <= n, got n={n} k={k} d={d}")


def cmd_feasible(args) -> int:
    _check_triple(args.n, args.k, args.d)
    config = _config(args)
    outcome = decide(config, args.n, args.k, args.d, args.budget, dimension=args.dim)
    if outcome.status == UNKNOWN:
        print("UNKNOWN (budget exceeded)")
        return EXIT_BUDGET
    ledger = _ledger(args)
    ledger.record(LedgerEntry(config.model, config.flags(), args.n, args.k, args.d,
                              outcome.status, dimension=outcome.dimension))
    if args.format == "json":
        print(json.dumps({"n": args.n, "k": args.k, "d": args.d, "model": config.model,
                          "flags": config.flags(), "status": outcome.status,
                          "dimension": outcome.dimension}))
    else:
        print(outcome.status.upper())
        if outcome.dimension is not None:
            print(f"dimension: {outcome.dimension}")
    return EXIT_OK


def _runner(args, config=None) -> TableRunner:
    return TableRunner(config or _config(args), _ledger(args), budget=args.budget,
                       jobs=args.jobs, shortcuts=not args.no_shortcuts)


def cmd_dmax(args) -> int:
    table = _runner(args).dmax_table(args.n_max, args.n_min)
    _emit(args, table.render(args.format))
    return EXIT_BUDGET if table.unknown() else EXIT_OK


def cmd_kmax(args) -> int:
    table = _runner(args).kmax_table(args.n_max, args.n_min)
    _emit(args, table.render(args.format))
    if table.gaps and args.format != "json":
        sys.stderr.write("non-monotone k columns: " + ", ".join(
            f"(n={n},d={d}: k={k} infeasible)" for n, d, k in table.gaps) + "\n")
    return EXIT_BUDGET if table.unknown() else EXIT_OK


def cmd_compare(args) -> int:
    joint = _runner(args, ModelConfig("joint", prop2=not args.no_prop2, strict_paper=args.strict_paper))
    restricted = _runner(args, ModelConfig("restricted"))
    result = compare(args.n_max, joint, restricted)
    _emit(args, result.render(args.format))
    bad = result.violations()
    if bad:
        sys.stderr.write(f"joint bound exceeds restricted bound in {len(bad)} cells: {bad}\n")
        return 1
    unknown = result.joint.unknown() or result.restricted.unknown()
    return EXIT_BUDGET if unknown else EXIT_OK


def cmd_analyze(args) -> int:
    _check_triple(args.n, args.k, args.d)
    system = _config(args).build(args.n, args.k, args.d)
    summary = summarize(system)
    if summary.empty:
        raise UsageError("polytope empty")
    try:
        geometry = double_description(system, summary, threshold=args.dim_threshold, cap=args.cap)
    except DimensionTooHigh as exc:
        raise UsageError(f"{exc}; raise --dim-threshold to analyze it") from exc
    except CapExceeded as exc:
        raise UsageError(f"{exc}; raise --cap") from exc
    report = {"n": args.n, "k": args.k, "d": args.d, "model": system.model}
    body = geometry.to_dict()
    report.update({"dim": body["dimension"], "facets": body["facets"], "vertices": body["vertices"],
                   "integral_points": body["integral_points"], "points": body["integral_point_list"],
                   "vertex_list": body["vertex_list"],
                   "variables": [v.label() for v in system.variables],
                   "no_integral_point": geometry.integral_point_count == 0})
    if args.format == "json":
        _emit(args, json.dumps(report) + "\n")
    else:
        lines = [f"K({args.n},{args.k},{args.d}) {system.model}",
                 f"dimension: {geometry.dimension}",
                 f"facets: {geometry.facet_count}",
                 f"vertices: {geometry.vertex_count}",
                 f"integral points: {geometry.integral_point_count}"]
        for p in geometry.integral_points:
            lines.append("  " + " ".join(str(x) for x in p))
        if geometry.integral_point_count == 0:
            lines.append("nonempty polytope without integral points: counterexample candidate")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_jwe(args) -> int:
    try:
        code = read_generator(args.generator)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    je = joint_enumerator(code, dual(code))
    lcd = is_lcd(code)
    checks = enumerator_checks(je)
    d = code.minimum_distance()
    member = None
    if d is not None:
        joint = ModelConfig("joint", prop2=not args.no_prop2, strict_paper=args.strict_paper)
        member = contains_enumerator(joint.build(code.n, code.k, d), je)
    if args.format == "json":
        print(json.dumps({"n": code.n, "k": code.k, "d": d, "lcd": lcd,
                          "enumerator": {m.label(): c for m, c in je.terms()},
                          **checks, "member": member}))
        return EXIT_OK
    print(f"[{code.n},{code.k},{d}] code")
    for m, c in je.terms():
        print(f"  {m.label()} = {c}")
    print(f"LCD: {'true' if lcd else 'false'}")
    print(f"odd n11 coefficients vanish: {'PASS' if checks['odd_n11_vanish'] else 'FAIL'}")
    print(f"MacWilliams fixed point: {'PASS' if checks['macwilliams_fixed'] else 'FAIL'}")
    if code.n % 2 == 0:
        print(f"-I invariance: {'PASS' if checks['homogeneity'] else 'FAIL'}")
    if member is not None:
        print(f"in K({code.n},{code.k},{d}): {'true' if member else 'false'}")
    return EXIT_OK


def cmd_search(args) -> int:
    _check_triple(args.n, args.k, args.d)
    try:
        code = exhaustive_lcd_search(args.n, args.k, args.d, cap=args.cap)
    except SearchCapExceeded as exc:
        raise UsageError(str(exc)) from exc
    if code is None:
        print(f"none exists: {gaussian_binomial(args.n, args.k)} [{args.n},{args.k}] codes exhausted")
        return EXIT_OK
    for row in code.row_strings():
        print(row)
    if args.out:
        write_generator(code, args.out)
    outcome = decide(ModelConfig("joint"), args.n, args.k, args.d, args.budget)
    if outcome.status == INFEASIBLE:
        sys.stderr.write("soundness failure: LP reports INFEASIBLE for an existing code\n")
        return 1
    if outcome.status == UNKNOWN:
        print("LP cross-check: budget exceeded")
        return EXIT_BUDGET
    print("LP cross-check: FEASIBLE")
    return EXIT_OK


def cmd_molien(args) -> int:
    group = standard_group()
    series = molien_series(group, args.max_degree)
    closed = closed_form_molien(args.max_degree)
    for deg, c in enumerate(series.coefficients):
        print(f"{deg}: {format_rational(c)}")
    diff = [deg for deg in range(args.max_degree + 1) if series[deg] != closed[deg]]
    if diff:
        print(f"FAIL: closed form differs at degrees {diff} "
              f"(closed form: {', '.join(format_rational(c) for c in closed.coefficients)})")
    else:
        print("PASS: matches (1+2t^2+t^4)/((1-t^2)^3(1-t^6))")
    return EXIT_OK


def cmd_group(args) -> int:
    group = standard_group()
    print(f"order: {group.order}")
    central = all(MINUS_I @ g == g @ MINUS_I for g in group.elements)
    print(f"-I in group: {MINUS_I in group}, central: {central}")
    for g in group.elements:
        char = characteristic_coefficients(g)
        print(f"det {format_rational(determinant(g))}  trace {format_rational(-char[1])}  "
              f"rows {[[format_rational(x) for x in row] for row in g.tolist()]}")
    return EXIT_OK


def cmd_export(args) -> int:
    _check_triple(args.n, args.k, args.d)
    _emit(args, export_text(_config(args).build(args.n, args.k, args.d)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("joint", "restricted"), default="joint")
    common.add_argument("--strict-paper", action="store_true",
                        help="drop the normalization M(n,0,0,0)=1")
    common.add_argument("--no-prop2", action="store_true", help="omit the MacWilliams fixed-point rows")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--ledger", help="JSON-lines results file (default $LCD_LEDGER)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "text", "json"), default="text")
    common.add_argument("--dim-threshold", type=int, default=DEFAULT_DIM_THRESHOLD)
    common.add_argument("--budget", type=float, default=None, help="seconds per LP")
    common.add_argument("--no-shortcuts", action="store_true",
                        help="decide every cell by LP, without known-code witnesses")

    parser = argparse.ArgumentParser(prog="lcdbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def triple(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("feasible", parents=[common], help="decide one triple")
    triple(p)
    p.add_argument("--dim", action="store_true", help="also compute the polytope dimension")
    p.set_defaults(func=cmd_feasible)

    for name, func in (("dmax", cmd_dmax), ("kmax", cmd_kmax), ("compare", cmd_compare)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--n-max", type=int, required=True)
        if name != "compare":
            p.add_argument("--n-min", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("analyze", parents=[common], help="vertices, facets and integral points")
    triple(p)
    p.add_argument("--cap", type=int, default=DEFAULT_POINT_CAP)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("jwe", parents=[common], help="joint enumerator of a generator matrix file")
    p.add_argument("generator")
    p.set_defaults(func=cmd_jwe)

    p = sub.add_parser("search", parents=[common], help="exhaustive LCD code search")
    triple(p)
    p.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("molien", parents=[common])
    p.add_argument("--max-degree", type=int, default=20)
    p.set_defaults(func=cmd_molien)

    p = sub.add_parser("group", parents=[common])
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("export-polytope", parents=[common], help="cdd H-representation")
    triple(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (UsageError, InvalidParameters) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except LedgerConflict as exc:
        sys.stderr.write(f"ledger conflict: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
