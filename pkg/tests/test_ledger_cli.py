import json

import pytest

from lcdbound.cli import main
from lcdbound.gf2 import best_lcd_distances
from lcdbound.ledger import FEASIBLE, INFEASIBLE, UNKNOWN, Ledger, LedgerConflict, LedgerEntry
from lcdbound.polytope import parse_h_representation
from lcdbound.tables import (ModelConfig, TableRunner, compare, known_codes, parse_csv_table,
                             parse_text_table, witness)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# ledger

def test_ledger_round_trip(tmp_path):
    path = tmp_path / "l.jsonl"
    ledger = Ledger(path)
    ledger.record(LedgerEntry("joint", {"prop2": True}, 4, 2, 4, INFEASIBLE))
    ledger.record(LedgerEntry("joint", {"prop2": True}, 4, 2, 3, FEASIBLE))
    ledger.record(LedgerEntry("joint", {"prop2": True}, 4, 2, 3, FEASIBLE, dimension=1))
    again = Ledger(path)
    assert len(again) == 2
    assert again.get("joint", {"prop2": True}, 4, 2, 3).dimension == 1
    assert again.statuses("joint", {"prop2": True}, 4, 2) == {3: FEASIBLE, 4: INFEASIBLE}
    assert again.get("joint", {"prop2": False}, 4, 2, 3) is None
    line = json.loads(path.read_text().splitlines()[0])
    assert {"model", "flags", "n", "k", "d", "status", "timestamp", "tool_version"} <= set(line)


def test_ledger_conflicts(tmp_path):
    ledger = Ledger()
    ledger.record(LedgerEntry("joint", {}, 5, 2, 3, INFEASIBLE))
    with pytest.raises(LedgerConflict):
        ledger.record(LedgerEntry("joint", {}, 5, 2, 3, FEASIBLE))
    ledger.record(LedgerEntry("joint", {}, 5, 2, 2, FEASIBLE, dimension=2))
    with pytest.raises(LedgerConflict):
        ledger.record(LedgerEntry("joint", {}, 5, 2, 2, FEASIBLE, dimension=3))
    with pytest.raises(ValueError):
        ledger.record(LedgerEntry("joint", {}, 5, 2, 1, UNKNOWN))
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json}\n")
    with pytest.raises(ValueError):
        Ledger(bad)


# tables

def test_known_codes_are_lcd_witnesses():
    for n in range(1, 8):
        for k in range(1, n + 1):
            for code in known_codes(n, k):
                assert code.k == k
            d, code = witness(ModelConfig(), n, k, trials=50)
            assert d == code.minimum_distance() <= best_lcd_distances(n, k)[0]


def test_dmax_between_codes_and_relaxation():
    joint = TableRunner(ModelConfig("joint")).dmax_table(6)
    restricted = TableRunner(ModelConfig("restricted")).dmax_table(6)
    for (n, k), v in joint.entries.items():
        assert best_lcd_distances(n, k)[0] <= v <= restricted.entries[(n, k)]


def test_shortcuts_do_not_change_tables():
    with_witness = TableRunner(ModelConfig()).dmax_table(6)
    lp_only = TableRunner(ModelConfig(), shortcuts=False).dmax_table(6)
    assert with_witness.entries == lp_only.entries


def test_kmax_reads_dmax():
    runner = TableRunner(ModelConfig())
    dmax = runner.dmax_table(6)
    kmax = runner.kmax_table(6)
    for (n, d), k in kmax.entries.items():
        assert k == max((j for j in range(1, n + 1) if dmax.entries[(n, j)] >= d), default=0)


def test_text_and_csv_agree():
    table = TableRunner(ModelConfig("restricted")).dmax_table(11, n_min=9)
    assert parse_text_table(table.to_text()) == parse_csv_table(table.to_csv()) == table.entries
    assert json.loads(table.to_json())["kind"] == "dmax"


def test_unknown_cells_under_tiny_budget():
    runner = TableRunner(ModelConfig(), budget=1e-9, shortcuts=False)
    table = runner.dmax_table(10, n_min=10)
    assert table.unknown()
    assert "?" in table.to_text() and "?" in table.to_csv()


def test_compare_has_no_violations():
    result = compare(5, TableRunner(ModelConfig("joint")), TableRunner(ModelConfig("restricted")))
    assert result.violations() == []
    assert "(3)" in result.to_text()
    assert json.loads(result.to_json())["violations"] == []


def test_parallel_grid_matches_serial():
    serial = TableRunner(ModelConfig()).grid(5)
    parallel = TableRunner(ModelConfig(), jobs=2).grid(5)
    assert serial == parallel


# command line

def test_feasible_commands(capsys, tmp_path):
    ledger = tmp_path / "l.jsonl"
    assert run(capsys, "feasible", "--n", 3, "--k", 2, "--d", 2, "--ledger", ledger)[:2] == (0, "FEASIBLE\n")
    code, out, _ = run(capsys, "feasible", "--n", 5, "--k", 5, "--d", 1, "--dim", "--ledger", ledger)
    assert code == 0 and out == "FEASIBLE\ndimension: 0\n"
    for model in ("joint", "restricted"):
        code, out, _ = run(capsys, "feasible", "--n", 4, "--k", 2, "--d", 4, "--model", model)
        assert (code, out) == (0, "INFEASIBLE\n")
    code, out, _ = run(capsys, "feasible", "--n", 4, "--k", 2, "--d", 2, "--format", "json")
    assert json.loads(out)["status"] == "feasible"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "feasible", "--n", 3, "--k", 4, "--d", 1)[0] == 2
    assert run(capsys, "feasible", "--n", 11, "--k", 5, "--d", 4, "--budget", 1e-9)[0] == 3
    ledger = tmp_path / "l.jsonl"
    entry = LedgerEntry("joint", ModelConfig().flags(), 3, 2, 2, INFEASIBLE)
    Ledger(ledger).record(entry)
    code, _, err = run(capsys, "feasible", "--n", 3, "--k", 2, "--d", 2, "--ledger", ledger)
    assert code == 1 and "conflict" in err
    with pytest.raises(SystemExit):
        main(["feasible", "--n", "3"])


def test_dmax_cli_is_reproducible(capsys, tmp_path):
    ledger = tmp_path / "l.jsonl"
    args = ("dmax", "--n-max", 5, "--ledger", ledger)
    code, first, _ = run(capsys, *args)
    size = len(ledger.read_text().splitlines())
    code2, second, _ = run(capsys, *args)
    assert code == code2 == 0 and first == second
    assert len(ledger.read_text().splitlines()) == size
    _, csv_out, _ = run(capsys, *args, "--format", "csv")
    assert parse_text_table(first) == parse_csv_table(csv_out)
    out = tmp_path / "t.csv"
    run(capsys, *args, "--format", "csv", "--out", out)
    assert out.read_text() == csv_out


def test_kmax_and_compare_cli(capsys):
    code, out, _ = run(capsys, "kmax", "--n-max", 4)
    assert code == 0 and out.startswith("kmax (joint)")
    code, out, _ = run(capsys, "compare", "--n-max", 4, "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,k,dmax_joint,dmax_restricted"


def test_search_cli(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--n", 4, "--k", 2, "--d", 3)
    assert (code, out) == (0, "none exists: 35 [4,2] codes exhausted\n")
    gen = tmp_path / "g.txt"
    code, out, _ = run(capsys, "search", "--n", 3, "--k", 2, "--d", 2, "--out", gen)
    assert code == 0 and out.endswith("LP cross-check: FEASIBLE\n")
    assert gen.read_text().split() == out.split("\n")[:2]
    assert run(capsys, "search", "--n", 12, "--k", 2, "--d", 2)[0] == 2


def test_jwe_cli(capsys, tmp_path):
    gen = tmp_path / "g.txt"
    gen.write_text("1100\n0110\n")
    code, out, _ = run(capsys, "jwe", gen)
    assert code == 0
    assert "FAIL" not in out and "-I invariance: PASS" in out
    assert "in K(4,2,2): true" in out
    code, out, _ = run(capsys, "jwe", gen, "--format", "json")
    assert json.loads(out)["lcd"] is True
    assert run(capsys, "jwe", tmp_path / "missing.txt")[0] == 2


def test_analyze_cli(capsys):
    code, out, _ = run(capsys, "analyze", "--n", 3, "--k", 2, "--d", 2)
    assert code == 0
    assert "dimension: 0" in out and "vertices: 1" in out and "integral points: 1" in out
    code, out, _ = run(capsys, "analyze", "--n", 5, "--k", 2, "--d", 2, "--format", "json")
    report = json.loads(out)
    assert report["dim"] == 2 and report["vertices"] == 4
    assert run(capsys, "analyze", "--n", 4, "--k", 2, "--d", 4)[0] == 2
    assert run(capsys, "analyze", "--n", 5, "--k", 2, "--d", 2, "--dim-threshold", 1)[0] == 2


def test_molien_and_group_cli(capsys):
    code, out, _ = run(capsys, "molien", "--max-degree", 4)
    lines = out.splitlines()
    assert code == 0 and lines[:5] == ["0: 1", "1: 0", "2: 4", "3: 0", "4: 11"]
    code, out, _ = run(capsys, "group")
    assert code == 0 and out.startswith("order: 12\n")
    assert "-I in group: True, central: True" in out


def test_export_cli(capsys):
    code, out, _ = run(capsys, "export-polytope", "--n", 4, "--k", 2, "--d", 2)
    system = parse_h_representation(out)
    assert code == 0 and system.model == "joint" and system.n == 4


def lcd_dimension_two(n):
    # optimal binary LCD [n,2] distance, closed form from the literature
    return 2 * n // 3 - (1 if n % 6 in (0, 5) else 0)


def test_small_columns_are_tight():
    table = TableRunner(ModelConfig()).dmax_table(9, n_min=2)
    assert [table.entries[(n, 1)] for n in range(2, 10)] == [n - (n % 2 == 0) for n in range(2, 10)]
    assert [table.entries[(n, 2)] for n in range(2, 10)] == [lcd_dimension_two(n) for n in range(2, 10)]
