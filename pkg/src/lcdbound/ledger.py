"""Append-only JSON-lines record of feasibility results.

A result is keyed by model, flags and the triple. Exact arithmetic makes
every answer reproducible, so a second result for a key that disagrees
with the first is a hard error rather than an update.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNKNOWN = "unknown"


class LedgerConflict(RuntimeError):
    pass


@dataclass(frozen=True)
class LedgerEntry:
    model: str
    flags: dict
    n: int
    k: int
    d: int
    status: str
    dimension: int | None = None
    source: str = "lp"
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    tool_version: str = __version__

    @property
    def key(self) -> tuple:
        return entry_key(self.model, self.flags, self.n, self.k, self.d)


def entry_key(model: str, flags: dict, n: int, k: int, d: int) -> tuple:
    return (model, tuple(sorted(flags.items())), n, k, d)


def default_path() -> str | None:
    return os.environ.get("LCD_LEDGER") or None


class Ledger:
    """In memory when ``path`` is None, otherwise backed by a file that
    is read on open and appended to on every new entry."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path else None
        self.entries: dict[tuple, LedgerEntry] = {}
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        entry = LedgerEntry(**json.loads(line))
                    except (TypeError, ValueError) as exc:
                        raise ValueError(f"{self.path}:{lineno}: bad ledger line") from exc
                    self._merge(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def _merge(self, entry: LedgerEntry) -> bool:
        old = self.entries.get(entry.key)
        if old is not None:
            if old.status != entry.status:
                raise LedgerConflict(
                    f"{entry.model} {entry.n},{entry.k},{entry.d}: recorded {old.status}, now {entry.status}")
            if entry.dimension is None or entry.dimension == old.dimension:
                return False
            if old.dimension is not None:
                raise LedgerConflict(f"{entry.model} {entry.n},{entry.k},{entry.d}: dimension differs")
        self.entries[entry.key] = entry
        return True

    def get(self, model: str, flags: dict, n: int, k: int, d: int) -> LedgerEntry | None:
        return self.entries.get(entry_key(model, flags, n, k, d))

    def statuses(self, model: str, flags: dict, n: int, k: int) -> dict[int, str]:
        fkey = tuple(sorted(flags.items()))
        return {key[4]: e.status for key, e in self.entries.items()
                if key[0] == model and key[1] == fkey and key[2] == n and key[3] == k}

    def record(self, entry: LedgerEntry) -> LedgerEntry:
        """Store ``entry``; returns the entry now on record."""
        if entry.status not in (FEASIBLE, INFEASIBLE):
            raise ValueError("only decided results are recorded")
        if self._merge(entry) and self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(asdict(entry), sort_keys=True) + "\n")
        return self.entries[entry.key]
