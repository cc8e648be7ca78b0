"""Pull connector: collection windows, polling cadence, file-source pulls.

A failed pull never advances the last-pulled marker, so the natural
polling cadence doubles as the retry schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping

from watchtower.collection.importers import parse_file
from watchtower.errors import TableImportError
from watchtower.model.components import validate_body
from watchtower.model.instances import Catena, DaoSource, DataEntry
from watchtower.model.registry import ComponentRegistry
from watchtower.payloads import Payload


def poll_due(
    entries: Iterable[DataEntry],
    last_pulled: Mapping[str, datetime | None],
    now: datetime,
) -> list[str]:
    """Entry ids due for a pull: inside their window and past their interval."""
    due = []
    for entry in entries:
        source = entry.source
        if not isinstance(source, DaoSource):
            continue
        if not source.window.start <= now <= source.window.end:
            continue
        last = last_pulled.get(entry.id)
        if last is None or now - last >= source.window.interval:
            due.append(entry.id)
    return sorted(due)


@dataclass(frozen=True)
class PullOutcome:
    entry_id: str
    ok: bool
    payload: Payload | None = None
    error: str | None = None


def pull_entry(
    entry: DataEntry,
    store,
    registry: ComponentRegistry,
    *,
    now: datetime,
) -> PullOutcome:
    """Pull one entry from its file source and append a new payload version."""
    source = entry.source
    assert isinstance(source, DaoSource)
    path = source.connection.get("path")
    if not path:
        return PullOutcome(entry.id, ok=False, error="no path configured")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        return PullOutcome(entry.id, ok=False, error=f"source unreachable: {exc}")
    try:
        parsed = parse_file(source.package, text)
    except TableImportError as exc:
        return PullOutcome(entry.id, ok=False, error=f"invalid data: {exc}")
    body = next((b for data_type, b in parsed if data_type == entry.data_type), None)
    if body is None:
        return PullOutcome(entry.id, ok=False, error=f"source provides no {entry.data_type} data")
    descriptor = registry.data_type(entry.data_type)
    problems = validate_body(descriptor, body)
    if problems:
        return PullOutcome(entry.id, ok=False, error=f"schema-invalid data: {problems[0]}")
    payload = store.put_payload(entry.id, entry.data_type, body, produced_at=now)
    return PullOutcome(entry.id, ok=True, payload=payload)


class Poller:
    """Tracks last-pulled times and pulls whatever is due."""

    def __init__(self, catena: Catena, store, registry: ComponentRegistry):
        self.catena = catena
        self.store = store
        self.registry = registry
        self.last_pulled: dict[str, datetime | None] = {}

    def run_pending(self, now: datetime) -> tuple[list[str], list[PullOutcome]]:
        """Pull all due entries; returns (changed entry ids, all outcomes)."""
        due = poll_due(self.catena.entries, self.last_pulled, now)
        changed = []
        outcomes = []
        for entry_id in due:
            entry = self.catena.entry(entry_id)
            outcome = pull_entry(entry, self.store, self.registry, now=now)
            outcomes.append(outcome)
            if outcome.ok:
                self.last_pulled[entry_id] = now
                changed.append(entry_id)
        return changed, outcomes
