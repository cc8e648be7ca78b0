"""Versioned, typed measurement data flowing between components."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from watchtower.errors import SchemaError


@dataclass(frozen=True)
class Payload:
    """One version of one entry's data."""

    data_type: str
    version: int
    produced_at: datetime
    body: dict

    def __post_init__(self) -> None:
        if self.version < 1:
            raise SchemaError("payload versions start at 1")
