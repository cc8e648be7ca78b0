"""Timestamp and date helpers: ISO-8601 in documents, aware datetimes in memory."""

from __future__ import annotations

from datetime import date, datetime, timezone

from watchtower.errors import SchemaError


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp; a bare date means midnight UTC."""
    if not isinstance(text, str):
        raise SchemaError(f"expected timestamp text, got {type(text).__name__}")
    cleaned = text.replace("Z", "+00:00")
    try:
        parsed = datetime.fromisoformat(cleaned)
    except ValueError as exc:
        raise SchemaError(f"invalid timestamp {text!r}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def format_timestamp(value: datetime) -> str:
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.isoformat()


def parse_date(text: str) -> date:
    if not isinstance(text, str):
        raise SchemaError(f"expected date text, got {type(text).__name__}")
    try:
        return date.fromisoformat(text[:10]) if "T" in text or " " in text else date.fromisoformat(text)
    except ValueError as exc:
        raise SchemaError(f"invalid date {text!r}") from exc


def format_date(value: date) -> str:
    return value.isoformat()
