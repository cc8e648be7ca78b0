"""Built-in measurement data types and their payload body codecs.

Bodies are plain JSON objects conforming to the registered data type
schemas; the dataclasses here are the working representations the
techniques compute on.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime

from watchtower.errors import SchemaError
from watchtower.timeutil import format_date, format_timestamp, parse_date, parse_timestamp

STATUS_GREEN = "green"
STATUS_YELLOW = "yellow"
STATUS_RED = "red"
STATUS_NO_BASELINE = "no-baseline"
INDICATOR_STATUSES = (STATUS_GREEN, STATUS_YELLOW, STATUS_RED, STATUS_NO_BASELINE)

TREND_STABLE = "stable"
TREND_DELAYED = "delayed"
TREND_ACCELERATED = "accelerated"


@dataclass(frozen=True)
class TimeSeries:
    """Timestamp/value pairs with strictly increasing timestamps."""

    points: tuple[tuple[datetime, float], ...]

    def __post_init__(self) -> None:
        for (a, _), (b, _) in zip(self.points, self.points[1:]):
            if a >= b:
                raise SchemaError("time series timestamps must be strictly increasing")

    def to_body(self) -> dict:
        return {"points": [{"at": format_timestamp(at), "value": value} for at, value in self.points]}

    @classmethod
    def from_body(cls, body: dict) -> TimeSeries:
        return cls(points=tuple((parse_timestamp(p["at"]), float(p["value"])) for p in body["points"]))


@dataclass(frozen=True)
class Activity:
    id: str
    name: str
    parent: str | None
    start: date
    end: date
    baseline_effort: float

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise SchemaError(f"activity {self.id}: start is after end")
        if self.baseline_effort < 0:
            raise SchemaError(f"activity {self.id}: baseline effort must be >= 0")


@dataclass(frozen=True)
class ActivityHierarchy:
    """Project activities forming a single tree, with baseline effort per node."""

    activities: tuple[Activity, ...]

    def __post_init__(self) -> None:
        if not self.activities:
            raise SchemaError("activity hierarchy must contain at least one activity")
        ids = [a.id for a in self.activities]
        if len(ids) != len(set(ids)):
            raise SchemaError("duplicate activity ids")
        known = set(ids)
        roots = [a for a in self.activities if a.parent is None]
        if len(roots) != 1:
            raise SchemaError(f"activity hierarchy must have exactly one root, found {len(roots)}")
        for a in self.activities:
            if a.parent is not None and a.parent not in known:
                raise SchemaError(f"activity {a.id}: dangling parent {a.parent!r}")
        # walking to the root must terminate for every node
        for a in self.activities:
            seen = {a.id}
            cursor = a.parent
            while cursor is not None:
                if cursor in seen:
                    raise SchemaError(f"activity {a.id}: parent chain forms a cycle")
                seen.add(cursor)
                cursor = self.activity(cursor).parent

    def activity(self, activity_id: str) -> Activity:
        found = next((a for a in self.activities if a.id == activity_id), None)
        if found is None:
            raise SchemaError(f"unknown activity {activity_id!r}")
        return found

    def has(self, activity_id: str) -> bool:
        return any(a.id == activity_id for a in self.activities)

    @property
    def root(self) -> Activity:
        return next(a for a in self.activities if a.parent is None)

    def children(self, activity_id: str) -> tuple[Activity, ...]:
        return tuple(a for a in self.activities if a.parent == activity_id)

    def leaves(self) -> tuple[Activity, ...]:
        parents = {a.parent for a in self.activities if a.parent is not None}
        return tuple(a for a in self.activities if a.id not in parents)

    def subtree_ids(self, activity_id: str) -> set[str]:
        result = {activity_id}
        stack = [activity_id]
        while stack:
            current = stack.pop()
            for child in self.children(current):
                result.add(child.id)
                stack.append(child.id)
        return result

    def to_body(self) -> dict:
        return {
            "activities": [
                {
                    "id": a.id,
                    "name": a.name,
                    "parent": a.parent,
                    "start": format_date(a.start),
                    "end": format_date(a.end),
                    "baseline_effort_h": a.baseline_effort,
                }
                for a in self.activities
            ]
        }

    @classmethod
    def from_body(cls, body: dict) -> ActivityHierarchy:
        return cls(
            activities=tuple(
                Activity(
                    id=a["id"],
                    name=a["name"],
                    parent=a.get("parent"),
                    start=parse_date(a["start"]),
                    end=parse_date(a["end"]),
                    baseline_effort=float(a["baseline_effort_h"]),
                )
                for a in body["activities"]
            )
        )


@dataclass(frozen=True)
class EffortRecord:
    person: str
    activity: str
    day: date
    hours: float

    def __post_init__(self) -> None:
        if self.hours <= 0:
            raise SchemaError(f"effort record for {self.activity}: hours must be > 0")


@dataclass(frozen=True)
class EffortTable:
    """Raw effort bookings per person, activity, and day."""

    records: tuple[EffortRecord, ...]

    def to_body(self) -> dict:
        return {
            "records": [
                {"person": r.person, "activity": r.activity, "date": format_date(r.day), "hours": r.hours}
                for r in self.records
            ]
        }

    @classmethod
    def from_body(cls, body: dict) -> EffortTable:
        return cls(
            records=tuple(
                EffortRecord(
                    person=r["person"],
                    activity=r["activity"],
                    day=parse_date(r["date"]),
                    hours=float(r["hours"]),
                )
                for r in body["records"]
            )
        )


@dataclass(frozen=True)
class ControlMetric:
    """One number per activity; what the number means depends on context."""

    entries: dict[str, float]

    def value(self, activity_id: str) -> float | None:
        return self.entries.get(activity_id)

    def to_body(self) -> dict:
        return {"entries": [{"activity": k, "value": self.entries[k]} for k in sorted(self.entries)]}

    @classmethod
    def from_body(cls, body: dict) -> ControlMetric:
        entries: dict[str, float] = {}
        for item in body["entries"]:
            activity = item["activity"]
            if activity in entries:
                raise SchemaError(f"duplicate metric entry for activity {activity!r}")
            entries[activity] = float(item["value"])
        return cls(entries=entries)


@dataclass(frozen=True)
class IndicatorRow:
    activity: str
    actual: float
    planned: float | None
    deviation: float | None
    status: str

    def __post_init__(self) -> None:
        if self.status not in INDICATOR_STATUSES:
            raise SchemaError(f"unknown indicator status {self.status!r}")


@dataclass(frozen=True)
class IndicatorTable:
    """Actual-versus-baseline comparison with traffic-light statuses."""

    rows: tuple[IndicatorRow, ...]

    def row(self, activity_id: str) -> IndicatorRow | None:
        return next((r for r in self.rows if r.activity == activity_id), None)

    def worst_status(self) -> str:
        rank = {STATUS_GREEN: 0, STATUS_NO_BASELINE: 0, STATUS_YELLOW: 1, STATUS_RED: 2}
        worst = STATUS_GREEN
        for r in self.rows:
            if rank[r.status] > rank[worst]:
                worst = r.status
        return worst

    def to_body(self) -> dict:
        return {
            "rows": [
                {
                    "activity": r.activity,
                    "actual": r.actual,
                    "planned": r.planned,
                    "deviation": r.deviation,
                    "status": r.status,
                }
                for r in self.rows
            ]
        }

    @classmethod
    def from_body(cls, body: dict) -> IndicatorTable:
        return cls(
            rows=tuple(
                IndicatorRow(
                    activity=r["activity"],
                    actual=float(r["actual"]),
                    planned=None if r.get("planned") is None else float(r["planned"]),
                    deviation=None if r.get("deviation") is None else float(r["deviation"]),
                    status=r["status"],
                )
                for r in body["rows"]
            )
        )


@dataclass(frozen=True)
class EvaReport:
    """Earned-value snapshot at one status date; indices absent when undefined."""

    status_date: date
    pv: float
    ev: float
    ac: float
    sv: float
    cv: float
    spi: float | None
    cpi: float | None

    def to_body(self) -> dict:
        return {
            "status_date": format_date(self.status_date),
            "pv": self.pv,
            "ev": self.ev,
            "ac": self.ac,
            "sv": self.sv,
            "cv": self.cv,
            "spi": self.spi,
            "cpi": self.cpi,
        }

    @classmethod
    def from_body(cls, body: dict) -> EvaReport:
        return cls(
            status_date=parse_date(body["status_date"]),
            pv=float(body["pv"]),
            ev=float(body["ev"]),
            ac=float(body["ac"]),
            sv=float(body["sv"]),
            cv=float(body["cv"]),
            spi=None if body.get("spi") is None else float(body["spi"]),
            cpi=None if body.get("cpi") is None else float(body["cpi"]),
        )


@dataclass(frozen=True)
class MilestonePoint:
    reported: date
    forecast: date


@dataclass(frozen=True)
class MilestoneSeries:
    id: str
    points: tuple[MilestonePoint, ...]
    classification: str | None = None

    def __post_init__(self) -> None:
        for a, b in zip(self.points, self.points[1:]):
            if a.reported >= b.reported:
                raise SchemaError(f"milestone {self.id}: reporting dates must be strictly increasing")


@dataclass(frozen=True)
class MilestoneTrend:
    """Forecast completion dates over successive reporting dates, per milestone."""

    milestones: tuple[MilestoneSeries, ...]

    def to_body(self) -> dict:
        return {
            "milestones": [
                {
                    "id": m.id,
                    "classification": m.classification,
                    "points": [
                        {"reported": format_date(p.reported), "forecast": format_date(p.forecast)}
                        for p in m.points
                    ],
                }
                for m in self.milestones
            ]
        }

    @classmethod
    def from_body(cls, body: dict) -> MilestoneTrend:
        return cls(
            milestones=tuple(
                MilestoneSeries(
                    id=m["id"],
                    classification=m.get("classification"),
                    points=tuple(
                        MilestonePoint(reported=parse_date(p["reported"]), forecast=parse_date(p["forecast"]))
                        for p in m["points"]
                    ),
                )
                for m in body["milestones"]
            )
        )
