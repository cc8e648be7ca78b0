"""Delimited-text importers for the neutral interchange formats.

All importers collect every row problem before failing, so an operator
fixes a broken file in one pass. Row numbers count data rows starting
at 1 (the header is row 0).
"""

from __future__ import annotations

import csv
import io

from watchtower.errors import SchemaError, TableImportError
from watchtower.techniques.builtins import (
    TYPE_ACTIVITY_HIERARCHY,
    TYPE_CONTROL_METRIC,
    TYPE_EFFORT_TABLE,
    TYPE_TIME_SERIES,
)
from watchtower.techniques.datatypes import (
    Activity,
    ActivityHierarchy,
    ControlMetric,
    EffortRecord,
    EffortTable,
    TimeSeries,
)
from watchtower.timeutil import parse_date, parse_timestamp

PLAN_HEADER = ["activity_id", "parent_id", "name", "start", "end", "baseline_effort_h"]
EFFORT_HEADER = ["person_id", "activity_id", "date", "hours"]
TIMESERIES_HEADER = ["timestamp", "value"]
METRIC_HEADER = ["activity_id", "value"]


def _read_rows(text: str, header: list[str]) -> list[dict[str, str]]:
    reader = csv.reader(io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise TableImportError([(0, "empty file, expected header " + ",".join(header))]) from None
    if [h.strip() for h in first] != header:
        raise TableImportError([(0, f"bad header, expected {','.join(header)}")])
    rows = []
    for raw in reader:
        if not raw or all(not cell.strip() for cell in raw):
            continue
        if len(raw) != len(header):
            rows.append({"__bad__": f"expected {len(header)} columns, got {len(raw)}"})
            continue
        rows.append({name: cell.strip() for name, cell in zip(header, raw)})
    return rows


def import_project_plan(text: str) -> tuple[ActivityHierarchy, ControlMetric]:
    """Parse a plan interchange file into the activity tree plus its baseline metric."""
    rows = _read_rows(text, PLAN_HEADER)
    problems: list[tuple[int, str]] = []
    if not rows:
        raise TableImportError([(0, "no activities")])

    activities: list[Activity] = []
    row_of: dict[str, int] = {}
    for i, row in enumerate(rows, start=1):
        if "__bad__" in row:
            problems.append((i, row["__bad__"]))
            continue
        activity_id = row["activity_id"]
        if not activity_id:
            problems.append((i, "missing activity_id"))
            continue
        if activity_id in row_of:
            problems.append((i, f"duplicate activity id {activity_id!r}"))
            continue
        row_of[activity_id] = i
        try:
            start = parse_date(row["start"])
            end = parse_date(row["end"])
        except SchemaError as exc:
            problems.append((i, str(exc)))
            continue
        if start > end:
            problems.append((i, f"start {row['start']} is after end {row['end']}"))
            continue
        try:
            baseline = float(row["baseline_effort_h"])
        except ValueError:
            problems.append((i, f"unparseable baseline effort {row['baseline_effort_h']!r}"))
            continue
        if baseline < 0:
            problems.append((i, f"negative baseline effort {baseline}"))
            continue
        activities.append(
            Activity(
                id=activity_id,
                name=row["name"],
                parent=row["parent_id"] or None,
                start=start,
                end=end,
                baseline_effort=baseline,
            )
        )

    known = {a.id for a in activities}
    for a in activities:
        if a.parent is not None and a.parent not in known:
            problems.append((row_of[a.id], f"dangling parent {a.parent!r}"))
    roots = [a for a in activities if a.parent is None]
    if not problems and len(roots) != 1:
        if roots:
            problems.append((row_of[roots[1].id], "more than one root activity"))
        else:
            problems.append((0, "no root activity"))
    if problems:
        raise TableImportError(sorted(problems))

    try:
        hierarchy = ActivityHierarchy(activities=tuple(activities))
    except SchemaError as exc:
        raise TableImportError([(0, str(exc))]) from exc
    baseline_metric = ControlMetric(entries={a.id: a.baseline_effort for a in activities})
    return hierarchy, baseline_metric


def import_effort_table(text: str) -> EffortTable:
    """Parse an effort interchange file: person_id,activity_id,date,hours."""
    rows = _read_rows(text, EFFORT_HEADER)
    problems: list[tuple[int, str]] = []
    records: list[EffortRecord] = []
    for i, row in enumerate(rows, start=1):
        if "__bad__" in row:
            problems.append((i, row["__bad__"]))
            continue
        if not row["person_id"] or not row["activity_id"]:
            problems.append((i, "missing person_id or activity_id"))
            continue
        try:
            day = parse_date(row["date"])
        except SchemaError as exc:
            problems.append((i, str(exc)))
            continue
        try:
            hours = float(row["hours"])
        except ValueError:
            problems.append((i, f"unparseable hours {row['hours']!r}"))
            continue
        if hours <= 0:
            problems.append((i, f"non-positive hours {hours}"))
            continue
        records.append(EffortRecord(person=row["person_id"], activity=row["activity_id"], day=day, hours=hours))
    if problems:
        raise TableImportError(sorted(problems))
    return EffortTable(records=tuple(records))


def import_time_series(text: str) -> TimeSeries:
    rows = _read_rows(text, TIMESERIES_HEADER)
    problems: list[tuple[int, str]] = []
    points = []
    for i, row in enumerate(rows, start=1):
        if "__bad__" in row:
            problems.append((i, row["__bad__"]))
            continue
        try:
            at = parse_timestamp(row["timestamp"])
            value = float(row["value"])
        except (SchemaError, ValueError) as exc:
            problems.append((i, str(exc)))
            continue
        points.append((at, value))
    if problems:
        raise TableImportError(sorted(problems))
    try:
        return TimeSeries(points=tuple(points))
    except SchemaError as exc:
        raise TableImportError([(0, str(exc))]) from exc


def import_control_metric(text: str) -> ControlMetric:
    rows = _read_rows(text, METRIC_HEADER)
    problems: list[tuple[int, str]] = []
    entries: dict[str, float] = {}
    for i, row in enumerate(rows, start=1):
        if "__bad__" in row:
            problems.append((i, row["__bad__"]))
            continue
        if not row["activity_id"]:
            problems.append((i, "missing activity_id"))
            continue
        if row["activity_id"] in entries:
            problems.append((i, f"duplicate activity id {row['activity_id']!r}"))
            continue
        try:
            entries[row["activity_id"]] = float(row["value"])
        except ValueError:
            problems.append((i, f"unparseable value {row['value']!r}"))
            continue
    if problems:
        raise TableImportError(sorted(problems))
    return ControlMetric(entries=entries)


def parse_file(parser_key: str, text: str) -> list[tuple[str, dict]]:
    """Parse a file per a registered parser key into (data type id, body) pairs."""
    if parser_key == "dao.file.plan":
        hierarchy, baseline = import_project_plan(text)
        return [(TYPE_ACTIVITY_HIERARCHY, hierarchy.to_body()), (TYPE_CONTROL_METRIC, baseline.to_body())]
    if parser_key == "dao.file.effort":
        return [(TYPE_EFFORT_TABLE, import_effort_table(text).to_body())]
    if parser_key == "dao.file.timeseries":
        return [(TYPE_TIME_SERIES, import_time_series(text).to_body())]
    if parser_key == "dao.file.metric":
        return [(TYPE_CONTROL_METRIC, import_control_metric(text).to_body())]
    raise TableImportError([(0, f"unknown parser key {parser_key!r}")])
