"""Effort aggregation along the activity tree and conversion to time series."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

from watchtower.errors import TechniqueError
from watchtower.techniques.datatypes import ActivityHierarchy, ControlMetric, EffortTable, TimeSeries


def aggregate_effort(effort: EffortTable, hierarchy: ActivityHierarchy) -> ControlMetric:
    """Sum booked hours per activity, inclusive of the whole subtree below it.

    Every activity of the hierarchy appears in the result, zero when no
    effort was booked anywhere beneath it.
    """
    own: dict[str, float] = {a.id: 0.0 for a in hierarchy.activities}
    for record in effort.records:
        if record.activity not in own:
            raise TechniqueError(f"unknown activity id {record.activity!r} in effort data")
        own[record.activity] += record.hours

    totals: dict[str, float] = {}

    def subtree_total(activity_id: str) -> float:
        if activity_id in totals:
            return totals[activity_id]
        total = own[activity_id]
        for child in hierarchy.children(activity_id):
            total += subtree_total(child.id)
        totals[activity_id] = total
        return total

    for activity in hierarchy.activities:
        subtree_total(activity.id)
    return ControlMetric(entries=totals)


def effort_to_time_series(effort: EffortTable, bucket: timedelta) -> TimeSeries:
    """Bucket booked hours over time, starting at the earliest record's midnight.

    Empty buckets between the first and last record are emitted with value
    zero so downstream charts show gaps honestly.
    """
    if bucket.total_seconds() <= 0:
        raise TechniqueError("bucket duration must be positive")
    if not effort.records:
        return TimeSeries(points=())

    first_day = min(r.day for r in effort.records)
    origin = datetime(first_day.year, first_day.month, first_day.day, tzinfo=timezone.utc)

    sums: dict[int, float] = {}
    for record in effort.records:
        at = datetime(record.day.year, record.day.month, record.day.day, tzinfo=timezone.utc)
        index = int((at - origin) / bucket)
        sums[index] = sums.get(index, 0.0) + record.hours

    last = max(sums)
    points = tuple((origin + i * bucket, sums.get(i, 0.0)) for i in range(last + 1))
    return TimeSeries(points=points)
