"""Tolerance range checking: actual vs. baseline within configured bands."""

from __future__ import annotations

from watchtower.errors import ParameterError
from watchtower.techniques.datatypes import (
    STATUS_GREEN,
    STATUS_NO_BASELINE,
    STATUS_RED,
    STATUS_YELLOW,
    ControlMetric,
    IndicatorRow,
    IndicatorTable,
)

MODES = ("above-only", "below-only", "two-sided")


def tolerance_range_check(
    actual: ControlMetric,
    baseline: ControlMetric,
    yellow_limit: float,
    red_limit: float,
    mode: str = "above-only",
) -> IndicatorTable:
    """Classify each activity's deviation ratio into green/yellow/red bands.

    The deviation ratio is (actual - baseline) / baseline. Band boundaries
    are inclusive: a ratio exactly at the yellow limit is still green.
    Activities without a positive baseline get status no-baseline rather
    than a division artifact.
    """
    if yellow_limit < 0:
        raise ParameterError("yellow limit must be >= 0")
    if red_limit < yellow_limit:
        raise ParameterError("red limit must be >= yellow limit")
    if mode not in MODES:
        raise ParameterError(f"unknown mode {mode!r}")

    rows = []
    for activity in sorted(set(actual.entries) | set(baseline.entries)):
        actual_value = actual.entries.get(activity, 0.0)
        baseline_value = baseline.entries.get(activity)
        if baseline_value is None or baseline_value <= 0:
            rows.append(
                IndicatorRow(
                    activity=activity,
                    actual=actual_value,
                    planned=baseline_value,
                    deviation=None,
                    status=STATUS_NO_BASELINE,
                )
            )
            continue
        deviation = (actual_value - baseline_value) / baseline_value
        if mode == "above-only":
            severity_input = deviation
        elif mode == "below-only":
            severity_input = -deviation
        else:
            severity_input = abs(deviation)
        if severity_input <= yellow_limit:
            status = STATUS_GREEN
        elif severity_input <= red_limit:
            status = STATUS_YELLOW
        else:
            status = STATUS_RED
        rows.append(
            IndicatorRow(
                activity=activity,
                actual=actual_value,
                planned=baseline_value,
                deviation=deviation,
                status=status,
            )
        )
    return IndicatorTable(rows=tuple(rows))
