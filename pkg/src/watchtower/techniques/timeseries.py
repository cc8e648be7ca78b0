"""Small utility transforms on time series."""

from __future__ import annotations

from watchtower.techniques.datatypes import TimeSeries


def scale_time_series(series: TimeSeries, factor: float) -> TimeSeries:
    """Multiply every value by a constant; timestamps are untouched."""
    return TimeSeries(points=tuple((at, value * factor) for at, value in series.points))
