"""Milestone trend classification from successive forecast dates.

A milestone's forecasts over time are fit with a least-squares line;
the slope (forecast days moved per reporting day) decides the trend.
A dead band around zero absorbs forecast noise.
"""

from __future__ import annotations

from watchtower.errors import TechniqueError
from watchtower.techniques.datatypes import (
    TREND_ACCELERATED,
    TREND_DELAYED,
    TREND_STABLE,
    MilestoneSeries,
    MilestoneTrend,
)

DEFAULT_STABLE_BAND = 0.05


def _slope(points) -> float:
    xs = [(p.reported - points[0].reported).days for p in points]
    ys = [(p.forecast - points[0].forecast).days for p in points]
    n = len(points)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    denominator = sum((x - mean_x) ** 2 for x in xs)
    if denominator == 0:
        return 0.0
    return sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / denominator


def classify_series(series: MilestoneSeries, stable_band: float = DEFAULT_STABLE_BAND) -> MilestoneSeries:
    if not series.points:
        raise TechniqueError(f"milestone {series.id}: no forecast points")
    if len(series.points) == 1:
        # single report: no trend to measure yet
        return MilestoneSeries(id=series.id, points=series.points, classification=TREND_STABLE)
    slope = _slope(series.points)
    if slope > stable_band:
        classification = TREND_DELAYED
    elif slope < -stable_band:
        classification = TREND_ACCELERATED
    else:
        classification = TREND_STABLE
    return MilestoneSeries(id=series.id, points=series.points, classification=classification)


def milestone_trend_analysis(forecasts: MilestoneTrend, stable_band: float = DEFAULT_STABLE_BAND) -> MilestoneTrend:
    """Classify every milestone as stable, delayed, or accelerated."""
    if stable_band < 0:
        raise TechniqueError("stable band must be >= 0")
    return MilestoneTrend(
        milestones=tuple(classify_series(series, stable_band) for series in forecasts.milestones)
    )
