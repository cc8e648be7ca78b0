"""Registry mapping implementation keys to executable technique adapters.

Adapters work on payload bodies (plain dicts) so the execution engine
stays ignorant of concrete data types; each adapter decodes, runs the
pure technique, and encodes the result.
"""

from __future__ import annotations

from datetime import timedelta
from typing import Callable

from watchtower.errors import NotFoundError, TechniqueError
from watchtower.techniques.datatypes import (
    ActivityHierarchy,
    ControlMetric,
    EffortTable,
    MilestoneTrend,
    TimeSeries,
)
from watchtower.techniques.earned_value import earned_value_analysis
from watchtower.techniques.effort import aggregate_effort, effort_to_time_series
from watchtower.techniques.milestones import milestone_trend_analysis
from watchtower.techniques.tolerance import tolerance_range_check
from watchtower.timeutil import parse_date

# inputs: port -> body (arity one) or list of bodies (arity many, ordered by entry id)
TechniqueFn = Callable[[dict, dict], dict]


class TechniqueRegistry:
    """Implementation keys -> executable adapters."""

    def __init__(self) -> None:
        self._techniques: dict[str, TechniqueFn] = {}

    def register(self, key: str, fn: TechniqueFn) -> None:
        self._techniques[key] = fn

    def has(self, key: str) -> bool:
        return key in self._techniques

    def keys(self) -> list[str]:
        return sorted(self._techniques)

    def run(self, key: str, inputs: dict, params: dict) -> dict:
        if key not in self._techniques:
            raise NotFoundError(f"no technique implementation registered for {key!r}")
        return self._techniques[key](inputs, params)


def _run_aggregate(inputs: dict, params: dict) -> dict:
    effort = EffortTable.from_body(inputs["effort"])
    hierarchy = ActivityHierarchy.from_body(inputs["hierarchy"])
    return {"aggregated": aggregate_effort(effort, hierarchy).to_body()}


def _run_tolerance(inputs: dict, params: dict) -> dict:
    actual = ControlMetric.from_body(inputs["actual"])
    baseline = ControlMetric.from_body(inputs["baseline"])
    table = tolerance_range_check(
        actual,
        baseline,
        yellow_limit=float(params["yellow_limit"]),
        red_limit=float(params["red_limit"]),
        mode=str(params["mode"]),
    )
    return {"indicators": table.to_body()}


def _run_eva(inputs: dict, params: dict) -> dict:
    hierarchy = ActivityHierarchy.from_body(inputs["hierarchy"])
    progress = ControlMetric.from_body(inputs["progress"])
    actual_cost = ControlMetric.from_body(inputs["actual_cost"])
    report = earned_value_analysis(hierarchy, progress, actual_cost, parse_date(str(params["status_date"])))
    return {"report": report.to_body()}


def _run_mta(inputs: dict, params: dict) -> dict:
    forecasts = MilestoneTrend.from_body(inputs["forecasts"])
    classified = milestone_trend_analysis(forecasts, stable_band=float(params["stable_band"]))
    return {"classified": classified.to_body()}


def _run_scale(inputs: dict, params: dict) -> dict:
    from watchtower.techniques.timeseries import scale_time_series

    series = TimeSeries.from_body(inputs["series"])
    return {"scaled": scale_time_series(series, float(params["factor"])).to_body()}


def _run_effort_ts(inputs: dict, params: dict) -> dict:
    effort = EffortTable.from_body(inputs["effort"])
    bucket_days = float(params["bucket_days"])
    if bucket_days <= 0:
        raise TechniqueError("bucket_days must be > 0")
    series = effort_to_time_series(effort, timedelta(days=bucket_days))
    return {"series": series.to_body()}


BUILTIN_TECHNIQUE_KEYS = (
    "agg.effort",
    "check.tolerance",
    "eva.standard",
    "mta.standard",
    "ts.scale",
    "conv.effort_ts",
)


def builtin_techniques() -> TechniqueRegistry:
    registry = TechniqueRegistry()
    registry.register("agg.effort", _run_aggregate)
    registry.register("check.tolerance", _run_tolerance)
    registry.register("eva.standard", _run_eva)
    registry.register("mta.standard", _run_mta)
    registry.register("ts.scale", _run_scale)
    registry.register("conv.effort_ts", _run_effort_ts)
    return registry
