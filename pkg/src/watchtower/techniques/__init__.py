"""Packaged control techniques and the built-in data types they operate on."""

from watchtower.techniques.datatypes import (
    Activity,
    ActivityHierarchy,
    ControlMetric,
    EffortRecord,
    EffortTable,
    EvaReport,
    IndicatorRow,
    IndicatorTable,
    MilestonePoint,
    MilestoneSeries,
    MilestoneTrend,
    TimeSeries,
)
from watchtower.techniques.effort import aggregate_effort, effort_to_time_series
from watchtower.techniques.tolerance import tolerance_range_check
from watchtower.techniques.earned_value import earned_value_analysis
from watchtower.techniques.milestones import milestone_trend_analysis
from watchtower.techniques.timeseries import scale_time_series
from watchtower.techniques.registry import TechniqueRegistry, builtin_techniques

__all__ = [
    "Activity",
    "ActivityHierarchy",
    "ControlMetric",
    "EffortRecord",
    "EffortTable",
    "EvaReport",
    "IndicatorRow",
    "IndicatorTable",
    "MilestonePoint",
    "MilestoneSeries",
    "MilestoneTrend",
    "TechniqueRegistry",
    "TimeSeries",
    "aggregate_effort",
    "builtin_techniques",
    "earned_value_analysis",
    "effort_to_time_series",
    "milestone_trend_analysis",
    "scale_time_series",
    "tolerance_range_check",
]
