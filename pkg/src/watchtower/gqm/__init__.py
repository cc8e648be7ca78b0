"""Goal-question-metric plans, goal-oriented composition, result analysis and packaging."""

from watchtower.gqm.plan import Goal, GqmPlan, Metric, Question, parse_gqm_plan
from watchtower.gqm.composer import CompositionResult, MetricCoverage, compose_catena
from watchtower.gqm.analysis import (
    DeviationAnalysis,
    IndicatorDeviation,
    analyze_deviations,
    package_results,
)

__all__ = [
    "CompositionResult",
    "DeviationAnalysis",
    "Goal",
    "GqmPlan",
    "IndicatorDeviation",
    "Metric",
    "MetricCoverage",
    "Question",
    "analyze_deviations",
    "compose_catena",
    "package_results",
    "parse_gqm_plan",
]
