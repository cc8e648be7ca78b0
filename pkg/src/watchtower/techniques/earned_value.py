"""Earned value analysis with linear time-phasing of planned value.

Standard definitions: per leaf activity the budget at completion is its
baseline effort; planned value accrues linearly over the activity's
calendar span; earned value is budget times reported percent complete.
SPI and CPI are reported as absent (None) when their denominators are
not positive, never as NaN or infinity.
"""

from __future__ import annotations

from datetime import date

from watchtower.errors import TechniqueError
from watchtower.techniques.datatypes import ActivityHierarchy, ControlMetric, EvaReport


def planned_fraction(start: date, end: date, status_date: date) -> float:
    """Fraction of an activity's calendar span elapsed at the status date, clamped to [0, 1]."""
    if status_date < start:
        return 0.0
    if status_date >= end:
        return 1.0
    span = (end - start).days
    if span <= 0:
        return 1.0
    return (status_date - start).days / span


def earned_value_analysis(
    hierarchy: ActivityHierarchy,
    progress: ControlMetric,
    actual_cost: ControlMetric,
    status_date: date,
) -> EvaReport:
    """Compute PV/EV/AC and the derived variances and indices at one status date.

    progress holds percent complete in [0, 1] per leaf activity; leaves
    without an entry count as not started. actual_cost is summed over all
    of its entries.
    """
    leaves = hierarchy.leaves()
    leaf_ids = {a.id for a in leaves}
    for activity_id, value in sorted(progress.entries.items()):
        if activity_id not in leaf_ids:
            raise TechniqueError(f"progress given for non-leaf activity {activity_id!r}")
        if not 0.0 <= value <= 1.0:
            raise TechniqueError(f"progress for {activity_id!r} must be in [0, 1], got {value}")

    pv = 0.0
    ev = 0.0
    for leaf in leaves:
        budget = leaf.baseline_effort
        pv += budget * planned_fraction(leaf.start, leaf.end, status_date)
        ev += budget * progress.entries.get(leaf.id, 0.0)
    ac = sum(actual_cost.entries[k] for k in sorted(actual_cost.entries))

    return EvaReport(
        status_date=status_date,
        pv=pv,
        ev=ev,
        ac=ac,
        sv=ev - pv,
        cv=ev - ac,
        spi=ev / pv if pv > 0 else None,
        cpi=ev / ac if ac > 0 else None,
    )
