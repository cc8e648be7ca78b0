"""Control technique tests with independent brute-force oracles."""

from __future__ import annotations

import random
from datetime import date, datetime, timedelta, timezone

import pytest

from watchtower.errors import ParameterError, SchemaError, TechniqueError
from watchtower.techniques.datatypes import (
    Activity,
    ActivityHierarchy,
    ControlMetric,
    EffortRecord,
    EffortTable,
    MilestonePoint,
    MilestoneSeries,
    MilestoneTrend,
    TimeSeries,
)
from watchtower.techniques.earned_value import earned_value_analysis, planned_fraction
from watchtower.techniques.effort import aggregate_effort, effort_to_time_series
from watchtower.techniques.milestones import milestone_trend_analysis
from watchtower.techniques.timeseries import scale_time_series
from watchtower.techniques.tolerance import tolerance_range_check

D = date


def activity(aid, parent=None, start=D(2026, 1, 5), end=D(2026, 3, 27), baseline=0.0, name=None):
    return Activity(id=aid, name=name or aid, parent=parent, start=start, end=end, baseline_effort=baseline)


def small_tree() -> ActivityHierarchy:
    return ActivityHierarchy(
        activities=(
            activity("root"),
            activity("A", parent="root"),
            activity("A1", parent="A"),
            activity("A2", parent="A"),
            activity("B", parent="root"),
        )
    )


def records(*triples) -> EffortTable:
    return EffortTable(
        records=tuple(
            EffortRecord(person="p", activity=aid, day=D(2026, 1, 12), hours=h) for aid, h in triples
        )
    )


def oracle_subtree_sums(effort: EffortTable, hierarchy: ActivityHierarchy) -> dict[str, float]:
    """Brute force: a record counts toward every ancestor of its activity."""
    sums = {a.id: 0.0 for a in hierarchy.activities}
    for record in effort.records:
        cursor = record.activity
        while cursor is not None:
            sums[cursor] += record.hours
            cursor = hierarchy.activity(cursor).parent
    return sums


class TestAggregateEffort:
    def test_subtree_sums(self):
        metric = aggregate_effort(records(("A1", 3), ("A2", 4), ("B", 5)), small_tree())
        assert metric.entries == {"A1": 3, "A2": 4, "A": 7, "B": 5, "root": 12}

    def test_empty_table_maps_everything_to_zero(self):
        metric = aggregate_effort(EffortTable(records=()), small_tree())
        assert metric.entries == {"A1": 0, "A2": 0, "A": 0, "B": 0, "root": 0}

    def test_degenerate_tree(self):
        tree = ActivityHierarchy(activities=(activity("root"),))
        metric = aggregate_effort(records(("root", 2)), tree)
        assert metric.entries == {"root": 2}

    def test_unknown_activity_named_in_error(self):
        with pytest.raises(TechniqueError, match="ghost"):
            aggregate_effort(records(("ghost", 1)), small_tree())

    def test_conservation_and_oracle_on_random_inputs(self):
        rng = random.Random(1201)
        for _ in range(25):
            n = rng.randrange(1, 40)
            activities = [activity("a0")]
            for i in range(1, n):
                parent = activities[rng.randrange(0, i)].id
                activities.append(activity(f"a{i}", parent=parent))
            hierarchy = ActivityHierarchy(activities=tuple(activities))
            table = EffortTable(
                records=tuple(
                    EffortRecord(
                        person=f"p{rng.randrange(5)}",
                        activity=rng.choice(activities).id,
                        day=D(2026, 1, 12),
                        hours=round(rng.uniform(0.25, 8), 2),
                    )
                    for _ in range(rng.randrange(0, 120))
                )
            )
            metric = aggregate_effort(table, hierarchy)
            oracle = oracle_subtree_sums(table, hierarchy)
            assert metric.entries == pytest.approx(oracle)
            assert metric.entries["a0"] == pytest.approx(sum(r.hours for r in table.records))

    def test_recursion_identity(self):
        rng = random.Random(77)
        activities = [activity("a0")]
        for i in range(1, 20):
            activities.append(activity(f"a{i}", parent=activities[rng.randrange(0, i)].id))
        hierarchy = ActivityHierarchy(activities=tuple(activities))
        table = EffortTable(
            records=tuple(
                EffortRecord(person="p", activity=rng.choice(activities).id, day=D(2026, 2, 2), hours=1.5)
                for _ in range(60)
            )
        )
        metric = aggregate_effort(table, hierarchy)
        own = {a.id: 0.0 for a in activities}
        for record in table.records:
            own[record.activity] += record.hours
        for a in activities:
            children_total = sum(metric.entries[c.id] for c in hierarchy.children(a.id))
            assert metric.entries[a.id] == pytest.approx(own[a.id] + children_total)


class TestToleranceRangeCheck:
    def test_zero_deviation_is_green(self):
        table = tolerance_range_check(
            ControlMetric({"a": 100.0}), ControlMetric({"a": 100.0}), 0.1, 0.2
        )
        row = table.row("a")
        assert row.deviation == 0.0
        assert row.status == "green"

    def test_above_red(self):
        table = tolerance_range_check(
            ControlMetric({"a": 125.0}), ControlMetric({"a": 100.0}), 0.1, 0.2, mode="above-only"
        )
        row = table.row("a")
        assert row.deviation == pytest.approx(0.25)
        assert row.status == "red"

    def test_boundary_is_inclusive(self):
        table = tolerance_range_check(ControlMetric({"a": 110.0}), ControlMetric({"a": 100.0}), 0.1, 0.2)
        assert table.row("a").status == "green"
        table = tolerance_range_check(ControlMetric({"a": 120.0}), ControlMetric({"a": 100.0}), 0.1, 0.2)
        assert table.row("a").status == "yellow"

    def test_yellow_beyond_limit(self):
        table = tolerance_range_check(ControlMetric({"a": 115.0}), ControlMetric({"a": 100.0}), 0.1, 0.2)
        assert table.row("a").status == "yellow"

    def test_bad_limits_rejected(self):
        with pytest.raises(ParameterError):
            tolerance_range_check(ControlMetric({}), ControlMetric({}), 0.3, 0.2)
        with pytest.raises(ParameterError):
            tolerance_range_check(ControlMetric({}), ControlMetric({}), -0.1, 0.2)

    def test_missing_or_zero_baseline(self):
        table = tolerance_range_check(
            ControlMetric({"a": 10.0, "b": 5.0}), ControlMetric({"a": 0.0}), 0.1, 0.2
        )
        assert table.row("a").status == "no-baseline"
        assert table.row("b").status == "no-baseline"
        assert table.row("a").deviation is None

    def test_below_only_flags_underruns(self):
        table = tolerance_range_check(
            ControlMetric({"a": 70.0}), ControlMetric({"a": 100.0}), 0.1, 0.2, mode="below-only"
        )
        assert table.row("a").status == "red"

    def test_two_sided_flags_both_directions(self):
        actual = ControlMetric({"a": 70.0, "b": 130.0})
        baseline = ControlMetric({"a": 100.0, "b": 100.0})
        table = tolerance_range_check(actual, baseline, 0.1, 0.2, mode="two-sided")
        assert table.row("a").status == "red"
        assert table.row("b").status == "red"

    def test_monotone_severity_in_actual(self):
        rank = {"green": 0, "yellow": 1, "red": 2}
        rng = random.Random(404)
        for _ in range(50):
            baseline = ControlMetric({"a": rng.uniform(10, 500)})
            previous = -1
            for actual in sorted(rng.uniform(0, 1000) for _ in range(20)):
                table = tolerance_range_check(
                    ControlMetric({"a": actual}), baseline, 0.1, 0.2, mode="above-only"
                )
                severity = rank[table.row("a").status]
                assert severity >= previous
                previous = severity


def leaf_tree(leaves) -> ActivityHierarchy:
    """One root plus the given (id, start, end, baseline) leaves."""
    lo = min(start for _, start, _, _ in leaves)
    hi = max(end for _, _, end, _ in leaves)
    activities = [activity("root", start=lo, end=hi)]
    activities += [
        activity(aid, parent="root", start=start, end=end, baseline=baseline)
        for aid, start, end, baseline in leaves
    ]
    return ActivityHierarchy(activities=tuple(activities))


class TestEarnedValue:
    def test_on_plan_identity(self):
        tree = leaf_tree([("w", D(2026, 1, 1), D(2026, 1, 21), 100.0)])
        status = D(2026, 1, 11)  # exactly half the span
        fraction = planned_fraction(D(2026, 1, 1), D(2026, 1, 21), status)
        report = earned_value_analysis(
            tree,
            ControlMetric({"w": fraction}),
            ControlMetric({"w": 100.0 * fraction}),
            status,
        )
        assert report.sv == 0
        assert report.cv == 0
        assert report.spi == 1.0
        assert report.cpi == 1.0

    def test_hand_computed_example(self):
        # per-leaf brute force: BAC=100, fraction=0.5, progress=0.4, AC=45
        tree = leaf_tree([("w", D(2026, 1, 1), D(2026, 1, 21), 100.0)])
        report = earned_value_analysis(
            tree, ControlMetric({"w": 0.4}), ControlMetric({"w": 45.0}), D(2026, 1, 11)
        )
        assert report.pv == pytest.approx(50.0)
        assert report.ev == pytest.approx(40.0)
        assert report.sv == pytest.approx(-10.0)
        assert report.cv == pytest.approx(-5.0)
        assert report.spi == pytest.approx(0.8)
        assert report.cpi == pytest.approx(40.0 / 45.0)

    def test_before_start_pv_zero_spi_absent(self):
        tree = leaf_tree([("w", D(2026, 2, 1), D(2026, 2, 21), 100.0)])
        report = earned_value_analysis(tree, ControlMetric({}), ControlMetric({}), D(2026, 1, 1))
        assert report.pv == 0.0
        assert report.spi is None
        assert report.cpi is None

    def test_progress_bounds_enforced(self):
        tree = leaf_tree([("w", D(2026, 1, 1), D(2026, 1, 21), 100.0)])
        with pytest.raises(TechniqueError):
            earned_value_analysis(tree, ControlMetric({"w": 1.2}), ControlMetric({}), D(2026, 1, 11))

    def test_non_leaf_progress_rejected(self):
        tree = leaf_tree([("w", D(2026, 1, 1), D(2026, 1, 21), 100.0)])
        with pytest.raises(TechniqueError):
            earned_value_analysis(tree, ControlMetric({"root": 0.5}), ControlMetric({}), D(2026, 1, 11))

    def test_identities_on_random_inputs(self):
        rng = random.Random(2026)
        for _ in range(100):
            leaves = []
            for i in range(rng.randrange(1, 12)):
                start = D(2026, 1, 1) + timedelta(days=rng.randrange(0, 200))
                end = start + timedelta(days=rng.randrange(1, 90))
                leaves.append((f"l{i}", start, end, round(rng.uniform(1, 500), 2)))
            tree = leaf_tree(leaves)
            progress = ControlMetric({aid: rng.random() for aid, _, _, _ in leaves})
            cost = ControlMetric({aid: round(rng.uniform(0, 600), 2) for aid, _, _, _ in leaves})
            status = D(2026, 1, 1) + timedelta(days=rng.randrange(0, 320))
            report = earned_value_analysis(tree, progress, cost, status)

            # independent per-leaf summation oracle
            pv = sum(
                baseline * planned_fraction(start, end, status) for _, start, end, baseline in leaves
            )
            ev = sum(baseline * progress.entries[aid] for aid, _, _, baseline in leaves)
            ac = sum(cost.entries.values())
            assert report.pv == pytest.approx(pv, abs=1e-9)
            assert report.ev == pytest.approx(ev, abs=1e-9)
            assert report.sv == pytest.approx(report.ev - report.pv, abs=1e-9)
            assert report.cv == pytest.approx(report.ev - report.ac, abs=1e-9)
            if report.spi is not None:
                assert report.spi * report.pv == pytest.approx(report.ev, abs=1e-9)
            else:
                assert pv == 0
            if report.cpi is not None:
                assert report.cpi * report.ac == pytest.approx(report.ev, abs=1e-9)
            else:
                assert ac == 0


def weekly_series(milestone_id: str, deltas: list[int]) -> MilestoneSeries:
    base = D(2026, 3, 2)
    forecast0 = D(2026, 6, 1)
    return MilestoneSeries(
        id=milestone_id,
        points=tuple(
            MilestonePoint(reported=base + timedelta(weeks=i), forecast=forecast0 + timedelta(days=d))
            for i, d in enumerate(deltas)
        ),
    )


class TestMilestoneTrend:
    def test_constant_forecasts_stable(self):
        result = milestone_trend_analysis(MilestoneTrend((weekly_series("m1", [0, 0, 0]),)))
        assert result.milestones[0].classification == "stable"

    def test_weekly_slip_is_delayed(self):
        # least-squares slope over x=[0,7,14], y=[0,7,14] is exactly 1.0
        result = milestone_trend_analysis(MilestoneTrend((weekly_series("m1", [0, 7, 14]),)))
        assert result.milestones[0].classification == "delayed"

    def test_weekly_gain_is_accelerated(self):
        result = milestone_trend_analysis(MilestoneTrend((weekly_series("m1", [0, -7, -14]),)))
        assert result.milestones[0].classification == "accelerated"

    def test_single_point_is_stable_by_convention(self):
        result = milestone_trend_analysis(MilestoneTrend((weekly_series("m1", [3]),)))
        assert result.milestones[0].classification == "stable"

    def test_non_increasing_reporting_dates_rejected(self):
        with pytest.raises(SchemaError):
            MilestoneSeries(
                id="m1",
                points=(
                    MilestonePoint(reported=D(2026, 3, 9), forecast=D(2026, 6, 1)),
                    MilestonePoint(reported=D(2026, 3, 2), forecast=D(2026, 6, 1)),
                ),
            )

    def test_sign_symmetry(self):
        rng = random.Random(99)
        for _ in range(30):
            deltas = [rng.randrange(-20, 21) for _ in range(rng.randrange(2, 8))]
            mirrored = [-d for d in deltas]
            forward = milestone_trend_analysis(MilestoneTrend((weekly_series("m", deltas),)))
            backward = milestone_trend_analysis(MilestoneTrend((weekly_series("m", mirrored),)))
            swap = {"delayed": "accelerated", "accelerated": "delayed", "stable": "stable"}
            assert backward.milestones[0].classification == swap[forward.milestones[0].classification]


def ts(*values: float) -> TimeSeries:
    base = datetime(2026, 1, 1, tzinfo=timezone.utc)
    return TimeSeries(points=tuple((base + timedelta(hours=i), v) for i, v in enumerate(values)))


class TestTimeSeriesUtilities:
    def test_scale_identity(self):
        series = ts(1, 2, 3)
        assert scale_time_series(series, 1.0) == series

    def test_scale_doubles_values(self):
        assert [v for _, v in scale_time_series(ts(1, 2, 3), 2.0).points] == [2, 4, 6]

    def test_scale_composition(self):
        rng = random.Random(5)
        for _ in range(20):
            series = ts(*(rng.uniform(-10, 10) for _ in range(rng.randrange(1, 15))))
            a, b = rng.uniform(-3, 3), rng.uniform(-3, 3)
            left = scale_time_series(scale_time_series(series, a), b)
            right = scale_time_series(series, a * b)
            for (at1, v1), (at2, v2) in zip(left.points, right.points):
                assert at1 == at2
                assert v1 == pytest.approx(v2)

    def test_bucketing_emits_empty_buckets(self):
        table = EffortTable(
            records=(
                EffortRecord(person="p", activity="a", day=D(2026, 1, 1), hours=2),
                EffortRecord(person="q", activity="a", day=D(2026, 1, 1), hours=3),
                EffortRecord(person="p", activity="a", day=D(2026, 1, 3), hours=1),
            )
        )
        series = effort_to_time_series(table, timedelta(days=1))
        assert [v for _, v in series.points] == [5, 0, 1]
        assert series.points[0][0] == datetime(2026, 1, 1, tzinfo=timezone.utc)

    def test_empty_table_empty_series(self):
        assert effort_to_time_series(EffortTable(records=()), timedelta(days=1)).points == ()

    def test_single_record(self):
        table = EffortTable(records=(EffortRecord(person="p", activity="a", day=D(2026, 2, 2), hours=4),))
        series = effort_to_time_series(table, timedelta(days=7))
        assert len(series.points) == 1
        assert series.points[0][1] == 4

    def test_bucket_oracle_brute_force(self):
        rng = random.Random(314)
        for _ in range(20):
            days = [D(2026, 1, 1) + timedelta(days=rng.randrange(0, 30)) for _ in range(rng.randrange(1, 50))]
            table = EffortTable(
                records=tuple(
                    EffortRecord(person="p", activity="a", day=day, hours=round(rng.uniform(0.5, 8), 2))
                    for day in days
                )
            )
            bucket = timedelta(days=rng.choice([1, 2, 7]))
            series = effort_to_time_series(table, bucket)
            origin = min(days)
            expected: dict[int, float] = {}
            for record in table.records:
                expected_index = (record.day - origin).days // bucket.days
                expected[expected_index] = expected.get(expected_index, 0.0) + record.hours
            assert sum(v for _, v in series.points) == pytest.approx(sum(r.hours for r in table.records))
            for i, (_, value) in enumerate(series.points):
                assert value == pytest.approx(expected.get(i, 0.0))
