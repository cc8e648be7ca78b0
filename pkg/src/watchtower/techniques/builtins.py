"""Built-in component specs seeded into a fresh repository.

The component ids and technique implementation keys here are frozen
interface: catena documents and composition rules reference them by name.
"""

from __future__ import annotations

from watchtower.model.components import (
    Constraint,
    DaoPackageSpec,
    DataTypeDescriptor,
    FieldSpec,
    FunctionSpec,
    ParameterSpec,
    Port,
    ViewSpec,
    WebFormSpec,
)

TYPE_TIME_SERIES = "type.time_series"
TYPE_ACTIVITY_HIERARCHY = "type.activity_hierarchy"
TYPE_EFFORT_TABLE = "type.effort_table"
TYPE_CONTROL_METRIC = "type.control_metric"
TYPE_INDICATOR_TABLE = "type.indicator_table"
TYPE_EVA_REPORT = "type.eva_report"
TYPE_MILESTONE_TREND = "type.milestone_trend"


def builtin_data_types() -> list[tuple[DataTypeDescriptor, tuple[str, ...]]]:
    number = lambda name: FieldSpec(name=name, kind="number")  # noqa: E731
    return [
        (
            DataTypeDescriptor(
                id=TYPE_TIME_SERIES,
                name="Time series",
                fields=(
                    FieldSpec(
                        name="points",
                        kind="record-list",
                        item_fields=(FieldSpec("at", "timestamp"), number("value")),
                    ),
                ),
                description="Timestamp and value pairs, strictly increasing.",
            ),
            ("time", "series"),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_ACTIVITY_HIERARCHY,
                name="Activity hierarchy",
                fields=(
                    FieldSpec(
                        name="activities",
                        kind="record-list",
                        item_fields=(
                            FieldSpec("id", "reference"),
                            FieldSpec("name", "text"),
                            FieldSpec("parent", "reference", nullable=True),
                            FieldSpec("start", "timestamp"),
                            FieldSpec("end", "timestamp"),
                            number("baseline_effort_h"),
                        ),
                    ),
                ),
                description="Project activities with dates and baseline effort.",
            ),
            ("plan", "structure", "effort"),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_EFFORT_TABLE,
                name="Effort table",
                fields=(
                    FieldSpec(
                        name="records",
                        kind="record-list",
                        item_fields=(
                            FieldSpec("person", "reference"),
                            FieldSpec("activity", "reference"),
                            FieldSpec("date", "timestamp"),
                            number("hours"),
                        ),
                    ),
                ),
                description="Booked hours per person, activity, and day.",
            ),
            ("effort",),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_CONTROL_METRIC,
                name="Control metric",
                fields=(
                    FieldSpec(
                        name="entries",
                        kind="record-list",
                        item_fields=(FieldSpec("activity", "reference"), number("value")),
                    ),
                ),
                description="One number per activity.",
            ),
            ("metric",),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_INDICATOR_TABLE,
                name="Indicator table",
                fields=(
                    FieldSpec(
                        name="rows",
                        kind="record-list",
                        item_fields=(
                            FieldSpec("activity", "reference"),
                            number("actual"),
                            FieldSpec("planned", "number", nullable=True),
                            FieldSpec("deviation", "number", nullable=True),
                            FieldSpec("status", "text"),
                        ),
                    ),
                ),
                description="Actual vs. planned with traffic-light statuses.",
            ),
            ("indicator", "deviation"),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_EVA_REPORT,
                name="Earned value report",
                fields=(
                    FieldSpec("status_date", "timestamp"),
                    number("pv"),
                    number("ev"),
                    number("ac"),
                    number("sv"),
                    number("cv"),
                    FieldSpec("spi", "number", nullable=True),
                    FieldSpec("cpi", "number", nullable=True),
                ),
                description="PV, EV, AC and derived variances/indices.",
            ),
            ("earned-value", "cost"),
        ),
        (
            DataTypeDescriptor(
                id=TYPE_MILESTONE_TREND,
                name="Milestone trend",
                fields=(
                    FieldSpec(
                        name="milestones",
                        kind="record-list",
                        item_fields=(
                            FieldSpec("id", "reference"),
                            FieldSpec("classification", "text", nullable=True),
                            FieldSpec(
                                "points",
                                "record-list",
                                item_fields=(
                                    FieldSpec("reported", "timestamp"),
                                    FieldSpec("forecast", "timestamp"),
                                ),
                            ),
                        ),
                    ),
                ),
                description="Forecast completion dates over reporting dates.",
            ),
            ("milestone", "schedule"),
        ),
    ]


def builtin_functions() -> list[tuple[FunctionSpec, tuple[str, ...]]]:
    return [
        (
            FunctionSpec(
                id="agg.effort",
                name="Effort aggregation",
                inputs=(
                    Port("effort", TYPE_EFFORT_TABLE),
                    Port("hierarchy", TYPE_ACTIVITY_HIERARCHY),
                ),
                outputs=(Port("aggregated", TYPE_CONTROL_METRIC),),
                implementation="agg.effort",
            ),
            ("effort", "aggregation"),
        ),
        (
            FunctionSpec(
                id="check.tolerance",
                name="Tolerance range checking",
                inputs=(
                    Port("actual", TYPE_CONTROL_METRIC),
                    Port("baseline", TYPE_CONTROL_METRIC),
                ),
                outputs=(Port("indicators", TYPE_INDICATOR_TABLE),),
                parameters=(
                    ParameterSpec("yellow_limit", "number", default=0.1, constraint=Constraint(min=0)),
                    ParameterSpec("red_limit", "number", default=0.2, constraint=Constraint(min=0)),
                    ParameterSpec(
                        "mode",
                        "text",
                        default="above-only",
                        constraint=Constraint(choices=("above-only", "below-only", "two-sided")),
                    ),
                ),
                implementation="check.tolerance",
            ),
            ("tolerance", "deviation", "baseline"),
        ),
        (
            FunctionSpec(
                id="eva.standard",
                name="Earned value analysis",
                inputs=(
                    Port("hierarchy", TYPE_ACTIVITY_HIERARCHY),
                    Port("progress", TYPE_CONTROL_METRIC),
                    Port("actual_cost", TYPE_CONTROL_METRIC),
                ),
                outputs=(Port("report", TYPE_EVA_REPORT),),
                parameters=(ParameterSpec("status_date", "timestamp"),),
                implementation="eva.standard",
            ),
            ("earned-value", "cost", "schedule"),
        ),
        (
            FunctionSpec(
                id="mta.standard",
                name="Milestone trend analysis",
                inputs=(Port("forecasts", TYPE_MILESTONE_TREND),),
                outputs=(Port("classified", TYPE_MILESTONE_TREND),),
                parameters=(
                    ParameterSpec("stable_band", "number", default=0.05, constraint=Constraint(min=0)),
                ),
                implementation="mta.standard",
            ),
            ("milestone", "schedule", "trend"),
        ),
        (
            FunctionSpec(
                id="ts.scale",
                name="Time series scaling",
                inputs=(Port("series", TYPE_TIME_SERIES),),
                outputs=(Port("scaled", TYPE_TIME_SERIES),),
                parameters=(ParameterSpec("factor", "number", default=1.0),),
                implementation="ts.scale",
            ),
            ("utility", "scaling", "series"),
        ),
        (
            FunctionSpec(
                id="conv.effort_ts",
                name="Effort to time series",
                inputs=(Port("effort", TYPE_EFFORT_TABLE),),
                outputs=(Port("series", TYPE_TIME_SERIES),),
                parameters=(
                    ParameterSpec("bucket_days", "number", default=1.0, constraint=Constraint(gt=0)),
                ),
                implementation="conv.effort_ts",
            ),
            ("utility", "conversion", "effort", "series"),
        ),
    ]


def builtin_views() -> list[tuple[ViewSpec, tuple[str, ...]]]:
    title = ParameterSpec("title", "text", default="")
    return [
        (
            ViewSpec(
                id="view.effort_drilldown",
                name="Effort deviation drill-down",
                inputs=(
                    Port("indicators", TYPE_INDICATOR_TABLE),
                    Port("hierarchy", TYPE_ACTIVITY_HIERARCHY),
                ),
                render_kind="bar-chart-drilldown",
                parameters=(title,),
            ),
            ("effort", "deviation", "drilldown", "bar-chart"),
        ),
        (
            ViewSpec(
                id="view.indicator_table",
                name="Indicator table",
                inputs=(Port("indicators", TYPE_INDICATOR_TABLE),),
                render_kind="table",
                parameters=(title,),
            ),
            ("indicator", "table"),
        ),
        (
            ViewSpec(
                id="view.metric_table",
                name="Metric table",
                inputs=(Port("metric", TYPE_CONTROL_METRIC),),
                render_kind="table",
                parameters=(title,),
            ),
            ("metric", "table"),
        ),
        (
            ViewSpec(
                id="view.eva_table",
                name="Earned value table",
                inputs=(Port("report", TYPE_EVA_REPORT),),
                render_kind="table",
                parameters=(title,),
            ),
            ("earned-value", "table"),
        ),
        (
            ViewSpec(
                id="view.timeseries_line",
                name="Time series chart",
                inputs=(Port("series", TYPE_TIME_SERIES, arity="many"),),
                render_kind="line-chart",
                parameters=(title,),
            ),
            ("series", "line-chart"),
        ),
        (
            ViewSpec(
                id="view.milestone_chart",
                name="Milestone trend chart",
                inputs=(Port("trend", TYPE_MILESTONE_TREND),),
                render_kind="milestone-trend-chart",
                parameters=(title,),
            ),
            ("milestone", "trend", "chart"),
        ),
        (
            ViewSpec(
                id="view.status_light",
                name="Status traffic light",
                inputs=(Port("indicators", TYPE_INDICATOR_TABLE),),
                render_kind="traffic-light",
                parameters=(title,),
            ),
            ("indicator", "traffic-light"),
        ),
    ]


def builtin_web_forms() -> list[tuple[WebFormSpec, tuple[str, ...]]]:
    return [
        (
            WebFormSpec(
                id="form.plan_upload",
                name="Project plan upload",
                target_types=(TYPE_ACTIVITY_HIERARCHY, TYPE_CONTROL_METRIC),
                mode="file-import",
                parser="dao.file.plan",
            ),
            ("plan", "upload", "effort"),
        ),
        (
            WebFormSpec(
                id="form.effort_entry",
                name="Effort entry",
                target_types=(TYPE_EFFORT_TABLE,),
                mode="manual-entry",
                fields=(
                    FieldSpec("person", "reference"),
                    FieldSpec("activity", "reference"),
                    FieldSpec("date", "timestamp"),
                    FieldSpec("hours", "number"),
                ),
            ),
            ("effort", "manual"),
        ),
        (
            WebFormSpec(
                id="form.timeseries_upload",
                name="Time series upload",
                target_types=(TYPE_TIME_SERIES,),
                mode="file-import",
                parser="dao.file.timeseries",
            ),
            ("series", "upload"),
        ),
    ]


def builtin_dao_packages() -> list[tuple[DaoPackageSpec, tuple[str, ...]]]:
    path_field = (FieldSpec("path", "text"),)
    return [
        (
            DaoPackageSpec(
                id="dao.file.plan",
                supported_types=(TYPE_ACTIVITY_HIERARCHY, TYPE_CONTROL_METRIC),
                connection_fields=path_field,
            ),
            ("plan", "file"),
        ),
        (
            DaoPackageSpec(
                id="dao.file.effort",
                supported_types=(TYPE_EFFORT_TABLE,),
                connection_fields=path_field,
            ),
            ("effort", "file"),
        ),
        (
            DaoPackageSpec(
                id="dao.file.timeseries",
                supported_types=(TYPE_TIME_SERIES,),
                connection_fields=path_field,
            ),
            ("series", "file"),
        ),
    ]


def builtin_components() -> list[tuple[str, object, tuple[str, ...]]]:
    """(kind, spec, tags) for everything cmd_seed registers."""
    out: list[tuple[str, object, tuple[str, ...]]] = []
    out.extend(("data-type", spec, tags) for spec, tags in builtin_data_types())
    out.extend(("function", spec, tags) for spec, tags in builtin_functions())
    out.extend(("view", spec, tags) for spec, tags in builtin_views())
    out.extend(("web-form", spec, tags) for spec, tags in builtin_web_forms())
    out.extend(("dao-package", spec, tags) for spec, tags in builtin_dao_packages())
    return out
