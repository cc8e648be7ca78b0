"""Fixtures: the effort-control example catena and its data files."""

from __future__ import annotations

import sys
from datetime import timedelta
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import EPOCH, builtin_registry  # noqa: E402

from watchtower.model.documents import serialize_catena  # noqa: E402
from watchtower.model.instances import (  # noqa: E402
    Catena,
    CollectionWindow,
    DaoSource,
    DataEntry,
    DerivedSource,
    FormSource,
    FunctionInstance,
    ViewInstance,
    WebFormInstance,
)
from watchtower.store.filestore import RepositoryStore  # noqa: E402
from watchtower.techniques.builtins import (  # noqa: E402
    TYPE_ACTIVITY_HIERARCHY,
    TYPE_CONTROL_METRIC,
    TYPE_EFFORT_TABLE,
    TYPE_INDICATOR_TABLE,
    builtin_components,
)

PLAN_CSV = """activity_id,parent_id,name,start,end,baseline_effort_h
proj,,Project,2026-01-05,2026-03-27,500
impl,proj,Implementation,2026-01-05,2026-02-27,320
impl.core,impl,Core,2026-01-05,2026-02-13,200
impl.ui,impl,User interface,2026-01-12,2026-02-27,120
test,proj,Testing,2026-02-02,2026-03-27,180
"""

EFFORT_CSV = """person_id,activity_id,date,hours
alice,impl.core,2026-01-12,30
alice,impl.core,2026-01-19,40
bob,impl.ui,2026-01-12,50
bob,impl.ui,2026-01-19,100
carol,test,2026-01-12,80
carol,test,2026-01-19,120
"""

# hand-computed from the fixtures above: subtree sums and TRC bands (y=0.1, r=0.2)
EXPECTED_ACTUALS = {
    "impl.core": 70.0,
    "impl.ui": 150.0,
    "impl": 220.0,
    "test": 200.0,
    "proj": 420.0,
}
EXPECTED_STATUSES = {
    "impl.core": "green",
    "impl.ui": "red",
    "impl": "green",
    "test": "yellow",
    "proj": "green",
}


def _core_entries(effort_source) -> tuple[DataEntry, ...]:
    return (
        DataEntry(id="e.activities", data_type=TYPE_ACTIVITY_HIERARCHY, source=FormSource()),
        DataEntry(id="e.baseline", data_type=TYPE_CONTROL_METRIC, source=FormSource()),
        DataEntry(id="e.effort", data_type=TYPE_EFFORT_TABLE, source=effort_source),
        DataEntry(
            id="f.agg.aggregated",
            data_type=TYPE_CONTROL_METRIC,
            source=DerivedSource(function="f.agg", port="aggregated"),
        ),
        DataEntry(
            id="f.trc.indicators",
            data_type=TYPE_INDICATOR_TABLE,
            source=DerivedSource(function="f.trc", port="indicators"),
        ),
    )


def _core_functions() -> tuple[FunctionInstance, ...]:
    return (
        FunctionInstance(
            id="f.agg",
            spec="agg.effort",
            bindings={"effort": "e.effort", "hierarchy": "e.activities"},
            params={},
            outputs={"aggregated": "f.agg.aggregated"},
        ),
        FunctionInstance(
            id="f.trc",
            spec="check.tolerance",
            bindings={"actual": "f.agg.aggregated", "baseline": "e.baseline"},
            params={"yellow_limit": 0.1, "red_limit": 0.2, "mode": "above-only"},
            outputs={"indicators": "f.trc.indicators"},
        ),
    )


def _effort_view() -> ViewInstance:
    return ViewInstance(
        id="v.effort",
        spec="view.effort_drilldown",
        bindings={"indicators": "f.trc.indicators", "hierarchy": "e.activities"},
        params={"title": "Effort adherence"},
        children={},
        visible_to=("project-manager",),
    )


def effort_control_catena(effort_path: str = "effort.csv") -> Catena:
    """The example composition: three source entries, one plan-upload form,
    aggregation feeding a tolerance check, one drill-down view."""
    return Catena(
        id="effort-control",
        project="course-2026",
        entries=_core_entries(
            DaoSource(
                package="dao.file.effort",
                connection={"path": effort_path},
                window=CollectionWindow(
                    start=EPOCH,
                    end=EPOCH + timedelta(days=365),
                    interval=timedelta(days=1),
                ),
            )
        ),
        forms=(
            WebFormInstance(id="wf.plan", spec="form.plan_upload", entries=("e.activities", "e.baseline")),
        ),
        functions=_core_functions(),
        views=(_effort_view(),),
    )


def interactive_catena() -> Catena:
    """Variant with a form-managed effort entry plus a manual effort form,
    for the service and dashboard scenarios."""
    return Catena(
        id="effort-control",
        project="course-2026",
        entries=_core_entries(FormSource()),
        forms=(
            WebFormInstance(id="wf.plan", spec="form.plan_upload", entries=("e.activities", "e.baseline")),
            WebFormInstance(id="wf.effort", spec="form.effort_entry", entries=("e.effort",)),
        ),
        functions=_core_functions(),
        views=(_effort_view(),),
    )


@pytest.fixture()
def registry():
    return builtin_registry()


@pytest.fixture()
def example_catena(registry):
    return effort_control_catena()


@pytest.fixture()
def seeded_store(tmp_path):
    store = RepositoryStore(tmp_path / "repo")
    for kind, spec, tags in builtin_components():
        store.register_component(kind, spec.to_body(), tags)
    return store


@pytest.fixture()
def data_dir(tmp_path):
    """Data directory routed by stem: the plan through its form, effort to its entry."""
    directory = tmp_path / "data"
    directory.mkdir()
    (directory / "wf.plan.csv").write_text(PLAN_CSV, encoding="utf-8")
    (directory / "e.effort.csv").write_text(EFFORT_CSV, encoding="utf-8")
    return directory


@pytest.fixture()
def catena_file(tmp_path, example_catena):
    import json

    path = tmp_path / "catena.json"
    path.write_text(json.dumps(serialize_catena(example_catena), indent=2) + "\n", encoding="utf-8")
    return path
