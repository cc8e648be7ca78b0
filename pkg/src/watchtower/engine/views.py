"""Building render-ready, role-filtered view models.

Models are built children-first and embed child models per slot. The
document shape per render kind is the service↔dashboard contract frozen
in docs/viewmodel.md: the dashboard displays these numbers verbatim and
computes nothing itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from watchtower.model.instances import Catena, ViewInstance, binding_entries
from watchtower.model.registry import ComponentRegistry
from watchtower.payloads import Payload
from watchtower.techniques.builtins import (
    TYPE_ACTIVITY_HIERARCHY,
    TYPE_INDICATOR_TABLE,
)
from watchtower.techniques.datatypes import ActivityHierarchy, IndicatorTable

STATUS_OK = "ok"
STATUS_NO_DATA = "no-data"


@dataclass(frozen=True)
class ViewModel:
    view: str
    kind: str
    title: str
    status: str
    roles: tuple[str, ...]
    inputs: dict[str, int]  # entry id -> payload version rendered
    data: dict = field(default_factory=dict)
    children: dict[str, "ViewModel"] = field(default_factory=dict)


def view_model_document(model: ViewModel) -> dict:
    return {
        "view": model.view,
        "kind": model.kind,
        "title": model.title,
        "status": model.status,
        "roles": list(model.roles),
        "inputs": {k: model.inputs[k] for k in sorted(model.inputs)},
        "data": model.data,
        "children": {slot: view_model_document(child) for slot, child in model.children.items()},
    }


def _typed_input(bound: Mapping[str, Payload], catena: Catena, instance: ViewInstance, data_type: str):
    for _, entry_id in binding_entries(instance.bindings):
        entry = catena.entry(entry_id)
        if entry is not None and entry.data_type == data_type and entry_id in bound:
            return bound[entry_id]
    return None


def _render_drilldown(catena: Catena, instance: ViewInstance, bound: Mapping[str, Payload]) -> dict:
    indicators_payload = _typed_input(bound, catena, instance, TYPE_INDICATOR_TABLE)
    hierarchy_payload = _typed_input(bound, catena, instance, TYPE_ACTIVITY_HIERARCHY)
    if indicators_payload is None or hierarchy_payload is None:
        return _render_table(catena, instance, bound)
    indicators = IndicatorTable.from_body(indicators_payload.body)
    hierarchy = ActivityHierarchy.from_body(hierarchy_payload.body)

    def node(activity_id: str) -> dict:
        activity = hierarchy.activity(activity_id)
        row = indicators.row(activity_id)
        children = sorted(hierarchy.children(activity_id), key=lambda a: a.id)
        return {
            "activity": activity.id,
            "name": activity.name,
            "actual": row.actual if row else 0.0,
            "planned": row.planned if row else None,
            "deviation": row.deviation if row else None,
            "status": row.status if row else "no-baseline",
            "children": [node(child.id) for child in children],
        }

    return {"root": node(hierarchy.root.id)}


def _render_table(catena: Catena, instance: ViewInstance, bound: Mapping[str, Payload]) -> dict:
    pairs = binding_entries(instance.bindings)
    if not pairs:
        return {"columns": [], "rows": []}
    first_entry = pairs[0][1]
    payload = bound.get(first_entry)
    if payload is None:
        return {"columns": [], "rows": []}
    body = payload.body
    # a single record-list field renders as a grid, anything else as key/value
    list_fields = [k for k, v in body.items() if isinstance(v, list)]
    if len(list_fields) == 1 and all(isinstance(r, dict) for r in body[list_fields[0]]):
        records = body[list_fields[0]]
        columns: list[str] = []
        for record in records:
            for key in record:
                if key not in columns:
                    columns.append(key)
        rows = [[record.get(col) for col in columns] for record in records]
        return {"columns": columns, "rows": rows}
    columns = ["field", "value"]
    rows = [[k, body[k]] for k in body]
    return {"columns": columns, "rows": rows}


def _render_line(catena: Catena, instance: ViewInstance, bound: Mapping[str, Payload]) -> dict:
    series = []
    for _, entry_id in binding_entries(instance.bindings):
        payload = bound.get(entry_id)
        if payload is None:
            continue
        points = [[p["at"], p["value"]] for p in payload.body.get("points", [])]
        series.append({"name": entry_id, "points": points})
    return {"series": series}


def _render_milestones(catena: Catena, instance: ViewInstance, bound: Mapping[str, Payload]) -> dict:
    pairs = binding_entries(instance.bindings)
    payload = bound.get(pairs[0][1]) if pairs else None
    if payload is None:
        return {"milestones": []}
    return {"milestones": payload.body.get("milestones", [])}


def _render_traffic_light(catena: Catena, instance: ViewInstance, bound: Mapping[str, Payload]) -> dict:
    indicators_payload = _typed_input(bound, catena, instance, TYPE_INDICATOR_TABLE)
    if indicators_payload is None:
        return {"status": "no-baseline", "counts": {}}
    table = IndicatorTable.from_body(indicators_payload.body)
    counts: dict[str, int] = {}
    for row in table.rows:
        counts[row.status] = counts.get(row.status, 0) + 1
    return {"status": table.worst_status(), "counts": {k: counts[k] for k in sorted(counts)}}


_RENDERERS = {
    "bar-chart-drilldown": _render_drilldown,
    "table": _render_table,
    "line-chart": _render_line,
    "milestone-trend-chart": _render_milestones,
    "traffic-light": _render_traffic_light,
}


def _visible(instance: ViewInstance, roles: set[str]) -> bool:
    return bool(set(instance.visible_to) & roles)


def render_view(
    catena: Catena,
    registry: ComponentRegistry,
    snapshot: Mapping[str, Payload | None],
    instance: ViewInstance,
    roles: set[str],
) -> ViewModel:
    """Build one view's model from a payload snapshot, children first."""
    spec = registry.view(instance.spec)
    children: dict[str, ViewModel] = {}
    for slot in spec.slots:
        child_id = instance.children.get(slot.name)
        if child_id is None:
            continue
        child = catena.view(child_id)
        if child is None or not _visible(child, roles):
            continue  # access is enforced per view instance, children included
        children[slot.name] = render_view(catena, registry, snapshot, child, roles)

    bound: dict[str, Payload] = {}
    missing = False
    inputs: dict[str, int] = {}
    for _, entry_id in binding_entries(instance.bindings):
        payload = snapshot.get(entry_id)
        if payload is None:
            missing = True
            inputs[entry_id] = 0
        else:
            bound[entry_id] = payload
            inputs[entry_id] = payload.version

    title = str(instance.params.get("title") or "") or (spec.name if spec else instance.id)
    if missing:
        return ViewModel(
            view=instance.id,
            kind=spec.render_kind,
            title=title,
            status=STATUS_NO_DATA,
            roles=tuple(sorted(instance.visible_to)),
            inputs=inputs,
            data={},
            children=children,
        )
    data = _RENDERERS[spec.render_kind](catena, instance, bound)
    return ViewModel(
        view=instance.id,
        kind=spec.render_kind,
        title=title,
        status=STATUS_OK,
        roles=tuple(sorted(instance.visible_to)),
        inputs=inputs,
        data=data,
        children=children,
    )


def refresh_views(
    catena: Catena,
    store,
    registry: ComponentRegistry,
    roles: Iterable[str],
) -> list[ViewModel]:
    """One model per root view instance visible to the given roles.

    Children embed into their parents rather than appearing alongside
    them, so a dashboard never shows the same widget twice.
    """
    role_set = set(roles)
    snapshot = {e.id: store.latest_payload(e.id) for e in catena.entries}
    models = []
    for instance in sorted(catena.root_views(), key=lambda v: v.id):
        if not _visible(instance, role_set):
            continue
        models.append(render_view(catena, registry, snapshot, instance, role_set))
    return models
