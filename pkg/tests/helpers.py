"""Shared test fixtures: synthetic components, a memory store, random catena generators."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from watchtower.model.binding import bind_function_instance
from watchtower.model.components import (
    DaoPackageSpec,
    DataTypeDescriptor,
    FieldSpec,
    FunctionSpec,
    ParameterSpec,
    Port,
    SlotSpec,
    ViewSpec,
    WebFormSpec,
)
from watchtower.model.instances import (
    Catena,
    CollectionWindow,
    DaoSource,
    DataEntry,
    FormSource,
    ViewInstance,
    WebFormInstance,
)
from watchtower.model.registry import ComponentRegistry, RegisteredComponent
from watchtower.payloads import Payload
from watchtower.techniques.builtins import builtin_components
from watchtower.techniques.registry import TechniqueRegistry, builtin_techniques
from watchtower.timeutil import utcnow

EPOCH = datetime(2026, 1, 1, tzinfo=timezone.utc)


class MemoryStore:
    """In-memory payload store with the same contract the engine relies on."""

    def __init__(self):
        self.payloads: dict[str, list[Payload]] = {}

    def put_payload(self, entry_id, data_type, body, produced_at=None):
        versions = self.payloads.setdefault(entry_id, [])
        payload = Payload(
            data_type=data_type,
            version=len(versions) + 1,
            produced_at=produced_at if produced_at is not None else utcnow(),
            body=body,
        )
        versions.append(payload)
        return payload

    def get_payload(self, entry_id, version=None):
        versions = self.payloads.get(entry_id, [])
        if not versions:
            raise KeyError(entry_id)
        return versions[-1] if version is None else versions[version - 1]

    def latest_payload(self, entry_id):
        versions = self.payloads.get(entry_id, [])
        return versions[-1] if versions else None

    def latest_version(self, entry_id):
        return len(self.payloads.get(entry_id, []))

    def payload_versions(self, entry_id):
        return list(range(1, len(self.payloads.get(entry_id, [])) + 1))

    def payload_history(self, entry_id):
        return list(self.payloads.get(entry_id, []))

    def clone(self) -> "MemoryStore":
        copy = MemoryStore()
        copy.payloads = {k: list(v) for k, v in self.payloads.items()}
        return copy


def builtin_registry() -> ComponentRegistry:
    registry = ComponentRegistry()
    for kind, spec, tags in builtin_components():
        registry.add(RegisteredComponent(kind=kind, id=spec.id, version=1, spec=spec, tags=tags))
    return registry


# -- synthetic numeric dataflow for property tests -------------------------

NUM_TYPE = "type.num"


def _combine(inputs: dict, params: dict) -> dict:
    total = float(params.get("seed", 0.0))
    weight = 1
    for port in sorted(inputs):
        bound = inputs[port]
        bodies = bound if isinstance(bound, list) else [bound]
        for body in bodies:
            total += weight * float(body["value"])
            weight += 1
    return {"out": {"value": total}}


def synthetic_registry() -> tuple[ComponentRegistry, TechniqueRegistry]:
    """Builtins plus a numeric 'combine' family for random-graph tests."""
    registry = builtin_registry()
    registry.add(
        RegisteredComponent(
            kind="data-type",
            id=NUM_TYPE,
            version=1,
            spec=DataTypeDescriptor(id=NUM_TYPE, name="Number", fields=(FieldSpec("value", "number"),)),
            tags=("num",),
        )
    )
    for k in (1, 2, 3):
        spec = FunctionSpec(
            id=f"combine.{k}",
            name=f"Combine {k}",
            inputs=tuple(Port(f"p{i}", NUM_TYPE) for i in range(1, k + 1)),
            outputs=(Port("out", NUM_TYPE),),
            parameters=(ParameterSpec("seed", "number", default=0.0),),
            implementation="test.combine",
        )
        registry.add(
            RegisteredComponent(kind="function", id=spec.id, version=1, spec=spec, tags=("num",))
        )
    many_spec = FunctionSpec(
        id="combine.many",
        name="Combine many",
        inputs=(Port("items", NUM_TYPE, arity="many"),),
        outputs=(Port("out", NUM_TYPE),),
        parameters=(ParameterSpec("seed", "number", default=0.0),),
        implementation="test.combine",
    )
    registry.add(
        RegisteredComponent(kind="function", id="combine.many", version=1, spec=many_spec, tags=("num",))
    )
    num_view = ViewSpec(
        id="view.num",
        name="Number table",
        inputs=(Port("data", NUM_TYPE),),
        render_kind="table",
    )
    registry.add(RegisteredComponent(kind="view", id="view.num", version=1, spec=num_view, tags=("num",)))
    panel = ViewSpec(
        id="panel.num",
        name="Number panel",
        inputs=(Port("data", NUM_TYPE),),
        render_kind="table",
        slots=(SlotSpec("left", "view.num"), SlotSpec("right", "view.num")),
    )
    registry.add(RegisteredComponent(kind="view", id="panel.num", version=1, spec=panel, tags=("num",)))
    num_form = WebFormSpec(
        id="form.num",
        name="Number upload",
        target_types=(NUM_TYPE,),
        mode="file-import",
        parser="dao.file.metric",
    )
    registry.add(RegisteredComponent(kind="web-form", id="form.num", version=1, spec=num_form, tags=("num",)))
    num_dao = DaoPackageSpec(
        id="dao.num",
        supported_types=(NUM_TYPE,),
        connection_fields=(FieldSpec("path", "text"),),
    )
    registry.add(RegisteredComponent(kind="dao-package", id="dao.num", version=1, spec=num_dao, tags=("num",)))

    techniques = builtin_techniques()
    techniques.register("test.combine", _combine)
    return registry, techniques


def random_catena(
    rng: random.Random,
    registry: ComponentRegistry,
    *,
    n_sources: int = 4,
    n_functions: int = 8,
    chained: bool = False,
    with_views: bool = False,
    with_forms: bool = False,
    with_dao: bool = False,
) -> Catena:
    """A random valid catena over the synthetic numeric components.

    chained=True guarantees a path f0 -> f1 -> ... -> f(n-1), which the
    cycle-mutation tests rely on.
    """
    entries: list[DataEntry] = []
    entry_types: dict[str, str] = {}
    for i in range(n_sources):
        entry_id = f"e.src{i:02d}"
        if with_dao and rng.random() < 0.3:
            start = EPOCH + timedelta(days=rng.randrange(0, 30))
            source = DaoSource(
                package="dao.num",
                connection={"path": f"/data/{entry_id}.csv"},
                window=CollectionWindow(
                    start=start,
                    end=start + timedelta(days=rng.randrange(1, 90)),
                    interval=timedelta(hours=rng.choice([6, 24, 72])),
                ),
            )
        else:
            source = FormSource()
        entries.append(DataEntry(id=entry_id, data_type=NUM_TYPE, source=source))
        entry_types[entry_id] = NUM_TYPE

    functions = []
    outputs: list[str] = []
    for i in range(n_functions):
        spec_id = rng.choice(["combine.1", "combine.2", "combine.3", "combine.many"])
        spec = registry.function(spec_id)
        available = [e.id for e in entries]
        bindings: dict[str, object] = {}
        for j, port in enumerate(spec.inputs):
            if chained and i > 0 and j == 0 and outputs:
                choice: object = outputs[-1]
            else:
                choice = rng.choice(available)
            if port.arity == "many":
                extra = rng.sample(available, k=min(len(available), rng.randrange(1, 3)))
                bound = sorted(set([choice] + extra)) if isinstance(choice, str) else sorted(extra)
                bindings[port.name] = bound
            else:
                bindings[port.name] = choice
        bound_function = bind_function_instance(
            spec,
            f"f.{i:02d}",
            bindings,
            {"seed": round(rng.uniform(-5, 5), 3)},
            entry_types,
        )
        functions.append(bound_function.instance)
        for entry in bound_function.output_entries:
            entries.append(entry)
            entry_types[entry.id] = entry.data_type
        outputs.append(bound_function.instance.outputs["out"])

    views: list[ViewInstance] = []
    if with_views and entries:
        n_views = rng.randrange(1, 4)
        leaf_ids = []
        for i in range(n_views):
            view_id = f"v.{i:02d}"
            target = rng.choice([e.id for e in entries])
            views.append(
                ViewInstance(
                    id=view_id,
                    spec="view.num",
                    bindings={"data": target},
                    params={},
                    children={},
                    visible_to=tuple(sorted(rng.sample(["pm", "dev", "qa"], k=rng.randrange(1, 3)))),
                )
            )
            leaf_ids.append(view_id)
        if rng.random() < 0.5 and len(leaf_ids) >= 2:
            views.append(
                ViewInstance(
                    id="v.panel",
                    spec="panel.num",
                    bindings={"data": rng.choice([e.id for e in entries])},
                    params={},
                    children={"left": leaf_ids[0], "right": leaf_ids[1]},
                    visible_to=("pm",),
                )
            )

    forms: list[WebFormInstance] = []
    if with_forms:
        form_managed = [e.id for e in entries if e.is_form_managed]
        if form_managed:
            chosen = rng.sample(form_managed, k=min(len(form_managed), rng.randrange(1, 3)))
            forms.append(
                WebFormInstance(id="wf.num", spec="form.num", entries=tuple(sorted(chosen)))
            )

    return Catena(
        id="random",
        project="prop-tests",
        entries=tuple(entries),
        forms=tuple(forms),
        functions=tuple(functions),
        views=tuple(views),
    )


def seed_sources(store, catena: Catena, rng: random.Random, produced_at=None) -> None:
    for entry in catena.source_entries():
        store.put_payload(
            entry.id,
            entry.data_type,
            {"value": round(rng.uniform(-100, 100), 6)},
            produced_at=produced_at or EPOCH,
        )


def reachable_functions(catena: Catena, changed: set[str]) -> set[str]:
    """Independent forward-reachability oracle walking the catena structure."""
    from watchtower.model.instances import binding_entries

    produced = {
        entry.source.function: [] for entry in catena.entries if entry.is_derived
    }
    for entry in catena.entries:
        if entry.is_derived:
            produced[entry.source.function].append(entry.id)

    affected: set[str] = set()
    frontier = set(changed)
    progress = True
    while progress:
        progress = False
        for instance in catena.functions:
            if instance.id in affected:
                continue
            bound = {entry_id for _, entry_id in binding_entries(instance.bindings)}
            if bound & frontier:
                affected.add(instance.id)
                frontier.update(produced.get(instance.id, []))
                progress = True
    return affected
