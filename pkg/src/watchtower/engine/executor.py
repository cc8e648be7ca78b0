"""Executing function instances and propagating updates incrementally.

Failure policy is skip-and-continue: one failing technique (or one entry
without data yet) takes down only its downstream dependents, never the
independent branches. Incremental propagation re-executes exactly the
function instances forward-reachable from the changed entries, in the
global execution order restricted to that set, which makes incremental
and full runs produce identical payload bodies.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Iterable

from watchtower.errors import WatchtowerError
from watchtower.model.components import validate_body
from watchtower.model.instances import Catena, FunctionInstance
from watchtower.model.registry import ComponentRegistry
from watchtower.engine.graph import DependencyGraph, build_dependency_graph, execution_order
from watchtower.techniques.registry import TechniqueRegistry
from watchtower.timeutil import utcnow

STATUS_OK = "ok"
STATUS_FAILED = "failed"
STATUS_SKIPPED = "skipped-missing-input"


@dataclass(frozen=True)
class InstanceStatus:
    state: str
    reason: str | None = None


@dataclass(frozen=True)
class ExecutionResult:
    """What one run did: order, written payload versions, per-instance statuses."""

    executed: tuple[str, ...]
    versions: dict[str, int]
    statuses: dict[str, InstanceStatus]
    stale_views: tuple[str, ...]

    def status_of(self, instance_id: str) -> InstanceStatus | None:
        return self.statuses.get(instance_id)

    def ok_instances(self) -> list[str]:
        return [i for i in self.executed if self.statuses[i].state == STATUS_OK]


def affected_instances(graph: DependencyGraph, changed_entries: Iterable[str]) -> set[str]:
    """Function instances forward-reachable from the changed entries."""
    affected: set[str] = set()
    frontier = list(changed_entries)
    seen: set[str] = set(frontier)
    while frontier:
        node = frontier.pop()
        for successor in graph.successors(node):
            if successor in graph.function_ids:
                affected.add(successor)
            if successor not in seen:
                seen.add(successor)
                frontier.append(successor)
    return affected


def _resolve_params(spec, instance: FunctionInstance) -> dict:
    params = {p.name: p.default for p in spec.parameters if not p.required}
    params.update(instance.params)
    return params


def _run_instances(
    catena: Catena,
    store,
    registry: ComponentRegistry,
    techniques: TechniqueRegistry,
    graph: DependencyGraph,
    run_set: list[str],
    changed_entries: set[str],
    clock: Callable[[], datetime],
) -> ExecutionResult:
    statuses: dict[str, InstanceStatus] = {}
    versions: dict[str, int] = {}
    written: set[str] = set()
    producer_of = {
        entry.id: entry.source.function
        for entry in catena.entries
        if entry.is_derived
    }
    run_ids = set(run_set)

    for instance_id in run_set:
        instance = catena.function(instance_id)
        spec = registry.function(instance.spec)

        # an upstream producer that did not finish cleanly poisons this instance
        upstream_bad = False
        inputs: dict[str, object] = {}
        missing = False
        for port in spec.inputs:
            bound = instance.bindings[port.name]
            entry_ids = [bound] if isinstance(bound, str) else list(bound)
            bodies = []
            for entry_id in entry_ids:
                producer = producer_of.get(entry_id)
                if producer in run_ids and statuses.get(producer, InstanceStatus(STATUS_OK)).state != STATUS_OK:
                    upstream_bad = True
                    break
                payload = store.latest_payload(entry_id)
                if payload is None:
                    missing = True
                    break
                bodies.append(payload.body)
            if upstream_bad or missing:
                break
            inputs[port.name] = bodies[0] if port.arity == "one" else bodies

        if upstream_bad or missing:
            statuses[instance_id] = InstanceStatus(STATUS_SKIPPED)
            continue

        try:
            outputs = techniques.run(spec.implementation, inputs, _resolve_params(spec, instance))
            for port in spec.outputs:
                if port.name not in outputs:
                    raise WatchtowerError(f"technique produced no body for port {port.name!r}")
                descriptor = registry.data_type(port.data_type)
                problems = validate_body(descriptor, outputs[port.name])
                if problems:
                    raise WatchtowerError(
                        f"output for port {port.name!r} violates {port.data_type}: {problems[0]}"
                    )
        except WatchtowerError as exc:
            statuses[instance_id] = InstanceStatus(STATUS_FAILED, reason=str(exc))
            continue

        for port in spec.outputs:
            entry_id = instance.outputs[port.name]
            payload = store.put_payload(entry_id, port.data_type, outputs[port.name], produced_at=clock())
            versions[entry_id] = payload.version
            written.add(entry_id)
        statuses[instance_id] = InstanceStatus(STATUS_OK)

    touched = written | changed_entries
    stale_views = tuple(
        sorted(
            v.id
            for v in catena.views
            if any(
                (entry_id in touched)
                for _, entry_id in _view_bound_entries(v)
            )
        )
    )
    return ExecutionResult(
        executed=tuple(run_set),
        versions=versions,
        statuses=statuses,
        stale_views=stale_views,
    )


def _view_bound_entries(view) -> list[tuple[str, str]]:
    from watchtower.model.instances import binding_entries

    return binding_entries(view.bindings)


def execute_catena(
    catena: Catena,
    store,
    registry: ComponentRegistry,
    techniques: TechniqueRegistry,
    *,
    clock: Callable[[], datetime] = utcnow,
) -> ExecutionResult:
    """Run every function instance in dependency order against latest payloads."""
    graph = build_dependency_graph(catena)
    order = execution_order(graph)
    changed = {e.id for e in catena.source_entries() if store.latest_payload(e.id) is not None}
    return _run_instances(catena, store, registry, techniques, graph, order, changed, clock)


def propagate_update(
    catena: Catena,
    store,
    registry: ComponentRegistry,
    techniques: TechniqueRegistry,
    changed_entries: Iterable[str],
    *,
    clock: Callable[[], datetime] = utcnow,
) -> ExecutionResult:
    """Re-execute exactly the instances forward-reachable from the changed entries.

    The restricted set runs in the global execution order filtered to the
    set, so the results match a full run on the same store state.
    """
    graph = build_dependency_graph(catena)
    order = execution_order(graph)
    changed = set(changed_entries)
    affected = affected_instances(graph, changed)
    restricted = [instance_id for instance_id in order if instance_id in affected]
    return _run_instances(catena, store, registry, techniques, graph, restricted, changed, clock)
