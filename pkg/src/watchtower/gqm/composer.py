"""Goal-oriented composition: build a candidate catena from a plan and the repository.

Selection is a transparent, deterministic rule set over tags, port types,
and reuse statistics:

  per metric: (1) the metric's data type must be registered; (2) pick
  function specs that accept it and share technique tags, extending the
  chain (at most two functions) while desired tags remain uncovered, or
  chaining one untagged converter when nothing accepts the type directly;
  (3) pick a view of the desired render kind (falling back to a table)
  accepting the chain's final output; (4) allocate form-managed entries
  for every input the chain does not produce, and a web form instance for
  each group of them a registered form covers.

Candidates are ranked by (tag overlap desc, reuse count desc, id asc),
so identical plan and repository always compose the identical candidate.
Unmatched metrics are reported in coverage, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from watchtower.model.binding import bind_function_instance
from watchtower.model.components import FunctionSpec, ViewSpec
from watchtower.model.instances import (
    Catena,
    DataEntry,
    FormSource,
    FunctionInstance,
    ViewInstance,
    WebFormInstance,
)
from watchtower.model.registry import ComponentRegistry
from watchtower.gqm.plan import GqmPlan, Metric

MAX_CHAIN = 2


@dataclass(frozen=True)
class ProjectContext:
    project: str
    roles: tuple[str, ...] = ()


@dataclass(frozen=True)
class MetricCoverage:
    matched: bool
    components: tuple[str, ...] = ()
    missing: tuple[str, ...] = ()


@dataclass(frozen=True)
class CompositionResult:
    catena: Catena
    coverage: dict[str, MetricCoverage] = field(default_factory=dict)
    goal_satisfaction: dict[str, float] = field(default_factory=dict)


def _accepts(spec: FunctionSpec | ViewSpec, data_type: str) -> bool:
    return any(p.data_type == data_type for p in spec.inputs)


def _first_port_of_type(spec, data_type: str):
    return next(p for p in spec.inputs if p.data_type == data_type)


def _output_type(spec: FunctionSpec) -> str:
    return spec.outputs[0].data_type


def _composable(spec: FunctionSpec) -> bool:
    # composition cannot invent values for required parameters
    return all(not p.required for p in spec.parameters)


def _ranked_functions(
    registry: ComponentRegistry, data_type: str, desired: set[str]
) -> list[tuple[FunctionSpec, int]]:
    """Specs accepting data_type with tag overlap, best first."""
    candidates = []
    for record in registry.of_kind("function"):
        spec = record.spec
        if not _accepts(spec, data_type) or not _composable(spec):
            continue
        overlap = len(desired & set(record.tags))
        if overlap == 0:
            continue
        candidates.append((spec, overlap, record.reuse_count))
    candidates.sort(key=lambda c: (-c[1], -c[2], c[0].id))
    return [(spec, overlap) for spec, overlap, _ in candidates]


def _converters(registry: ComponentRegistry, data_type: str) -> list[FunctionSpec]:
    """Any composable spec accepting the type, by (reuse desc, id asc)."""
    candidates = []
    for record in registry.of_kind("function"):
        if _accepts(record.spec, data_type) and _composable(record.spec):
            candidates.append((record.spec, record.reuse_count))
    candidates.sort(key=lambda c: (-c[1], c[0].id))
    return [spec for spec, _ in candidates]


def _select_chain(registry: ComponentRegistry, data_type: str, desired: set[str]) -> list[FunctionSpec] | None:
    if not desired:
        return []
    direct = _ranked_functions(registry, data_type, desired)
    if direct:
        first, _ = direct[0]
        chain = [first]
        covered = desired & set(registry.get("function", first.id).tags)
        remaining = desired - covered
        if remaining:
            extension = _ranked_functions(registry, _output_type(first), remaining)
            extension = [(s, o) for s, o in extension if s.id != first.id]
            if extension and len(chain) < MAX_CHAIN:
                chain.append(extension[0][0])
        return chain
    # nothing accepts the type directly: try one converter step
    for converter in _converters(registry, data_type):
        matched = _ranked_functions(registry, _output_type(converter), desired)
        matched = [(s, o) for s, o in matched if s.id != converter.id]
        if matched:
            return [converter, matched[0][0]]
    return None


def _select_view(registry: ComponentRegistry, final_type: str, desired_kind: str | None) -> ViewSpec | None:
    for kind in filter(None, [desired_kind, "table"]):
        candidates = []
        for record in registry.of_kind("view"):
            spec = record.spec
            if spec.render_kind == kind and _accepts(spec, final_type):
                candidates.append((spec, record.reuse_count))
        candidates.sort(key=lambda c: (-c[1], c[0].id))
        if candidates:
            return candidates[0][0]
    return None


class _Builder:
    """Accumulates the candidate catena while metrics are matched."""

    def __init__(self, registry: ComponentRegistry):
        self.registry = registry
        self.entries: list[DataEntry] = []
        self.functions: list[FunctionInstance] = []
        self.views: list[ViewInstance] = []
        self.forms: list[WebFormInstance] = []
        self.entry_types: dict[str, str] = {}

    def add_entry(self, entry: DataEntry) -> None:
        self.entries.append(entry)
        self.entry_types[entry.id] = entry.data_type

    def form_entry(self, entry_id: str, data_type: str) -> str:
        if entry_id not in self.entry_types:
            self.add_entry(DataEntry(id=entry_id, data_type=data_type, source=FormSource()))
        return entry_id

    def aux_entry(self, metric_id: str, data_type: str) -> str:
        # one auxiliary entry per (metric, type); chain members share it
        return self.form_entry(f"e.{metric_id}.{data_type}", data_type)

    def bind_chain_member(self, metric: Metric, index: int, spec: FunctionSpec, upstream: str) -> str:
        upstream_type = self.entry_types[upstream]
        flow_port = _first_port_of_type(spec, upstream_type)
        bindings: dict[str, object] = {}
        for port in spec.inputs:
            if port.name == flow_port.name:
                bound: object = upstream
            else:
                bound = self.aux_entry(metric.id, port.data_type)
            bindings[port.name] = [bound] if port.arity == "many" else bound
        bound_function = bind_function_instance(
            spec,
            f"f.{metric.id}.{index}.{spec.id}",
            bindings,
            {},
            self.entry_types,
        )
        self.functions.append(bound_function.instance)
        for entry in bound_function.output_entries:
            self.add_entry(entry)
        return bound_function.instance.outputs[spec.outputs[0].name]

    def bind_view(self, metric: Metric, spec: ViewSpec, final_entry: str, viewpoint: str) -> None:
        final_type = self.entry_types[final_entry]
        flow_port = _first_port_of_type(spec, final_type)
        bindings: dict[str, str | tuple[str, ...]] = {}
        for port in spec.inputs:
            if port.name == flow_port.name:
                bound: str = final_entry
            else:
                bound = self.aux_entry(metric.id, port.data_type)
            bindings[port.name] = (bound,) if port.arity == "many" else bound
        params: dict[str, object] = {}
        if spec.parameter("title") is not None:
            params["title"] = metric.name
        for pspec in spec.parameters:
            if pspec.name not in params and not pspec.required:
                params[pspec.name] = pspec.default
        self.views.append(
            ViewInstance(
                id=f"v.{metric.id}",
                spec=spec.id,
                bindings=bindings,
                params=params,
                children={},
                visible_to=(viewpoint,),
            )
        )

    def emit_forms(self, metric: Metric, pending_ids: list[str]) -> list[str]:
        """One form instance per form spec covering a group of pending entries."""
        used_specs: list[str] = []
        pending = sorted(pending_ids)
        while pending:
            best = None
            for record in self.registry.of_kind("web-form"):
                spec = record.spec
                covered = [e for e in pending if self.entry_types[e] in spec.target_types]
                if not covered:
                    continue
                key = (-len({self.entry_types[e] for e in covered}), spec.id)
                if best is None or key < best[0]:
                    best = (key, spec, covered)
            if best is None:
                break
            _, spec, covered = best
            self.forms.append(
                WebFormInstance(
                    id=f"wf.{metric.id}.{spec.id}",
                    spec=spec.id,
                    entries=tuple(covered),
                    field_bindings={},
                )
            )
            used_specs.append(spec.id)
            pending = [e for e in pending if e not in covered]
        return used_specs


def compose_catena(plan: GqmPlan, registry: ComponentRegistry, context: ProjectContext) -> CompositionResult:
    builder = _Builder(registry)
    coverage: dict[str, MetricCoverage] = {}

    for metric in plan.metrics:
        missing: list[str] = []
        if registry.data_type(metric.data_type) is None:
            missing.append("data-type")
            coverage[metric.id] = MetricCoverage(matched=False, missing=tuple(missing))
            continue
        chain = _select_chain(registry, metric.data_type, set(metric.technique_tags))
        if chain is None:
            missing.append("function")
        final_type = _output_type(chain[-1]) if chain else metric.data_type
        view_spec = None
        if chain is not None:
            view_spec = _select_view(registry, final_type, metric.view_kind)
            if view_spec is None:
                missing.append("view")
        if missing:
            coverage[metric.id] = MetricCoverage(matched=False, missing=tuple(missing))
            continue

        goal = plan.goal_of_metric(metric)
        viewpoint = goal.viewpoint if goal else (context.roles[0] if context.roles else "admin")

        entries_before = {e.id for e in builder.entries}
        source_entry = builder.form_entry(f"e.{metric.id}", metric.data_type)
        upstream = source_entry
        for index, spec in enumerate(chain, start=1):
            upstream = builder.bind_chain_member(metric, index, spec, upstream)
        builder.bind_view(metric, view_spec, upstream, viewpoint)

        new_form_entries = [
            e.id for e in builder.entries if e.id not in entries_before and e.is_form_managed
        ]
        form_specs = builder.emit_forms(metric, new_form_entries)

        components = sorted(
            {metric.data_type, view_spec.id, *(s.id for s in chain), *form_specs}
        )
        coverage[metric.id] = MetricCoverage(matched=True, components=tuple(components))

    goal_satisfaction: dict[str, float] = {}
    for goal in plan.goals:
        metric_ids = [
            m.id for m in plan.metrics if (q := plan.question(m.question)) and q.goal == goal.id
        ]
        if not metric_ids:
            goal_satisfaction[goal.id] = 1.0
        else:
            matched = sum(1 for mid in metric_ids if coverage[mid].matched)
            goal_satisfaction[goal.id] = matched / len(metric_ids)

    catena = Catena(
        id=f"gqm.{context.project}",
        project=context.project,
        entries=tuple(builder.entries),
        forms=tuple(builder.forms),
        functions=tuple(builder.functions),
        views=tuple(builder.views),
    )
    return CompositionResult(catena=catena, coverage=coverage, goal_satisfaction=goal_satisfaction)
