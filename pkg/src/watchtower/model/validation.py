"""Catena consistency checking.

Produces a full diagnostic list rather than failing fast: an operator
fixing a composition needs every defect at once. The report is
deterministic for identical inputs (diagnostics sorted by subject, code,
message).
"""

from __future__ import annotations

from dataclasses import dataclass

from watchtower.model.components import DaoPackageSpec
from watchtower.model.instances import (
    Bindings,
    Catena,
    DaoSource,
    DerivedSource,
    binding_entries,
)
from watchtower.model.registry import ComponentRegistry

SEVERITIES = ("error", "warning")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    subject: str
    code: str
    message: str

    def render(self) -> str:
        return f"{self.severity}: {self.subject}: {self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)

    def codes(self) -> set[str]:
        return {d.code for d in self.diagnostics}

    def render(self) -> str:
        if self.ok and not self.diagnostics:
            return "ok"
        return "\n".join(d.render() for d in self.diagnostics)


class _Collector:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def error(self, subject: str, code: str, message: str) -> None:
        self.diagnostics.append(Diagnostic("error", subject, code, message))

    def warning(self, subject: str, code: str, message: str) -> None:
        self.diagnostics.append(Diagnostic("warning", subject, code, message))

    def report(self) -> ValidationReport:
        ordered = sorted(self.diagnostics, key=lambda d: (d.subject, d.code, d.message))
        return ValidationReport(tuple(ordered))


def _check_duplicate_ids(catena: Catena, out: _Collector) -> None:
    from watchtower.model.components import _ID_RE

    for label, ids in (
        ("data entry", [e.id for e in catena.entries]),
        ("function instance", [f.id for f in catena.functions]),
        ("view instance", [v.id for v in catena.views]),
        ("web form instance", [w.id for w in catena.forms]),
    ):
        seen: set[str] = set()
        for item_id in ids:
            if not _ID_RE.match(item_id):
                # ids double as store path segments; reject anything exotic
                out.error(item_id, "bad-id", f"{label} id contains invalid characters")
            if item_id in seen:
                out.error(item_id, "duplicate-id", f"duplicate {label} id")
            seen.add(item_id)
    # entry and function ids share the dependency-graph node namespace
    entry_ids = {e.id for e in catena.entries}
    for f in catena.functions:
        if f.id in entry_ids:
            out.error(f.id, "duplicate-id", "function instance id collides with a data entry id")


def _check_bindings(
    subject: str,
    bindings: Bindings,
    ports: tuple,
    catena: Catena,
    out: _Collector,
) -> None:
    port_names = {p.name for p in ports}
    for name in sorted(set(bindings) - port_names):
        out.error(subject, "unknown-port", f"binding for unknown port {name!r}")
    for port in ports:
        if port.name not in bindings:
            out.error(subject, "unbound-port", f"required port {port.name!r} is unbound")
            continue
        bound = bindings[port.name]
        if port.arity == "one" and not isinstance(bound, str):
            out.error(subject, "arity", f"port {port.name!r} takes exactly one entry")
            continue
        if port.arity == "many":
            if isinstance(bound, str) or len(bound) == 0:
                out.error(subject, "arity", f"port {port.name!r} takes a non-empty entry list")
                continue
        entry_ids = [bound] if isinstance(bound, str) else list(bound)
        for entry_id in entry_ids:
            entry = catena.entry(entry_id)
            if entry is None:
                out.error(subject, "unresolved-ref", f"port {port.name!r} bound to unknown entry {entry_id!r}")
            elif entry.data_type != port.data_type:
                out.error(
                    subject,
                    "type-mismatch",
                    f"port {port.name!r} requires {port.data_type}, entry {entry_id!r} has {entry.data_type}",
                )


def _check_params(subject: str, params: dict, parameter_specs: tuple, out: _Collector) -> None:
    known = {p.name for p in parameter_specs}
    for name in sorted(set(params) - known):
        out.error(subject, "unknown-param", f"unknown parameter {name!r}")
    for pspec in parameter_specs:
        if pspec.name not in params:
            if pspec.required:
                out.error(subject, "param-missing", f"required parameter {pspec.name!r} not supplied")
            continue
        if not pspec.accepts(params[pspec.name]):
            constraint = pspec.constraint.describe() if pspec.constraint else pspec.kind
            out.error(
                subject,
                "param-constraint",
                f"parameter {pspec.name!r} value {params[pspec.name]!r} violates {constraint}",
            )


def _check_entries(catena: Catena, registry: ComponentRegistry, out: _Collector) -> None:
    for entry in catena.entries:
        if registry.data_type(entry.data_type) is None:
            out.error(entry.id, "unresolved-ref", f"unknown data type {entry.data_type!r}")
        if entry.latest_version < 0:
            out.error(entry.id, "bad-version", "latest payload version must be >= 0")
        source = entry.source
        if isinstance(source, DaoSource):
            package = registry.dao_package(source.package)
            if package is None:
                out.error(entry.id, "unresolved-ref", f"unknown dao package {source.package!r}")
            else:
                _check_dao_binding(entry.id, entry.data_type, source, package, out)
            if source.window.start > source.window.end:
                out.error(entry.id, "bad-window", "collection window start is after end")
            if source.window.interval.total_seconds() <= 0:
                out.error(entry.id, "bad-window", "collection interval must be positive")
        elif isinstance(source, DerivedSource):
            producer = catena.function(source.function)
            if producer is None:
                out.error(entry.id, "unresolved-ref", f"unknown producing function {source.function!r}")
                continue
            spec = registry.function(producer.spec)
            if spec is None:
                continue  # reported on the function instance
            port = spec.output_port(source.port)
            if port is None:
                out.error(entry.id, "output-port", f"{producer.spec} has no output port {source.port!r}")
            elif port.data_type != entry.data_type:
                out.error(
                    entry.id,
                    "type-mismatch",
                    f"output port {source.port!r} produces {port.data_type}, entry has {entry.data_type}",
                )


def _check_dao_binding(subject: str, data_type: str, source: DaoSource, package: DaoPackageSpec, out: _Collector) -> None:
    if data_type not in package.supported_types:
        out.error(subject, "dao-type", f"dao package {package.id} does not supply {data_type}")
    for fspec in package.connection_fields:
        if not fspec.nullable and fspec.name not in source.connection:
            out.error(subject, "dao-connection", f"missing connection parameter {fspec.name!r}")


def _check_functions(catena: Catena, registry: ComponentRegistry, out: _Collector) -> None:
    derived_by_function: dict[str, dict[str, list[str]]] = {}
    for entry in catena.entries:
        if isinstance(entry.source, DerivedSource):
            ports = derived_by_function.setdefault(entry.source.function, {})
            ports.setdefault(entry.source.port, []).append(entry.id)

    for instance in catena.functions:
        spec = registry.function(instance.spec)
        if spec is None:
            out.error(instance.id, "unresolved-ref", f"unknown function spec {instance.spec!r}")
            continue
        _check_bindings(instance.id, instance.bindings, spec.inputs, catena, out)
        _check_params(instance.id, instance.params, spec.parameters, out)
        produced = derived_by_function.get(instance.id, {})
        for port in spec.outputs:
            entries = produced.get(port.name, [])
            if not entries:
                out.error(instance.id, "output-port", f"no derived entry for output port {port.name!r}")
            elif len(entries) > 1:
                out.error(
                    instance.id,
                    "output-port",
                    f"output port {port.name!r} has multiple derived entries: {', '.join(sorted(entries))}",
                )
            elif instance.outputs.get(port.name) != entries[0]:
                out.error(
                    instance.id,
                    "output-port",
                    f"outputs map for port {port.name!r} disagrees with derived entry {entries[0]!r}",
                )
        for port_name in sorted(set(produced) - {p.name for p in spec.outputs}):
            out.error(instance.id, "output-port", f"derived entries reference unknown port {port_name!r}")


def _function_graph(catena: Catena) -> dict[str, set[str]]:
    """producer instance -> consumer instances, through derived entries."""
    producer_of: dict[str, str] = {}
    for entry in catena.entries:
        if isinstance(entry.source, DerivedSource):
            producer_of[entry.id] = entry.source.function
    edges: dict[str, set[str]] = {f.id: set() for f in catena.functions}
    for instance in catena.functions:
        for _, entry_id in binding_entries(instance.bindings):
            producer = producer_of.get(entry_id)
            if producer is not None and producer in edges:
                edges[producer].add(instance.id)
    return edges


def _find_cycle_members(edges: dict[str, set[str]]) -> list[str]:
    """Kahn's algorithm; whatever cannot be drained sits on a cycle."""
    indegree = {node: 0 for node in edges}
    for targets in edges.values():
        for target in targets:
            if target in indegree:
                indegree[target] += 1
    ready = sorted(node for node, deg in indegree.items() if deg == 0)
    done = 0
    while ready:
        node = ready.pop()
        done += 1
        for target in sorted(edges[node]):
            indegree[target] -= 1
            if indegree[target] == 0:
                ready.append(target)
        ready.sort()
    if done == len(edges):
        return []
    return sorted(node for node, deg in indegree.items() if deg > 0)


def _check_function_cycles(catena: Catena, out: _Collector) -> None:
    members = _find_cycle_members(_function_graph(catena))
    if members:
        out.error(members[0], "cycle", "function instances form a cycle: " + ", ".join(members))


def _check_views(catena: Catena, registry: ComponentRegistry, out: _Collector) -> None:
    for instance in catena.views:
        spec = registry.view(instance.spec)
        if spec is None:
            out.error(instance.id, "unresolved-ref", f"unknown view spec {instance.spec!r}")
            continue
        _check_bindings(instance.id, instance.bindings, spec.inputs, catena, out)
        _check_params(instance.id, instance.params, spec.parameters, out)
        for slot_name in sorted(instance.children):
            slot = spec.slot(slot_name)
            child_id = instance.children[slot_name]
            if slot is None:
                out.error(instance.id, "unknown-slot", f"view spec {spec.id} has no slot {slot_name!r}")
                continue
            child = catena.view(child_id)
            if child is None:
                out.error(instance.id, "unresolved-ref", f"slot {slot_name!r} references unknown view {child_id!r}")
            elif child.spec != slot.view_spec:
                out.error(
                    instance.id,
                    "slot-type",
                    f"slot {slot_name!r} accepts {slot.view_spec}, got instance of {child.spec}",
                )
    child_edges = {
        v.id: {c for c in v.children.values() if catena.view(c) is not None} for v in catena.views
    }
    members = _find_cycle_members(child_edges)
    if members:
        out.error(members[0], "view-cycle", "view hierarchy forms a cycle: " + ", ".join(members))


def _check_forms(catena: Catena, registry: ComponentRegistry, out: _Collector) -> None:
    for instance in catena.forms:
        spec = registry.web_form(instance.spec)
        if spec is None:
            out.error(instance.id, "unresolved-ref", f"unknown web form spec {instance.spec!r}")
            continue
        for entry_id in instance.entries:
            entry = catena.entry(entry_id)
            if entry is None:
                out.error(instance.id, "unresolved-ref", f"bound to unknown entry {entry_id!r}")
                continue
            if not entry.is_form_managed:
                out.error(instance.id, "form-not-managed", f"entry {entry_id!r} is not form-managed")
            if entry.data_type not in spec.target_types:
                out.error(
                    instance.id,
                    "form-target",
                    f"entry {entry_id!r} has type {entry.data_type}, form targets {', '.join(spec.target_types)}",
                )
        if spec.mode == "manual-entry":
            layout = {f.name for f in spec.fields}
            for form_field in sorted(instance.field_bindings):
                if form_field not in layout:
                    out.error(instance.id, "form-field", f"unknown form field {form_field!r} in field bindings")


def validate_catena(catena: Catena, registry: ComponentRegistry) -> ValidationReport:
    """Check every model invariant; returns ok only when the catena can execute."""
    out = _Collector()
    _check_duplicate_ids(catena, out)
    _check_entries(catena, registry, out)
    _check_functions(catena, registry, out)
    _check_function_cycles(catena, out)
    _check_views(catena, registry, out)
    _check_forms(catena, registry, out)
    return out.report()
