"""Instantiating function specs against concrete entries.

Unlike catena validation, binding rejects instead of collecting
diagnostics: there is nothing useful to build from a bad binding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from watchtower.errors import BindingError
from watchtower.model.components import FunctionSpec
from watchtower.model.instances import Bindings, DataEntry, DerivedSource, FunctionInstance


@dataclass(frozen=True)
class BoundFunction:
    """A freshly bound instance together with its allocated output entries."""

    instance: FunctionInstance
    output_entries: tuple[DataEntry, ...]


def _normalize_binding(port, bound) -> str | tuple[str, ...]:
    if port.arity == "one":
        if isinstance(bound, (list, tuple)):
            if len(bound) != 1:
                raise BindingError(f"arity violation: port {port.name!r} takes exactly one entry")
            return bound[0]
        return bound
    if isinstance(bound, str):
        return (bound,)
    if not bound:
        raise BindingError(f"arity violation: port {port.name!r} takes a non-empty entry list")
    # many-ports receive entries ordered by id so execution stays deterministic
    return tuple(sorted(bound))


def bind_function_instance(
    spec: FunctionSpec,
    instance_id: str,
    bindings: Mapping[str, object],
    params: Mapping[str, object],
    entry_types: Mapping[str, str],
) -> BoundFunction:
    """Build a function instance, allocating one derived entry per output port.

    entry_types maps known entry ids to their data type ids; it is the
    context the bindings are checked against. Raises BindingError on any
    violation instead of constructing a broken instance.
    """
    known_ports = {p.name for p in spec.inputs}
    for name in sorted(set(bindings) - known_ports):
        raise BindingError(f"unknown port {name!r} on {spec.id}")

    normalized: Bindings = {}
    for port in spec.inputs:
        if port.name not in bindings:
            raise BindingError(f"unbound port: {port.name!r} is required by {spec.id}")
        bound = _normalize_binding(port, bindings[port.name])
        entry_ids = [bound] if isinstance(bound, str) else list(bound)
        for entry_id in entry_ids:
            if entry_id not in entry_types:
                raise BindingError(f"unknown entry {entry_id!r} bound to port {port.name!r}")
            if entry_types[entry_id] != port.data_type:
                raise BindingError(
                    f"type mismatch: port {port.name!r} requires {port.data_type}, "
                    f"entry {entry_id!r} has {entry_types[entry_id]}"
                )
        normalized[port.name] = bound

    resolved: dict[str, object] = {}
    known_params = {p.name for p in spec.parameters}
    for name in sorted(set(params) - known_params):
        raise BindingError(f"unknown parameter {name!r} on {spec.id}")
    for pspec in spec.parameters:
        if pspec.name in params:
            value = params[pspec.name]
        elif pspec.required:
            raise BindingError(f"required parameter {pspec.name!r} not supplied")
        else:
            value = pspec.default
        if not pspec.accepts(value):
            constraint = pspec.constraint.describe() if pspec.constraint else pspec.kind
            raise BindingError(f"constraint violation: parameter {pspec.name!r}={value!r} violates {constraint}")
        resolved[pspec.name] = value

    outputs: dict[str, str] = {}
    allocated: list[DataEntry] = []
    for port in spec.outputs:
        entry_id = f"{instance_id}.{port.name}"
        if entry_id in entry_types:
            raise BindingError(f"output entry id {entry_id!r} already in use")
        outputs[port.name] = entry_id
        allocated.append(
            DataEntry(
                id=entry_id,
                data_type=port.data_type,
                source=DerivedSource(function=instance_id, port=port.name),
                latest_version=0,
            )
        )

    instance = FunctionInstance(
        id=instance_id,
        spec=spec.id,
        bindings=normalized,
        params=resolved,
        outputs=outputs,
    )
    return BoundFunction(instance=instance, output_entries=tuple(allocated))
