"""Type-level reusable components and the measurement data schema language.

Every component kind carries a JSON body codec (``to_body``/``from_body``)
so the repository store can persist specs as plain documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from watchtower.errors import DocumentError, SchemaError

PRIMITIVE_KINDS = ("timestamp", "number", "integer", "text", "boolean", "reference", "record-list")
PARAMETER_KINDS = ("number", "integer", "text", "boolean", "timestamp")
RENDER_KINDS = ("bar-chart-drilldown", "line-chart", "milestone-trend-chart", "table", "traffic-light")
FORM_MODES = ("manual-entry", "file-import")
ACCESS_MODES = ("pull", "push")
ARITIES = ("one", "many")

COMPONENT_KINDS = ("data-type", "function", "view", "web-form", "dao-package")

# ids double as file names in the store, so keep the charset tight
_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

_TIMESTAMP_RE = re.compile(r"^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:\d{2})?)?$")


def check_id(value: str, what: str) -> None:
    if not isinstance(value, str) or not _ID_RE.match(value):
        raise SchemaError(f"invalid {what} id: {value!r}")


@dataclass(frozen=True)
class FieldSpec:
    """One field of a data type schema or form layout."""

    name: str
    kind: str
    nullable: bool = False
    item_fields: tuple[FieldSpec, ...] | None = None  # record-list element schema

    def __post_init__(self) -> None:
        if self.kind not in PRIMITIVE_KINDS:
            raise SchemaError(f"unknown field kind {self.kind!r} for field {self.name!r}")
        if self.item_fields is not None and self.kind != "record-list":
            raise SchemaError(f"item_fields only allowed on record-list fields ({self.name!r})")

    def to_body(self) -> dict:
        body: dict = {"name": self.name, "kind": self.kind}
        if self.nullable:
            body["nullable"] = True
        if self.item_fields is not None:
            body["item_fields"] = [f.to_body() for f in self.item_fields]
        return body

    @classmethod
    def from_body(cls, body: dict) -> FieldSpec:
        items = body.get("item_fields")
        return cls(
            name=body["name"],
            kind=body["kind"],
            nullable=bool(body.get("nullable", False)),
            item_fields=tuple(cls.from_body(i) for i in items) if items is not None else None,
        )


def _check_field_value(spec: FieldSpec, value: object, path: str, problems: list[str]) -> None:
    if value is None:
        if not spec.nullable:
            problems.append(f"{path}: null not allowed")
        return
    kind = spec.kind
    if kind == "timestamp":
        if not isinstance(value, str) or not _TIMESTAMP_RE.match(value):
            problems.append(f"{path}: expected ISO-8601 timestamp, got {value!r}")
    elif kind == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{path}: expected number, got {type(value).__name__}")
    elif kind == "integer":
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append(f"{path}: expected integer, got {type(value).__name__}")
    elif kind in ("text", "reference"):
        if not isinstance(value, str):
            problems.append(f"{path}: expected text, got {type(value).__name__}")
    elif kind == "boolean":
        if not isinstance(value, bool):
            problems.append(f"{path}: expected boolean, got {type(value).__name__}")
    elif kind == "record-list":
        if not isinstance(value, list):
            problems.append(f"{path}: expected list, got {type(value).__name__}")
            return
        for i, item in enumerate(value):
            if not isinstance(item, dict):
                problems.append(f"{path}[{i}]: expected record, got {type(item).__name__}")
                continue
            if spec.item_fields is not None:
                _check_record(spec.item_fields, item, f"{path}[{i}]", problems)


def _check_record(fields: tuple[FieldSpec, ...], record: dict, path: str, problems: list[str]) -> None:
    names = {f.name for f in fields}
    for extra in sorted(set(record) - names):
        problems.append(f"{path}.{extra}: unknown field")
    for f in fields:
        if f.name not in record:
            problems.append(f"{path}.{f.name}: missing field")
            continue
        _check_field_value(f, record[f.name], f"{path}.{f.name}", problems)


@dataclass(frozen=True)
class DataTypeDescriptor:
    """Structure of measurement data flowing between components."""

    id: str
    name: str
    fields: tuple[FieldSpec, ...]
    description: str = ""

    def __post_init__(self) -> None:
        check_id(self.id, "data type")
        if not self.fields:
            raise SchemaError(f"data type {self.id}: at least one field required")
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise SchemaError(f"data type {self.id}: duplicate field names")

    def to_body(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "fields": [f.to_body() for f in self.fields],
            "description": self.description,
        }

    @classmethod
    def from_body(cls, body: dict) -> DataTypeDescriptor:
        return cls(
            id=body["id"],
            name=body.get("name", body["id"]),
            fields=tuple(FieldSpec.from_body(f) for f in body["fields"]),
            description=body.get("description", ""),
        )


def validate_body(descriptor: DataTypeDescriptor, body: object) -> list[str]:
    """Check a payload body against a data type schema; returns problems."""
    problems: list[str] = []
    if not isinstance(body, dict):
        return [f"body: expected object, got {type(body).__name__}"]
    _check_record(descriptor.fields, body, "body", problems)
    return problems


def check_value(field_spec: FieldSpec, value: object) -> list[str]:
    """Check one value against a field spec; returns problems naming the field."""
    problems: list[str] = []
    _check_field_value(field_spec, value, field_spec.name, problems)
    return problems


@dataclass(frozen=True)
class Constraint:
    """Declarative parameter constraint, persistable as part of a spec body."""

    min: float | None = None
    max: float | None = None
    gt: float | None = None
    choices: tuple[object, ...] | None = None

    def satisfied(self, value: object) -> bool:
        if self.choices is not None and value not in self.choices:
            return False
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return self.min is None and self.max is None and self.gt is None
        if self.min is not None and value < self.min:
            return False
        if self.max is not None and value > self.max:
            return False
        if self.gt is not None and value <= self.gt:
            return False
        return True

    def describe(self) -> str:
        parts = []
        if self.min is not None:
            parts.append(f">= {self.min}")
        if self.max is not None:
            parts.append(f"<= {self.max}")
        if self.gt is not None:
            parts.append(f"> {self.gt}")
        if self.choices is not None:
            parts.append("one of " + ", ".join(repr(c) for c in self.choices))
        return " and ".join(parts) or "unconstrained"

    def to_body(self) -> dict:
        body: dict = {}
        if self.min is not None:
            body["min"] = self.min
        if self.max is not None:
            body["max"] = self.max
        if self.gt is not None:
            body["gt"] = self.gt
        if self.choices is not None:
            body["choices"] = list(self.choices)
        return body

    @classmethod
    def from_body(cls, body: dict) -> Constraint:
        return cls(
            min=body.get("min"),
            max=body.get("max"),
            gt=body.get("gt"),
            choices=tuple(body["choices"]) if "choices" in body else None,
        )


class _Required:
    """Sentinel: parameter has no default and must be supplied."""

    def __repr__(self) -> str:  # pragma: no cover
        return "REQUIRED"


REQUIRED = _Required()


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    kind: str
    default: object = REQUIRED
    constraint: Constraint | None = None

    def __post_init__(self) -> None:
        if self.kind not in PARAMETER_KINDS:
            raise SchemaError(f"unknown parameter kind {self.kind!r} for {self.name!r}")

    @property
    def required(self) -> bool:
        return self.default is REQUIRED

    def accepts(self, value: object) -> bool:
        if self.kind == "number":
            ok = not isinstance(value, bool) and isinstance(value, (int, float))
        elif self.kind == "integer":
            ok = not isinstance(value, bool) and isinstance(value, int)
        elif self.kind == "text":
            ok = isinstance(value, str)
        elif self.kind == "boolean":
            ok = isinstance(value, bool)
        else:  # timestamp
            ok = isinstance(value, str) and bool(_TIMESTAMP_RE.match(value))
        if not ok:
            return False
        return self.constraint is None or self.constraint.satisfied(value)

    def to_body(self) -> dict:
        body: dict = {"name": self.name, "kind": self.kind}
        if not self.required:
            body["default"] = self.default
        if self.constraint is not None:
            body["constraint"] = self.constraint.to_body()
        return body

    @classmethod
    def from_body(cls, body: dict) -> ParameterSpec:
        return cls(
            name=body["name"],
            kind=body["kind"],
            default=body["default"] if "default" in body else REQUIRED,
            constraint=Constraint.from_body(body["constraint"]) if "constraint" in body else None,
        )


@dataclass(frozen=True)
class Port:
    name: str
    data_type: str
    arity: str = "one"

    def __post_init__(self) -> None:
        if self.arity not in ARITIES:
            raise SchemaError(f"port {self.name!r}: unknown arity {self.arity!r}")

    def to_body(self) -> dict:
        body: dict = {"name": self.name, "data_type": self.data_type}
        if self.arity != "one":
            body["arity"] = self.arity
        return body

    @classmethod
    def from_body(cls, body: dict) -> Port:
        return cls(name=body["name"], data_type=body["data_type"], arity=body.get("arity", "one"))


def _check_ports(spec_id: str, inputs: tuple[Port, ...], outputs: tuple[Port, ...]) -> None:
    names = [p.name for p in inputs] + [p.name for p in outputs]
    if len(names) != len(set(names)):
        raise SchemaError(f"{spec_id}: port names must be unique across inputs and outputs")


def _check_defaults(spec_id: str, parameters: tuple[ParameterSpec, ...]) -> None:
    names = [p.name for p in parameters]
    if len(names) != len(set(names)):
        raise SchemaError(f"{spec_id}: duplicate parameter names")
    for p in parameters:
        if not p.required and not p.accepts(p.default):
            raise SchemaError(f"{spec_id}: default for {p.name!r} violates its constraint")


@dataclass(frozen=True)
class FunctionSpec:
    """A packaged control technique: typed input/output ports plus parameters."""

    id: str
    name: str
    inputs: tuple[Port, ...]
    outputs: tuple[Port, ...]
    parameters: tuple[ParameterSpec, ...] = ()
    implementation: str = ""

    def __post_init__(self) -> None:
        check_id(self.id, "function spec")
        if not self.outputs:
            raise SchemaError(f"function spec {self.id}: at least one output port required")
        _check_ports(self.id, self.inputs, self.outputs)
        _check_defaults(self.id, self.parameters)

    def input_port(self, name: str) -> Port | None:
        return next((p for p in self.inputs if p.name == name), None)

    def output_port(self, name: str) -> Port | None:
        return next((p for p in self.outputs if p.name == name), None)

    def parameter(self, name: str) -> ParameterSpec | None:
        return next((p for p in self.parameters if p.name == name), None)

    def to_body(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "inputs": [p.to_body() for p in self.inputs],
            "outputs": [p.to_body() for p in self.outputs],
            "parameters": [p.to_body() for p in self.parameters],
            "implementation": self.implementation,
        }

    @classmethod
    def from_body(cls, body: dict) -> FunctionSpec:
        return cls(
            id=body["id"],
            name=body.get("name", body["id"]),
            inputs=tuple(Port.from_body(p) for p in body.get("inputs", [])),
            outputs=tuple(Port.from_body(p) for p in body["outputs"]),
            parameters=tuple(ParameterSpec.from_body(p) for p in body.get("parameters", [])),
            implementation=body.get("implementation", body["id"]),
        )


@dataclass(frozen=True)
class SlotSpec:
    """A named child position on a view, accepting one view spec."""

    name: str
    view_spec: str

    def to_body(self) -> dict:
        return {"name": self.name, "view_spec": self.view_spec}

    @classmethod
    def from_body(cls, body: dict) -> SlotSpec:
        return cls(name=body["name"], view_spec=body["view_spec"])


@dataclass(frozen=True)
class ViewSpec:
    """A way of presenting data, optionally embedding child views."""

    id: str
    name: str
    inputs: tuple[Port, ...]
    render_kind: str
    parameters: tuple[ParameterSpec, ...] = ()
    slots: tuple[SlotSpec, ...] = ()

    def __post_init__(self) -> None:
        check_id(self.id, "view spec")
        if self.render_kind not in RENDER_KINDS:
            raise SchemaError(f"view spec {self.id}: unknown render kind {self.render_kind!r}")
        _check_ports(self.id, self.inputs, ())
        _check_defaults(self.id, self.parameters)
        slot_names = [s.name for s in self.slots]
        if len(slot_names) != len(set(slot_names)):
            raise SchemaError(f"view spec {self.id}: duplicate slot names")

    def input_port(self, name: str) -> Port | None:
        return next((p for p in self.inputs if p.name == name), None)

    def parameter(self, name: str) -> ParameterSpec | None:
        return next((p for p in self.parameters if p.name == name), None)

    def slot(self, name: str) -> SlotSpec | None:
        return next((s for s in self.slots if s.name == name), None)

    def to_body(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "inputs": [p.to_body() for p in self.inputs],
            "render_kind": self.render_kind,
            "parameters": [p.to_body() for p in self.parameters],
            "slots": [s.to_body() for s in self.slots],
        }

    @classmethod
    def from_body(cls, body: dict) -> ViewSpec:
        return cls(
            id=body["id"],
            name=body.get("name", body["id"]),
            inputs=tuple(Port.from_body(p) for p in body.get("inputs", [])),
            render_kind=body["render_kind"],
            parameters=tuple(ParameterSpec.from_body(p) for p in body.get("parameters", [])),
            slots=tuple(SlotSpec.from_body(s) for s in body.get("slots", [])),
        )


@dataclass(frozen=True)
class WebFormSpec:
    """Manual data management: an entry form or a file upload."""

    id: str
    name: str
    target_types: tuple[str, ...]
    mode: str
    fields: tuple[FieldSpec, ...] = ()  # manual-entry layout
    parser: str = ""  # file-import parser key

    def __post_init__(self) -> None:
        check_id(self.id, "web form spec")
        if self.mode not in FORM_MODES:
            raise SchemaError(f"web form spec {self.id}: unknown mode {self.mode!r}")
        if not self.target_types:
            raise SchemaError(f"web form spec {self.id}: at least one target type required")
        if self.mode == "manual-entry" and not self.fields:
            raise SchemaError(f"web form spec {self.id}: manual-entry forms need a field layout")
        if self.mode == "file-import" and not self.parser:
            raise SchemaError(f"web form spec {self.id}: file-import forms need a parser key")

    def to_body(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "target_types": list(self.target_types),
            "mode": self.mode,
            "fields": [f.to_body() for f in self.fields],
            "parser": self.parser,
        }

    @classmethod
    def from_body(cls, body: dict) -> WebFormSpec:
        return cls(
            id=body["id"],
            name=body.get("name", body["id"]),
            target_types=tuple(body["target_types"]),
            mode=body["mode"],
            fields=tuple(FieldSpec.from_body(f) for f in body.get("fields", [])),
            parser=body.get("parser", ""),
        )


@dataclass(frozen=True)
class DaoPackageSpec:
    """A data-access adapter: how entries of given types are pulled from a source."""

    id: str
    supported_types: tuple[str, ...]
    connection_fields: tuple[FieldSpec, ...] = ()
    access_mode: str = "pull"

    def __post_init__(self) -> None:
        check_id(self.id, "dao package")
        if self.access_mode not in ACCESS_MODES:
            raise SchemaError(f"dao package {self.id}: unknown access mode {self.access_mode!r}")
        if not self.supported_types:
            raise SchemaError(f"dao package {self.id}: at least one supported type required")

    def to_body(self) -> dict:
        return {
            "id": self.id,
            "supported_types": list(self.supported_types),
            "connection_fields": [f.to_body() for f in self.connection_fields],
            "access_mode": self.access_mode,
        }

    @classmethod
    def from_body(cls, body: dict) -> DaoPackageSpec:
        return cls(
            id=body["id"],
            supported_types=tuple(body["supported_types"]),
            connection_fields=tuple(FieldSpec.from_body(f) for f in body.get("connection_fields", [])),
            access_mode=body.get("access_mode", "pull"),
        )


_SPEC_CLASSES = {
    "data-type": DataTypeDescriptor,
    "function": FunctionSpec,
    "view": ViewSpec,
    "web-form": WebFormSpec,
    "dao-package": DaoPackageSpec,
}


def spec_from_body(kind: str, body: dict):
    """Parse a persisted component body into its spec object."""
    if kind not in _SPEC_CLASSES:
        raise SchemaError(f"unknown component kind {kind!r}")
    try:
        return _SPEC_CLASSES[kind].from_body(body)
    except (KeyError, TypeError) as exc:
        raise DocumentError(kind, f"malformed component body: {exc}") from exc
