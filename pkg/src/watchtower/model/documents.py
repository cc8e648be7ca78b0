"""Catena document format: the hand-editable, diffable serialization.

The top-level sections and element field names are normative and frozen
in docs/format.md. ``parse_catena(serialize_catena(c), registry)`` is the
identity on validated catenas (structural equality).
"""

from __future__ import annotations

import json
from datetime import timedelta

from watchtower.errors import DocumentError
from watchtower.model.instances import (
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
from watchtower.model.registry import ComponentRegistry
from watchtower.timeutil import format_timestamp, parse_timestamp

SECTIONS = ("meta", "data_entries", "web_forms", "functions", "views")


def _require(obj: dict, key: str, path: str, expected: type) -> object:
    if key not in obj:
        raise DocumentError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if not isinstance(value, expected):
        raise DocumentError(f"{path}.{key}", f"expected {expected.__name__}, got {type(value).__name__}")
    return value


def _optional(obj: dict, key: str, path: str, expected: type, default):
    if key not in obj:
        return default
    value = obj[key]
    if not isinstance(value, expected):
        raise DocumentError(f"{path}.{key}", f"expected {expected.__name__}, got {type(value).__name__}")
    return value


def _parse_binding_section(raw: dict, path: str) -> dict:
    bindings: dict[str, str | tuple[str, ...]] = {}
    for port, bound in raw.items():
        if isinstance(bound, str):
            bindings[port] = bound
        elif isinstance(bound, list) and all(isinstance(b, str) for b in bound):
            bindings[port] = tuple(sorted(bound))
        else:
            raise DocumentError(f"{path}.{port}", "binding must be an entry id or a list of entry ids")
    return bindings


def _serialize_bindings(bindings: dict) -> dict:
    out: dict[str, object] = {}
    for port in sorted(bindings):
        bound = bindings[port]
        out[port] = bound if isinstance(bound, str) else sorted(bound)
    return out


def _parse_source(raw: dict, path: str):
    kind = _require(raw, "kind", path, str)
    if kind == "form":
        return FormSource()
    if kind == "derived":
        return DerivedSource(
            function=_require(raw, "function", path, str),
            port=_require(raw, "port", path, str),
        )
    if kind == "dao":
        window_raw = _require(raw, "window", path, dict)
        try:
            window = CollectionWindow(
                start=parse_timestamp(_require(window_raw, "start", f"{path}.window", str)),
                end=parse_timestamp(_require(window_raw, "end", f"{path}.window", str)),
                interval=timedelta(seconds=_require(window_raw, "interval_seconds", f"{path}.window", int)),
            )
        except DocumentError:
            raise
        connection_raw = _optional(raw, "connection", path, dict, {})
        connection = {}
        for key in connection_raw:
            if not isinstance(connection_raw[key], str):
                raise DocumentError(f"{path}.connection.{key}", "connection parameters must be text")
            connection[key] = connection_raw[key]
        return DaoSource(package=_require(raw, "package", path, str), connection=connection, window=window)
    raise DocumentError(f"{path}.kind", f"unknown source kind {kind!r}")


def _serialize_source(source) -> dict:
    if isinstance(source, FormSource):
        return {"kind": "form"}
    if isinstance(source, DerivedSource):
        return {"kind": "derived", "function": source.function, "port": source.port}
    return {
        "kind": "dao",
        "package": source.package,
        "connection": {k: source.connection[k] for k in sorted(source.connection)},
        "window": {
            "start": format_timestamp(source.window.start),
            "end": format_timestamp(source.window.end),
            "interval_seconds": int(source.window.interval.total_seconds()),
        },
    }


def parse_catena(document: dict, registry: ComponentRegistry) -> Catena:
    """Parse a catena document; all referenced type-level components must be registered."""
    if not isinstance(document, dict):
        raise DocumentError("document", "expected an object")
    for section in SECTIONS:
        if section not in document:
            raise DocumentError(section, "missing required section")
    meta = document["meta"]
    if not isinstance(meta, dict):
        raise DocumentError("meta", "expected an object")
    catena_id = _require(meta, "id", "meta", str)
    project = _require(meta, "project", "meta", str)

    entries: list[DataEntry] = []
    for i, raw in enumerate(_as_list(document, "data_entries")):
        path = f"data_entries[{i}]"
        entries.append(
            DataEntry(
                id=_require(raw, "id", path, str),
                data_type=_require(raw, "spec", path, str),
                source=_parse_source(_require(raw, "source", path, dict), f"{path}.source"),
                latest_version=_optional(raw, "latest_version", path, int, 0),
            )
        )

    forms: list[WebFormInstance] = []
    for i, raw in enumerate(_as_list(document, "web_forms")):
        path = f"web_forms[{i}]"
        raw_entries = _require(raw, "entries", path, list)
        if not all(isinstance(e, str) for e in raw_entries):
            raise DocumentError(f"{path}.entries", "entry ids must be text")
        field_bindings = _optional(raw, "field_bindings", path, dict, {})
        forms.append(
            WebFormInstance(
                id=_require(raw, "id", path, str),
                spec=_require(raw, "spec", path, str),
                entries=tuple(raw_entries),
                field_bindings={k: field_bindings[k] for k in sorted(field_bindings)},
            )
        )

    functions: list[FunctionInstance] = []
    for i, raw in enumerate(_as_list(document, "functions")):
        path = f"functions[{i}]"
        functions.append(
            FunctionInstance(
                id=_require(raw, "id", path, str),
                spec=_require(raw, "spec", path, str),
                bindings=_parse_binding_section(_optional(raw, "bindings", path, dict, {}), f"{path}.bindings"),
                params=dict(_optional(raw, "params", path, dict, {})),
                outputs={},
            )
        )

    # output maps are implied by derived entries, not stored in the document
    outputs_by_function: dict[str, dict[str, str]] = {}
    for entry in entries:
        if isinstance(entry.source, DerivedSource):
            ports = outputs_by_function.setdefault(entry.source.function, {})
            ports.setdefault(entry.source.port, entry.id)
    functions = [
        FunctionInstance(
            id=f.id,
            spec=f.spec,
            bindings=f.bindings,
            params=f.params,
            outputs=outputs_by_function.get(f.id, {}),
        )
        for f in functions
    ]

    views: list[ViewInstance] = []
    for i, raw in enumerate(_as_list(document, "views")):
        path = f"views[{i}]"
        children = _optional(raw, "children", path, dict, {})
        for slot, child in children.items():
            if not isinstance(child, str):
                raise DocumentError(f"{path}.children.{slot}", "child view id must be text")
        roles = _optional(raw, "roles", path, list, [])
        if not all(isinstance(r, str) for r in roles):
            raise DocumentError(f"{path}.roles", "roles must be text")
        views.append(
            ViewInstance(
                id=_require(raw, "id", path, str),
                spec=_require(raw, "spec", path, str),
                bindings=_parse_binding_section(_optional(raw, "bindings", path, dict, {}), f"{path}.bindings"),
                params=dict(_optional(raw, "params", path, dict, {})),
                children={k: children[k] for k in sorted(children)},
                visible_to=tuple(sorted(set(roles))),
            )
        )

    catena = Catena(
        id=catena_id,
        project=project,
        entries=tuple(entries),
        forms=tuple(forms),
        functions=tuple(functions),
        views=tuple(views),
    )
    _check_registered(catena, registry)
    return catena


def _as_list(document: dict, section: str) -> list[dict]:
    raw = document[section]
    if not isinstance(raw, list):
        raise DocumentError(section, f"expected list, got {type(raw).__name__}")
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise DocumentError(f"{section}[{i}]", "expected an object")
    return raw


def _check_registered(catena: Catena, registry: ComponentRegistry) -> None:
    unknown: set[tuple[str, str]] = set()
    for entry in catena.entries:
        if registry.data_type(entry.data_type) is None:
            unknown.add(("data-type", entry.data_type))
        if isinstance(entry.source, DaoSource) and registry.dao_package(entry.source.package) is None:
            unknown.add(("dao-package", entry.source.package))
    for function in catena.functions:
        if registry.function(function.spec) is None:
            unknown.add(("function", function.spec))
    for view in catena.views:
        if registry.view(view.spec) is None:
            unknown.add(("view", view.spec))
    for form in catena.forms:
        if registry.web_form(form.spec) is None:
            unknown.add(("web-form", form.spec))
    if unknown:
        names = ", ".join(f"{kind} {cid!r}" for kind, cid in sorted(unknown))
        raise DocumentError("document", f"unregistered components referenced: {names}")


def serialize_catena(catena: Catena) -> dict:
    """Build the document for a catena; inverse of parse_catena."""
    return {
        "meta": {"id": catena.id, "project": catena.project},
        "data_entries": [
            {
                "id": e.id,
                "spec": e.data_type,
                "source": _serialize_source(e.source),
                "latest_version": e.latest_version,
            }
            for e in catena.entries
        ],
        "web_forms": [
            {
                "id": w.id,
                "spec": w.spec,
                "entries": list(w.entries),
                "field_bindings": {k: w.field_bindings[k] for k in sorted(w.field_bindings)},
            }
            for w in catena.forms
        ],
        "functions": [
            {
                "id": f.id,
                "spec": f.spec,
                "bindings": _serialize_bindings(f.bindings),
                "params": {k: f.params[k] for k in sorted(f.params)},
            }
            for f in catena.functions
        ],
        "views": [
            {
                "id": v.id,
                "spec": v.spec,
                "bindings": _serialize_bindings(v.bindings),
                "params": {k: v.params[k] for k in sorted(v.params)},
                "children": {k: v.children[k] for k in sorted(v.children)},
                "roles": sorted(v.visible_to),
            }
            for v in catena.views
        ],
    }


def catena_to_json(catena: Catena) -> str:
    return json.dumps(serialize_catena(catena), indent=2) + "\n"


def catena_from_json(text: str, registry: ComponentRegistry) -> Catena:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    return parse_catena(document, registry)
