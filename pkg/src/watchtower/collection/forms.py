"""Web form submission handling.

A submission is all-or-nothing: every bound entry's new body is built
and schema-checked first, and only then written. A rejected submission
leaves every entry at its pre-call version.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from watchtower.collection.importers import parse_file
from watchtower.errors import NotFoundError, SchemaError
from watchtower.model.components import check_value, validate_body
from watchtower.model.instances import Catena
from watchtower.model.registry import ComponentRegistry


@dataclass(frozen=True)
class FormSubmission:
    """One user interaction with a web form instance."""

    form_instance: str
    submitted_by: str
    submitted_at: datetime
    values: dict | None = None  # manual-entry
    file_content: str | None = None  # file-import
    filename: str = ""


def _single_record_list_field(descriptor) -> str:
    list_fields = [f for f in descriptor.fields if f.kind == "record-list"]
    if len(list_fields) != 1:
        raise SchemaError(
            f"data type {descriptor.id} has no single record-list field for manual entry"
        )
    return list_fields[0].name


def apply_submission(
    catena: Catena,
    registry: ComponentRegistry,
    store,
    submission: FormSubmission,
) -> list[str]:
    """Apply one submission; returns the changed entry ids (sorted).

    Raises SchemaError/TableImportError without touching any entry when
    the submission is invalid.
    """
    instance = catena.form(submission.form_instance)
    if instance is None:
        raise NotFoundError(f"unknown web form instance {submission.form_instance!r}")
    spec = registry.web_form(instance.spec)
    if spec is None:
        raise NotFoundError(f"unknown web form spec {instance.spec!r}")

    pending: list[tuple[str, str, dict]] = []  # (entry id, data type, new body)

    if spec.mode == "manual-entry":
        if submission.values is None:
            raise SchemaError("manual-entry submission carries no values")
        problems: list[str] = []
        record: dict = {}
        for field_spec in spec.fields:
            if field_spec.name not in submission.values:
                problems.append(f"{field_spec.name}: missing value")
                continue
            value = submission.values[field_spec.name]
            problems.extend(check_value(field_spec, value))
            record[instance.field_bindings.get(field_spec.name, field_spec.name)] = value
        for extra in sorted(set(submission.values) - {f.name for f in spec.fields}):
            problems.append(f"{extra}: unknown form field")
        if problems:
            raise SchemaError("; ".join(problems))
        for entry_id in instance.entries:
            entry = catena.entry(entry_id)
            descriptor = registry.data_type(entry.data_type)
            list_field = _single_record_list_field(descriptor)
            latest = store.latest_payload(entry_id)
            body = dict(latest.body) if latest is not None else {list_field: []}
            body[list_field] = list(body.get(list_field, [])) + [record]
            pending.append((entry_id, entry.data_type, body))
    else:  # file-import
        if submission.file_content is None:
            raise SchemaError("file-import submission carries no file content")
        parsed = parse_file(spec.parser, submission.file_content)  # TableImportError on bad files
        by_type = {data_type: body for data_type, body in parsed}
        for entry_id in instance.entries:
            entry = catena.entry(entry_id)
            if entry.data_type not in by_type:
                raise SchemaError(
                    f"uploaded file provides no {entry.data_type} data for entry {entry_id!r}"
                )
            pending.append((entry_id, entry.data_type, by_type[entry.data_type]))

    # validate everything before the first write
    for entry_id, data_type, body in pending:
        descriptor = registry.data_type(data_type)
        problems = validate_body(descriptor, body)
        if problems:
            raise SchemaError(f"entry {entry_id!r}: {problems[0]}")

    for entry_id, data_type, body in pending:
        store.put_payload(entry_id, data_type, body, produced_at=submission.submitted_at)
    return sorted(entry_id for entry_id, _, _ in pending)
