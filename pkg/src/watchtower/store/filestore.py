"""File-backed repository store.

One directory tree, structured text records, fully inspectable:

    components/<kind>/<id>/<version>    component spec bodies
    catenas/<id>                        catena documents
    payloads/<entry-id>/<version>       payload bodies
    experience/<project-id>/<n>         experience packages

Payload history is append-only: existing versions are never mutated or
deleted. Writes are serialized per store root; readers see committed
state only (files appear atomically via rename).
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable

from watchtower.errors import NotFoundError, StoreError
from watchtower.model.components import COMPONENT_KINDS, check_id, spec_from_body
from watchtower.model.registry import ComponentRegistry, RegisteredComponent
from watchtower.payloads import Payload
from watchtower.timeutil import format_timestamp, parse_timestamp, utcnow


@dataclass(frozen=True)
class ComponentRecord:
    """One persisted version of a type-level component."""

    kind: str
    id: str
    version: int
    body: dict
    registered_at: datetime
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class DeviationReport:
    """How one indicator behaved over the project: when it first left green."""

    indicator: str
    first_non_green: datetime | None
    final_status: str
    note: str = ""


@dataclass(frozen=True)
class ExperiencePackage:
    """Packaged results of one controlled project, feeding future composition."""

    project: str
    catena: str
    reused_components: dict[str, int] = field(default_factory=dict)
    deviation_reports: tuple[DeviationReport, ...] = ()
    lessons: str = ""


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


class RepositoryStore:
    """Single-writer, file-backed store for one repository root."""

    def __init__(self, root: str | Path, *, clock: Callable[[], datetime] = utcnow):
        self.root = Path(root)
        self._clock = clock
        self._lock = threading.RLock()
        for sub in ("components", "catenas", "payloads", "experience"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- plumbing ---------------------------------------------------------

    def _write(self, path: Path, content: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(content, encoding="utf-8")
        os.replace(tmp, path)

    def _read(self, path: Path) -> dict:
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise NotFoundError(str(path.relative_to(self.root))) from None
        except json.JSONDecodeError as exc:
            raise StoreError(f"corrupt record {path}: {exc}") from exc

    @staticmethod
    def _versions_in(directory: Path) -> list[int]:
        if not directory.is_dir():
            return []
        return sorted(int(p.name) for p in directory.iterdir() if p.name.isdigit())

    # -- components -------------------------------------------------------

    def register_component(self, kind: str, body: dict, tags: tuple[str, ...] = ()) -> ComponentRecord:
        """Persist a component spec; identical re-registration is a no-op,
        a changed body (or tag set) gets the next version."""
        if kind not in COMPONENT_KINDS:
            raise StoreError(f"unknown component kind {kind!r}")
        spec = spec_from_body(kind, body)  # raises if the body is invalid for its kind
        component_id = spec.id
        tags = tuple(tags)
        with self._lock:
            directory = self.root / "components" / kind / component_id
            versions = self._versions_in(directory)
            if versions:
                latest = self._read(directory / str(versions[-1]))
                if latest["body"] == body and tuple(latest.get("tags", [])) == tags:
                    return self._record_from(latest)
            version = (versions[-1] if versions else 0) + 1
            record = {
                "kind": kind,
                "id": component_id,
                "version": version,
                "registered_at": format_timestamp(self._clock()),
                "tags": list(tags),
                "body": body,
            }
            self._write(directory / str(version), _dump(record))
            return self._record_from(record)

    @staticmethod
    def _record_from(raw: dict) -> ComponentRecord:
        return ComponentRecord(
            kind=raw["kind"],
            id=raw["id"],
            version=raw["version"],
            body=raw["body"],
            registered_at=parse_timestamp(raw["registered_at"]),
            tags=tuple(raw.get("tags", [])),
        )

    def get_component(self, kind: str, component_id: str, version: int | None = None) -> ComponentRecord:
        directory = self.root / "components" / kind / component_id
        versions = self._versions_in(directory)
        if not versions:
            raise NotFoundError(f"{kind} component {component_id!r}")
        wanted = version if version is not None else versions[-1]
        if wanted not in versions:
            raise NotFoundError(f"{kind} component {component_id!r} version {wanted}")
        return self._record_from(self._read(directory / str(wanted)))

    def lookup_components(self, kind: str, tags: tuple[str, ...] = ()) -> list[ComponentRecord]:
        """Latest versions of one kind, filtered to records carrying every given tag."""
        directory = self.root / "components" / kind
        records = []
        if directory.is_dir():
            for component_dir in sorted(directory.iterdir()):
                versions = self._versions_in(component_dir)
                if not versions:
                    continue
                record = self._record_from(self._read(component_dir / str(versions[-1])))
                if set(tags) <= set(record.tags):
                    records.append(record)
        return records

    def load_registry(self) -> ComponentRegistry:
        """Parse all latest component bodies into a registry snapshot."""
        registry = ComponentRegistry()
        reuse = self._reuse_counts()
        for kind in COMPONENT_KINDS:
            for record in self.lookup_components(kind):
                registry.add(
                    RegisteredComponent(
                        kind=kind,
                        id=record.id,
                        version=record.version,
                        spec=spec_from_body(kind, record.body),
                        tags=record.tags,
                        reuse_count=reuse.get(record.id, 0),
                    )
                )
        return registry

    # -- catenas ----------------------------------------------------------

    def put_catena(self, catena_id: str, document: dict) -> None:
        check_id(catena_id, "catena")
        with self._lock:
            self._write(self.root / "catenas" / catena_id, _dump(document))

    def get_catena(self, catena_id: str) -> dict:
        return self._read(self.root / "catenas" / catena_id)

    def delete_catena(self, catena_id: str) -> None:
        path = self.root / "catenas" / catena_id
        with self._lock:
            if not path.is_file():
                raise NotFoundError(f"catena {catena_id!r}")
            path.unlink()

    def list_catenas(self) -> list[str]:
        directory = self.root / "catenas"
        return sorted(p.name for p in directory.iterdir() if p.is_file())

    def has_catena(self, catena_id: str) -> bool:
        return (self.root / "catenas" / catena_id).is_file()

    # -- payloads ---------------------------------------------------------

    def put_payload(
        self,
        entry_id: str,
        data_type: str,
        body: dict,
        produced_at: datetime | None = None,
    ) -> Payload:
        """Append the next payload version for an entry. Never rewrites history."""
        check_id(entry_id, "entry")
        with self._lock:
            directory = self.root / "payloads" / entry_id
            versions = self._versions_in(directory)
            version = (versions[-1] if versions else 0) + 1
            payload = Payload(
                data_type=data_type,
                version=version,
                produced_at=produced_at if produced_at is not None else self._clock(),
                body=body,
            )
            self._write(
                directory / str(version),
                _dump(
                    {
                        "data_type": payload.data_type,
                        "version": payload.version,
                        "produced_at": format_timestamp(payload.produced_at),
                        "body": payload.body,
                    }
                ),
            )
            return payload

    def get_payload(self, entry_id: str, version: int | None = None) -> Payload:
        """Fetch one payload version; latest when version is None."""
        directory = self.root / "payloads" / entry_id
        versions = self._versions_in(directory)
        if not versions:
            raise NotFoundError(f"no payloads for entry {entry_id!r}")
        wanted = version if version is not None else versions[-1]
        if wanted not in versions:
            raise NotFoundError(f"entry {entry_id!r} has no payload version {wanted}")
        raw = self._read(directory / str(wanted))
        return Payload(
            data_type=raw["data_type"],
            version=raw["version"],
            produced_at=parse_timestamp(raw["produced_at"]),
            body=raw["body"],
        )

    def latest_payload(self, entry_id: str) -> Payload | None:
        try:
            return self.get_payload(entry_id)
        except NotFoundError:
            return None

    def latest_version(self, entry_id: str) -> int:
        versions = self._versions_in(self.root / "payloads" / entry_id)
        return versions[-1] if versions else 0

    def payload_versions(self, entry_id: str) -> list[int]:
        return self._versions_in(self.root / "payloads" / entry_id)

    def payload_history(self, entry_id: str) -> list[Payload]:
        return [self.get_payload(entry_id, v) for v in self.payload_versions(entry_id)]

    # -- experience base --------------------------------------------------

    def record_experience(self, package: ExperiencePackage) -> int:
        """Persist a package; referenced catena and components must exist."""
        if not self.has_catena(package.catena):
            raise StoreError(f"experience package references unknown catena {package.catena!r}")
        catena_doc = self.get_catena(package.catena)
        if catena_doc.get("meta", {}).get("project") != package.project:
            raise StoreError(
                f"catena {package.catena!r} does not belong to project {package.project!r}"
            )
        dangling = [
            cid
            for cid in sorted(package.reused_components)
            if not any(self._component_exists(kind, cid) for kind in COMPONENT_KINDS)
        ]
        if dangling:
            raise StoreError("experience package references unknown components: " + ", ".join(dangling))
        with self._lock:
            directory = self.root / "experience" / package.project
            numbers = self._versions_in(directory)
            n = (numbers[-1] if numbers else 0) + 1
            self._write(
                directory / str(n),
                _dump(
                    {
                        "project": package.project,
                        "catena": package.catena,
                        "reused_components": {
                            k: package.reused_components[k] for k in sorted(package.reused_components)
                        },
                        "deviation_reports": [
                            {
                                "indicator": r.indicator,
                                "first_non_green": format_timestamp(r.first_non_green)
                                if r.first_non_green
                                else None,
                                "final_status": r.final_status,
                                "note": r.note,
                            }
                            for r in package.deviation_reports
                        ],
                        "lessons": package.lessons,
                    }
                ),
            )
            return n

    def _component_exists(self, kind: str, component_id: str) -> bool:
        return bool(self._versions_in(self.root / "components" / kind / component_id))

    def list_experience(self, project: str | None = None) -> list[ExperiencePackage]:
        directory = self.root / "experience"
        packages = []
        projects = [project] if project is not None else sorted(p.name for p in directory.iterdir())
        for proj in projects:
            for n in self._versions_in(directory / proj):
                raw = self._read(directory / proj / str(n))
                packages.append(
                    ExperiencePackage(
                        project=raw["project"],
                        catena=raw["catena"],
                        reused_components=dict(raw.get("reused_components", {})),
                        deviation_reports=tuple(
                            DeviationReport(
                                indicator=r["indicator"],
                                first_non_green=parse_timestamp(r["first_non_green"])
                                if r.get("first_non_green")
                                else None,
                                final_status=r["final_status"],
                                note=r.get("note", ""),
                            )
                            for r in raw.get("deviation_reports", [])
                        ),
                        lessons=raw.get("lessons", ""),
                    )
                )
        return packages

    def _reuse_counts(self) -> dict[str, int]:
        """Packages referencing a component each add one to its reuse count."""
        counts: dict[str, int] = {}
        for package in self.list_experience():
            for component_id in package.reused_components:
                counts[component_id] = counts.get(component_id, 0) + 1
        return counts

    def reuse_count(self, component_id: str) -> int:
        return self._reuse_counts().get(component_id, 0)
