"""In-memory snapshot of the component repository used for validation and composition."""

from __future__ import annotations

from dataclasses import dataclass, field

from watchtower.errors import NotFoundError
from watchtower.model.components import (
    COMPONENT_KINDS,
    DaoPackageSpec,
    DataTypeDescriptor,
    FunctionSpec,
    ViewSpec,
    WebFormSpec,
)


@dataclass(frozen=True)
class RegisteredComponent:
    kind: str
    id: str
    version: int
    spec: object
    tags: tuple[str, ...] = ()
    reuse_count: int = 0


@dataclass
class ComponentRegistry:
    """Latest-version components keyed by (kind, id)."""

    components: dict[tuple[str, str], RegisteredComponent] = field(default_factory=dict)

    def add(self, record: RegisteredComponent) -> None:
        self.components[(record.kind, record.id)] = record

    def has(self, kind: str, component_id: str) -> bool:
        return (kind, component_id) in self.components

    def get(self, kind: str, component_id: str) -> RegisteredComponent:
        try:
            return self.components[(kind, component_id)]
        except KeyError:
            raise NotFoundError(f"no {kind} component {component_id!r} registered") from None

    def find(self, kind: str, component_id: str) -> RegisteredComponent | None:
        return self.components.get((kind, component_id))

    def of_kind(self, kind: str) -> list[RegisteredComponent]:
        return sorted(
            (rec for (k, _), rec in self.components.items() if k == kind),
            key=lambda rec: rec.id,
        )

    def data_type(self, component_id: str) -> DataTypeDescriptor | None:
        rec = self.find("data-type", component_id)
        return rec.spec if rec else None  # type: ignore[return-value]

    def function(self, component_id: str) -> FunctionSpec | None:
        rec = self.find("function", component_id)
        return rec.spec if rec else None  # type: ignore[return-value]

    def view(self, component_id: str) -> ViewSpec | None:
        rec = self.find("view", component_id)
        return rec.spec if rec else None  # type: ignore[return-value]

    def web_form(self, component_id: str) -> WebFormSpec | None:
        rec = self.find("web-form", component_id)
        return rec.spec if rec else None  # type: ignore[return-value]

    def dao_package(self, component_id: str) -> DaoPackageSpec | None:
        rec = self.find("dao-package", component_id)
        return rec.spec if rec else None  # type: ignore[return-value]

    def reuse_count(self, component_id: str) -> int:
        for kind in COMPONENT_KINDS:
            rec = self.find(kind, component_id)
            if rec is not None:
                return rec.reuse_count
        return 0
