"""Instance-level composition: the per-project chain of entries, forms, functions, views.

All values are immutable after construction; changes are made by building
replacement values. Equality is structural (dataclass equality), which the
document round-trip contract relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta


@dataclass(frozen=True)
class CollectionWindow:
    """When and how often an external source should be collected."""

    start: datetime
    end: datetime
    interval: timedelta


@dataclass(frozen=True)
class DaoSource:
    """Entry is pulled from an external source through a DAO package."""

    package: str
    connection: dict[str, str]
    window: CollectionWindow

    kind = "dao"


@dataclass(frozen=True)
class FormSource:
    """Entry is managed manually through web form instances."""

    kind = "form"


@dataclass(frozen=True)
class DerivedSource:
    """Entry is produced by a function instance's output port."""

    function: str
    port: str

    kind = "derived"


EntrySource = DaoSource | FormSource | DerivedSource

# port -> entry id (arity one) or ordered tuple of entry ids (arity many)
Bindings = dict[str, "str | tuple[str, ...]"]


def binding_entries(bindings: Bindings) -> list[tuple[str, str]]:
    """Flatten bindings to (port, entry id) pairs, one per bound entry."""
    pairs: list[tuple[str, str]] = []
    for port in sorted(bindings):
        bound = bindings[port]
        if isinstance(bound, str):
            pairs.append((port, bound))
        else:
            pairs.extend((port, entry_id) for entry_id in bound)
    return pairs


@dataclass(frozen=True)
class DataEntry:
    """A logical container for concrete measurement data."""

    id: str
    data_type: str
    source: EntrySource
    latest_version: int = 0

    @property
    def is_derived(self) -> bool:
        return isinstance(self.source, DerivedSource)

    @property
    def is_form_managed(self) -> bool:
        return isinstance(self.source, FormSource)


@dataclass(frozen=True)
class FunctionInstance:
    """An instantiated control technique bound to concrete entries."""

    id: str
    spec: str
    bindings: Bindings
    params: dict[str, object] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)  # port -> derived entry id


@dataclass(frozen=True)
class ViewInstance:
    """An instantiated presentation bound to concrete entries."""

    id: str
    spec: str
    bindings: Bindings
    params: dict[str, object] = field(default_factory=dict)
    children: dict[str, str] = field(default_factory=dict)  # slot -> view instance id
    visible_to: tuple[str, ...] = ()


@dataclass(frozen=True)
class WebFormInstance:
    """A concrete form managing one or more form-managed entries."""

    id: str
    spec: str
    entries: tuple[str, ...]
    field_bindings: dict[str, str] = field(default_factory=dict)  # form field -> schema field


@dataclass(frozen=True)
class Catena:
    """The whole per-project composition."""

    id: str
    project: str
    entries: tuple[DataEntry, ...]
    forms: tuple[WebFormInstance, ...] = ()
    functions: tuple[FunctionInstance, ...] = ()
    views: tuple[ViewInstance, ...] = ()

    def entry(self, entry_id: str) -> DataEntry | None:
        return next((e for e in self.entries if e.id == entry_id), None)

    def function(self, instance_id: str) -> FunctionInstance | None:
        return next((f for f in self.functions if f.id == instance_id), None)

    def view(self, instance_id: str) -> ViewInstance | None:
        return next((v for v in self.views if v.id == instance_id), None)

    def form(self, instance_id: str) -> WebFormInstance | None:
        return next((w for w in self.forms if w.id == instance_id), None)

    def source_entries(self) -> tuple[DataEntry, ...]:
        return tuple(e for e in self.entries if not e.is_derived)

    def derived_entries(self) -> tuple[DataEntry, ...]:
        return tuple(e for e in self.entries if e.is_derived)

    def root_views(self) -> tuple[ViewInstance, ...]:
        child_ids = {child for v in self.views for child in v.children.values()}
        return tuple(v for v in self.views if v.id not in child_ids)
