"""Per-catena update queue: one logical writer, snapshot readers.

All mutations for a catena (form submissions, pulls, propagations) are
serialized through this runtime's lock, so readers never observe a
half-propagated state. Different catenas get independent runtimes and
may execute concurrently.
"""

from __future__ import annotations

import threading
from datetime import datetime
from typing import Callable, Iterable

from watchtower.engine.executor import ExecutionResult, execute_catena, propagate_update
from watchtower.engine.views import ViewModel, refresh_views
from watchtower.model.instances import Catena, binding_entries
from watchtower.model.registry import ComponentRegistry
from watchtower.techniques.registry import TechniqueRegistry
from watchtower.timeutil import utcnow


class CatenaRuntime:
    def __init__(
        self,
        catena: Catena,
        store,
        registry: ComponentRegistry,
        techniques: TechniqueRegistry,
        *,
        clock: Callable[[], datetime] = utcnow,
    ):
        self.catena = catena
        self.store = store
        self.registry = registry
        self.techniques = techniques
        self.clock = clock
        self._lock = threading.Lock()
        # entry version frontier at each view's last render
        self._rendered_at: dict[str, dict[str, int]] = {}

    def execute(self) -> ExecutionResult:
        with self._lock:
            return execute_catena(
                self.catena, self.store, self.registry, self.techniques, clock=self.clock
            )

    def propagate(self, changed_entries: Iterable[str]) -> ExecutionResult:
        with self._lock:
            return propagate_update(
                self.catena,
                self.store,
                self.registry,
                self.techniques,
                changed_entries,
                clock=self.clock,
            )

    def submit(self, submission) -> tuple[list[str], ExecutionResult]:
        """Apply a form submission, then propagate; both under the queue lock."""
        from watchtower.collection.forms import apply_submission

        with self._lock:
            changed = apply_submission(self.catena, self.registry, self.store, submission)
            result = propagate_update(
                self.catena,
                self.store,
                self.registry,
                self.techniques,
                changed,
                clock=self.clock,
            )
        return changed, result

    def _frontier(self, view_id: str) -> dict[str, int]:
        view = self.catena.view(view_id)
        return {
            entry_id: self.store.latest_version(entry_id)
            for _, entry_id in binding_entries(view.bindings)
        }

    def stale_views(self) -> list[str]:
        """Views whose inputs moved past the frontier at their last render."""
        stale = []
        for view in self.catena.views:
            rendered = self._rendered_at.get(view.id)
            current = self._frontier(view.id)
            if rendered is None or any(current[k] > rendered.get(k, 0) for k in current):
                stale.append(view.id)
        return sorted(stale)

    def refresh(self, roles: Iterable[str]) -> list[ViewModel]:
        """Render fresh models from a consistent snapshot and advance frontiers."""
        with self._lock:
            models = refresh_views(self.catena, self.store, self.registry, roles)
            for view in self.catena.views:
                self._rendered_at[view.id] = self._frontier(view.id)
        return models
