"""Post-project analysis: when did indicators leave green, and results packaging."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Mapping, Sequence

from watchtower.errors import NotFoundError
from watchtower.model.instances import Catena
from watchtower.payloads import Payload
from watchtower.store.filestore import DeviationReport, ExperiencePackage, RepositoryStore
from watchtower.techniques.datatypes import STATUS_GREEN, STATUS_NO_BASELINE, IndicatorTable

DETECTED = "detected"
DETECTED_LATE = "detected-late"
NOT_DETECTED = "not-detected"


@dataclass(frozen=True)
class IndicatorDeviation:
    entry_id: str
    first_non_green: datetime | None
    final_status: str
    events: tuple[tuple[str, str], ...] = ()  # (event description, classification)


@dataclass(frozen=True)
class DeviationAnalysis:
    indicators: tuple[IndicatorDeviation, ...]

    def for_entry(self, entry_id: str) -> IndicatorDeviation | None:
        return next((i for i in self.indicators if i.entry_id == entry_id), None)


def _is_non_green(payload: Payload) -> bool:
    table = IndicatorTable.from_body(payload.body)
    return any(row.status not in (STATUS_GREEN, STATUS_NO_BASELINE) for row in table.rows)


def analyze_deviations(
    histories: Mapping[str, Sequence[Payload]],
    reference_events: Sequence[tuple[str, datetime]],
) -> DeviationAnalysis:
    """Find each indicator's first non-green payload and classify detection.

    An event counts as detected when the first non-green timestamp is at
    or before the event's time, detected-late when after, not-detected
    when the indicator never left green.
    """
    indicators = []
    for entry_id in sorted(histories):
        history = sorted(histories[entry_id], key=lambda p: p.version)
        first_non_green = next((p.produced_at for p in history if _is_non_green(p)), None)
        final_status = (
            IndicatorTable.from_body(history[-1].body).worst_status() if history else STATUS_GREEN
        )
        events = []
        for description, at in reference_events:
            if first_non_green is None:
                events.append((description, NOT_DETECTED))
            elif first_non_green <= at:
                events.append((description, DETECTED))
            else:
                events.append((description, DETECTED_LATE))
        indicators.append(
            IndicatorDeviation(
                entry_id=entry_id,
                first_non_green=first_non_green,
                final_status=final_status,
                events=tuple(events),
            )
        )
    return DeviationAnalysis(indicators=tuple(indicators))


def package_results(
    analysis: DeviationAnalysis,
    catena: Catena,
    project: str,
    store: RepositoryStore,
    lessons: str = "",
) -> ExperiencePackage:
    """Persist an experience package listing the catena's instantiated components.

    Primitive data types are deliberately excluded: reuse statistics on
    ubiquitous types would be noise.
    """
    if not store.has_catena(catena.id):
        raise NotFoundError(f"catena {catena.id!r} is not stored")
    reused: dict[str, int] = {}
    for instance in (*catena.functions, *catena.views, *catena.forms):
        reused[instance.spec] = reused.get(instance.spec, 0) + 1
    package = ExperiencePackage(
        project=project,
        catena=catena.id,
        reused_components=reused,
        deviation_reports=tuple(
            DeviationReport(
                indicator=d.entry_id,
                first_non_green=d.first_non_green,
                final_status=d.final_status,
                note="; ".join(f"{desc}: {cls}" for desc, cls in d.events),
            )
            for d in analysis.indicators
        ),
        lessons=lessons,
    )
    store.record_experience(package)
    return package
