"""Persistence: component repository, catenas, versioned payloads, experience base."""

from watchtower.store.filestore import (
    ComponentRecord,
    DeviationReport,
    ExperiencePackage,
    RepositoryStore,
)

__all__ = ["ComponentRecord", "DeviationReport", "ExperiencePackage", "RepositoryStore"]
