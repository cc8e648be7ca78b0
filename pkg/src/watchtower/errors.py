"""Exception types shared across the package."""

from __future__ import annotations


class WatchtowerError(Exception):
    """Base class for all domain errors raised by this package."""


class DocumentError(WatchtowerError):
    """A document failed to parse; carries the location of the defect."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class BindingError(WatchtowerError):
    """Instantiating a component against concrete entries/parameters failed."""


class SchemaError(WatchtowerError):
    """A payload body does not conform to its data type schema."""


class TechniqueError(WatchtowerError):
    """A control technique implementation failed on its inputs."""


class ParameterError(TechniqueError):
    """A technique received an invalid parameter combination."""


class CycleError(WatchtowerError):
    """A dependency graph contains a directed cycle."""


class NotFoundError(WatchtowerError):
    """A referenced record does not exist."""


class StoreError(WatchtowerError):
    """A repository store operation failed."""


class TableImportError(WatchtowerError):
    """A delimited-text import failed; carries per-row diagnostics."""

    def __init__(self, problems: list[tuple[int, str]]):
        # problems: (1-based data row number, message); row 0 = whole file
        self.problems = list(problems)
        detail = "; ".join(f"row {row}: {msg}" if row else msg for row, msg in self.problems)
        super().__init__(detail)
