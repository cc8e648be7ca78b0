"""Data collection layer: file importers, pull connector, form submission handling."""

from watchtower.collection.importers import (
    import_control_metric,
    import_effort_table,
    import_project_plan,
    import_time_series,
    parse_file,
)
from watchtower.collection.polling import Poller, PullOutcome, poll_due, pull_entry
from watchtower.collection.forms import FormSubmission, apply_submission

__all__ = [
    "FormSubmission",
    "Poller",
    "PullOutcome",
    "apply_submission",
    "import_control_metric",
    "import_effort_table",
    "import_project_plan",
    "import_time_series",
    "parse_file",
    "poll_due",
    "pull_entry",
]
