"""Administrator command line: validate, run, serve, seed, compose.

Exit codes: 0 success, 1 domain failure (validation, import, execution),
2 environment failure (unreadable paths, bad config).
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

import click

from watchtower.collection.forms import FormSubmission, apply_submission
from watchtower.collection.importers import (
    import_control_metric,
    import_effort_table,
    import_project_plan,
    import_time_series,
)
from watchtower.engine.executor import execute_catena
from watchtower.engine.views import render_view, view_model_document
from watchtower.errors import DocumentError, TableImportError, WatchtowerError
from watchtower.model.components import validate_body
from watchtower.model.documents import catena_from_json
from watchtower.model.validation import validate_catena
from watchtower.store.filestore import RepositoryStore
from watchtower.techniques.builtins import (
    TYPE_ACTIVITY_HIERARCHY,
    TYPE_CONTROL_METRIC,
    TYPE_EFFORT_TABLE,
    TYPE_INDICATOR_TABLE,
    TYPE_TIME_SERIES,
    builtin_components,
)
from watchtower.techniques.registry import builtin_techniques
from watchtower.timeutil import utcnow


@click.group()
def main() -> None:
    """Goal-oriented software project control center."""


def _read_file(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(2)


def _load_catena(catena_file: Path, repo: Path):
    text = _read_file(catena_file)
    if not repo.is_dir():
        click.echo(f"error: repository root {repo} does not exist", err=True)
        sys.exit(2)
    store = RepositoryStore(repo)
    registry = store.load_registry()
    try:
        catena = catena_from_json(text, registry)
    except DocumentError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(1)
    return store, registry, catena


@main.command()
@click.argument("catena_file", type=click.Path(path_type=Path))
@click.option("--repo", type=click.Path(path_type=Path), required=True, help="Repository root.")
def validate(catena_file: Path, repo: Path) -> None:
    """Check a catena document against the component repository."""
    _, registry, catena = _load_catena(catena_file, repo)
    report = validate_catena(catena, registry)
    for diagnostic in report.diagnostics:
        click.echo(diagnostic.render())
    if report.ok:
        click.echo("ok")
        sys.exit(0)
    sys.exit(1)


_CSV_IMPORTERS = {
    TYPE_EFFORT_TABLE: lambda text: import_effort_table(text).to_body(),
    TYPE_ACTIVITY_HIERARCHY: lambda text: import_project_plan(text)[0].to_body(),
    TYPE_CONTROL_METRIC: lambda text: import_control_metric(text).to_body(),
    TYPE_TIME_SERIES: lambda text: import_time_series(text).to_body(),
}


def _import_data_dir(catena, registry, store, data: Path) -> list[str]:
    """Route each data file by stem: web form id first, then entry id."""
    problems: list[str] = []
    files = sorted(p for p in data.iterdir() if p.is_file())
    if not files:
        return ["missing input: data directory is empty"]
    for path in files:
        stem = path.stem
        text = _read_file(path)
        form = catena.form(stem)
        if form is not None:
            submission = FormSubmission(
                form_instance=stem,
                submitted_by="cli",
                submitted_at=utcnow(),
                file_content=text,
                filename=path.name,
            )
            try:
                apply_submission(catena, registry, store, submission)
            except WatchtowerError as exc:
                problems.append(f"{path.name}: {exc}")
            continue
        entry = catena.entry(stem)
        if entry is None:
            problems.append(f"{path.name}: no web form or data entry named {stem!r}")
            continue
        try:
            if path.suffix == ".json":
                body = json.loads(text)
            else:
                importer = _CSV_IMPORTERS.get(entry.data_type)
                if importer is None:
                    problems.append(f"{path.name}: no importer for data type {entry.data_type}")
                    continue
                body = importer(text)
        except (TableImportError, DocumentError, json.JSONDecodeError, WatchtowerError) as exc:
            problems.append(f"{path.name}: {exc}")
            continue
        descriptor = registry.data_type(entry.data_type)
        body_problems = validate_body(descriptor, body)
        if body_problems:
            problems.append(f"{path.name}: {body_problems[0]}")
            continue
        store.put_payload(entry.id, entry.data_type, body)
    return problems


@main.command()
@click.argument("catena_file", type=click.Path(path_type=Path))
@click.option("--repo", type=click.Path(path_type=Path), required=True, help="Repository root.")
@click.option("--data", type=click.Path(path_type=Path), required=True, help="Input data directory.")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Output directory.")
def run(catena_file: Path, repo: Path, data: Path, out: Path) -> None:
    """Import data, execute the catena offline, write view models and an indicator summary."""
    _, registry, catena = _load_catena(catena_file, repo)
    report = validate_catena(catena, registry)
    if not report.ok:
        for diagnostic in report.diagnostics:
            click.echo(diagnostic.render(), err=True)
        sys.exit(1)
    if not data.is_dir():
        click.echo(f"error: data directory {data} does not exist", err=True)
        sys.exit(2)
    out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as scratch:
        run_store = RepositoryStore(scratch)
        problems = _import_data_dir(catena, registry, run_store, data)
        if problems:
            for problem in problems:
                click.echo(problem, err=True)
            sys.exit(1)
        result = execute_catena(catena, run_store, registry, builtin_techniques())

        snapshot = {e.id: run_store.latest_payload(e.id) for e in catena.entries}
        all_roles = {role for view in catena.views for role in view.visible_to}
        for view in sorted(catena.root_views(), key=lambda v: v.id):
            model = render_view(catena, registry, snapshot, view, all_roles)
            _write_json(out / f"view_{view.id}.json", view_model_document(model))

        summary: dict[str, dict[str, int]] = {}
        for entry in catena.entries:
            if entry.data_type != TYPE_INDICATOR_TABLE:
                continue
            payload = snapshot.get(entry.id)
            if payload is None:
                continue
            counts: dict[str, int] = {}
            for row in payload.body.get("rows", []):
                counts[row["status"]] = counts.get(row["status"], 0) + 1
            summary[entry.id] = {k: counts[k] for k in sorted(counts)}
        _write_json(out / "indicators.json", {"entries": summary})
        _write_json(
            out / "execution.json",
            {
                "statuses": {
                    instance_id: {"state": status.state, "reason": status.reason}
                    for instance_id, status in result.statuses.items()
                },
                "versions": result.versions,
            },
        )
    click.echo(f"wrote {out}")
    sys.exit(0)


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


@main.command()
@click.option("--repo", type=click.Path(path_type=Path), required=True, help="Repository root.")
def seed(repo: Path) -> None:
    """Register all built-in components; safe to run repeatedly."""
    store = RepositoryStore(repo)
    for kind, spec, tags in builtin_components():
        store.register_component(kind, spec.to_body(), tags)
    click.echo(f"seeded {len(builtin_components())} components into {repo}")
    sys.exit(0)


@main.command()
@click.argument("plan_file", type=click.Path(path_type=Path))
@click.option("--repo", type=click.Path(path_type=Path), required=True, help="Repository root.")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Output directory.")
@click.option("--project", default="unassigned", help="Project id for the candidate catena.")
def compose(plan_file: Path, repo: Path, out: Path, project: str) -> None:
    """Compose a candidate catena from a GQM plan over the repository."""
    from watchtower.gqm.composer import ProjectContext, compose_catena
    from watchtower.gqm.plan import parse_gqm_plan
    from watchtower.model.documents import serialize_catena

    text = _read_file(plan_file)
    if not repo.is_dir():
        click.echo(f"error: repository root {repo} does not exist", err=True)
        sys.exit(2)
    registry = RepositoryStore(repo).load_registry()
    try:
        plan = parse_gqm_plan(text)
    except DocumentError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(1)
    result = compose_catena(plan, registry, ProjectContext(project=project))
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "catena.json", serialize_catena(result.catena))
    _write_json(
        out / "coverage.json",
        {
            "coverage": {
                metric_id: {
                    "matched": c.matched,
                    "components": list(c.components),
                    "missing": list(c.missing),
                }
                for metric_id, c in result.coverage.items()
            },
            "goal_satisfaction": result.goal_satisfaction,
        },
    )
    for metric_id in sorted(result.coverage):
        c = result.coverage[metric_id]
        status = "matched" if c.matched else "unmatched (missing: " + ", ".join(c.missing) + ")"
        click.echo(f"{metric_id}: {status}")
    sys.exit(0)


@main.command()
@click.option("--config", type=click.Path(path_type=Path), required=True, help="Service config file.")
def serve(config: Path) -> None:
    """Run the HTTP service."""
    import uvicorn

    from watchtower.service.app import create_app

    text = _read_file(config)
    try:
        settings = json.loads(text)
        store_root = settings["store_root"]
        credentials = settings["credentials"]
        host = settings.get("host", "127.0.0.1")
        port = int(settings.get("port", 8080))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        click.echo(f"error: bad config: {exc}", err=True)
        sys.exit(2)
    try:
        app = create_app(store_root, credentials)
    except WatchtowerError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except (OSError, SystemExit) as exc:
        click.echo(f"error: cannot serve: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
