"""HTTP API over the control center.

Endpoints (bodies are JSON, the same serialization as the document
formats; auth is a bearer token):

    GET    /catenas/{id}/views      role-filtered view models
    GET    /catenas/{id}            catena document
    PUT    /catenas/{id}            validate + persist (admin)
    DELETE /catenas/{id}            remove (admin)
    POST   /forms/{form-id}         submit a form, propagate updates
    GET    /repository/{kind}       browse components, ?tag= filters
    POST   /compose                 candidate catena from a GQM plan (not persisted)
    POST   /experience              record an experience package (admin)

Status mapping: 401 authentication failure, 403 denied, 404 unknown
resource, 422 validation reject. Deny and reject paths never mutate
the store.
"""

from __future__ import annotations

import threading
from typing import Callable

from fastapi import Depends, FastAPI, HTTPException, Query, Request

from watchtower.collection.forms import FormSubmission
from watchtower.engine.runtime import CatenaRuntime
from watchtower.engine.views import view_model_document
from watchtower.errors import (
    DocumentError,
    NotFoundError,
    SchemaError,
    StoreError,
    TableImportError,
    WatchtowerError,
)
from watchtower.gqm.composer import ProjectContext, compose_catena
from watchtower.gqm.plan import parse_gqm_plan
from watchtower.model.components import COMPONENT_KINDS
from watchtower.model.documents import parse_catena, serialize_catena
from watchtower.model.validation import validate_catena
from watchtower.service import auth
from watchtower.service.auth import Principal
from watchtower.store.filestore import DeviationReport, ExperiencePackage, RepositoryStore
from watchtower.techniques.registry import TechniqueRegistry, builtin_techniques
from watchtower.timeutil import parse_timestamp, utcnow


class ServiceState:
    """Store handle, credential map, and one runtime (update queue) per catena."""

    def __init__(
        self,
        store: RepositoryStore,
        credentials: dict[str, Principal],
        techniques: TechniqueRegistry,
        clock: Callable = utcnow,
    ):
        self.store = store
        self.credentials = credentials
        self.techniques = techniques
        self.clock = clock
        self.registry = store.load_registry()
        self._runtimes: dict[str, CatenaRuntime] = {}
        self._lock = threading.Lock()

    def runtime(self, catena_id: str) -> CatenaRuntime:
        with self._lock:
            if catena_id not in self._runtimes:
                document = self.store.get_catena(catena_id)  # NotFoundError -> 404
                catena = parse_catena(document, self.registry)
                self._runtimes[catena_id] = CatenaRuntime(
                    catena, self.store, self.registry, self.techniques, clock=self.clock
                )
            return self._runtimes[catena_id]

    def invalidate(self, catena_id: str) -> None:
        with self._lock:
            self._runtimes.pop(catena_id, None)

    def find_form(self, form_id: str) -> tuple[CatenaRuntime, str] | None:
        for catena_id in self.store.list_catenas():
            runtime = self.runtime(catena_id)
            if runtime.catena.form(form_id) is not None:
                return runtime, form_id
        return None


def _diagnostics_detail(report) -> dict:
    return {
        "diagnostics": [
            {"severity": d.severity, "subject": d.subject, "code": d.code, "message": d.message}
            for d in report.diagnostics
        ]
    }


def create_app(
    store_root,
    credentials_path,
    *,
    techniques: TechniqueRegistry | None = None,
    clock: Callable = utcnow,
) -> FastAPI:
    store = RepositoryStore(store_root, clock=clock)
    credentials = auth.load_credentials(credentials_path)
    state = ServiceState(store, credentials, techniques or builtin_techniques(), clock)

    app = FastAPI(title="watchtower", docs_url=None, redoc_url=None)
    app.state.watchtower = state

    # the dashboard is served from its own origin; auth is header-borne
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["Authorization", "Content-Type"],
    )

    def principal_of(request: Request) -> Principal:
        header = request.headers.get("authorization", "")
        token = header[7:] if header.lower().startswith("bearer ") else None
        principal = auth.authenticate(credentials, token)
        if principal is None:
            raise HTTPException(status_code=401, detail="authentication failed")
        return principal

    def deny() -> HTTPException:
        return HTTPException(status_code=403, detail="forbidden")

    @app.get("/catenas/{catena_id}/views")
    def get_views(catena_id: str, principal: Principal = Depends(principal_of)):
        try:
            runtime = state.runtime(catena_id)
        except NotFoundError:
            raise HTTPException(status_code=404, detail=f"catena {catena_id!r} not found") from None
        roles = (
            auth.catena_team_roles(runtime.catena) if principal.is_admin else set(principal.roles)
        )
        models = runtime.refresh(roles)
        return {"views": [view_model_document(m) for m in models]}

    @app.get("/catenas/{catena_id}")
    def get_catena(catena_id: str, principal: Principal = Depends(principal_of)):
        if not auth.authorize(principal, auth.ACTION_CATENA_READ):
            raise deny()
        try:
            return state.store.get_catena(catena_id)
        except NotFoundError:
            raise HTTPException(status_code=404, detail=f"catena {catena_id!r} not found") from None

    @app.put("/catenas/{catena_id}")
    async def put_catena(catena_id: str, request: Request, principal: Principal = Depends(principal_of)):
        if not auth.authorize(principal, auth.ACTION_CATENA_WRITE):
            raise deny()
        document = await request.json()
        try:
            catena = parse_catena(document, state.registry)
        except DocumentError as exc:
            raise HTTPException(status_code=422, detail={"errors": [str(exc)]}) from None
        if catena.id != catena_id:
            raise HTTPException(
                status_code=422,
                detail={"errors": [f"document id {catena.id!r} does not match path {catena_id!r}"]},
            )
        report = validate_catena(catena, state.registry)
        if not report.ok:
            raise HTTPException(status_code=422, detail=_diagnostics_detail(report))
        state.store.put_catena(catena_id, serialize_catena(catena))
        state.invalidate(catena_id)
        return {"ok": True, **_diagnostics_detail(report)}

    @app.delete("/catenas/{catena_id}")
    def delete_catena(catena_id: str, principal: Principal = Depends(principal_of)):
        if not auth.authorize(principal, auth.ACTION_CATENA_WRITE):
            raise deny()
        try:
            state.store.delete_catena(catena_id)
        except NotFoundError:
            raise HTTPException(status_code=404, detail=f"catena {catena_id!r} not found") from None
        state.invalidate(catena_id)
        return {"ok": True}

    @app.post("/forms/{form_id}")
    async def post_form(form_id: str, request: Request, principal: Principal = Depends(principal_of)):
        found = state.find_form(form_id)
        if found is None:
            raise HTTPException(status_code=404, detail=f"form instance {form_id!r} not found")
        runtime, _ = found
        if not auth.authorize(principal, auth.ACTION_FORM_SUBMIT, runtime.catena):
            raise deny()
        body = await request.json()
        if not isinstance(body, dict):
            raise HTTPException(status_code=422, detail={"errors": ["expected an object body"]})
        submitted_at = state.clock()
        if "submitted_at" in body:
            try:
                submitted_at = parse_timestamp(body["submitted_at"])
            except SchemaError as exc:
                raise HTTPException(status_code=422, detail={"errors": [str(exc)]}) from None
        submission = FormSubmission(
            form_instance=form_id,
            submitted_by=principal.user_id,
            submitted_at=submitted_at,
            values=body.get("values"),
            file_content=body.get("content"),
            filename=body.get("filename", ""),
        )
        try:
            changed, result = runtime.submit(submission)
        except (SchemaError, TableImportError) as exc:
            raise HTTPException(status_code=422, detail={"errors": [str(exc)]}) from None
        return {
            "changed": changed,
            "recomputed": list(result.executed),
            "stale_views": list(result.stale_views),
        }

    @app.get("/repository/{kind}")
    def browse_repository(
        kind: str,
        principal: Principal = Depends(principal_of),
        tag: list[str] = Query(default=[]),
    ):
        if not auth.authorize(principal, auth.ACTION_REPOSITORY_READ):
            raise deny()
        if kind not in COMPONENT_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown component kind {kind!r}")
        records = state.store.lookup_components(kind, tuple(tag))
        return {
            "components": [
                {
                    "kind": r.kind,
                    "id": r.id,
                    "version": r.version,
                    "tags": list(r.tags),
                    "reuse_count": state.store.reuse_count(r.id),
                    "body": r.body,
                }
                for r in records
            ]
        }

    @app.post("/compose")
    async def compose(request: Request, principal: Principal = Depends(principal_of)):
        if not auth.authorize(principal, auth.ACTION_COMPOSE):
            raise deny()
        body = await request.json()
        if not isinstance(body, dict) or "plan" not in body:
            raise HTTPException(status_code=422, detail={"errors": ["body must carry a 'plan' section"]})
        try:
            plan = parse_gqm_plan(body["plan"])
        except DocumentError as exc:
            raise HTTPException(status_code=422, detail={"errors": [str(exc)]}) from None
        context = ProjectContext(
            project=body.get("project", "unassigned"),
            roles=tuple(body.get("roles", [])),
        )
        result = compose_catena(plan, state.registry, context)
        return {
            "catena": serialize_catena(result.catena),
            "coverage": {
                metric_id: {
                    "matched": c.matched,
                    "components": list(c.components),
                    "missing": list(c.missing),
                }
                for metric_id, c in result.coverage.items()
            },
            "goal_satisfaction": result.goal_satisfaction,
        }

    @app.post("/experience")
    async def post_experience(request: Request, principal: Principal = Depends(principal_of)):
        if not auth.authorize(principal, auth.ACTION_REPOSITORY_WRITE):
            raise deny()
        body = await request.json()
        try:
            package = ExperiencePackage(
                project=body["project"],
                catena=body["catena"],
                reused_components=dict(body.get("reused_components", {})),
                deviation_reports=tuple(
                    DeviationReport(
                        indicator=r["indicator"],
                        first_non_green=parse_timestamp(r["first_non_green"])
                        if r.get("first_non_green")
                        else None,
                        final_status=r["final_status"],
                        note=r.get("note", ""),
                    )
                    for r in body.get("deviation_reports", [])
                ),
                lessons=body.get("lessons", ""),
            )
        except (KeyError, TypeError, SchemaError) as exc:
            raise HTTPException(status_code=422, detail={"errors": [f"malformed package: {exc}"]}) from None
        try:
            n = state.store.record_experience(package)
        except StoreError as exc:
            raise HTTPException(status_code=422, detail={"errors": [str(exc)]}) from None
        return {"id": n}

    @app.exception_handler(WatchtowerError)
    async def watchtower_error(request: Request, exc: WatchtowerError):  # pragma: no cover
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=500, content={"error": str(exc)})

    return app
