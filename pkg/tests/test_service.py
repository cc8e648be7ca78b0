"""HTTP service contract: auth, role filtering, read-your-writes, no-mutation denials."""

from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from watchtower.model.documents import serialize_catena
from watchtower.service.app import create_app
from watchtower.store.filestore import RepositoryStore
from watchtower.techniques.builtins import builtin_components

from conftest import EFFORT_CSV, PLAN_CSV, interactive_catena

CREDENTIALS = {
    "users": [
        {"id": "root", "name": "Root", "roles": ["admin"], "token": "admin-token"},
        {"id": "paula", "name": "Paula", "roles": ["project-manager"], "token": "pm-token"},
        {"id": "devon", "name": "Devon", "roles": ["developer"], "token": "dev-token"},
    ]
}


def auth(token: str) -> dict:
    return {"Authorization": f"Bearer {token}"}


def tree_digest(root: Path) -> dict[str, str]:
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


@pytest.fixture()
def service(tmp_path):
    store_root = tmp_path / "store"
    store = RepositoryStore(store_root)
    for kind, spec, tags in builtin_components():
        store.register_component(kind, spec.to_body(), tags)
    store.put_catena("effort-control", serialize_catena(interactive_catena()))
    credentials_path = tmp_path / "credentials.json"
    credentials_path.write_text(json.dumps(CREDENTIALS), encoding="utf-8")
    app = create_app(store_root, credentials_path)
    return TestClient(app), store_root


def load_project_data(client: TestClient):
    response = client.post(
        "/forms/wf.plan", headers=auth("pm-token"), json={"content": PLAN_CSV, "filename": "plan.csv"}
    )
    assert response.status_code == 200, response.text
    for line in EFFORT_CSV.strip().splitlines()[1:]:
        person, activity, day, hours = line.split(",")
        response = client.post(
            "/forms/wf.effort",
            headers=auth("pm-token"),
            json={"values": {"person": person, "activity": activity, "date": day, "hours": float(hours)}},
        )
        assert response.status_code == 200, response.text


class TestAuthentication:
    def test_unknown_token_is_401(self, service):
        client, _ = service
        assert client.get("/catenas/effort-control/views").status_code == 401
        assert client.get("/catenas/effort-control/views", headers=auth("wrong")).status_code == 401

    def test_deny_is_403_distinct_from_401(self, service):
        client, _ = service
        response = client.put(
            "/catenas/effort-control", headers=auth("pm-token"), json={"meta": {}}
        )
        assert response.status_code == 403


class TestViews:
    def test_project_manager_sees_one_drilldown_model(self, service):
        client, _ = service
        load_project_data(client)
        response = client.get("/catenas/effort-control/views", headers=auth("pm-token"))
        assert response.status_code == 200
        views = response.json()["views"]
        assert len(views) == 1
        assert views[0]["kind"] == "bar-chart-drilldown"
        assert views[0]["status"] == "ok"
        assert views[0]["data"]["root"]["actual"] == 420.0

    def test_role_without_views_gets_empty_success(self, service):
        client, _ = service
        response = client.get("/catenas/effort-control/views", headers=auth("dev-token"))
        assert response.status_code == 200
        assert response.json() == {"views": []}

    def test_unknown_catena_404(self, service):
        client, _ = service
        assert client.get("/catenas/ghost/views", headers=auth("pm-token")).status_code == 404


class TestFormPosts:
    def test_effort_post_reports_changes_and_recomputation(self, service):
        client, _ = service
        load_project_data(client)
        response = client.post(
            "/forms/wf.effort",
            headers=auth("pm-token"),
            json={"values": {"person": "alice", "activity": "test", "date": "2026-01-26", "hours": 8.0}},
        )
        body = response.json()
        assert body["changed"] == ["e.effort"]
        assert body["recomputed"] == ["f.agg", "f.trc"]
        assert body["stale_views"] == ["v.effort"]

    def test_read_your_writes(self, service):
        client, _ = service
        load_project_data(client)
        before = client.get("/catenas/effort-control/views", headers=auth("pm-token")).json()
        root_before = before["views"][0]["data"]["root"]
        client.post(
            "/forms/wf.effort",
            headers=auth("pm-token"),
            json={"values": {"person": "alice", "activity": "test", "date": "2026-01-26", "hours": 8.0}},
        )
        after = client.get("/catenas/effort-control/views", headers=auth("pm-token")).json()
        root_after = after["views"][0]["data"]["root"]
        assert root_after["actual"] == root_before["actual"] + 8.0

    def test_plan_upload_changes_two_entries(self, service):
        client, _ = service
        response = client.post(
            "/forms/wf.plan", headers=auth("pm-token"), json={"content": PLAN_CSV}
        )
        assert response.json()["changed"] == ["e.activities", "e.baseline"]

    def test_malformed_field_rejected_naming_field(self, service):
        client, _ = service
        load_project_data(client)
        snapshot_route = client.get("/catenas/effort-control/views", headers=auth("pm-token")).json()
        response = client.post(
            "/forms/wf.effort",
            headers=auth("pm-token"),
            json={"values": {"person": "alice", "activity": "test", "date": "2026-01-26", "hours": "abc"}},
        )
        assert response.status_code == 422
        assert "hours" in json.dumps(response.json())
        unchanged = client.get("/catenas/effort-control/views", headers=auth("pm-token")).json()
        assert unchanged == snapshot_route

    def test_unauthorized_role_cannot_submit(self, service):
        client, _ = service
        response = client.post(
            "/forms/wf.effort",
            headers=auth("dev-token"),
            json={"values": {"person": "d", "activity": "test", "date": "2026-01-26", "hours": 1.0}},
        )
        assert response.status_code == 403

    def test_unknown_form_404(self, service):
        client, _ = service
        assert client.post("/forms/ghost", headers=auth("pm-token"), json={}).status_code == 404


class TestNoMutationOnDenyOrReject:
    def test_denied_and_rejected_calls_leave_store_bytes_unchanged(self, service):
        client, store_root = service
        load_project_data(client)
        before = tree_digest(store_root)
        # deny: wrong role for a form
        client.post(
            "/forms/wf.effort",
            headers=auth("dev-token"),
            json={"values": {"person": "d", "activity": "test", "date": "2026-01-26", "hours": 1.0}},
        )
        # deny: non-admin catena write/delete
        client.put("/catenas/effort-control", headers=auth("pm-token"), json={})
        client.delete("/catenas/effort-control", headers=auth("pm-token"))
        # reject: malformed submission and invalid catena document
        client.post(
            "/forms/wf.effort",
            headers=auth("pm-token"),
            json={"values": {"person": "p", "activity": "test", "date": "2026-01-26", "hours": "x"}},
        )
        client.put("/catenas/effort-control", headers=auth("admin-token"), json={"meta": {}})
        # reject: malformed plan upload (atomicity across both bound entries)
        client.post(
            "/forms/wf.plan",
            headers=auth("pm-token"),
            json={"content": "activity_id,parent_id,name,start,end,baseline_effort_h\nA,X,a,2026-01-01,2026-02-01,5\n"},
        )
        assert tree_digest(store_root) == before


class TestCatenaCrud:
    def test_put_get_delete_round_trip(self, service):
        client, _ = service
        document = client.get("/catenas/effort-control", headers=auth("pm-token")).json()
        document["meta"]["id"] = "copy"
        response = client.put("/catenas/copy", headers=auth("admin-token"), json=document)
        assert response.status_code == 200
        assert client.get("/catenas/copy", headers=auth("pm-token")).status_code == 200
        assert client.delete("/catenas/copy", headers=auth("admin-token")).json() == {"ok": True}
        assert client.get("/catenas/copy", headers=auth("pm-token")).status_code == 404

    def test_put_cycle_rejected_with_diagnostic(self, service):
        client, _ = service
        document = client.get("/catenas/effort-control", headers=auth("pm-token")).json()
        # wire the aggregation to consume the tolerance check's output
        for function in document["functions"]:
            if function["id"] == "f.agg":
                function["bindings"]["effort"] = "f.trc.indicators"
        document["meta"]["id"] = "cyclic"
        response = client.put("/catenas/cyclic", headers=auth("admin-token"), json=document)
        assert response.status_code == 422
        codes = {d["code"] for d in response.json()["detail"]["diagnostics"]}
        assert "cycle" in codes

    def test_compose_returns_candidate_without_persisting(self, service):
        client, store_root = service
        from test_gqm import EFFORT_PLAN

        catenas_before = sorted(p.name for p in (store_root / "catenas").iterdir())
        response = client.post(
            "/compose",
            headers=auth("pm-token"),
            json={"plan": EFFORT_PLAN, "project": "course-2026"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["coverage"]["m1"]["matched"] is True
        assert body["catena"]["meta"]["project"] == "course-2026"
        assert sorted(p.name for p in (store_root / "catenas").iterdir()) == catenas_before


class TestRepositoryBrowse:
    def test_seeded_function_listing(self, service):
        client, _ = service
        response = client.get("/repository/function", headers=auth("dev-token"))
        ids = [c["id"] for c in response.json()["components"]]
        assert ids == sorted(ids)
        assert "agg.effort" in ids
        assert "check.tolerance" in ids

    def test_tag_filter(self, service):
        client, _ = service
        response = client.get("/repository/function", headers=auth("dev-token"), params={"tag": ["effort"]})
        ids = [c["id"] for c in response.json()["components"]]
        assert ids == ["agg.effort", "conv.effort_ts"]

    def test_unknown_kind_404(self, service):
        client, _ = service
        assert client.get("/repository/widget", headers=auth("dev-token")).status_code == 404


class TestExperienceEndpoint:
    def test_admin_records_package(self, service):
        client, _ = service
        response = client.post(
            "/experience",
            headers=auth("admin-token"),
            json={
                "project": "course-2026",
                "catena": "effort-control",
                "reused_components": {"agg.effort": 1},
            },
        )
        assert response.status_code == 200
        assert response.json() == {"id": 1}

    def test_non_admin_denied(self, service):
        client, _ = service
        response = client.post(
            "/experience",
            headers=auth("pm-token"),
            json={"project": "course-2026", "catena": "effort-control"},
        )
        assert response.status_code == 403

    def test_dangling_reference_rejected(self, service):
        client, _ = service
        response = client.post(
            "/experience",
            headers=auth("admin-token"),
            json={"project": "course-2026", "catena": "ghost"},
        )
        assert response.status_code == 422


class TestRoleSoundness:
    def test_randomized_assignments_never_leak(self, tmp_path):
        from watchtower.model.instances import Catena, DataEntry, FormSource, ViewInstance

        rng = random.Random(424242)
        role_pool = ["r1", "r2", "r3", "r4"]
        store_root = tmp_path / "store"
        store = RepositoryStore(store_root)
        for kind, spec, tags in builtin_components():
            store.register_component(kind, spec.to_body(), tags)

        users = [
            {
                "id": f"u{i}",
                "roles": rng.sample(role_pool, k=rng.randrange(1, 3)),
                "token": f"token-{i}",
            }
            for i in range(8)
        ]
        credentials_path = tmp_path / "credentials.json"
        credentials_path.write_text(json.dumps({"users": users}), encoding="utf-8")

        entries = (DataEntry(id="e.m", data_type="type.control_metric", source=FormSource()),)
        views = tuple(
            ViewInstance(
                id=f"v.{i:02d}",
                spec="view.metric_table",
                bindings={"metric": "e.m"},
                visible_to=tuple(sorted(rng.sample(role_pool, k=rng.randrange(0, 3)))),
            )
            for i in range(12)
        )
        catena = Catena(id="c.roles", project="p", entries=entries, views=views)
        store.put_catena("c.roles", serialize_catena(catena))
        client = TestClient(create_app(store_root, credentials_path))

        visible_to = {v.id: set(v.visible_to) for v in views}
        for user in users:
            response = client.get("/catenas/c.roles/views", headers=auth(user["token"]))
            assert response.status_code == 200
            for model in response.json()["views"]:
                assert visible_to[model["view"]] & set(user["roles"]), (
                    f"view {model['view']} leaked to {user['roles']}"
                )
