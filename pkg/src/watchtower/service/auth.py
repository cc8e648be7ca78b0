"""Token authentication and role-based authorization.

Credentials are static configuration: a JSON file mapping bearer tokens
to users and their roles. Authorization is enforced at view-instance
granularity for reads; writes to catenas and the repository need the
admin role; form submissions are open to any role the catena's views
grant visibility to (the project's team), plus admin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from watchtower.errors import DocumentError
from watchtower.model.instances import Catena, ViewInstance

ADMIN_ROLE = "admin"

ACTION_VIEW_READ = "view-read"
ACTION_CATENA_READ = "catena-read"
ACTION_CATENA_WRITE = "catena-write"
ACTION_REPOSITORY_READ = "repository-read"
ACTION_REPOSITORY_WRITE = "repository-write"
ACTION_FORM_SUBMIT = "form-submit"
ACTION_COMPOSE = "compose"


@dataclass(frozen=True)
class Principal:
    user_id: str
    name: str
    roles: frozenset[str]
    token: str

    def __post_init__(self) -> None:
        if not self.roles:
            raise DocumentError("users", f"user {self.user_id!r} has no roles")

    @property
    def is_admin(self) -> bool:
        return ADMIN_ROLE in self.roles


def load_credentials(path: str | Path) -> dict[str, Principal]:
    """Parse the credentials file into a token -> principal map."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DocumentError(str(path), "credentials file not found") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(str(path), f"invalid credentials file: {exc.msg}") from exc
    users = raw.get("users")
    if not isinstance(users, list):
        raise DocumentError("users", "expected a list of users")
    principals: dict[str, Principal] = {}
    for i, user in enumerate(users):
        for key in ("id", "token", "roles"):
            if key not in user:
                raise DocumentError(f"users[{i}].{key}", "missing required field")
        token = user["token"]
        if token in principals:
            raise DocumentError(f"users[{i}].token", "token is not unique")
        principals[token] = Principal(
            user_id=user["id"],
            name=user.get("name", user["id"]),
            roles=frozenset(user["roles"]),
            token=token,
        )
    return principals


def authenticate(credentials: dict[str, Principal], token: str | None) -> Principal | None:
    """Resolve a bearer token; None means authentication failure, not denial."""
    if not token:
        return None
    return credentials.get(token)


def can_read_view(principal: Principal, view: ViewInstance) -> bool:
    return principal.is_admin or bool(set(view.visible_to) & principal.roles)


def catena_team_roles(catena: Catena) -> set[str]:
    """Every role any view of the catena grants visibility to."""
    roles: set[str] = set()
    for view in catena.views:
        roles.update(view.visible_to)
    return roles


def authorize(principal: Principal, action: str, resource: object = None) -> bool:
    """Single decision point for every protected action."""
    if principal.is_admin:
        return True
    if action == ACTION_VIEW_READ:
        return isinstance(resource, ViewInstance) and bool(set(resource.visible_to) & principal.roles)
    if action in (ACTION_CATENA_READ, ACTION_REPOSITORY_READ, ACTION_COMPOSE):
        return True
    if action == ACTION_FORM_SUBMIT:
        return isinstance(resource, Catena) and bool(catena_team_roles(resource) & principal.roles)
    if action in (ACTION_CATENA_WRITE, ACTION_REPOSITORY_WRITE):
        return False
    return False
