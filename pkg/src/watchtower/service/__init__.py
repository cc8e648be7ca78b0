"""HTTP service: role-based access control, view delivery, form intake, composition."""

from watchtower.service.auth import Principal, authenticate, authorize, load_credentials
from watchtower.service.app import create_app

__all__ = ["Principal", "authenticate", "authorize", "create_app", "load_credentials"]
