"""HTTP service layer: app factory, authentication, and view helpers."""

from .app import create_app, error_body, status_of
from .auth import LocalCredentialProvider, login, logout, set_password

__all__ = [
    "create_app",
    "error_body",
    "status_of",
    "LocalCredentialProvider",
    "login",
    "logout",
    "set_password",
]
