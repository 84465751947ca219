"""Application factory: wiring, IP guard, locale pick, error mapping."""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import errors
from ..serialize import to_jsonable
from ..store import KVStore, Repo
from . import routes
from .auth import LocalCredentialProvider, ip_allowed
from .deps import negotiate_locale

# Exact statuses per error family; anything unlisted maps to 400.
_STATUS_BY_ERROR: dict[type, int] = {
    errors.BadCredentials: 401,
    errors.Forbidden: 403,
    errors.ForbiddenForce: 403,
    errors.IpNotAllowed: 403,
    errors.UnknownAccount: 404,
    errors.UnknownSchedule: 404,
    errors.UnknownShift: 404,
    errors.UnknownPosition: 404,
    errors.UnknownTimeOff: 404,
    errors.UnknownRequest: 404,
    errors.ConflictRefused: 409,
    errors.QuotaRefused: 409,
    errors.CounterpartyConflict: 409,
    errors.MaxStaffReached: 409,
    errors.NotUnderstaffed: 409,
    errors.NotAssigned: 409,
    errors.NotMember: 409,
    errors.NotEligiblePosition: 409,
    errors.DuplicateRequest: 409,
    errors.DuplicateEmail: 409,
    errors.NotPending: 409,
    errors.IllegalTransition: 409,
    errors.ManagerRejected: 409,
    errors.AccountAnonymized: 409,
    errors.AlreadyAnonymized: 409,
    errors.SourceWeekEmpty: 409,
    errors.SelfEntryDisabled: 409,
    errors.ClaimingDisabled: 409,
    errors.GiveUpDisabled: 409,
    errors.DropDisabled: 409,
    errors.SwapDisabled: 409,
    errors.VersionConflict: 412,
    errors.ValidationError: 422,
    errors.MalformedColor: 422,
    errors.QuotaInconsistent: 422,
    errors.CascadeViolation: 422,
    errors.EmptyRange: 422,
    errors.EmptyInterval: 422,
    errors.SplitOutOfRange: 422,
    errors.MalformedCalendar: 422,
    errors.ParseError: 422,
    errors.BadFlags: 422,
    errors.InvariantViolation: 500,
}


def status_of(exc: errors.RosterError) -> int:
    for cls in type(exc).__mro__:
        if cls in _STATUS_BY_ERROR:
            return _STATUS_BY_ERROR[cls]
    return 400


def error_body(exc: errors.RosterError) -> dict:
    body = {"error": exc.code, "detail": str(exc)}
    for attr in ("violations", "reports", "problems"):
        extra = getattr(exc, attr, None)
        if extra is not None:
            body[attr] = to_jsonable(
                [str(v) if isinstance(v, errors.RosterError) else v
                 for v in extra])
    return body


def create_app(data_path: str | None = None, repo: Repo | None = None,
               provider=None) -> FastAPI:
    """Build the HTTP application.

    ``data_path`` selects the backing store file (``ROSTERD_DATA`` as a
    fallback, in-memory otherwise); passing an existing ``repo`` lets
    tests and the CLI share one. ``provider`` swaps the credential
    verifier, defaulting to the store-backed local table.
    """
    if repo is None:
        path = data_path or os.environ.get("ROSTERD_DATA")
        repo = Repo(KVStore(path))
    app = FastAPI(title="rosterd", version="0.1.0", docs_url=None)
    app.state.repo = repo
    app.state.store = repo.store
    app.state.provider = provider or LocalCredentialProvider(repo.store)

    @app.exception_handler(errors.RosterError)
    async def roster_error_handler(request: Request, exc: errors.RosterError):
        return JSONResponse(status_code=status_of(exc), content=error_body(exc))

    @app.middleware("http")
    async def guard_and_locale(request: Request, call_next):
        path = request.url.path
        if not path.startswith("/public"):
            allowlist = app.state.repo.roster.settings.ip_allowlist
            client_ip = request.client.host if request.client else ""
            if not ip_allowed(client_ip, allowlist):
                exc = errors.IpNotAllowed(client_ip)
                return JSONResponse(status_code=403, content=error_body(exc))
        response = await call_next(request)
        locale = negotiate_locale(
            request.headers.get("accept-language"),
            app.state.repo.roster.settings.locale_default,
        )
        response.headers.setdefault("Content-Language", locale.value)
        return response

    app.include_router(routes.router)
    return app
