"""Request-scoped helpers shared by the HTTP handlers."""

from __future__ import annotations

from datetime import date, datetime, timezone

from fastapi import HTTPException, Request

from .. import errors
from ..engine.scheduler import understaffed
from ..model.records import Locale
from ..serialize import to_jsonable
from ..timeutil import Interval
from . import auth

SUPPORTED_LOCALES = tuple(loc.value for loc in Locale)


def repo_of(request: Request):
    return request.app.state.repo

def roster_of(request: Request):
    return request.app.state.repo.roster


def store_of(request: Request):
    return request.app.state.store


def require_session(request: Request) -> dict:
    """Resolve the Authorization bearer token or fail with 401."""
    header = request.headers.get("authorization", "")
    scheme, _, token = header.partition(" ")
    if scheme.lower() != "bearer" or not token.strip():
        raise HTTPException(status_code=401, detail="missing bearer token")
    try:
        record = dict(auth.resolve_session(store_of(request), token.strip()))
    except errors.BadCredentials:
        raise HTTPException(
            status_code=401, detail="invalid or expired session") from None
    record["token"] = token.strip()
    return record


def require_admin(roster, session: dict) -> str:
    account_id = session["account"]
    if not roster.is_admin(account_id):
        raise errors.Forbidden(account_id, "administration")
    return account_id


def if_match_versions(request: Request, repo, schedule_id: str) -> dict[str, int] | None:
    """Translate an If-Match header into version guards for one schedule.

    Absent header means last-write-wins; a stale value surfaces as 412
    once the store rejects the guard.
    """
    raw = request.headers.get("if-match")
    if raw is None:
        return None
    value = raw.strip().strip('"')
    if value.startswith("W/"):
        value = value[2:].strip('"')
    try:
        return {schedule_id: int(value)}
    except ValueError:
        raise HTTPException(
            status_code=400, detail=f"If-Match must be an integer version, got {raw!r}"
        ) from None


def negotiate_locale(header: str | None, default: Locale) -> Locale:
    """Pick en or fr from an Accept-Language header, best q first."""
    if not header:
        return default
    ranked = []
    for i, part in enumerate(header.split(",")):
        piece = part.strip()
        if not piece:
            continue
        tag, _, params = piece.partition(";")
        q = 1.0
        if params.strip().startswith("q="):
            try:
                q = float(params.strip()[2:])
            except ValueError:
                q = 0.0
        ranked.append((-q, i, tag.strip().lower()))
    for _, _, tag in sorted(ranked):
        base = tag.split("-")[0]
        if base in SUPPORTED_LOCALES:
            return Locale(base)
        if tag == "*":
            return default
    return default


def parse_dt(value: str, what: str = "timestamp") -> datetime:
    """ISO-8601 wall time to aware UTC on a whole minute.

    Accepts a trailing Z or an explicit offset; a naive value is taken
    as UTC. Seconds are refused because the roster is minute-grained.
    """
    raw = str(value).strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise errors.ValidationError([f"bad {what}: {value!r}"]) from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    if dt.second or dt.microsecond:
        raise errors.ValidationError(
            [f"{what} must fall on a whole minute: {value!r}"])
    return dt


def parse_date(value: str, what: str = "date") -> date:
    try:
        return date.fromisoformat(str(value).strip())
    except ValueError:
        raise errors.ValidationError([f"bad {what}: {value!r}"]) from None


def parse_interval(start: str, end: str) -> Interval:
    lo = parse_dt(start, "start")
    hi = parse_dt(end, "end")
    if lo >= hi:
        raise errors.ValidationError([f"empty interval: {start!r} .. {end!r}"])
    return Interval(lo, hi)


# ---------------------------------------------------------------- views

def account_public_json(acct) -> dict:
    """The only account shape anonymous callers ever see."""
    return {"name": acct.display_name, "color": acct.color}


def account_summary_json(acct) -> dict:
    return {
        "id": acct.id,
        "given_name": acct.given_name,
        "family_name": acct.family_name,
        "display_name": acct.display_name,
        "role": acct.role.value,
        "color": acct.color,
        "positions": sorted(acct.positions),
        "anonymized": acct.anonymized,
    }


def account_full_json(acct) -> dict:
    data = to_jsonable(acct)
    data["display_name"] = acct.display_name
    return data


def shift_json(shift) -> dict:
    data = to_jsonable(shift)
    data["understaffed"] = understaffed(shift)
    return data


def schedule_json(roster, sched, include_grants: bool) -> dict:
    data = to_jsonable(sched)
    data["members"] = sorted(sched.members)
    if include_grants:
        data["grants"] = {
            aid: to_jsonable(g) for aid, g in sorted(sched.grants.items())
        }
    else:
        data.pop("grants", None)
    return data


def candidate_json(cand) -> dict:
    return {
        "account": cand.account,
        "favorite": cand.favorite,
        "selectable": cand.selectable,
        "conflicts": to_jsonable(list(cand.conflicts)),
        "violations": to_jsonable(list(cand.violations)),
    }
