"""HTTP endpoint handlers.

Handlers stay thin: resolve the record, check the caller's right when
the domain function does not take an actor itself, then run the change
through ``Repo.mutate`` so every request commits atomically. Version
guards come from ``If-Match`` and surface as 412 on staleness.
"""

from __future__ import annotations

import copy
import dataclasses

from fastapi import APIRouter, Depends, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .. import errors
from ..engine import autoschedule as autosched
from ..engine import scheduler
from ..model import validation
from ..model.invariants import settings_problems, shift_problems
from ..model.records import (
    Account,
    AvailabilityGrid,
    CopyMode,
    ElevatedRights,
    Locale,
    OpeningHoursCalendar,
    OpeningPeriod,
    PayRates,
    Position,
    QuotaSet,
    Recurrence,
    RequestState,
    Role,
    Schedule,
    ScheduleSettings,
    Shift,
)
from ..reporting import ical as icalmod
from ..reporting import opening_hours as ohmod
from ..reporting import reports as repmod
from ..serialize import to_jsonable
from ..workflows import exchange, timeoff
from . import auth, ops
from .deps import (
    account_full_json,
    account_public_json,
    account_summary_json,
    candidate_json,
    if_match_versions,
    parse_date,
    parse_dt,
    parse_interval,
    repo_of,
    require_admin,
    require_session,
    roster_of,
    schedule_json,
    shift_json,
    store_of,
)

router = APIRouter()


# ───────────────────────── request bodies ─────────────────────────

class LoginBody(BaseModel):
    email: str
    password: str


class PayBody(BaseModel):
    regular_rate: int
    overtime_rate: int
    weekly_overtime_threshold: int


class AccountBody(BaseModel):
    given_name: str
    family_name: str
    email: str
    password: str | None = None
    role: str = "Regular"
    positions: list[str] = Field(default_factory=list)
    departments: list[str] = Field(default_factory=list)
    locations: list[str] = Field(default_factory=list)
    color: str | None = None
    quotas: dict[str, int | None] = Field(default_factory=dict)
    availability: dict[int, list[tuple[int, int]]] | None = None
    pay: PayBody | None = None


class AccountPatch(BaseModel):
    given_name: str | None = None
    family_name: str | None = None
    email: str | None = None
    password: str | None = None
    role: str | None = None
    positions: list[str] | None = None
    departments: list[str] | None = None
    locations: list[str] | None = None
    color: str | None = None
    quotas: dict[str, int | None] | None = None
    availability: dict[int, list[tuple[int, int]]] | None = None
    clear_availability: bool = False
    pay: PayBody | None = None


class SettingsBody(BaseModel):
    swap_requires_approval: bool | None = None
    swap_enabled: bool | None = None
    claiming_enabled: bool | None = None
    give_up_enabled: bool | None = None
    drop_enabled: bool | None = None


class ScheduleBody(BaseModel):
    name: str
    location: str | None = None
    members: list[str] = Field(default_factory=list)
    settings: SettingsBody | None = None


class SchedulePatch(BaseModel):
    name: str | None = None
    location: str | None = None
    members: list[str] | None = None
    settings: SettingsBody | None = None


class GrantBody(BaseModel):
    account: str
    manage_shifts: bool = False
    view_stats: bool = False
    approve_time_off: bool = False


class PublishBody(BaseModel):
    public: bool


class CopyWeekBody(BaseModel):
    source_week: str
    target_weeks: list[str]
    mode: str = "ShiftsOnly"


class RecurrenceBody(BaseModel):
    weekdays: list[int]
    until: str


class ShiftBody(BaseModel):
    title: str
    start: str
    end: str
    min_staff: int = 1
    max_staff: int | None = None
    required_positions: list[str] = Field(default_factory=list)
    favorites: list[str] = Field(default_factory=list)
    work_from_home: bool = False
    recurrence: RecurrenceBody | None = None


class ShiftPatch(BaseModel):
    title: str | None = None
    start: str | None = None
    end: str | None = None
    min_staff: int | None = None
    max_staff: int | None = None
    clear_max_staff: bool = False
    required_positions: list[str] | None = None
    favorites: list[str] | None = None
    work_from_home: bool | None = None
    recurrence: RecurrenceBody | None = None
    clear_recurrence: bool = False


class AssignBody(BaseModel):
    account: str
    force: bool = False


class UnassignBody(BaseModel):
    account: str


class SplitBody(BaseModel):
    at: str


class DropBody(BaseModel):
    replacement: str | None = None


class SwapBody(BaseModel):
    counterparty: str
    counter_shift: str | None = None


class DecisionBody(BaseModel):
    decision: str


class TimeOffBody(BaseModel):
    account: str | None = None
    start: str
    end: str
    reason: str = ""


class AnnouncementBody(BaseModel):
    title: str
    body: str
    audience: list[str] | None = None


class AutoScheduleBody(BaseModel):
    schedules: list[str]
    start: str
    end: str
    favorites_only: bool = False
    max_shifts_per_day: int | None = None
    min_gap_minutes: int | None = None
    seed: int = 0
    preview: bool = False


class SystemSettingsPatch(BaseModel):
    self_time_off_enabled: bool | None = None
    time_off_requires_approval: bool | None = None
    ip_allowlist: list[str] | None = None
    default_dashboard_days: int | None = None
    locale_default: str | None = None
    display_timezone: str | None = None


class ExternalConflictBody(BaseModel):
    calendar: str
    start: str
    end: str


class PositionBody(BaseModel):
    name: str
    default_color: str | None = None


class PositionColorBody(BaseModel):
    color: str


class OpeningPeriodBody(BaseModel):
    name: str
    start: str
    end: str
    hours: dict[int, list[tuple[int, int]]] = Field(default_factory=dict)


class OpeningCalendarBody(BaseModel):
    periods: list[OpeningPeriodBody] = Field(default_factory=list)
    overrides: dict[str, list[tuple[int, int]]] = Field(default_factory=dict)


# ───────────────────────── auth ─────────────────────────

@router.post("/auth/login")
def login(body: LoginBody, request: Request):
    session = auth.login(
        store_of(request), roster_of(request), request.app.state.provider,
        body.email, body.password,
        client_ip=request.client.host if request.client else "",
    )
    return {
        "token": session.token,
        "account": session.account,
        "role": session.role,
        "expires_at": session.expires_at.isoformat(),
    }


@router.post("/auth/logout")
def logout(request: Request, session: dict = Depends(require_session)):
    auth.logout(store_of(request), session["token"])
    return {"ok": True}


@router.get("/me")
def me(request: Request, session: dict = Depends(require_session)):
    acct = roster_of(request).account(session["account"])
    return account_full_json(acct)


# ───────────────────────── dashboard / timeline ─────────────────────────

@router.get("/dashboard")
def dashboard(request: Request, days: int | None = None,
              session: dict = Depends(require_session)):
    roster = roster_of(request)
    data = ops.dashboard_data(roster, session["account"], days=days)
    return {
        "window": to_jsonable(data["window"]),
        "assignments": [shift_json(s) for s in data["assignments"]],
        "open_requests": to_jsonable(data["open_requests"]),
        "claimable": [shift_json(s) for s in data["claimable"]],
        "announcements": to_jsonable(data["announcements"]),
    }


@router.get("/timeline")
def timeline(request: Request,
             schedule: list[str] = Query(default=[]),
             start: str = Query(...), end: str = Query(...),
             account: str | None = None,
             session: dict = Depends(require_session)):
    roster = roster_of(request)
    window = parse_interval(start, end)
    if not schedule:
        raise errors.ValidationError(["at least one schedule is required"])
    events = ops.timeline_view(
        roster, session["account"], schedule, window, filter_account=account)
    return {"events": to_jsonable(events)}


# ───────────────────────── accounts ─────────────────────────

def _account_from_body(roster, body: AccountBody, account_id: str) -> Account:
    quotas = QuotaSet(**{k: v for k, v in body.quotas.items()})
    grid = AvailabilityGrid(
        days=None if body.availability is None else {
            int(k): tuple(tuple(p) for p in v)
            for k, v in body.availability.items()
        })
    pay = None
    if body.pay is not None:
        pay = PayRates(**body.pay.model_dump())
    try:
        role = Role(body.role)
    except ValueError:
        raise errors.ValidationError([f"unknown role {body.role!r}"]) from None
    return Account(
        id=account_id,
        given_name=body.given_name,
        family_name=body.family_name,
        email=body.email,
        role=role,
        positions=frozenset(body.positions),
        departments=frozenset(body.departments),
        locations=frozenset(body.locations),
        color=body.color,
        quotas=quotas,
        availability=grid,
        pay=pay,
    )


@router.get("/accounts")
def list_accounts(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    full = roster.is_admin(session["account"])
    view = account_full_json if full else account_summary_json
    return [view(a) for a in sorted(roster.accounts.values(), key=lambda a: a.id)]


@router.post("/accounts", status_code=201)
def create_account(body: AccountBody, request: Request,
                   session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)

    def change(work):
        acct = validation.validate_account(
            work, _account_from_body(work, body, work.next_id("a")))
        work.put(acct)
        return acct

    acct = repo.mutate(change)
    if body.password:
        auth.set_password(store_of(request), acct.email, acct.id, body.password)
    return account_full_json(acct)


@router.get("/accounts/{account_id}")
def get_account(account_id: str, request: Request,
                session: dict = Depends(require_session)):
    roster = roster_of(request)
    acct = roster.account(account_id)
    caller = session["account"]
    if caller == account_id or roster.is_admin(caller):
        return account_full_json(acct)
    return account_summary_json(acct)


@router.patch("/accounts/{account_id}")
def update_account(account_id: str, body: AccountPatch, request: Request,
                   session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)
    old_email = repo.roster.account(account_id).email

    def change(work):
        acct = work.account(account_id)
        if acct.anonymized:
            raise errors.AlreadyAnonymized(account_id)
        fields: dict = {}
        for name in ("given_name", "family_name", "email", "color"):
            value = getattr(body, name)
            if value is not None:
                fields[name] = value
        if body.role is not None:
            try:
                fields["role"] = Role(body.role)
            except ValueError:
                raise errors.ValidationError(
                    [f"unknown role {body.role!r}"]) from None
        for name in ("positions", "departments", "locations"):
            value = getattr(body, name)
            if value is not None:
                fields[name] = frozenset(value)
        if body.quotas is not None:
            fields["quotas"] = QuotaSet(**body.quotas)
        if body.clear_availability:
            fields["availability"] = AvailabilityGrid()
        elif body.availability is not None:
            fields["availability"] = AvailabilityGrid(days={
                int(k): tuple(tuple(p) for p in v)
                for k, v in body.availability.items()
            })
        if body.pay is not None:
            fields["pay"] = PayRates(**body.pay.model_dump())
        draft = dataclasses.replace(acct, **fields)
        checked = validation.validate_account(work, draft)
        work.put(checked)
        return checked

    acct = repo.mutate(change)
    store = store_of(request)
    if body.email is not None and body.email != old_email:
        credential = store.get(auth.credential_key(old_email))
        with store.txn() as txn:
            txn.delete(auth.credential_key(old_email))
            if credential is not None:
                txn.put(auth.credential_key(acct.email), credential)
    if body.password:
        auth.set_password(store, acct.email, acct.id, body.password)
    return account_full_json(acct)


@router.post("/accounts/{account_id}/anonymize")
def anonymize(account_id: str, request: Request,
              session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)
    acct = repo.roster.account(account_id)
    email = acct.email
    tokenized = repo.mutate(
        lambda work: validation.anonymize_account(work, account_id))
    auth.drop_credentials(store_of(request), email, account_id)
    return account_full_json(tokenized)


@router.get("/accounts/{account_id}/calendar.ics")
def personal_calendar(account_id: str, request: Request,
                      start: str = Query(...), end: str = Query(...),
                      session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    if caller != account_id and not roster.is_admin(caller):
        raise errors.Forbidden(caller, f"calendar of {account_id}")
    data = icalmod.export_ical(roster, account_id, parse_interval(start, end))
    return Response(content=data, media_type="text/calendar; charset=utf-8")


@router.post("/accounts/{account_id}/external-conflicts")
def account_external_conflicts(account_id: str, body: ExternalConflictBody,
                               request: Request,
                               session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    if caller != account_id and not roster.is_admin(caller):
        raise errors.Forbidden(caller, f"external calendar of {account_id}")
    reports = icalmod.external_conflicts(
        roster, account_id, body.calendar, parse_interval(body.start, body.end))
    return {"conflicts": to_jsonable(reports)}


# ───────────────────────── positions ─────────────────────────

@router.get("/positions")
def list_positions(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    return to_jsonable(sorted(roster.positions.values(), key=lambda p: p.id))


@router.post("/positions", status_code=201)
def create_position(body: PositionBody, request: Request,
                    session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)

    def change(work):
        record = Position(id=work.next_id("pos"), name=body.name,
                          default_color=body.default_color)
        work.put(record)
        return record

    return to_jsonable(repo.mutate(change))


@router.post("/positions/{position_id}/color")
def paint_position(position_id: str, body: PositionColorBody, request: Request,
                   session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)
    touched = repo.mutate(
        lambda work: validation.apply_position_color(work, position_id, body.color))
    return {"accounts_updated": touched}


# ───────────────────────── schedules ─────────────────────────

def _settings_from(body: SettingsBody | None,
                   base: ScheduleSettings | None = None) -> ScheduleSettings:
    settings = base or ScheduleSettings()
    if body is None:
        return settings
    fields = {k: v for k, v in body.model_dump().items() if v is not None}
    return dataclasses.replace(settings, **fields)


@router.get("/schedules")
def list_schedules(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    out = []
    for sched in sorted(roster.schedules.values(), key=lambda s: s.id):
        if roster.is_admin(caller) or roster.can_manage(caller, sched.id):
            out.append(schedule_json(roster, sched, include_grants=True))
        elif caller in sched.members or sched.is_public:
            out.append(schedule_json(roster, sched, include_grants=False))
    return out


@router.post("/schedules", status_code=201)
def create_schedule(body: ScheduleBody, request: Request,
                    session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)

    def change(work):
        for member in body.members:
            work.account(member)
        record = Schedule(
            id=work.next_id("s"),
            name=body.name,
            location=body.location,
            members=frozenset(body.members),
            settings=_settings_from(body.settings),
        )
        work.put(record)
        return record

    sched = repo.mutate(change)
    return schedule_json(repo.roster, sched, include_grants=True)


@router.get("/schedules/{schedule_id}")
def get_schedule(schedule_id: str, request: Request,
                 session: dict = Depends(require_session)):
    roster = roster_of(request)
    sched = roster.schedule(schedule_id)
    caller = session["account"]
    if roster.is_admin(caller) or roster.can_manage(caller, schedule_id):
        return schedule_json(roster, sched, include_grants=True)
    if caller in sched.members or sched.is_public:
        return schedule_json(roster, sched, include_grants=False)
    raise errors.Forbidden(caller, f"schedule {schedule_id}")


@router.patch("/schedules/{schedule_id}")
def update_schedule(schedule_id: str, body: SchedulePatch, request: Request,
                    session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.schedule(schedule_id)
    if not repo.roster.can_manage(caller, schedule_id):
        raise errors.Forbidden(caller, f"manage {schedule_id}")

    def change(work):
        sched = work.schedule(schedule_id)
        fields: dict = {}
        if body.name is not None:
            fields["name"] = body.name
        if body.location is not None:
            fields["location"] = body.location
        if body.members is not None:
            for member in body.members:
                work.account(member)
            members = frozenset(body.members)
            fields["members"] = members
            fields["grants"] = {
                aid: g for aid, g in sched.grants.items() if aid in members
            }
        if body.settings is not None:
            fields["settings"] = _settings_from(body.settings, sched.settings)
        updated = dataclasses.replace(sched, **fields)
        work.put(updated)
        return updated

    sched = repo.mutate(change)
    return schedule_json(repo.roster, sched, include_grants=True)


@router.post("/schedules/{schedule_id}/grants")
def grant(schedule_id: str, body: GrantBody, request: Request,
          session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = require_admin(repo.roster, session)
    rights = ElevatedRights(
        manage_shifts=body.manage_shifts,
        view_stats=body.view_stats,
        approve_time_off=body.approve_time_off,
    )
    sched = repo.mutate(
        lambda work: ops.grant_rights(
            work, schedule_id, body.account, rights, actor=caller))
    return schedule_json(repo.roster, sched, include_grants=True)


@router.post("/schedules/{schedule_id}/publish")
def publish(schedule_id: str, body: PublishBody, request: Request,
            session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    return repo.mutate(
        lambda work: ops.publish_schedule(
            work, schedule_id, body.public, actor=caller))


@router.get("/schedules/{schedule_id}/checklist")
def checklist(schedule_id: str, request: Request,
              session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    if not roster.can_manage(caller, schedule_id):
        raise errors.Forbidden(caller, f"checklist of {schedule_id}")
    return {"steps": ops.setup_checklist(roster, schedule_id)}


@router.post("/schedules/{schedule_id}/copy-week")
def copy_week(schedule_id: str, body: CopyWeekBody, request: Request,
              session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    try:
        mode = CopyMode(body.mode)
    except ValueError:
        raise errors.ValidationError(
            [f"unknown copy mode {body.mode!r}"]) from None
    expect = if_match_versions(request, repo, schedule_id)

    def change(work):
        return ops.copy_week(work, schedule_id, body.source_week,
                             body.target_weeks, mode, actor=caller)

    created, skipped = repo.mutate(change, expect=expect)
    return {
        "created": [shift_json(s) for s in created],
        "skipped": [
            {"source_shift": src, "shift": new, "account": acct, "reason": why}
            for src, new, acct, why in skipped
        ],
    }


# ───────────────────────── shifts ─────────────────────────

def _shift_response(repo, shift: Shift, status: int = 200) -> JSONResponse:
    version = repo.schedule_version(shift.schedule)
    data = shift_json(shift)
    data["version"] = version
    return JSONResponse(status_code=status, content=data,
                        headers={"ETag": f'"{version}"'})


def _recurrence_from(body: RecurrenceBody) -> Recurrence:
    weekdays = frozenset(body.weekdays)
    if not weekdays or not weekdays <= set(range(7)):
        raise errors.ValidationError(
            ["recurrence weekdays must be a non-empty subset of 0..6"])
    return Recurrence(weekdays=weekdays, until=parse_date(body.until, "until"))


def _checked_shift(work, shift: Shift) -> Shift:
    problems = shift_problems(shift, work)
    if problems:
        raise errors.ValidationError(problems)
    return shift


@router.get("/schedules/{schedule_id}/shifts")
def list_shifts(schedule_id: str, request: Request,
                start: str | None = None, end: str | None = None,
                session: dict = Depends(require_session)):
    repo = repo_of(request)
    roster = repo.roster
    sched = roster.schedule(schedule_id)
    caller = session["account"]
    allowed = (sched.is_public or caller in sched.members
               or roster.can_manage(caller, schedule_id))
    if not allowed:
        raise errors.Forbidden(caller, f"shifts of {schedule_id}")
    shifts = roster.shifts_of_schedule(schedule_id)
    if start is not None and end is not None:
        window = parse_interval(start, end)
        shifts = [s for s in shifts if s.interval.overlaps(window)]
    shifts.sort(key=lambda s: (s.interval.start, s.id))
    version = repo.schedule_version(schedule_id)
    body = {
        "schedule": schedule_id,
        "version": version,
        "shifts": [shift_json(s) for s in shifts],
    }
    return JSONResponse(content=body, headers={"ETag": f'"{version}"'})


@router.post("/schedules/{schedule_id}/shifts", status_code=201)
def create_shift(schedule_id: str, body: ShiftBody, request: Request,
                 session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.schedule(schedule_id)
    if not repo.roster.can_manage(caller, schedule_id):
        raise errors.Forbidden(caller, f"manage {schedule_id}")
    expect = if_match_versions(request, repo, schedule_id)

    def change(work):
        record = Shift(
            id=work.next_id("shift"),
            schedule=schedule_id,
            title=body.title,
            interval=parse_interval(body.start, body.end),
            min_staff=body.min_staff,
            max_staff=body.max_staff,
            required_positions=frozenset(body.required_positions),
            favorites=frozenset(body.favorites),
            work_from_home=body.work_from_home,
            recurrence=(None if body.recurrence is None
                        else _recurrence_from(body.recurrence)),
        )
        work.put(_checked_shift(work, record))
        return record

    return _shift_response(repo, repo.mutate(change, expect=expect), status=201)


@router.get("/shifts/{shift_id}")
def get_shift(shift_id: str, request: Request,
              session: dict = Depends(require_session)):
    repo = repo_of(request)
    roster = repo.roster
    shift = roster.shift(shift_id)
    sched = roster.schedule(shift.schedule)
    caller = session["account"]
    allowed = (sched.is_public or caller in sched.members
               or roster.can_manage(caller, shift.schedule))
    if not allowed:
        raise errors.Forbidden(caller, f"shift {shift_id}")
    return _shift_response(repo, shift)


@router.patch("/shifts/{shift_id}")
def update_shift(shift_id: str, body: ShiftPatch, request: Request,
                 session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)

    def change(work):
        current = work.shift(shift_id)
        fields: dict = {}
        if body.title is not None:
            fields["title"] = body.title
        if body.start is not None or body.end is not None:
            start = body.start or current.interval.start.isoformat()
            end = body.end or current.interval.end.isoformat()
            fields["interval"] = parse_interval(start, end)
        if body.min_staff is not None:
            fields["min_staff"] = body.min_staff
        if body.clear_max_staff:
            fields["max_staff"] = None
        elif body.max_staff is not None:
            fields["max_staff"] = body.max_staff
        if body.required_positions is not None:
            fields["required_positions"] = frozenset(body.required_positions)
        if body.favorites is not None:
            fields["favorites"] = frozenset(body.favorites)
        if body.work_from_home is not None:
            fields["work_from_home"] = body.work_from_home
        if body.clear_recurrence:
            fields["recurrence"] = None
        elif body.recurrence is not None:
            fields["recurrence"] = _recurrence_from(body.recurrence)
        updated = dataclasses.replace(current, **fields)
        work.put(_checked_shift(work, updated))
        return updated

    return _shift_response(repo, repo.mutate(change, expect=expect))


@router.delete("/shifts/{shift_id}")
def delete_shift(shift_id: str, request: Request,
                 session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)

    def change(work):
        work.delete(work.shift(shift_id))
        return True

    repo.mutate(change, expect=expect)
    return {"deleted": shift_id}


@router.post("/shifts/{shift_id}/split")
def split(shift_id: str, body: SplitBody, request: Request,
          session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)
    first, second = repo.mutate(
        lambda work: scheduler.split_shift(work, shift_id, parse_dt(body.at)),
        expect=expect)
    return {"shifts": [shift_json(first), shift_json(second)]}


@router.post("/shifts/{shift_id}/expand")
def expand(shift_id: str, request: Request,
           session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)
    created, skipped = repo.mutate(
        lambda work: scheduler.expand_recurring_shift(work, shift_id),
        expect=expect)
    return {
        "created": [shift_json(s) for s in created],
        "skipped": to_jsonable(skipped),
    }


@router.get("/shifts/{shift_id}/eligible")
def eligible(shift_id: str, request: Request, force: bool = False,
             session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    shift = roster.shift(shift_id)
    if not roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    candidates = scheduler.eligible_accounts(roster, shift_id, force=force)
    return {"candidates": [candidate_json(c) for c in candidates]}


@router.post("/shifts/{shift_id}/assign")
def assign(shift_id: str, body: AssignBody, request: Request,
           session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)
    updated = repo.mutate(
        lambda work: scheduler.assign(
            work, shift_id, body.account, force=body.force, actor=caller),
        expect=expect)
    return _shift_response(repo, updated)


@router.post("/shifts/{shift_id}/unassign")
def unassign(shift_id: str, body: UnassignBody, request: Request,
             session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    if not repo.roster.can_manage(caller, shift.schedule):
        raise errors.Forbidden(caller, f"manage {shift.schedule}")
    expect = if_match_versions(request, repo, shift.schedule)
    updated = repo.mutate(
        lambda work: scheduler.unassign(work, shift_id, body.account),
        expect=expect)
    return _shift_response(repo, updated)


# ───────────────────────── exchange workflows ─────────────────────────

@router.post("/shifts/{shift_id}/claim")
def claim(shift_id: str, request: Request,
          session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    expect = if_match_versions(request, repo, shift.schedule)
    updated = repo.mutate(
        lambda work: exchange.claim_shift(work, shift_id, caller),
        expect=expect)
    return _shift_response(repo, updated)


@router.post("/shifts/{shift_id}/give-up")
def give_up(shift_id: str, request: Request,
            session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.shift(shift_id)
    req = repo.mutate(
        lambda work: exchange.give_up_shift(work, shift_id, caller))
    return to_jsonable(req)


@router.post("/shifts/{shift_id}/drop")
def drop(shift_id: str, body: DropBody, request: Request,
         session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    shift = repo.roster.shift(shift_id)
    expect = if_match_versions(request, repo, shift.schedule)
    updated = repo.mutate(
        lambda work: exchange.drop_shift(
            work, shift_id, caller, replacement=body.replacement),
        expect=expect)
    return _shift_response(repo, updated)


@router.post("/shifts/{shift_id}/swap")
def swap(shift_id: str, body: SwapBody, request: Request,
         session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.shift(shift_id)
    req = repo.mutate(
        lambda work: exchange.swap_shifts(
            work, caller, shift_id, body.counterparty,
            counter_shift=body.counter_shift))
    return to_jsonable(req)


@router.get("/requests")
def list_requests(request: Request,
                  schedule: str | None = None, state: str | None = None,
                  session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    want_state = None
    if state is not None:
        try:
            want_state = RequestState(state)
        except ValueError:
            raise errors.ValidationError(
                [f"unknown request state {state!r}"]) from None
    out = []
    for req in roster.requests.values():
        shift = roster.shifts.get(req.shift)
        sid = shift.schedule if shift else None
        if schedule is not None and sid != schedule:
            continue
        if want_state is not None and req.state != want_state:
            continue
        visible = (
            roster.is_admin(caller)
            or caller in (req.initiator, req.counterparty)
            or (sid is not None and roster.can_manage(caller, sid))
            or (sid is not None and req.state == RequestState.OPEN
                and caller in roster.schedule(sid).members)
        )
        if visible:
            out.append(req)
    out.sort(key=lambda r: (r.created_at, r.id))
    return to_jsonable(out)


@router.get("/requests/{request_id}")
def get_request(request_id: str, request: Request,
                session: dict = Depends(require_session)):
    roster = roster_of(request)
    req = roster.request(request_id)
    caller = session["account"]
    shift = roster.shifts.get(req.shift)
    sid = shift.schedule if shift else None
    visible = (
        roster.is_admin(caller)
        or caller in (req.initiator, req.counterparty)
        or (sid is not None and (
            roster.can_manage(caller, sid)
            or caller in roster.schedule(sid).members))
    )
    if not visible:
        raise errors.Forbidden(caller, f"request {request_id}")
    return to_jsonable(req)


@router.post("/requests/{request_id}/accept")
def accept(request_id: str, request: Request,
           session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    req = repo.roster.request(request_id)
    shift = repo.roster.shifts.get(req.shift)
    expect = None
    if shift is not None:
        expect = if_match_versions(request, repo, shift.schedule)
    done = repo.mutate(
        lambda work: exchange.accept_give_up(work, request_id, caller),
        expect=expect)
    return to_jsonable(done)


@router.post("/requests/{request_id}/cancel")
def cancel(request_id: str, request: Request,
           session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.request(request_id)
    done = repo.mutate(
        lambda work: exchange.cancel_request(work, request_id, caller))
    return to_jsonable(done)


@router.post("/requests/{request_id}/resolve")
def resolve(request_id: str, body: DecisionBody, request: Request,
            session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.request(request_id)
    done = repo.mutate(
        lambda work: exchange.resolve_swap(work, request_id, body.decision, caller))
    return to_jsonable(done)


# ───────────────────────── time off ─────────────────────────

@router.get("/time-off")
def list_time_off(request: Request, account: str | None = None,
                  session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    if account is None:
        if roster.is_admin(caller):
            records = list(roster.time_off.values())
        else:
            records = [t for t in roster.time_off.values()
                       if t.account == caller
                       or caller in roster.approvers_for(t.account)]
    else:
        roster.account(account)
        if (caller != account and not roster.is_admin(caller)
                and caller not in roster.approvers_for(account)):
            raise errors.Forbidden(caller, f"time off of {account}")
        records = [t for t in roster.time_off.values() if t.account == account]
    records.sort(key=lambda t: (t.interval.start, t.id))
    return to_jsonable(records)


@router.post("/time-off", status_code=201)
def file_time_off(body: TimeOffBody, request: Request,
                  session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    subject = body.account or caller
    iv = parse_interval(body.start, body.end)
    entered_by = caller if subject != caller else None
    record = repo.mutate(
        lambda work: timeoff.request_time_off(
            work, subject, iv, reason=body.reason, entered_by=entered_by))
    return to_jsonable(record)


@router.post("/time-off/{time_off_id}/resolve")
def resolve_time_off(time_off_id: str, body: DecisionBody, request: Request,
                     session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    repo.roster.one_time_off(time_off_id)
    record = repo.mutate(
        lambda work: timeoff.resolve_time_off(
            work, time_off_id, body.decision, caller))
    return to_jsonable(record)


@router.post("/time-off/import")
async def import_time_off(request: Request, account: str | None = None,
                          session: dict = Depends(require_session)):
    """Import an iCalendar file as time-off records for one account.

    The payload is the raw calendar (text/calendar). Re-importing the
    same file updates rather than duplicates.
    """
    repo = repo_of(request)
    caller = session["account"]
    subject = account or caller
    if subject != caller and not repo.roster.is_admin(caller):
        raise errors.Forbidden(caller, f"time off of {subject}")
    data = await request.body()
    _, warnings = icalmod.parse_ical(data)
    records = repo.mutate(
        lambda work: icalmod.import_ical_time_off(work, subject, data))
    return {"imported": to_jsonable(records), "warnings": warnings}


@router.get("/time-off/overlaps")
def time_off_overlaps(request: Request,
                      start: str | None = None, end: str | None = None,
                      session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    window = None
    if start is not None and end is not None:
        window = (parse_date(start, "start"), parse_date(end, "end"))
    triples = repmod.timeoff_assignment_overlaps(roster, window)
    if not roster.is_admin(caller):
        triples = [
            (acct, shift_id, to_id) for acct, shift_id, to_id in triples
            if roster.can_manage(caller, roster.shift(shift_id).schedule)
        ]
    return {
        "overlaps": [
            {"account": acct, "shift": shift_id, "time_off": to_id}
            for acct, shift_id, to_id in triples
        ]
    }


# ───────────────────────── reports ─────────────────────────

@router.get("/reports")
def report(request: Request,
           start: str = Query(...), end: str = Query(...),
           schedule: list[str] = Query(default=[]),
           account: list[str] = Query(default=[]),
           group_by: str = "",
           include_pay: bool = False,
           format: str = "json",
           session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    dims = tuple(d for d in (p.strip() for p in group_by.split(",")) if d)
    query = repmod.ReportQuery(
        date_range=(parse_date(start, "start"), parse_date(end, "end")),
        schedules=frozenset(schedule),
        accounts=frozenset(account),
        group_by=dims,
        include_pay=include_pay,
    )
    rows = repmod.run_report(roster, query, caller=caller)
    if format == "csv":
        data = repmod.export_csv(rows, group_by=dims, include_pay=include_pay)
        return Response(content=data, media_type="text/csv; charset=utf-8")
    if format != "json":
        raise errors.ValidationError([f"unknown format {format!r}"])
    out = []
    for row in rows:
        entry = dict(zip(dims, row.key))
        entry["shift_count"] = row.shift_count
        entry["total_minutes"] = row.total_minutes
        entry["understaffed_count"] = row.understaffed_count
        if include_pay:
            entry["regular_pay"] = repmod.money(row.regular_pay)
            entry["overtime_pay"] = repmod.money(row.overtime_pay)
        out.append(entry)
    return {"rows": out}


# ───────────────────────── auto-scheduler ─────────────────────────

@router.post("/autoschedule")
def run_autoschedule(body: AutoScheduleBody, request: Request,
                     session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    params = autosched.AutoScheduleParams(
        schedules=frozenset(body.schedules),
        date_range=(parse_date(body.start, "start"), parse_date(body.end, "end")),
        favorites_only=body.favorites_only,
        max_shifts_per_day=body.max_shifts_per_day,
        min_gap=body.min_gap_minutes,
        seed=body.seed,
    )

    def change(work):
        return autosched.auto_schedule(work, params, actor=caller)

    if body.preview:
        scratch = copy.deepcopy(repo.roster)
        scratch.changes = []
        result = autosched.auto_schedule(scratch, params, actor=caller)
    else:
        expect = {}
        for sid in body.schedules:
            raw = if_match_versions(request, repo, sid)
            if raw:
                expect.update(raw)
        result = repo.mutate(change, expect=expect or None)
    return {
        "preview": body.preview,
        "assignments": [
            {"shift": shift_id, "account": account_id}
            for shift_id, account_id in result.assignments
        ],
        "unfilled": list(result.unfilled),
    }


# ───────────────────────── announcements / notifications ─────────────────────────

@router.get("/announcements")
def announcements(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    return to_jsonable(ops.visible_announcements(roster, session["account"]))


@router.post("/announcements", status_code=201)
def post_announcement(body: AnnouncementBody, request: Request,
                      session: dict = Depends(require_session)):
    repo = repo_of(request)
    caller = session["account"]
    record = repo.mutate(
        lambda work: ops.post_announcement(
            work, caller, body.title, body.body, audience=body.audience))
    return to_jsonable(record)


@router.get("/notifications")
def notifications(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    caller = session["account"]
    mine = [n for n in roster.notifications.values() if n.recipient == caller]
    mine.sort(key=lambda n: (n.created_at, n.id), reverse=True)
    return to_jsonable(mine)


# ───────────────────────── opening hours ─────────────────────────

@router.get("/opening-hours")
def list_opening_hours(request: Request,
                       session: dict = Depends(require_session)):
    roster = roster_of(request)
    return to_jsonable(sorted(roster.opening_hours.values(), key=lambda c: c.id))


@router.put("/opening-hours/{calendar_id}")
def put_opening_hours(calendar_id: str, body: OpeningCalendarBody,
                      request: Request,
                      session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)

    def change(work):
        periods = [
            OpeningPeriod(
                name=p.name,
                start=parse_date(p.start, "period start"),
                end=parse_date(p.end, "period end"),
                hours={int(k): tuple(tuple(slot) for slot in v)
                       for k, v in p.hours.items()},
            )
            for p in body.periods
        ]
        overrides = {
            parse_date(k, "override date"): tuple(tuple(slot) for slot in v)
            for k, v in body.overrides.items()
        }
        record = OpeningHoursCalendar(
            id=calendar_id, periods=periods, overrides=overrides)
        work.put(record)
        return record

    return to_jsonable(repo.mutate(change))


@router.get("/opening-hours/{calendar_id}/total")
def opening_hours_total(calendar_id: str, request: Request,
                        start: str = Query(...), end: str = Query(...),
                        session: dict = Depends(require_session)):
    roster = roster_of(request)
    try:
        calendar = roster.opening_hours[calendar_id]
    except KeyError:
        raise errors.ValidationError(
            [f"no opening-hours calendar {calendar_id!r}"]) from None
    lo = parse_date(start, "start")
    hi = parse_date(end, "end")
    total, breakdown = ohmod.annual_open_hours(calendar, (lo, hi))
    return {"total_minutes": total, "breakdown": breakdown}


# ───────────────────────── system settings ─────────────────────────

@router.get("/settings")
def get_settings(request: Request, session: dict = Depends(require_session)):
    roster = roster_of(request)
    require_admin(roster, session)
    return to_jsonable(roster.settings)


@router.patch("/settings")
def patch_settings(body: SystemSettingsPatch, request: Request,
                   session: dict = Depends(require_session)):
    repo = repo_of(request)
    require_admin(repo.roster, session)

    def change(work):
        fields: dict = {}
        if body.self_time_off_enabled is not None:
            fields["self_time_off_enabled"] = body.self_time_off_enabled
        if body.time_off_requires_approval is not None:
            fields["time_off_requires_approval"] = body.time_off_requires_approval
        if body.ip_allowlist is not None:
            fields["ip_allowlist"] = tuple(body.ip_allowlist)
        if body.default_dashboard_days is not None:
            if body.default_dashboard_days < 1:
                raise errors.ValidationError(["default_dashboard_days must be >= 1"])
            fields["default_dashboard_days"] = body.default_dashboard_days
        if body.locale_default is not None:
            try:
                fields["locale_default"] = Locale(body.locale_default)
            except ValueError:
                raise errors.ValidationError(
                    [f"unsupported locale {body.locale_default!r}"]) from None
        if body.display_timezone is not None:
            fields["display_timezone"] = body.display_timezone
        updated = dataclasses.replace(work.settings, **fields)
        problems = settings_problems(updated)
        if problems:
            raise errors.ValidationError(problems)
        work.put_settings(updated)
        return updated

    return to_jsonable(repo.mutate(change))


# ───────────────────────── public (anonymous) ─────────────────────────

@router.get("/public/schedules/{schedule_id}")
def public_schedule(schedule_id: str, request: Request,
                    start: str | None = None, end: str | None = None):
    roster = roster_of(request)
    sched = roster.schedule(schedule_id)
    if not sched.is_public:
        # A retracted schedule is indistinguishable from a missing one.
        raise errors.UnknownSchedule(schedule_id)
    shifts = roster.shifts_of_schedule(schedule_id)
    if start is not None and end is not None:
        window = parse_interval(start, end)
        shifts = [s for s in shifts if s.interval.overlaps(window)]
    shifts.sort(key=lambda s: (s.interval.start, s.id))
    out = []
    for shift in shifts:
        assignees = []
        for aid in sorted(shift.assignments):
            acct = roster.accounts.get(aid)
            if acct is not None:
                assignees.append(account_public_json(acct))
        out.append({
            "id": shift.id,
            "title": shift.title,
            "start": to_jsonable(shift.interval.start),
            "end": to_jsonable(shift.interval.end),
            "understaffed": scheduler.understaffed(shift),
            "assignees": assignees,
        })
    return {"schedule": {"id": sched.id, "name": sched.name}, "shifts": out}
