"""Service-level operations behind the HTTP facade.

These functions hold the behavior the API exposes that is not already
an engine or workflow concern: dashboards, timeline assembly, week
copying, publication, grants, and announcements. They stay HTTP-free so
tests can drive them on a bare Roster.
"""

from __future__ import annotations

import dataclasses
import re
from datetime import date, datetime, timedelta, timezone

from .. import errors
from ..engine.conflicts import conflicts_for
from ..engine.quotas import blocking, check_quotas
from ..engine.scheduler import understaffed
from ..model.records import (
    Announcement,
    CopyMode,
    ElevatedRights,
    RequestState,
    Schedule,
    Shift,
)
from ..timeutil import Interval, local_date

WEEK_LABEL = re.compile(r"^(\d{4})-W(\d{2})$")


def week_monday(label: str) -> date:
    """'2021-W36' -> that ISO week's Monday."""
    match = WEEK_LABEL.match(label)
    if not match:
        raise errors.ValidationError([f"bad week label {label!r}, want YYYY-Www"])
    year, week = int(match.group(1)), int(match.group(2))
    try:
        return date.fromisocalendar(year, week, 1)
    except ValueError as exc:
        raise errors.ValidationError([str(exc)]) from None


def copy_week(roster, schedule_id: str, source_week: str, target_weeks,
              mode: CopyMode, actor: str | None = None,
              now: datetime | None = None):
    """Clone one week's shifts onto each target week.

    Clones keep weekday and wall-clock time in the display timezone.
    WithStaffChecked re-runs conflict, availability and quota checks per
    assignee and drops (reporting) the ones that fail; unchecked copies
    assignments verbatim apart from accounts that left the schedule or
    were anonymized; ShiftsOnly clones unassigned. Clones never carry a
    recurrence rule.

    Returns (created shifts, skipped list of (source shift, clone,
    account, reason)).
    """
    sched = roster.schedule(schedule_id)
    if actor is not None and not roster.can_manage(actor, schedule_id):
        raise errors.Forbidden(actor, f"copy week on {schedule_id}")
    mode = CopyMode(mode)
    tz = roster.tz

    src_monday = week_monday(source_week)
    sources = [
        s for s in roster.shifts_of_schedule(schedule_id)
        if src_monday <= local_date(s.interval.start, tz) < src_monday + timedelta(days=7)
    ]
    sources.sort(key=lambda s: (s.interval.start, s.id))
    if not sources:
        raise errors.SourceWeekEmpty(source_week)

    created = []
    skipped = []
    for target in target_weeks:
        delta = week_monday(target) - src_monday
        for shift in sources:
            local_start = shift.interval.start.astimezone(tz)
            local_end = shift.interval.end.astimezone(tz)
            iv = Interval(local_start + delta, local_end + delta)
            clone = dataclasses.replace(
                shift,
                id=roster.next_id("shift"),
                interval=iv,
                assignments=frozenset(),
                recurrence=None,
            )
            roster.put(clone)
            if mode == CopyMode.SHIFTS_ONLY:
                created.append(clone)
                continue
            kept = set()
            for account_id in sorted(shift.assignments):
                acct = roster.accounts.get(account_id)
                if acct is None or acct.anonymized or account_id not in sched.members:
                    skipped.append((shift.id, clone.id, account_id, "not a member"))
                    continue
                if mode == CopyMode.WITH_STAFF_CHECKED:
                    problems = list(conflicts_for(
                        roster, account_id, iv, schedule_id))
                    problems += blocking(check_quotas(roster, account_id, iv))
                    if problems:
                        skipped.append((
                            shift.id, clone.id, account_id,
                            "; ".join(str(p) for p in problems)))
                        continue
                kept.add(account_id)
                clone = dataclasses.replace(
                    clone, assignments=clone.assignments | {account_id})
                roster.put(clone)
            created.append(clone)
    return created, skipped


def dashboard_data(roster, account_id: str, days: int | None = None,
                   now: datetime | None = None) -> dict:
    """Personal home view: upcoming work, live requests, claimable
    shifts, and announcements, over a configurable horizon."""
    roster.account(account_id)
    horizon = days if days is not None else roster.settings.default_dashboard_days
    if horizon < 1:
        raise errors.ValidationError(["days must be >= 1"])
    now = now or datetime.now(timezone.utc).replace(second=0, microsecond=0)
    window = Interval(now, now + timedelta(days=horizon))

    mine = [
        s for s in roster.assignments_of(account_id)
        if s.interval.overlaps(window)
    ]
    mine.sort(key=lambda s: (s.interval.start, s.id))

    live = (RequestState.OPEN, RequestState.ACCEPTED, RequestState.APPROVED_PENDING)
    requests = [
        r for r in roster.requests.values()
        if r.state in live and account_id in (r.initiator, r.counterparty)
    ]
    requests.sort(key=lambda r: (r.created_at, r.id))

    claimable = []
    for sched in roster.schedules_of_member(account_id):
        if not sched.settings.claiming_enabled:
            continue
        for shift in roster.shifts_of_schedule(sched.id):
            if not shift.interval.overlaps(window) or not understaffed(shift):
                continue
            if account_id in shift.assignments:
                continue
            acct = roster.account(account_id)
            if shift.required_positions and not (
                acct.positions & shift.required_positions
            ):
                continue
            if conflicts_for(roster, account_id, shift.interval, shift.schedule):
                continue
            if blocking(check_quotas(roster, account_id, shift.interval)):
                continue
            claimable.append(shift)
    claimable.sort(key=lambda s: (s.interval.start, s.id))

    return {
        "window": window,
        "assignments": mine,
        "open_requests": requests,
        "claimable": claimable,
        "announcements": visible_announcements(roster, account_id),
    }


def timeline_view(roster, caller: str | None, schedule_ids, window: Interval,
                  filter_account: str | None = None) -> list[dict]:
    """Chronological events across schedules, one lane entry per
    (shift, assignee); unassigned shifts appear with an empty account so
    holes stay visible. Callers need membership, management rights, or a
    public schedule."""
    events = []
    for sid in sorted(schedule_ids):
        sched = roster.schedule(sid)
        allowed = (
            sched.is_public
            or (caller is not None and (
                caller in sched.members or roster.can_manage(caller, sid)))
        )
        if not allowed:
            raise errors.Forbidden(caller, f"timeline of {sid}")
        for shift in roster.shifts_of_schedule(sid):
            if not shift.interval.overlaps(window):
                continue
            lanes = sorted(shift.assignments) or [""]
            for account_id in lanes:
                if filter_account is not None and account_id != filter_account:
                    continue
                acct = roster.accounts.get(account_id)
                events.append({
                    "schedule": sid,
                    "shift": shift.id,
                    "title": shift.title,
                    "account": account_id,
                    "account_name": acct.display_name if acct else "",
                    "color": acct.color if acct else None,
                    "start": shift.interval.start,
                    "end": shift.interval.end,
                    "understaffed": understaffed(shift),
                })
    events.sort(key=lambda e: (e["start"], e["shift"], e["account"]))
    return events


def publish_schedule(roster, schedule_id: str, public: bool,
                     actor: str | None = None) -> dict:
    """Toggle anonymous read-only exposure; returns URL and embed code."""
    sched = roster.schedule(schedule_id)
    if actor is not None and not roster.can_manage(actor, schedule_id):
        raise errors.Forbidden(actor, f"publish {schedule_id}")
    updated = dataclasses.replace(sched, is_public=public)
    roster.put(updated)
    url = f"/public/schedules/{schedule_id}"
    embed = (f'<iframe src="{url}" title="{sched.name}" '
             'width="800" height="600" loading="lazy"></iframe>')
    return {"public": public, "url": url, "embed": embed}


def grant_rights(roster, schedule_id: str, account_id: str,
                 rights: ElevatedRights, actor: str | None = None) -> Schedule:
    """Store a per-schedule elevated-rights grant (Admins only).

    view_stats and approve_time_off require manage_shifts; an all-false
    grant removes the entry.
    """
    sched = roster.schedule(schedule_id)
    roster.account(account_id)
    if actor is not None and not roster.is_admin(actor):
        raise errors.Forbidden(actor, "grant rights")
    if not rights.cascade_ok():
        raise errors.CascadeViolation(
            "view_stats / approve_time_off require manage_shifts")
    if account_id not in sched.members:
        raise errors.NotMember(account_id, schedule_id)
    grants = dict(sched.grants)
    if rights.manage_shifts or rights.view_stats or rights.approve_time_off:
        grants[account_id] = rights
    else:
        grants.pop(account_id, None)
    updated = dataclasses.replace(sched, grants=grants)
    roster.put(updated)
    return updated


def post_announcement(roster, author: str, title: str, body: str,
                      audience=None, now: datetime | None = None) -> Announcement:
    if not roster.is_admin(author):
        raise errors.Forbidden(author, "post announcements")
    record = Announcement(
        id=roster.next_id("ann"),
        author=author,
        title=title,
        body=body,
        published_at=now or datetime.now(timezone.utc).replace(
            second=0, microsecond=0),
        audience=frozenset(audience) if audience is not None else None,
    )
    roster.put(record)
    return record


def visible_announcements(roster, account_id: str) -> list[Announcement]:
    """Announcements for everyone plus those aimed at the member's
    schedules; Admins see all. Newest first."""
    member_of = {s.id for s in roster.schedules_of_member(account_id)}
    out = []
    for ann in roster.announcements.values():
        if (ann.audience is None or roster.is_admin(account_id)
                or ann.audience & member_of):
            out.append(ann)
    out.sort(key=lambda a: (a.published_at, a.id), reverse=True)
    return out


def setup_checklist(roster, schedule_id: str) -> list[dict]:
    """Ordered onboarding checklist: hours, shifts, members, publish."""
    sched = roster.schedule(schedule_id)
    calendar = roster.opening_calendar_for(schedule_id)
    has_hours = calendar is not None and (
        any(p.hours for p in calendar.periods) or bool(calendar.overrides))
    return [
        {"step": "hours", "done": has_hours},
        {"step": "shifts", "done": bool(roster.shifts_of_schedule(schedule_id))},
        {"step": "members", "done": bool(sched.members)},
        {"step": "publish", "done": sched.is_public},
    ]
