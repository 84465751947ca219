"""Assignment legality: eligibility listing, assign/unassign, splitting.

All functions operate on a Roster snapshot and stage changes through it.
force=true lets a shift manager override conflicts and quota breaches
for one shift instance; it never overrides the position requirement,
membership, max_staff, or the anonymized-account bar, and recurrence
expansion never inherits it.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from datetime import datetime, timedelta

from .. import errors
from ..model.records import Shift
from ..timeutil import Interval, ensure_utc_minute, local_date
from .conflicts import ConflictReport, conflicts_for
from .quotas import QuotaViolation, blocking, check_quotas


@dataclass(frozen=True)
class Candidate:
    account: str
    conflicts: tuple[ConflictReport, ...]
    violations: tuple[QuotaViolation, ...]
    selectable: bool
    favorite: bool


def understaffed(shift: Shift) -> bool:
    return len(shift.assignments) < shift.min_staff


def assigned_week_minutes(roster, account_id: str, week) -> int:
    """Minutes of the account's assignments starting in the ISO week."""
    tz = roster.tz
    return sum(
        s.interval.minutes
        for s in roster.assignments_of(account_id)
        if local_date(s.interval.start, tz).isocalendar()[:2] == week
    )


def eligible_accounts(roster, shift_id: str, force: bool = False) -> list[Candidate]:
    """Members who could take the shift, best candidate first.

    Ordering: favorites, then fewest assigned minutes in the shift's ISO
    week, then account id. Entries carry their conflict reports and
    quota violations; without force, any report or blocking violation
    makes the entry non-selectable.
    """
    shift = roster.shift(shift_id)
    sched = roster.schedule(shift.schedule)
    week = local_date(shift.interval.start, roster.tz).isocalendar()[:2]

    out = []
    for account_id in sched.members:
        acct = roster.account(account_id)
        if acct.anonymized or account_id in shift.assignments:
            continue
        if shift.required_positions and not (acct.positions & shift.required_positions):
            continue
        reports = conflicts_for(roster, account_id, shift.interval, shift.schedule)
        violations = check_quotas(roster, account_id, shift.interval)
        selectable = force or (not reports and not blocking(violations))
        out.append(Candidate(
            account=account_id,
            conflicts=tuple(reports),
            violations=tuple(violations),
            selectable=selectable,
            favorite=account_id in shift.favorites,
        ))

    out.sort(key=lambda c: (
        not c.favorite,
        assigned_week_minutes(roster, c.account, week),
        c.account,
    ))
    return out


def assign(roster, shift_id: str, account_id: str, force: bool = False,
           actor: str | None = None) -> Shift:
    """Add the account to the shift, or refuse with the full reason."""
    shift = roster.shift(shift_id)
    acct = roster.account(account_id)
    sched = roster.schedule(shift.schedule)

    if account_id in shift.assignments:
        return shift
    if account_id not in sched.members:
        raise errors.NotMember(account_id, sched.id)
    if acct.anonymized:
        raise errors.AccountAnonymized(account_id)
    if shift.required_positions and not (acct.positions & shift.required_positions):
        raise errors.NotEligiblePosition(account_id, shift_id)
    if shift.max_staff is not None and len(shift.assignments) >= shift.max_staff:
        raise errors.MaxStaffReached(shift_id, shift.max_staff)
    if force and actor is not None and not roster.can_manage(actor, sched.id):
        raise errors.ForbiddenForce(actor)

    reports = conflicts_for(roster, account_id, shift.interval, shift.schedule)
    if reports and not force:
        raise errors.ConflictRefused(reports)
    violations = blocking(check_quotas(roster, account_id, shift.interval))
    if violations and not force:
        raise errors.QuotaRefused(violations)

    updated = dataclasses.replace(
        shift, assignments=shift.assignments | {account_id})
    roster.put(updated)
    return updated


def unassign(roster, shift_id: str, account_id: str) -> Shift:
    shift = roster.shift(shift_id)
    if account_id not in shift.assignments:
        raise errors.NotAssigned(account_id, shift_id)
    updated = dataclasses.replace(
        shift, assignments=shift.assignments - {account_id})
    roster.put(updated)
    return updated


def split_shift(roster, shift_id: str, at: datetime) -> tuple[Shift, Shift]:
    """Cut one shift into two contiguous parts at ``at``.

    Both parts keep the assignments, staffing bounds, positions and
    favorites of the original; the original id is retired.
    """
    shift = roster.shift(shift_id)
    at = ensure_utc_minute(at, "split point")
    if not (shift.interval.start < at < shift.interval.end):
        raise errors.SplitOutOfRange(shift_id, at)

    def part(suffix: str, iv: Interval) -> Shift:
        new_id = f"{shift.id}{suffix}"
        if new_id in roster.shifts:
            new_id = roster.next_id("shift")
        return dataclasses.replace(shift, id=new_id, interval=iv)

    first = part("-a", Interval(shift.interval.start, at))
    second = part("-b", Interval(at, shift.interval.end))
    roster.apply(puts=[first, second], deletes=[shift])
    return first, second


def expand_recurring_shift(roster, shift_id: str):
    """Materialize a weekly recurrence into concrete shifts.

    Occurrences land on each rule weekday strictly after the template's
    local date, through the until-date inclusive, preserving the
    template's local wall-clock time. Assignments are copied per
    occurrence only where they pass the normal checks (never forced);
    refusals are reported, not applied.

    Returns (created shifts, skip list of (date, account, reports)).
    """
    shift = roster.shift(shift_id)
    if shift.recurrence is None:
        return [], []
    tz = roster.tz
    local_start = shift.interval.start.astimezone(tz)
    duration = shift.interval.end - shift.interval.start
    first_day = local_start.date()

    created = []
    skipped = []
    day = first_day + timedelta(days=1)
    while day <= shift.recurrence.until:
        if day.weekday() in shift.recurrence.weekdays:
            start = local_start.replace(year=day.year, month=day.month, day=day.day)
            iv = Interval(start, start + duration)
            clone = dataclasses.replace(
                shift,
                id=roster.next_id("shift"),
                interval=iv,
                assignments=frozenset(),
                recurrence=None,
            )
            roster.put(clone)
            for account_id in sorted(shift.assignments):
                reports = conflicts_for(roster, account_id, iv, shift.schedule)
                violations = blocking(check_quotas(roster, account_id, iv))
                if reports or violations:
                    skipped.append((day, account_id, tuple(reports) + tuple(violations)))
                    continue
                clone = dataclasses.replace(
                    clone, assignments=clone.assignments | {account_id})
                roster.put(clone)
            created.append(clone)
        day += timedelta(days=1)
    return created, skipped
