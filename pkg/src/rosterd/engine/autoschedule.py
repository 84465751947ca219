"""Deterministic greedy auto-scheduler.

Understaffed shifts are visited in chronological order (ties by shift
id). Each open slot goes to the first candidate under the ordering:
favorites before non-favorites, then fewest minutes already assigned
inside the date range (counting picks made earlier in this run), then
account id. A candidate is skipped on any conflict, blocking quota
violation, availability miss, per-day shift cap breach, or minimum-gap
breach. With favorites_only set, non-favorites are never considered and
a shift may simply stay unfilled.

The seed field is reserved for a future randomized mode; the current
algorithm never consults it, so identical state and params always
produce the identical delta.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from datetime import date

from .. import errors
from ..timeutil import local_date
from .conflicts import conflicts_for
from .quotas import blocking, check_quotas
from .scheduler import understaffed


@dataclass(frozen=True)
class AutoScheduleParams:
    schedules: frozenset[str]
    date_range: tuple[date, date]
    favorites_only: bool = False
    max_shifts_per_day: int | None = None
    min_gap: int | None = None
    seed: int = 0


@dataclass
class AutoScheduleResult:
    assignments: list[tuple[str, str]]
    unfilled: list[str]


def _validate(roster, params: AutoScheduleParams, actor: str | None) -> None:
    if not params.schedules:
        raise errors.ValidationError(["schedules must be a non-empty set"])
    start, end = params.date_range
    if start >= end:
        raise errors.EmptyRange(start, end)
    if params.max_shifts_per_day is not None and params.max_shifts_per_day < 1:
        raise errors.ValidationError(["max_shifts_per_day must be >= 1"])
    for sid in params.schedules:
        roster.schedule(sid)
        if actor is not None and not roster.can_manage(actor, sid):
            raise errors.Forbidden(actor, f"auto-schedule {sid}")


def _range_minutes(roster, account_id: str, params: AutoScheduleParams) -> int:
    tz = roster.tz
    start, end = params.date_range
    return sum(
        s.interval.minutes
        for s in roster.assignments_of(account_id)
        if start <= local_date(s.interval.start, tz) < end
    )


def _gap_breach(roster, account_id: str, shift, min_gap: int) -> bool:
    for other in roster.assignments_of(account_id):
        if other.interval.overlaps(shift.interval):
            continue
        if other.interval.end <= shift.interval.start:
            gap = (shift.interval.start - other.interval.end).total_seconds() // 60
        else:
            gap = (other.interval.start - shift.interval.end).total_seconds() // 60
        if gap < min_gap:
            return True
    return False


def _day_cap_breach(roster, account_id: str, shift, cap: int) -> bool:
    tz = roster.tz
    day = local_date(shift.interval.start, tz)
    count = sum(
        1 for s in roster.assignments_of(account_id)
        if local_date(s.interval.start, tz) == day
    )
    return count >= cap


def auto_schedule(roster, params: AutoScheduleParams,
                  actor: str | None = None) -> AutoScheduleResult:
    """Fill understaffed shifts in range; returns the delta made.

    Mutates the given roster snapshot as it goes, so every pick sees
    the ones before it; callers wanting a preview run this on a copy.
    """
    _validate(roster, params, actor)
    tz = roster.tz
    start, end = params.date_range

    pool = [
        s for sid in params.schedules for s in roster.shifts_of_schedule(sid)
        if start <= local_date(s.interval.start, tz) < end and understaffed(s)
    ]
    pool.sort(key=lambda s: (s.interval.start, s.id))

    made: list[tuple[str, str]] = []
    unfilled: list[str] = []

    for shift in pool:
        sched = roster.schedule(shift.schedule)
        current = shift
        while understaffed(current):
            if current.max_staff is not None and \
                    len(current.assignments) >= current.max_staff:
                break
            names = current.favorites if params.favorites_only else sched.members
            candidates = []
            for account_id in sorted(names):
                if account_id not in sched.members or account_id in current.assignments:
                    continue
                acct = roster.accounts.get(account_id)
                if acct is None or acct.anonymized:
                    continue
                if current.required_positions and not (
                    acct.positions & current.required_positions
                ):
                    continue
                candidates.append(account_id)
            candidates.sort(key=lambda a: (
                a not in current.favorites,
                _range_minutes(roster, a, params),
                a,
            ))

            pick = None
            for account_id in candidates:
                if conflicts_for(roster, account_id, current.interval, current.schedule):
                    continue
                if blocking(check_quotas(roster, account_id, current.interval)):
                    continue
                if params.max_shifts_per_day is not None and _day_cap_breach(
                    roster, account_id, current, params.max_shifts_per_day
                ):
                    continue
                if params.min_gap is not None and _gap_breach(
                    roster, account_id, current, params.min_gap
                ):
                    continue
                pick = account_id
                break

            if pick is None:
                break
            current = dataclasses.replace(
                current, assignments=current.assignments | {pick})
            roster.put(current)
            made.append((current.id, pick))

        if understaffed(current):
            unfilled.append(current.id)

    return AutoScheduleResult(assignments=made, unfilled=unfilled)
