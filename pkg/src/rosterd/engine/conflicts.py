"""Conflict detection for a proposed assignment interval.

A conflict is anything that should block handing the interval to the
account: an overlapping assignment (same or other schedule), approved
time off, an external calendar event, or a slice of the interval
falling outside the account's availability grid. Intervals are
half-open, so back-to-back shifts never conflict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..model.records import TimeOffState
from ..timeutil import Interval, local_day_segments


class ConflictKind(str, Enum):
    OVERLAP_SAME_SCHEDULE = "OverlapSameSchedule"
    OVERLAP_OTHER_SCHEDULE = "OverlapOtherSchedule"
    EXTERNAL_CALENDAR_EVENT = "ExternalCalendarEvent"
    TIME_OFF_OVERLAP = "TimeOffOverlap"
    OUTSIDE_AVAILABILITY = "OutsideAvailability"


@dataclass(frozen=True)
class ConflictReport:
    kind: ConflictKind
    other: str = ""


@dataclass(frozen=True)
class ExternalEvent:
    """One busy block read from somebody's external calendar."""

    uid: str
    summary: str
    interval: Interval


def conflicts_for(
    roster,
    account_id: str,
    iv: Interval,
    schedule_id: str | None = None,
    exclude_shifts: frozenset[str] = frozenset(),
    external_events=(),
) -> list[ConflictReport]:
    """Every reason the account cannot take ``iv``.

    ``schedule_id`` is the schedule the proposal belongs to, used only
    to classify assignment overlaps as same- or other-schedule.
    ``exclude_shifts`` removes assignments from consideration, which
    swap evaluation uses to ignore the slot being traded away.
    """
    reports: list[ConflictReport] = []

    for shift in roster.assignments_of(account_id):
        if shift.id in exclude_shifts:
            continue
        if not shift.interval.overlaps(iv):
            continue
        if schedule_id is not None and shift.schedule == schedule_id:
            kind = ConflictKind.OVERLAP_SAME_SCHEDULE
        else:
            kind = ConflictKind.OVERLAP_OTHER_SCHEDULE
        reports.append(ConflictReport(
            kind, f"shift {shift.id} {shift.interval} in {shift.schedule}"))

    for t in roster.time_off.values():
        if t.account != account_id or t.state != TimeOffState.APPROVED:
            continue
        if t.interval.overlaps(iv):
            reports.append(ConflictReport(
                ConflictKind.TIME_OFF_OVERLAP, f"time off {t.id} {t.interval}"))

    acct = roster.accounts.get(account_id)
    if acct is not None and not acct.availability.always_available():
        for day, lo, hi in local_day_segments(iv, roster.tz):
            if not acct.availability.covers(day.weekday(), lo, hi):
                reports.append(ConflictReport(
                    ConflictKind.OUTSIDE_AVAILABILITY,
                    f"{day.isoformat()} {lo // 60:02d}:{lo % 60:02d}-"
                    f"{hi // 60:02d}:{hi % 60:02d} not in availability",
                ))

    for event in external_events:
        if event.interval.overlaps(iv):
            reports.append(ConflictReport(
                ConflictKind.EXTERNAL_CALENDAR_EVENT,
                f"{event.summary or event.uid} {event.interval}",
            ))

    return reports
