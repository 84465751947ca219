"""Record- and roster-level invariant checks.

``verify_roster`` is the repository-wide hook the test suite runs after
operations: it raises InvariantViolation naming the offending entity.
"""

from __future__ import annotations

import ipaddress

from ..errors import InvariantViolation
from .records import (
    Account,
    AvailabilityGrid,
    HEX_COLOR,
    OpeningHoursCalendar,
    PayRates,
    QuotaSet,
    RequestState,
    Role,
    Schedule,
    Shift,
    SystemSettings,
    TimeOff,
)


def quota_problems(q: QuotaSet) -> list[str]:
    out = []
    for name, value in q.items():
        if value is not None and value <= 0:
            out.append(f"{name} must be strictly positive, got {value}")
    if (
        q.min_hours_per_week is not None
        and q.max_hours_per_week is not None
        and q.min_hours_per_week > q.max_hours_per_week
    ):
        out.append(
            f"min_hours_per_week {q.min_hours_per_week} exceeds "
            f"max_hours_per_week {q.max_hours_per_week}"
        )
    return out


def pay_problems(p: PayRates) -> list[str]:
    out = []
    if p.regular_rate < 0 or p.overtime_rate < 0:
        out.append("pay rates must be >= 0")
    if p.weekly_overtime_threshold <= 0:
        out.append("weekly_overtime_threshold must be > 0")
    return out


def grid_problems(g: AvailabilityGrid) -> list[str]:
    out = []
    if g.days is None:
        return out
    for weekday, slots in g.days.items():
        if not 0 <= weekday <= 6:
            out.append(f"weekday {weekday} out of range")
            continue
        prev_end = -1
        for lo, hi in slots:
            if not (0 <= lo < hi <= 24 * 60):
                out.append(f"weekday {weekday}: bad slot [{lo}, {hi})")
            if lo < prev_end:
                out.append(f"weekday {weekday}: slots overlap or are unsorted")
            prev_end = hi
    return out


def account_problems(acct: Account) -> list[str]:
    out = []
    if acct.color is not None and not HEX_COLOR.match(acct.color):
        out.append(f"color {acct.color!r} is not #RRGGBB")
    out.extend(quota_problems(acct.quotas))
    out.extend(grid_problems(acct.availability))
    if acct.pay is not None:
        out.extend(pay_problems(acct.pay))
    if acct.anonymized:
        if not (acct.given_name and acct.given_name == acct.family_name == acct.email):
            out.append("anonymized account must carry a single opaque token")
    return out


def shift_problems(shift: Shift, roster=None) -> list[str]:
    out = []
    if shift.interval.start >= shift.interval.end:
        out.append("shift interval is empty or reversed")
    if shift.min_staff < 0:
        out.append("min_staff must be >= 0")
    if shift.max_staff is not None and len(shift.assignments) > shift.max_staff:
        out.append("assignments exceed max_staff")
    if roster is not None:
        sched = roster.schedules.get(shift.schedule)
        if sched is None:
            out.append(f"schedule {shift.schedule} does not exist")
        else:
            for aid in shift.assignments:
                acct = roster.accounts.get(aid)
                if acct is None:
                    out.append(f"assignee {aid} does not exist")
                elif aid not in sched.members and not acct.anonymized:
                    # anonymized accounts keep historical assignments after
                    # losing membership; everyone else must be a member
                    out.append(f"assignee {aid} is not a member of {sched.id}")
                if (
                    acct is not None
                    and shift.required_positions
                    and not (acct.positions & shift.required_positions)
                ):
                    out.append(f"assignee {aid} holds no required position")
    return out


def schedule_problems(sched: Schedule, roster=None) -> list[str]:
    out = []
    for aid, grant in sched.grants.items():
        if aid not in sched.members:
            out.append(f"grant for non-member {aid}")
        if not grant.cascade_ok():
            out.append(f"grant for {aid} violates the rights cascade")
    if roster is not None:
        for aid in sched.members:
            if aid not in roster.accounts:
                out.append(f"member {aid} does not exist")
    return out


def time_off_problems(t: TimeOff) -> list[str]:
    out = []
    if t.interval.start >= t.interval.end:
        out.append("time-off interval is empty or reversed")
    return out


def settings_problems(s: SystemSettings) -> list[str]:
    out = []
    if s.default_dashboard_days < 1:
        out.append("default_dashboard_days must be >= 1")
    for cidr in s.ip_allowlist:
        try:
            ipaddress.ip_network(cidr)
        except ValueError:
            out.append(f"bad CIDR range {cidr!r}")
    return out


def calendar_problems(cal: OpeningHoursCalendar) -> list[str]:
    out = []
    spans = sorted((p.start, p.end, p.name) for p in cal.periods)
    for (s1, e1, n1), (s2, e2, n2) in zip(spans, spans[1:]):
        if s2 < e1:
            out.append(f"periods {n1!r} and {n2!r} overlap")
    for period in cal.periods:
        if period.start >= period.end:
            out.append(f"period {period.name!r} has an empty date range")
        for weekday, slots in period.hours.items():
            prev = -1
            for lo, hi in slots:
                if not (0 <= lo < hi <= 24 * 60) or lo < prev:
                    out.append(f"period {period.name!r} weekday {weekday}: bad slots")
                prev = hi
    for day, slots in cal.overrides.items():
        prev = -1
        for lo, hi in slots:
            if not (0 <= lo < hi <= 24 * 60) or lo < prev:
                out.append(f"override {day}: bad slots")
            prev = hi
    return out


def verify_roster(roster) -> None:
    """Raise InvariantViolation on the first broken invariant found."""

    def fail(path, problems):
        if problems:
            raise InvariantViolation(path, "; ".join(problems))

    emails = {}
    for acct in roster.accounts.values():
        fail(f"account:{acct.id}", account_problems(acct))
        if not acct.anonymized:
            if acct.email in emails:
                fail(f"account:{acct.id}", [f"duplicate email {acct.email}"])
            emails[acct.email] = acct.id

    for kind, table in (("position", roster.positions),
                        ("department", roster.departments),
                        ("location", roster.locations)):
        names = {}
        for rec in table.values():
            if rec.name in names:
                fail(f"{kind}:{rec.id}", [f"duplicate name {rec.name!r}"])
            names[rec.name] = rec.id

    for sched in roster.schedules.values():
        fail(f"schedule:{sched.id}", schedule_problems(sched, roster))

    for shift in roster.shifts.values():
        fail(f"shift:{shift.id}", shift_problems(shift, roster))

    for t in roster.time_off.values():
        fail(f"time_off:{t.id}", time_off_problems(t))

    live = {}
    for req in roster.requests.values():
        if req.state in (RequestState.OPEN, RequestState.ACCEPTED):
            key = (req.shift, req.kind, req.initiator)
            if key in live:
                fail(f"request:{req.id}", [f"duplicate live request {key}"])
            live[key] = req.id

    for ann in roster.announcements.values():
        author = roster.accounts.get(ann.author)
        if author is None or author.role != Role.ADMIN:
            fail(f"announcement:{ann.id}", ["author is not an Admin"])

    for cal in roster.opening_hours.values():
        fail(f"opening_hours:{cal.id}", calendar_problems(cal))

    fail("settings:system", settings_problems(roster.settings))
