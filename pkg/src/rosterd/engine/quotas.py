"""Quota evaluation: the six per-agent limits against a proposed interval.

Quotas are global per agent, never per schedule: minutes from every
schedule count toward the same limits. A "day" is the calendar date of
the shift's start in the display timezone, so an overnight shift counts
wholly toward the day it starts.

min_hours_per_week is advisory: a minimum cannot be violated by adding
work, so its violation carries advisory=True and never blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta

from ..timeutil import Interval, local_date


@dataclass(frozen=True)
class QuotaViolation:
    which: str
    limit: int
    would_be: int
    advisory: bool = False


def blocking(violations) -> list:
    return [v for v in violations if not v.advisory]


def check_quotas(roster, account_id: str, proposal: Interval, extra=(),
                 exclude_shifts: frozenset = frozenset()) -> list[QuotaViolation]:
    """All quota violations the proposal would create, advisory included.

    ``extra`` is additional (not yet stored) intervals already granted
    to the account; ``exclude_shifts`` drops stored assignments from the
    baseline, which swap evaluation uses for the slot being traded away.
    """
    acct = roster.accounts.get(account_id)
    if acct is None:
        return []
    q = acct.quotas
    if all(value is None for _, value in q.items()):
        return []

    tz = roster.tz
    existing = [
        s.interval for s in roster.assignments_of(account_id)
        if s.id not in exclude_shifts
    ]
    existing.extend(extra)
    out: list[QuotaViolation] = []

    p_day = local_date(proposal.start, tz)

    if q.max_hours_per_day is not None:
        total = proposal.minutes + sum(
            iv.minutes for iv in existing if local_date(iv.start, tz) == p_day
        )
        if total > q.max_hours_per_day:
            out.append(QuotaViolation("max_hours_per_day", q.max_hours_per_day, total))

    p_week = p_day.isocalendar()[:2]
    week_total = proposal.minutes + sum(
        iv.minutes for iv in existing
        if local_date(iv.start, tz).isocalendar()[:2] == p_week
    )
    if q.max_hours_per_week is not None and week_total > q.max_hours_per_week:
        out.append(QuotaViolation("max_hours_per_week", q.max_hours_per_week, week_total))
    if q.min_hours_per_week is not None and week_total < q.min_hours_per_week:
        out.append(QuotaViolation(
            "min_hours_per_week", q.min_hours_per_week, week_total, advisory=True))

    if q.max_hours_per_month is not None:
        p_month = (p_day.year, p_day.month)
        total = proposal.minutes + sum(
            iv.minutes for iv in existing
            if (local_date(iv.start, tz).year, local_date(iv.start, tz).month) == p_month
        )
        if total > q.max_hours_per_month:
            out.append(QuotaViolation("max_hours_per_month", q.max_hours_per_month, total))

    if q.max_consecutive_hours is not None:
        run = _merged_run_minutes(existing + [proposal], proposal)
        if run > q.max_consecutive_hours:
            out.append(QuotaViolation("max_consecutive_hours", q.max_consecutive_hours, run))

    if q.max_consecutive_days is not None:
        days = {local_date(iv.start, tz) for iv in existing}
        days.add(p_day)
        run = 1
        d = p_day - timedelta(days=1)
        while d in days:
            run += 1
            d -= timedelta(days=1)
        d = p_day + timedelta(days=1)
        while d in days:
            run += 1
            d += timedelta(days=1)
        if run > q.max_consecutive_days:
            out.append(QuotaViolation("max_consecutive_days", q.max_consecutive_days, run))

    return out


def _merged_run_minutes(intervals, proposal: Interval) -> int:
    """Length of the contiguous block containing the proposal.

    Back-to-back intervals (end of one equals start of the next) merge:
    half-open adjacency means the agent never stops working.
    """
    spans = sorted((iv.start, iv.end) for iv in intervals)
    merged = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    for start, end in merged:
        if start <= proposal.start and proposal.end <= end:
            return int((end - start).total_seconds() // 60)
    return proposal.minutes
