"""Opening-hours arithmetic over period grids and per-date overrides.

The calendar is an informational overlay: it never blocks scheduling.
Totals walk the range date by date; an override replaces the whole
day's slots before any period rule is consulted.
"""

from __future__ import annotations

from datetime import date

from ..model.records import OpeningHoursCalendar
from ..timeutil import date_range_days


def _slot_minutes(slots) -> int:
    return sum(hi - lo for lo, hi in slots)


def annual_open_hours(calendar: OpeningHoursCalendar,
                      date_range: tuple[date, date]) -> tuple[int, dict[str, int]]:
    """Total open minutes over [start, end), plus a per-period breakdown.

    Minutes from override dates count toward the period containing the
    date; override dates outside every period land in "exceptions".
    """
    start, end = date_range
    total = 0
    breakdown: dict[str, int] = {}
    for day in date_range_days(start, end):
        minutes = _slot_minutes(calendar.open_intervals(day))
        if not minutes:
            continue
        bucket = "exceptions"
        for period in calendar.periods:
            if period.start <= day < period.end:
                bucket = period.name
                break
        total += minutes
        breakdown[bucket] = breakdown.get(bucket, 0) + minutes
    return total, breakdown
