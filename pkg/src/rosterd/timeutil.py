"""Minute-resolution UTC time primitives and half-open interval math.

All stored timestamps are timezone-aware UTC on whole minutes. Intervals are
half-open [start, end): two intervals touching at a boundary do not overlap,
so back-to-back shifts are legal.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from zoneinfo import ZoneInfo

UTC = timezone.utc


def ensure_utc_minute(dt: datetime, what: str = "timestamp") -> datetime:
    """Normalize to UTC and reject anything below minute resolution."""
    if dt.tzinfo is None:
        raise ValueError(f"{what} must be timezone-aware")
    dt = dt.astimezone(UTC)
    if dt.second or dt.microsecond:
        raise ValueError(f"{what} must fall on a whole minute")
    return dt


@dataclass(frozen=True)
class Interval:
    """Half-open [start, end) pair of UTC timestamps at minute resolution."""

    start: datetime
    end: datetime

    def __post_init__(self):
        object.__setattr__(self, "start", ensure_utc_minute(self.start, "start"))
        object.__setattr__(self, "end", ensure_utc_minute(self.end, "end"))

    @property
    def minutes(self) -> int:
        return int((self.end - self.start).total_seconds() // 60)

    def overlaps(self, other: "Interval") -> bool:
        return self.start < other.end and other.start < self.end

    def overlap_minutes(self, other: "Interval") -> int:
        lo = max(self.start, other.start)
        hi = min(self.end, other.end)
        return max(0, int((hi - lo).total_seconds() // 60))

    def contains(self, dt: datetime) -> bool:
        return self.start <= dt < self.end

    def __str__(self) -> str:
        return f"[{self.start.isoformat()} .. {self.end.isoformat()})"


def interval(start: datetime, end: datetime) -> Interval:
    return Interval(start, end)


def tzinfo_of(name: str) -> ZoneInfo:
    return ZoneInfo(name)


def local_date(dt: datetime, tz: ZoneInfo) -> date:
    return dt.astimezone(tz).date()


def day_bounds(day: date, tz: ZoneInfo) -> Interval:
    """UTC interval covering one local calendar date."""
    start = datetime(day.year, day.month, day.day, tzinfo=tz)
    end = start + timedelta(days=1)
    return Interval(start.astimezone(UTC), end.astimezone(UTC))


def week_bounds(day: date, tz: ZoneInfo) -> Interval:
    """UTC interval covering the ISO week (Mon..Mon) containing ``day``."""
    monday = day - timedelta(days=day.weekday())
    start = datetime(monday.year, monday.month, monday.day, tzinfo=tz)
    end = start + timedelta(days=7)
    return Interval(start.astimezone(UTC), end.astimezone(UTC))


def month_bounds(day: date, tz: ZoneInfo) -> Interval:
    """UTC interval covering the calendar month containing ``day``."""
    start = datetime(day.year, day.month, 1, tzinfo=tz)
    if day.month == 12:
        end = datetime(day.year + 1, 1, 1, tzinfo=tz)
    else:
        end = datetime(day.year, day.month + 1, 1, tzinfo=tz)
    return Interval(start.astimezone(UTC), end.astimezone(UTC))


def local_days_touched(iv: Interval, tz: ZoneInfo):
    """Yield (date, minutes-of-iv-on-that-date) for each local day iv touches."""
    day = local_date(iv.start, tz)
    last = local_date(iv.end - timedelta(minutes=1), tz)
    while day <= last:
        sliced = iv.overlap_minutes(day_bounds(day, tz))
        if sliced:
            yield day, sliced
        day += timedelta(days=1)


def local_day_segments(iv: Interval, tz: ZoneInfo):
    """Yield (date, start_minute, end_minute) wall-clock slices of iv.

    An interval crossing local midnight yields one slice per touched date;
    a slice ending exactly at the next midnight reports end_minute 1440.
    """
    cursor = iv.start
    while cursor < iv.end:
        day = local_date(cursor, tz)
        bounds = day_bounds(day, tz)
        seg_end = min(iv.end, bounds.end)
        local_start = cursor.astimezone(tz)
        local_end = seg_end.astimezone(tz)
        lo = local_start.hour * 60 + local_start.minute
        if seg_end == bounds.end:
            hi = 24 * 60
        else:
            hi = local_end.hour * 60 + local_end.minute
        yield day, lo, hi
        cursor = seg_end


def iso_week_label(day: date) -> str:
    iso = day.isocalendar()
    return f"{iso[0]}-W{iso[1]:02d}"


def month_label(day: date) -> str:
    return f"{day.year}-{day.month:02d}"


def parse_hhmm(text: str) -> int:
    """'08:30' -> minutes since local midnight; '24:00' allowed as day end."""
    hh, _, mm = text.partition(":")
    h, m = int(hh), int(mm)
    if not (0 <= h <= 24 and 0 <= m < 60) or (h == 24 and m != 0):
        raise ValueError(f"bad time of day: {text!r}")
    return h * 60 + m


def fmt_hhmm(minute: int) -> str:
    return f"{minute // 60:02d}:{minute % 60:02d}"


def date_range_days(start: date, end: date):
    """Dates of the half-open [start, end)."""
    d = start
    while d < end:
        yield d
        d += timedelta(days=1)
