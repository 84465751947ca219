"""Domain records: accounts, schedules, shifts, time off, and settings.

Records are plain dataclasses treated as immutable: operations build updated
copies with ``dataclasses.replace`` and hand them to the roster, never mutate
in place. Set-valued fields use frozenset to keep that discipline honest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum

from ..timeutil import Interval

HEX_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")

WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


class Role(str, Enum):
    ADMIN = "Admin"
    REGULAR = "Regular"


class Locale(str, Enum):
    EN = "en"
    FR = "fr"


class TimeOffState(str, Enum):
    PENDING = "Pending"
    APPROVED = "Approved"
    DENIED = "Denied"


class RequestKind(str, Enum):
    CLAIM = "Claim"
    GIVE_UP = "GiveUp"
    DROP = "Drop"
    SWAP = "Swap"


class RequestState(str, Enum):
    OPEN = "Open"
    ACCEPTED = "Accepted"
    APPROVED_PENDING = "ApprovedPending"
    COMPLETED = "Completed"
    CANCELLED = "Cancelled"
    REJECTED = "Rejected"


class CopyMode(str, Enum):
    WITH_STAFF_CHECKED = "WithStaffChecked"
    WITH_STAFF_UNCHECKED = "WithStaffUnchecked"
    SHIFTS_ONLY = "ShiftsOnly"


@dataclass
class QuotaSet:
    """Per-agent work limits; hour-type limits are stored in minutes."""

    max_consecutive_hours: int | None = None
    max_consecutive_days: int | None = None
    max_hours_per_day: int | None = None
    min_hours_per_week: int | None = None
    max_hours_per_week: int | None = None
    max_hours_per_month: int | None = None

    FIELDS = (
        "max_consecutive_hours",
        "max_consecutive_days",
        "max_hours_per_day",
        "min_hours_per_week",
        "max_hours_per_week",
        "max_hours_per_month",
    )

    def items(self):
        return [(name, getattr(self, name)) for name in self.FIELDS]


@dataclass
class PayRates:
    """Hourly rates in integer minor units (cents); threshold in minutes/week."""

    regular_rate: int
    overtime_rate: int
    weekly_overtime_threshold: int


@dataclass
class AvailabilityGrid:
    """Weekly availability: per weekday (0=Mon), sorted half-open minute-of-day
    intervals during which the account may be scheduled.

    ``days=None`` means available at all times (the default). An explicit grid
    means unlisted weekdays are unavailable.
    """

    days: dict[int, tuple[tuple[int, int], ...]] | None = None

    def always_available(self) -> bool:
        return self.days is None

    def intervals_for(self, weekday: int) -> tuple[tuple[int, int], ...]:
        if self.days is None:
            return ((0, 24 * 60),)
        return self.days.get(weekday, ())

    def covers(self, weekday: int, start_minute: int, end_minute: int) -> bool:
        """True when [start_minute, end_minute) lies inside one open slot."""
        if start_minute >= end_minute:
            return True
        for lo, hi in self.intervals_for(weekday):
            if lo <= start_minute and end_minute <= hi:
                return True
        return False


@dataclass
class Account:
    id: str
    given_name: str
    family_name: str
    email: str
    role: Role = Role.REGULAR
    positions: frozenset[str] = frozenset()
    departments: frozenset[str] = frozenset()
    locations: frozenset[str] = frozenset()
    color: str | None = None
    quotas: QuotaSet = field(default_factory=QuotaSet)
    availability: AvailabilityGrid = field(default_factory=AvailabilityGrid)
    pay: PayRates | None = None
    anonymized: bool = False

    @property
    def display_name(self) -> str:
        if self.anonymized:
            return self.given_name  # the opaque token
        return f"{self.given_name} {self.family_name}".strip()


@dataclass
class Position:
    id: str
    name: str
    default_color: str | None = None


@dataclass
class Department:
    id: str
    name: str


@dataclass
class Location:
    id: str
    name: str


@dataclass
class ElevatedRights:
    """Per-schedule manager grant; stats/time-off rights require manage_shifts."""

    manage_shifts: bool = False
    view_stats: bool = False
    approve_time_off: bool = False

    def cascade_ok(self) -> bool:
        if (self.view_stats or self.approve_time_off) and not self.manage_shifts:
            return False
        return True


@dataclass
class ScheduleSettings:
    swap_requires_approval: bool = False
    swap_enabled: bool = True
    claiming_enabled: bool = True
    give_up_enabled: bool = True
    drop_enabled: bool = True


@dataclass
class Schedule:
    id: str
    name: str
    location: str | None = None
    members: frozenset[str] = frozenset()
    is_public: bool = False
    settings: ScheduleSettings = field(default_factory=ScheduleSettings)
    grants: dict[str, ElevatedRights] = field(default_factory=dict)


@dataclass
class Recurrence:
    """Weekly repetition rule: weekday set (0=Mon) plus inclusive until-date."""

    weekdays: frozenset[int]
    until: date


@dataclass
class Shift:
    id: str
    schedule: str
    title: str
    interval: Interval
    min_staff: int = 1
    max_staff: int | None = None
    required_positions: frozenset[str] = frozenset()
    favorites: frozenset[str] = frozenset()
    assignments: frozenset[str] = frozenset()
    recurrence: Recurrence | None = None
    work_from_home: bool = False


@dataclass
class TimeOff:
    id: str
    account: str
    interval: Interval
    reason: str = ""
    state: TimeOffState = TimeOffState.PENDING


@dataclass
class SystemSettings:
    self_time_off_enabled: bool = True
    time_off_requires_approval: bool = True
    ip_allowlist: tuple[str, ...] = ()
    default_dashboard_days: int = 7
    locale_default: Locale = Locale.EN
    display_timezone: str = "UTC"


@dataclass
class OpeningPeriod:
    """Named date range [start, end) with a weekly grid of open intervals."""

    name: str
    start: date
    end: date
    hours: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)


@dataclass
class OpeningHoursCalendar:
    id: str
    periods: list[OpeningPeriod] = field(default_factory=list)
    overrides: dict[date, tuple[tuple[int, int], ...]] = field(default_factory=dict)

    def open_intervals(self, day: date) -> tuple[tuple[int, int], ...]:
        """Minute-of-day open slots for a date; overrides beat period rules."""
        if day in self.overrides:
            return self.overrides[day]
        for period in self.periods:
            if period.start <= day < period.end:
                return period.hours.get(day.weekday(), ())
        return ()


@dataclass
class ExchangeRequest:
    """One claim / give-up / drop / swap workflow instance."""

    id: str
    kind: RequestKind
    shift: str
    initiator: str
    created_at: datetime
    counterparty: str | None = None
    counter_shift: str | None = None
    state: RequestState = RequestState.OPEN


@dataclass
class Notification:
    id: str
    recipient: str
    template: str
    locale: Locale
    payload: dict[str, str]
    created_at: datetime
    channel: str = "Email"
    delivered: bool = False


@dataclass
class Announcement:
    id: str
    author: str
    title: str
    body: str
    published_at: datetime
    audience: frozenset[str] | None = None  # None = everyone
