from .records import (
    Account,
    Announcement,
    AvailabilityGrid,
    CopyMode,
    Department,
    ElevatedRights,
    ExchangeRequest,
    Locale,
    Location,
    Notification,
    OpeningHoursCalendar,
    OpeningPeriod,
    PayRates,
    Position,
    QuotaSet,
    Recurrence,
    RequestKind,
    RequestState,
    Role,
    Schedule,
    ScheduleSettings,
    Shift,
    SystemSettings,
    TimeOff,
    TimeOffState,
    WEEKDAY_NAMES,
)
from .roster import Roster
from .validation import anonymize_account, apply_position_color, validate_account
from .invariants import verify_roster

__all__ = [
    "Account", "Announcement", "AvailabilityGrid", "CopyMode", "Department",
    "ElevatedRights", "ExchangeRequest", "Locale", "Location", "Notification",
    "OpeningHoursCalendar", "OpeningPeriod", "PayRates", "Position", "QuotaSet",
    "Recurrence", "RequestKind", "RequestState", "Role", "Roster", "Schedule",
    "ScheduleSettings", "Shift", "SystemSettings", "TimeOff", "TimeOffState",
    "WEEKDAY_NAMES", "anonymize_account", "apply_position_color",
    "validate_account", "verify_roster",
]
