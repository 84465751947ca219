"""In-memory roster state: every stored record plus indexed lookups.

A Roster is the snapshot the engine and the workflows operate on. Mutating
operations stage replacement records and commit them through ``apply`` in one
step, so a failed check can never leave partial state behind. The service
layer persists the change log; pure tests use the roster directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from zoneinfo import ZoneInfo

from .. import errors
from .records import (
    Account,
    Announcement,
    Department,
    ElevatedRights,
    ExchangeRequest,
    Location,
    Notification,
    OpeningHoursCalendar,
    Position,
    Role,
    Schedule,
    Shift,
    SystemSettings,
    TimeOff,
    TimeOffState,
)

KIND_OF = {
    Account: "account",
    Schedule: "schedule",
    Shift: "shift",
    TimeOff: "time_off",
    ExchangeRequest: "request",
    Position: "position",
    Department: "department",
    Location: "location",
    Notification: "notification",
    Announcement: "announcement",
    OpeningHoursCalendar: "opening_hours",
}


@dataclass
class Roster:
    accounts: dict = field(default_factory=dict)
    schedules: dict = field(default_factory=dict)
    shifts: dict = field(default_factory=dict)
    time_off: dict = field(default_factory=dict)
    requests: dict = field(default_factory=dict)
    positions: dict = field(default_factory=dict)
    departments: dict = field(default_factory=dict)
    locations: dict = field(default_factory=dict)
    notifications: dict = field(default_factory=dict)
    announcements: dict = field(default_factory=dict)
    opening_hours: dict = field(default_factory=dict)
    settings: SystemSettings = field(default_factory=SystemSettings)
    changes: list = field(default_factory=list)  # ("put"|"delete", kind, id)

    def __post_init__(self):
        self._counter = itertools.count(1)

    # -- lookups -------------------------------------------------------------

    def _table(self, kind: str) -> dict:
        return {
            "account": self.accounts,
            "schedule": self.schedules,
            "shift": self.shifts,
            "time_off": self.time_off,
            "request": self.requests,
            "position": self.positions,
            "department": self.departments,
            "location": self.locations,
            "notification": self.notifications,
            "announcement": self.announcements,
            "opening_hours": self.opening_hours,
        }[kind]

    def account(self, account_id: str) -> Account:
        try:
            return self.accounts[account_id]
        except KeyError:
            raise errors.UnknownAccount(account_id) from None

    def schedule(self, schedule_id: str) -> Schedule:
        try:
            return self.schedules[schedule_id]
        except KeyError:
            raise errors.UnknownSchedule(schedule_id) from None

    def shift(self, shift_id: str) -> Shift:
        try:
            return self.shifts[shift_id]
        except KeyError:
            raise errors.UnknownShift(shift_id) from None

    def one_time_off(self, time_off_id: str) -> TimeOff:
        try:
            return self.time_off[time_off_id]
        except KeyError:
            raise errors.UnknownTimeOff(time_off_id) from None

    def request(self, request_id: str) -> ExchangeRequest:
        try:
            return self.requests[request_id]
        except KeyError:
            raise errors.UnknownRequest(request_id) from None

    def position(self, position_id: str) -> Position:
        try:
            return self.positions[position_id]
        except KeyError:
            raise errors.UnknownPosition(position_id) from None

    # -- mutation ------------------------------------------------------------

    def put(self, record) -> None:
        kind = KIND_OF[type(record)]
        self._table(kind)[record.id] = record
        self.changes.append(("put", kind, record.id))

    def delete(self, record) -> None:
        kind = KIND_OF[type(record)]
        self._table(kind).pop(record.id, None)
        self.changes.append(("delete", kind, record.id))

    def apply(self, puts=(), deletes=()) -> None:
        """Commit a computed batch; callers finish all checks first."""
        for record in deletes:
            self.delete(record)
        for record in puts:
            self.put(record)

    def put_settings(self, settings: SystemSettings) -> None:
        self.settings = settings
        self.changes.append(("put", "settings", "system"))

    def next_id(self, prefix: str) -> str:
        while True:
            candidate = f"{prefix}-{next(self._counter):04d}"
            if not any(candidate in t for t in map(self._table, KIND_OF.values())):
                return candidate

    # -- derived views ---------------------------------------------------------

    @property
    def tz(self) -> ZoneInfo:
        return ZoneInfo(self.settings.display_timezone)

    def assignments_of(self, account_id: str) -> list:
        """Shifts this account is assigned to, across all schedules."""
        return [s for s in self.shifts.values() if account_id in s.assignments]

    def shifts_of_schedule(self, schedule_id: str) -> list:
        return [s for s in self.shifts.values() if s.schedule == schedule_id]

    def approved_time_off(self, account_id: str) -> list:
        return [
            t
            for t in self.time_off.values()
            if t.account == account_id and t.state == TimeOffState.APPROVED
        ]

    def time_off_of(self, account_id: str) -> list:
        return [t for t in self.time_off.values() if t.account == account_id]

    def schedules_of_member(self, account_id: str) -> list:
        return [s for s in self.schedules.values() if account_id in s.members]

    # -- rights ---------------------------------------------------------------

    def is_admin(self, account_id: str) -> bool:
        acct = self.accounts.get(account_id)
        return acct is not None and acct.role == Role.ADMIN

    def grant_of(self, account_id: str, schedule_id: str) -> ElevatedRights:
        sched = self.schedule(schedule_id)
        return sched.grants.get(account_id, ElevatedRights())

    def can_manage(self, account_id: str | None, schedule_id: str) -> bool:
        if account_id is None:
            return False
        if self.is_admin(account_id):
            return True
        return self.grant_of(account_id, schedule_id).manage_shifts

    def can_view_stats(self, account_id: str | None, schedule_id: str) -> bool:
        if account_id is None:
            return False
        if self.is_admin(account_id):
            return True
        return self.grant_of(account_id, schedule_id).view_stats

    def can_approve_time_off(self, account_id: str | None, schedule_id: str) -> bool:
        if account_id is None:
            return False
        if self.is_admin(account_id):
            return True
        return self.grant_of(account_id, schedule_id).approve_time_off

    def managers_of(self, schedule_id: str) -> set:
        """manage_shifts grantees plus Admin accounts."""
        sched = self.schedule(schedule_id)
        out = {aid for aid, g in sched.grants.items() if g.manage_shifts}
        out.update(a.id for a in self.accounts.values() if a.role == Role.ADMIN)
        return out

    def approvers_for(self, account_id: str) -> set:
        """Accounts able to approve this member's time off, plus Admins."""
        out = set()
        for sched in self.schedules_of_member(account_id):
            out.update(
                aid for aid, g in sched.grants.items() if g.approve_time_off
            )
        out.update(a.id for a in self.accounts.values() if a.role == Role.ADMIN)
        return out

    def opening_calendar_for(self, schedule_id: str) -> OpeningHoursCalendar | None:
        sched = self.schedule(schedule_id)
        if sched.location and sched.location in self.opening_hours:
            return self.opening_hours[sched.location]
        return self.opening_hours.get("default")
