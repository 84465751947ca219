"""Fixture loading: turn a YAML document into roster records.

Fixtures reference entities by natural key (account email, schedule and
position names), never by internal id, so re-running a seed upserts the
same records instead of duplicating them. The schema is documented in
docs/fixtures.md.
"""

from __future__ import annotations

import dataclasses
from datetime import date, datetime, timezone
from decimal import Decimal, InvalidOperation

import yaml

from . import errors
from .model.invariants import verify_roster
from .model.records import (
    Account,
    AvailabilityGrid,
    ElevatedRights,
    Locale,
    OpeningHoursCalendar,
    OpeningPeriod,
    PayRates,
    Position,
    QuotaSet,
    Recurrence,
    Role,
    Schedule,
    ScheduleSettings,
    Shift,
    TimeOff,
    TimeOffState,
    WEEKDAY_NAMES,
)
from .model.validation import validate_account
from .timeutil import Interval

_HOUR_QUOTAS = (
    "max_consecutive_hours",
    "max_hours_per_day",
    "min_hours_per_week",
    "max_hours_per_week",
    "max_hours_per_month",
)


def load_fixture(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise errors.ParseError(f"cannot read fixture: {exc}") from None
    except yaml.YAMLError as exc:
        raise errors.ParseError(f"fixture is not valid YAML: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise errors.ParseError("fixture root must be a mapping")
    return doc


def _weekday(value, where: str) -> int:
    if isinstance(value, int) and 0 <= value <= 6:
        return value
    name = str(value).strip().lower()[:3]
    if name in WEEKDAY_NAMES:
        return WEEKDAY_NAMES.index(name)
    raise errors.ParseError(f"{where}: bad weekday {value!r}")


def _minute_of_day(value, where: str) -> int:
    if isinstance(value, int):
        minute = value
    else:
        text = str(value).strip()
        parts = text.split(":")
        try:
            if len(parts) == 2:
                minute = int(parts[0]) * 60 + int(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise errors.ParseError(f"{where}: bad time {value!r}") from None
    if not 0 <= minute <= 24 * 60:
        raise errors.ParseError(f"{where}: time {value!r} out of range")
    return minute


def _slots(value, where: str) -> tuple[tuple[int, int], ...]:
    if value is None:
        return ()
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise errors.ParseError(f"{where}[{i}]: expected [start, end]")
        out.append((_minute_of_day(pair[0], f"{where}[{i}]"),
                    _minute_of_day(pair[1], f"{where}[{i}]")))
    return tuple(out)


def _grid(value, where: str) -> dict[int, tuple[tuple[int, int], ...]]:
    grid = {}
    for key, slots in (value or {}).items():
        grid[_weekday(key, where)] = _slots(slots, f"{where}.{key}")
    return grid


def _date(value, where: str) -> date:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value).strip())
    except ValueError:
        raise errors.ParseError(f"{where}: bad date {value!r}") from None


def _dt(value, tz, where: str) -> datetime:
    """Timestamps without an offset are wall-clock in the display zone."""
    if isinstance(value, datetime):
        dt = value
    elif isinstance(value, date):
        dt = datetime(value.year, value.month, value.day)
    else:
        raw = str(value).strip()
        if raw.endswith(("Z", "z")):
            raw = raw[:-1] + "+00:00"
        try:
            dt = datetime.fromisoformat(raw)
        except ValueError:
            raise errors.ParseError(f"{where}: bad timestamp {value!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=tz)
    dt = dt.astimezone(timezone.utc)
    if dt.second or dt.microsecond:
        raise errors.ParseError(
            f"{where}: timestamp {value!r} must fall on a whole minute")
    return dt


def _money(value, where: str) -> int:
    """'10.00', 10, or 10.5 (currency units) to integer cents."""
    try:
        cents = Decimal(str(value)) * 100
    except InvalidOperation:
        raise errors.ParseError(f"{where}: bad amount {value!r}") from None
    if cents != int(cents):
        raise errors.ParseError(f"{where}: {value!r} has sub-cent precision")
    return int(cents)


def _hours_to_minutes(value, where: str) -> int:
    minutes = float(value) * 60
    if minutes != int(minutes):
        raise errors.ParseError(f"{where}: {value!r} is not a whole minute count")
    return int(minutes)


def _quotas(value, where: str) -> QuotaSet:
    fields = {}
    for key, raw in (value or {}).items():
        if key not in QuotaSet.FIELDS:
            raise errors.ParseError(f"{where}: unknown quota {key!r}")
        if raw is None:
            fields[key] = None
        elif key in _HOUR_QUOTAS:
            fields[key] = _hours_to_minutes(raw, f"{where}.{key}")
        else:
            fields[key] = int(raw)
    return QuotaSet(**fields)


class _Refs:
    """Natural-key lookup tables built as the fixture is applied."""

    def __init__(self, roster):
        self.roster = roster

    def account_id(self, email, where: str) -> str:
        for acct in self.roster.accounts.values():
            if not acct.anonymized and acct.email == str(email).strip():
                return acct.id
        raise errors.ParseError(f"{where}: unknown account email {email!r}")

    def schedule_id(self, name, where: str) -> str:
        for sched in self.roster.schedules.values():
            if sched.name == str(name).strip():
                return sched.id
        raise errors.ParseError(f"{where}: unknown schedule {name!r}")

    def position_id(self, name, where: str) -> str:
        for pos in self.roster.positions.values():
            if pos.name == str(name).strip():
                return pos.id
        raise errors.ParseError(f"{where}: unknown position {name!r}")


def _seed_settings(work, doc) -> int:
    block = doc.get("settings")
    if not block:
        return 0
    fields = {}
    plain = ("self_time_off_enabled", "time_off_requires_approval",
             "default_dashboard_days", "display_timezone")
    for key in plain:
        if key in block:
            fields[key] = block[key]
    if "ip_allowlist" in block:
        fields["ip_allowlist"] = tuple(block["ip_allowlist"] or ())
    if "locale_default" in block:
        try:
            fields["locale_default"] = Locale(block["locale_default"])
        except ValueError:
            raise errors.ParseError(
                f"settings.locale_default: unsupported locale "
                f"{block['locale_default']!r}") from None
    work.put_settings(dataclasses.replace(work.settings, **fields))
    return 1


def _seed_positions(work, doc) -> int:
    count = 0
    by_name = {p.name: p for p in work.positions.values()}
    for i, entry in enumerate(doc.get("positions") or []):
        where = f"positions[{i}]"
        name = entry.get("name")
        if not name:
            raise errors.ParseError(f"{where}: name is required")
        existing = by_name.get(name)
        record = Position(
            id=existing.id if existing else work.next_id("pos"),
            name=name,
            default_color=entry.get("color"),
        )
        work.put(record)
        by_name[name] = record
        count += 1
    return count


def _seed_opening_hours(work, doc) -> int:
    count = 0
    for i, entry in enumerate(doc.get("opening_hours") or []):
        where = f"opening_hours[{i}]"
        cal_id = entry.get("id")
        if not cal_id:
            raise errors.ParseError(f"{where}: id is required")
        periods = []
        for j, p in enumerate(entry.get("periods") or []):
            pwhere = f"{where}.periods[{j}]"
            periods.append(OpeningPeriod(
                name=p.get("name", f"period-{j}"),
                start=_date(p.get("start"), f"{pwhere}.start"),
                end=_date(p.get("end"), f"{pwhere}.end"),
                hours=_grid(p.get("hours"), f"{pwhere}.hours"),
            ))
        overrides = {
            _date(k, f"{where}.overrides"): _slots(v, f"{where}.overrides")
            for k, v in (entry.get("overrides") or {}).items()
        }
        work.put(OpeningHoursCalendar(
            id=str(cal_id), periods=periods, overrides=overrides))
        count += 1
    return count


def _seed_accounts(work, doc, refs) -> tuple[int, list]:
    count = 0
    credentials = []
    by_email = {
        a.email: a for a in work.accounts.values() if not a.anonymized
    }
    for i, entry in enumerate(doc.get("accounts") or []):
        where = f"accounts[{i}]"
        email = str(entry.get("email", "")).strip()
        if not email:
            raise errors.ParseError(f"{where}: email is required")
        existing = by_email.get(email)
        try:
            role = Role(entry.get("role", "Regular"))
        except ValueError:
            raise errors.ParseError(
                f"{where}: unknown role {entry.get('role')!r}") from None
        positions = frozenset(
            refs.position_id(name, f"{where}.positions")
            for name in entry.get("positions") or []
        )
        pay = None
        if entry.get("pay"):
            p = entry["pay"]
            pay = PayRates(
                regular_rate=_money(p.get("regular_rate", 0), f"{where}.pay"),
                overtime_rate=_money(p.get("overtime_rate", 0), f"{where}.pay"),
                weekly_overtime_threshold=_hours_to_minutes(
                    p.get("weekly_overtime_threshold", 40),
                    f"{where}.pay.weekly_overtime_threshold"),
            )
        availability = AvailabilityGrid()
        if entry.get("availability") is not None:
            availability = AvailabilityGrid(
                days=_grid(entry["availability"], f"{where}.availability"))
        draft = Account(
            id=existing.id if existing else work.next_id("a"),
            given_name=entry.get("given_name", ""),
            family_name=entry.get("family_name", ""),
            email=email,
            role=role,
            positions=positions,
            color=entry.get("color"),
            quotas=_quotas(entry.get("quotas"), f"{where}.quotas"),
            availability=availability,
            pay=pay,
        )
        try:
            checked = validate_account(work, draft)
        except errors.ValidationError as exc:
            raise errors.InvariantViolation(where, str(exc)) from None
        work.put(checked)
        by_email[email] = checked
        if entry.get("password"):
            credentials.append((email, checked.id, str(entry["password"])))
        count += 1
    return count, credentials


def _seed_schedules(work, doc, refs) -> int:
    count = 0
    by_name = {s.name: s for s in work.schedules.values()}
    for i, entry in enumerate(doc.get("schedules") or []):
        where = f"schedules[{i}]"
        name = entry.get("name")
        if not name:
            raise errors.ParseError(f"{where}: name is required")
        existing = by_name.get(name)
        members = frozenset(
            refs.account_id(email, f"{where}.members")
            for email in entry.get("members") or []
        )
        settings = existing.settings if existing else ScheduleSettings()
        if entry.get("settings"):
            known = {f.name for f in dataclasses.fields(ScheduleSettings)}
            bad = set(entry["settings"]) - known
            if bad:
                raise errors.ParseError(
                    f"{where}.settings: unknown keys {sorted(bad)}")
            settings = dataclasses.replace(settings, **entry["settings"])
        grants = {}
        for j, g in enumerate(entry.get("grants") or []):
            gwhere = f"{where}.grants[{j}]"
            grantee = refs.account_id(g.get("account"), gwhere)
            grants[grantee] = ElevatedRights(
                manage_shifts=bool(g.get("manage_shifts", False)),
                view_stats=bool(g.get("view_stats", False)),
                approve_time_off=bool(g.get("approve_time_off", False)),
            )
        record = Schedule(
            id=existing.id if existing else work.next_id("s"),
            name=name,
            location=entry.get("location"),
            members=members,
            is_public=bool(entry.get("public", False)),
            settings=settings,
            grants=grants,
        )
        work.put(record)
        by_name[name] = record
        count += 1
    return count


def _seed_shifts(work, doc, refs) -> int:
    count = 0
    tz = work.tz
    index = {
        (s.schedule, s.title, s.interval.start): s for s in work.shifts.values()
    }
    for i, entry in enumerate(doc.get("shifts") or []):
        where = f"shifts[{i}]"
        sched_id = refs.schedule_id(entry.get("schedule"), f"{where}.schedule")
        title = entry.get("title", "")
        start = _dt(entry.get("start"), tz, f"{where}.start")
        end = _dt(entry.get("end"), tz, f"{where}.end")
        if start >= end:
            raise errors.ParseError(f"{where}: start must be before end")
        assignments = frozenset(
            refs.account_id(email, f"{where}.assign")
            for email in entry.get("assign") or []
        )
        recurrence = None
        if entry.get("recurrence"):
            r = entry["recurrence"]
            recurrence = Recurrence(
                weekdays=frozenset(
                    _weekday(d, f"{where}.recurrence.weekdays")
                    for d in r.get("weekdays") or []
                ),
                until=_date(r.get("until"), f"{where}.recurrence.until"),
            )
        existing = index.get((sched_id, title, start))
        record = Shift(
            id=existing.id if existing else work.next_id("shift"),
            schedule=sched_id,
            title=title,
            interval=Interval(start, end),
            min_staff=int(entry.get("min_staff", 1)),
            max_staff=(None if entry.get("max_staff") is None
                       else int(entry["max_staff"])),
            required_positions=frozenset(
                refs.position_id(p, f"{where}.positions")
                for p in entry.get("positions") or []
            ),
            favorites=frozenset(
                refs.account_id(email, f"{where}.favorites")
                for email in entry.get("favorites") or []
            ),
            assignments=assignments,
            recurrence=recurrence,
            work_from_home=bool(entry.get("work_from_home", False)),
        )
        work.put(record)
        index[(sched_id, title, start)] = record
        count += 1
    return count


def _seed_time_off(work, doc, refs) -> int:
    count = 0
    tz = work.tz
    index = {
        (t.account, t.interval.start, t.interval.end): t
        for t in work.time_off.values()
    }
    for i, entry in enumerate(doc.get("time_off") or []):
        where = f"time_off[{i}]"
        account_id = refs.account_id(entry.get("account"), f"{where}.account")
        start = _dt(entry.get("start"), tz, f"{where}.start")
        end = _dt(entry.get("end"), tz, f"{where}.end")
        if start >= end:
            raise errors.ParseError(f"{where}: start must be before end")
        if entry.get("state") is not None:
            try:
                state = TimeOffState(entry["state"])
            except ValueError:
                raise errors.ParseError(
                    f"{where}: unknown state {entry['state']!r}") from None
        elif work.settings.time_off_requires_approval:
            state = TimeOffState.PENDING
        else:
            state = TimeOffState.APPROVED
        existing = index.get((account_id, start, end))
        record = TimeOff(
            id=existing.id if existing else work.next_id("to"),
            account=account_id,
            interval=Interval(start, end),
            reason=str(entry.get("reason", "")),
            state=state,
        )
        work.put(record)
        index[(account_id, start, end)] = record
        count += 1
    return count


SECTION_ORDER = ("settings", "positions", "opening_hours", "accounts",
                 "schedules", "shifts", "time_off")


def seed_roster(work, doc: dict) -> tuple[dict, list]:
    """Apply a fixture document to the working roster.

    Returns (per-section counts in fixture order, credential triples to
    store once the mutation commits). The roster is verified as a whole
    afterwards so a bad fixture fails before anything is written.
    """
    unknown = set(doc) - set(SECTION_ORDER)
    if unknown:
        raise errors.ParseError(f"unknown fixture sections: {sorted(unknown)}")
    refs = _Refs(work)
    counts: dict[str, int] = {}
    counts["settings"] = _seed_settings(work, doc)
    counts["positions"] = _seed_positions(work, doc)
    counts["opening_hours"] = _seed_opening_hours(work, doc)
    counts["accounts"], credentials = _seed_accounts(work, doc, refs)
    counts["schedules"] = _seed_schedules(work, doc, refs)
    counts["shifts"] = _seed_shifts(work, doc, refs)
    counts["time_off"] = _seed_time_off(work, doc, refs)
    verify_roster(work)
    counts = {k: v for k, v in counts.items() if v}
    return counts, credentials
