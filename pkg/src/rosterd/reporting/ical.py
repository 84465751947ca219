"""iCalendar subset: VEVENT export, liberal import, recurrence expansion.

The writer emits RFC 5545 calendars: CRLF line endings, 75-octet line
folding, UTC times with trailing Z, a fixed PRODID. The parser accepts
the same subset back plus the common variations found in real feeds
(LF endings, TZID-localized times, all-day events, weekly/daily RRULE).
Anything outside the subset raises MalformedCalendar rather than
guessing. Recurrences are expanded to concrete occurrences within a
one-year horizon from DTSTART; unbounded rules are truncated there with
a warning.
"""

from __future__ import annotations

import dataclasses
import hashlib
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from zoneinfo import ZoneInfo

from .. import errors
from ..engine.conflicts import ConflictKind, ConflictReport
from ..model.records import TimeOff, TimeOffState
from ..timeutil import Interval

PRODID = "-//rosterd//calendar 1.0//EN"
HORIZON_DAYS = 365
_BYDAY = {"MO": 0, "TU": 1, "WE": 2, "TH": 3, "FR": 4, "SA": 5, "SU": 6}


# -- writing ------------------------------------------------------------------


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace(";", "\\;")
            .replace(",", "\\,").replace("\n", "\\n"))


def _fold(line: str) -> list[str]:
    """Split one content line at 75 octets, never mid-codepoint."""
    raw = line.encode("utf-8")
    if len(raw) <= 75:
        return [line]
    out = []
    limit = 75
    while raw:
        cut = min(limit, len(raw))
        while cut > 1 and (raw[cut:cut + 1] and raw[cut] & 0xC0 == 0x80):
            cut -= 1
        out.append(raw[:cut].decode("utf-8"))
        raw = raw[cut:]
        if raw:
            raw = b" " + raw
    return out


def _fmt_dt(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y%m%dT%H%M%SZ")


def build_calendar(events, now: datetime | None = None) -> bytes:
    """Assemble VEVENT dicts (uid, summary, interval, categories) into
    one VCALENDAR byte stream."""
    stamp = _fmt_dt(now or datetime.now(timezone.utc))
    lines = ["BEGIN:VCALENDAR", "VERSION:2.0", f"PRODID:{PRODID}",
             "CALSCALE:GREGORIAN"]
    for event in events:
        lines.append("BEGIN:VEVENT")
        lines.append(f"UID:{event['uid']}")
        lines.append(f"DTSTAMP:{stamp}")
        lines.append(f"DTSTART:{_fmt_dt(event['interval'].start)}")
        lines.append(f"DTEND:{_fmt_dt(event['interval'].end)}")
        lines.append(f"SUMMARY:{_escape(event['summary'])}")
        for cat in event.get("categories", ()):
            lines.append(f"CATEGORIES:{_escape(cat)}")
        lines.append("END:VEVENT")
    lines.append("END:VCALENDAR")
    folded = []
    for line in lines:
        folded.extend(_fold(line))
    return ("\r\n".join(folded) + "\r\n").encode("utf-8")


def export_ical(roster, account_id: str, date_range: Interval,
                now: datetime | None = None) -> bytes:
    """Personal calendar: one VEVENT per assigned shift touching the range."""
    roster.account(account_id)
    shifts = [
        s for s in roster.assignments_of(account_id)
        if s.interval.overlaps(date_range)
    ]
    shifts.sort(key=lambda s: (s.interval.start, s.id))
    events = []
    for shift in shifts:
        sched = roster.schedules.get(shift.schedule)
        summary = f"{sched.name if sched else shift.schedule}: {shift.title}"
        events.append({
            "uid": f"shift-{shift.id}-{account_id}@rosterd",
            "interval": shift.interval,
            "summary": summary,
            "categories": ("WORK-FROM-HOME",) if shift.work_from_home else (),
        })
    return build_calendar(events, now=now)


# -- parsing ------------------------------------------------------------------


@dataclass
class VEvent:
    uid: str
    summary: str
    start: datetime
    end: datetime
    all_day: bool = False
    rrule: dict | None = None
    categories: tuple[str, ...] = ()


def _unfold(text: str) -> list[str]:
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    out: list[str] = []
    for line in lines:
        if line[:1] in (" ", "\t") and out:
            out[-1] += line[1:]
        elif line:
            out.append(line)
    return out


def _split_property(line: str) -> tuple[str, dict[str, str], str]:
    """NAME;PARAM=VALUE;...:value -> (NAME, params, value)."""
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == ":" and not in_quote:
            head, value = line[:i], line[i + 1:]
            break
    else:
        raise errors.MalformedCalendar(f"property without value: {line!r}")
    parts = head.split(";")
    name = parts[0].upper()
    params = {}
    for part in parts[1:]:
        key, _, val = part.partition("=")
        params[key.upper()] = val.strip('"')
    return name, params, value


def _unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"n": "\n", "N": "\n"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _parse_dt(value: str, params: dict[str, str], what: str) -> tuple[datetime, bool]:
    """Returns (UTC datetime truncated to the minute, is_date_only)."""
    value = value.strip()
    if params.get("VALUE") == "DATE" or re.fullmatch(r"\d{8}", value):
        try:
            day = datetime.strptime(value, "%Y%m%d")
        except ValueError:
            raise errors.MalformedCalendar(f"bad {what} date: {value!r}") from None
        return day.replace(tzinfo=timezone.utc), True
    match = re.fullmatch(r"(\d{8})T(\d{6})(Z?)", value)
    if not match:
        raise errors.MalformedCalendar(f"bad {what} value: {value!r}")
    naive = datetime.strptime(match.group(1) + match.group(2), "%Y%m%d%H%M%S")
    if match.group(3) == "Z":
        parsed = naive.replace(tzinfo=timezone.utc)
    elif "TZID" in params:
        try:
            parsed = naive.replace(tzinfo=ZoneInfo(params["TZID"]))
        except Exception:
            raise errors.MalformedCalendar(
                f"unknown TZID {params['TZID']!r}") from None
    else:
        parsed = naive.replace(tzinfo=timezone.utc)
    utc = parsed.astimezone(timezone.utc).replace(second=0, microsecond=0)
    return utc, False


def _parse_duration(value: str) -> timedelta:
    match = re.fullmatch(
        r"([+-]?)P(?:(\d+)W)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+)S)?)?",
        value.strip(),
    )
    if not match or value.strip() in ("P", "PT"):
        raise errors.MalformedCalendar(f"bad DURATION: {value!r}")
    sign, weeks, days, hours, minutes, seconds = match.groups()
    delta = timedelta(
        weeks=int(weeks or 0), days=int(days or 0), hours=int(hours or 0),
        minutes=int(minutes or 0), seconds=int(seconds or 0),
    )
    return -delta if sign == "-" else delta


def _parse_rrule(value: str) -> dict:
    rule: dict = {}
    for part in value.split(";"):
        if not part:
            continue
        key, _, val = part.partition("=")
        rule[key.upper()] = val
    freq = rule.get("FREQ", "").upper()
    if freq not in ("WEEKLY", "DAILY"):
        raise errors.MalformedCalendar(f"unsupported RRULE FREQ: {freq or '?'}")
    out = {"freq": freq, "interval": int(rule.get("INTERVAL", "1"))}
    if out["interval"] < 1:
        raise errors.MalformedCalendar("RRULE INTERVAL must be >= 1")
    if "COUNT" in rule:
        out["count"] = int(rule["COUNT"])
    if "UNTIL" in rule:
        until, date_only = _parse_dt(rule["UNTIL"], {}, "UNTIL")
        out["until"] = until + timedelta(days=1) if date_only else until
    if "BYDAY" in rule:
        try:
            out["byday"] = frozenset(_BYDAY[d.strip().upper()]
                                     for d in rule["BYDAY"].split(","))
        except KeyError as exc:
            raise errors.MalformedCalendar(f"bad BYDAY: {exc}") from None
    return out


def parse_ical(data) -> tuple[list[VEvent], list[str]]:
    """Parse a VCALENDAR stream into events plus non-fatal warnings."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise errors.MalformedCalendar(f"not UTF-8: {exc}") from None
    else:
        text = data
    lines = _unfold(text)
    if not lines or _split_property(lines[0])[0] != "BEGIN" or \
            lines[0].split(":", 1)[1].upper() != "VCALENDAR":
        raise errors.MalformedCalendar("missing BEGIN:VCALENDAR")

    events: list[VEvent] = []
    warnings: list[str] = []
    depth_skip = 0
    in_event = False
    props: list[tuple[str, dict, str]] = []

    for line in lines[1:]:
        name, params, value = _split_property(line)
        upper_value = value.upper()
        if name == "BEGIN":
            if upper_value == "VEVENT" and not in_event and not depth_skip:
                in_event = True
                props = []
            else:
                depth_skip += 1
            continue
        if name == "END":
            if upper_value == "VCALENDAR" and not in_event and not depth_skip:
                return events, warnings
            if upper_value == "VEVENT" and in_event and not depth_skip:
                in_event = False
                events.append(_build_event(props, warnings))
            else:
                if depth_skip == 0:
                    raise errors.MalformedCalendar(f"unbalanced END:{value}")
                depth_skip -= 1
            continue
        if in_event and not depth_skip:
            props.append((name, params, value))
    raise errors.MalformedCalendar("missing END:VCALENDAR")


def _build_event(props, warnings) -> VEvent:
    by_name: dict[str, tuple[dict, str]] = {}
    categories: list[str] = []
    for name, params, value in props:
        if name == "CATEGORIES":
            categories.extend(
                _unescape(v) for v in re.split(r"(?<!\\),", value) if v)
        else:
            by_name[name] = (params, value)
    if "UID" not in by_name:
        raise errors.MalformedCalendar("VEVENT without UID")
    if "DTSTART" not in by_name:
        raise errors.MalformedCalendar("VEVENT without DTSTART")

    uid = by_name["UID"][1].strip()
    start_params, start_value = by_name["DTSTART"]
    start, all_day = _parse_dt(start_value, start_params, "DTSTART")

    if "DTEND" in by_name:
        # a DATE-valued DTEND is already exclusive per RFC 5545
        end_params, end_value = by_name["DTEND"]
        end, _ = _parse_dt(end_value, end_params, "DTEND")
    elif "DURATION" in by_name:
        end = start + _parse_duration(by_name["DURATION"][1])
    elif all_day:
        end = start + timedelta(days=1)
    else:
        end = start
    if end <= start:
        warnings.append(f"event {uid}: empty or reversed interval, "
                        "coerced to one minute")
        end = start + timedelta(minutes=1)

    summary = _unescape(by_name.get("SUMMARY", ({}, ""))[1])
    rrule = _parse_rrule(by_name["RRULE"][1]) if "RRULE" in by_name else None
    return VEvent(
        uid=uid, summary=summary, start=start, end=end,
        all_day=all_day, rrule=rrule, categories=tuple(categories),
    )


def occurrences(event: VEvent, warnings: list[str] | None = None) -> list[Interval]:
    """Concrete intervals for an event, recurrence expanded.

    Expansion runs within HORIZON_DAYS of DTSTART; rules with neither
    UNTIL nor COUNT are truncated there and noted in ``warnings``.
    """
    duration = event.end - event.start
    if event.rrule is None:
        return [Interval(event.start, event.start + duration)]

    rule = event.rrule
    horizon = event.start + timedelta(days=HORIZON_DAYS)
    until = rule.get("until")
    count = rule.get("count")
    if until is None and count is None and warnings is not None:
        warnings.append(
            f"event {event.uid}: unbounded RRULE truncated at {HORIZON_DAYS} days")
    limit = min(horizon, until) if until is not None else horizon

    out: list[Interval] = []
    if rule["freq"] == "DAILY":
        step = timedelta(days=rule["interval"])
        current = event.start
        while current <= limit and (count is None or len(out) < count):
            out.append(Interval(current, current + duration))
            current += step
        return out

    byday = rule.get("byday", frozenset({event.start.weekday()}))
    week0 = event.start.date() - timedelta(days=event.start.weekday())
    current = event.start
    while current <= limit and (count is None or len(out) < count):
        day = current.date()
        weeks = (day - timedelta(days=day.weekday()) - week0).days // 7
        if day.weekday() in byday and weeks % rule["interval"] == 0:
            out.append(Interval(current, current + duration))
        current += timedelta(days=1)
    return out


# -- imports built on the parser ----------------------------------------------


def import_ical_time_off(roster, account_id: str, data,
                         now: datetime | None = None) -> list[TimeOff]:
    """Turn each external event into a TimeOff for the account.

    Record ids derive from (account, UID, occurrence index), so feeding
    the same file again updates the existing records instead of piling
    up duplicates. Existing assignments are never touched; overlaps
    surface through the advisory overlap report instead.
    """
    roster.account(account_id)
    events, warnings = parse_ical(data)
    state = (TimeOffState.PENDING if roster.settings.time_off_requires_approval
             else TimeOffState.APPROVED)
    out: list[TimeOff] = []
    for event in events:
        for index, iv in enumerate(occurrences(event, warnings)):
            digest = hashlib.sha1(
                f"{account_id}:{event.uid}:{index}".encode()).hexdigest()[:12]
            record_id = f"ical-{digest}"
            existing = roster.time_off.get(record_id)
            if existing is not None:
                record = dataclasses.replace(
                    existing, interval=iv,
                    reason=event.summary or existing.reason)
            else:
                record = TimeOff(
                    id=record_id,
                    account=account_id,
                    interval=iv,
                    reason=event.summary or "imported calendar event",
                    state=state,
                )
            roster.put(record)
            out.append(record)
    return out


def external_conflicts(roster, account_id: str, data,
                       proposed: Interval) -> list[ConflictReport]:
    """One ExternalCalendarEvent report per busy block overlapping the
    proposal; purely informational, state is never touched."""
    roster.account(account_id)
    events, warnings = parse_ical(data)
    reports = []
    for event in events:
        for iv in occurrences(event, warnings):
            if iv.overlaps(proposed):
                reports.append(ConflictReport(
                    ConflictKind.EXTERNAL_CALENDAR_EVENT,
                    f"{event.summary or event.uid} {iv}",
                ))
    return reports
