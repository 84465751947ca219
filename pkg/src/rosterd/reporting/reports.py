"""Report aggregation and CSV export.

The engine first builds flat base records, one per (shift, assignee)
plus a gap record per unassigned or understaffed shift, then groups.
Every metric is attributed at the record level, so summing the rows of
any grouping reproduces the ungrouped totals exactly:

- shift_count counts assignment records, plus gap records of fully
  unassigned shifts;
- total_minutes sums each assignment's overlap with the date range;
- understaffed_count rides on the gap record only;
- pay splits each record into regular and overtime minutes up front,
  walking one account's week chronologically past the overtime
  threshold, in exact Fraction cents. Rounding (half-up, 2 decimals)
  happens only when a row is rendered.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date
from fractions import Fraction

from .. import errors
from ..engine.scheduler import understaffed
from ..timeutil import (
    Interval,
    day_bounds,
    iso_week_label,
    local_date,
    month_label,
)

GROUP_DIMENSIONS = ("account", "schedule", "position", "location",
                    "day", "week", "month")

METRIC_COLUMNS = ("shift_count", "total_minutes", "understaffed_count")
PAY_COLUMNS = ("regular_pay", "overtime_pay")


@dataclass(frozen=True)
class ReportQuery:
    date_range: tuple[date, date]
    schedules: frozenset[str] = frozenset()
    accounts: frozenset[str] = frozenset()
    group_by: tuple[str, ...] = ()
    include_pay: bool = False


@dataclass
class ReportRow:
    key: tuple[str, ...]
    shift_count: int = 0
    total_minutes: int = 0
    understaffed_count: int = 0
    regular_pay: Fraction | None = None
    overtime_pay: Fraction | None = None


@dataclass
class _BaseRecord:
    shift_id: str
    schedule: str
    account: str  # "" for the gap record
    dims: dict[str, str] = field(default_factory=dict)
    shift_count: int = 0
    minutes: int = 0
    understaffed: int = 0
    regular_minutes: int = 0
    overtime_minutes: int = 0
    regular_rate: int = 0
    overtime_rate: int = 0


def _validate_query(query: ReportQuery) -> None:
    start, end = query.date_range
    if start >= end:
        raise errors.EmptyRange(start, end)
    for dim in query.group_by:
        if dim not in GROUP_DIMENSIONS:
            raise errors.ValidationError([f"unknown group_by field {dim!r}"])


def _range_interval(roster, query: ReportQuery) -> Interval:
    start, end = query.date_range
    return Interval(day_bounds(start, roster.tz).start,
                    day_bounds(end, roster.tz).start)


def _authorize(roster, query: ReportQuery, caller: str | None) -> None:
    if caller is None or roster.is_admin(caller):
        return
    targets = query.schedules or frozenset(roster.schedules)
    for sid in targets:
        if not roster.can_view_stats(caller, sid):
            raise errors.Forbidden(caller, f"report over {sid}")


def base_records(roster, query: ReportQuery) -> list[_BaseRecord]:
    _validate_query(query)
    window = _range_interval(roster, query)
    tz = roster.tz

    shifts = [
        s for s in roster.shifts.values()
        if (not query.schedules or s.schedule in query.schedules)
        and s.interval.overlaps(window)
    ]
    shifts.sort(key=lambda s: (s.interval.start, s.id))

    records: list[_BaseRecord] = []
    for shift in shifts:
        sched = roster.schedules.get(shift.schedule)
        start_day = local_date(shift.interval.start, tz)
        dims = {
            "schedule": shift.schedule,
            "position": "+".join(sorted(shift.required_positions)),
            "location": (sched.location or "") if sched else "",
            "day": start_day.isoformat(),
            "week": iso_week_label(start_day),
            "month": month_label(start_day),
        }
        overlap = shift.interval.overlap_minutes(window)
        for account_id in sorted(shift.assignments):
            if query.accounts and account_id not in query.accounts:
                continue
            records.append(_BaseRecord(
                shift_id=shift.id, schedule=shift.schedule,
                account=account_id, dims={**dims, "account": account_id},
                shift_count=1, minutes=overlap,
            ))
        if not query.accounts and (not shift.assignments or understaffed(shift)):
            records.append(_BaseRecord(
                shift_id=shift.id, schedule=shift.schedule, account="",
                dims={**dims, "account": ""},
                shift_count=1 if not shift.assignments else 0,
                understaffed=1 if understaffed(shift) else 0,
            ))

    if query.include_pay:
        _attribute_overtime(roster, records)
    return records


def _attribute_overtime(roster, records: list[_BaseRecord]) -> None:
    """Split each record's minutes into regular and overtime.

    Minutes beyond the account's weekly threshold are overtime; within
    one (account, ISO week) bucket the shifts are walked in
    chronological order so the overtime lands on the latest work.
    """
    buckets: dict[tuple[str, str], list[_BaseRecord]] = {}
    for rec in records:
        if rec.account:
            buckets.setdefault((rec.account, rec.dims["week"]), []).append(rec)

    for (account_id, _week), recs in buckets.items():
        acct = roster.accounts.get(account_id)
        if acct is None or acct.pay is None:
            continue
        pay = acct.pay
        worked = 0
        for rec in recs:  # already chronological: base order is sorted
            rec.regular_rate = pay.regular_rate
            rec.overtime_rate = pay.overtime_rate
            before = worked
            worked += rec.minutes
            over = max(0, worked - max(pay.weekly_overtime_threshold, before))
            rec.overtime_minutes = min(rec.minutes, over)
            rec.regular_minutes = rec.minutes - rec.overtime_minutes


def run_report(roster, query: ReportQuery,
               caller: str | None = None) -> list[ReportRow]:
    """Grouped, sorted report rows for the query.

    Regular members need view_stats on every queried schedule; Admins
    (and internal callers) pass. Pay columns appear only when asked.
    """
    _authorize(roster, query, caller)
    records = base_records(roster, query)

    rows: dict[tuple[str, ...], ReportRow] = {}
    for rec in records:
        key = tuple(rec.dims[dim] for dim in query.group_by)
        row = rows.get(key)
        if row is None:
            row = ReportRow(key=key)
            if query.include_pay:
                row.regular_pay = Fraction(0)
                row.overtime_pay = Fraction(0)
            rows[key] = row
        row.shift_count += rec.shift_count
        row.total_minutes += rec.minutes
        row.understaffed_count += rec.understaffed
        if query.include_pay:
            row.regular_pay += Fraction(rec.regular_rate * rec.regular_minutes, 60)
            row.overtime_pay += Fraction(rec.overtime_rate * rec.overtime_minutes, 60)
    return [rows[key] for key in sorted(rows)]


def money(cents: Fraction) -> str:
    """Exact cents -> '123.45', rounding half-up at the cent."""
    whole, rem = divmod(cents.numerator, cents.denominator)
    if 2 * rem >= cents.denominator:
        whole += 1
    sign = "-" if whole < 0 else ""
    whole = abs(whole)
    return f"{sign}{whole // 100}.{whole % 100:02d}"


def export_csv(rows: list[ReportRow], group_by: tuple[str, ...] = (),
               include_pay: bool = False) -> bytes:
    """RFC 4180 bytes: UTF-8, LF, header row, quotes only when needed."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    header = list(group_by) + list(METRIC_COLUMNS)
    if include_pay:
        header += list(PAY_COLUMNS)
    writer.writerow(header)
    for row in rows:
        out = list(row.key) + [row.shift_count, row.total_minutes,
                               row.understaffed_count]
        if include_pay:
            out += [money(row.regular_pay), money(row.overtime_pay)]
        writer.writerow(out)
    return buf.getvalue().encode("utf-8")


def timeoff_assignment_overlaps(roster, date_range: tuple[date, date] | None = None):
    """Advisory triples (account, shift id, time off id) where approved
    time off overlaps an assignment that was deliberately kept."""
    window = None
    if date_range is not None:
        window = _range_interval(roster, ReportQuery(date_range=date_range))
    out = []
    for shift in roster.shifts.values():
        if window is not None and not shift.interval.overlaps(window):
            continue
        for account_id in shift.assignments:
            for record in roster.approved_time_off(account_id):
                if record.interval.overlaps(shift.interval):
                    out.append((account_id, shift.id, record.id))
    out.sort()
    return out
