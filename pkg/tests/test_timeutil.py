from datetime import date, datetime, timezone
from zoneinfo import ZoneInfo

import pytest

from rosterd.timeutil import (
    Interval,
    day_bounds,
    ensure_utc_minute,
    fmt_hhmm,
    iso_week_label,
    local_day_segments,
    local_days_touched,
    month_bounds,
    parse_hhmm,
    week_bounds,
)

from conftest import dt

TORONTO = ZoneInfo("America/Toronto")


def test_naive_timestamps_are_rejected():
    with pytest.raises(ValueError):
        ensure_utc_minute(datetime(2026, 1, 1, 9, 0))


def test_sub_minute_timestamps_are_rejected():
    with pytest.raises(ValueError):
        ensure_utc_minute(datetime(2026, 1, 1, 9, 0, 30, tzinfo=timezone.utc))
    with pytest.raises(ValueError):
        Interval(dt(2026, 1, 1, 9), datetime(2026, 1, 1, 10, 0, 0, 500,
                                             tzinfo=timezone.utc))


def test_offset_timestamps_normalize_to_utc():
    eastern = datetime(2026, 1, 5, 9, 0, tzinfo=ZoneInfo("America/Toronto"))
    assert ensure_utc_minute(eastern) == dt(2026, 1, 5, 14)


@pytest.mark.parametrize("a, b, expected", [
    # identical
    ((9, 10), (9, 10), True),
    # contained both ways
    ((9, 12), (10, 11), True),
    ((10, 11), (9, 12), True),
    # partial overlap on each side
    ((9, 11), (10, 12), True),
    ((10, 12), (9, 11), True),
    # back to back: half-open means no overlap
    ((9, 10), (10, 11), False),
    ((10, 11), (9, 10), False),
    # disjoint
    ((9, 10), (11, 12), False),
])
def test_half_open_overlap(a, b, expected):
    first = Interval(dt(2026, 3, 2, a[0]), dt(2026, 3, 2, a[1]))
    second = Interval(dt(2026, 3, 2, b[0]), dt(2026, 3, 2, b[1]))
    assert first.overlaps(second) is expected
    assert second.overlaps(first) is expected


def test_overlap_minutes_clamps_at_zero():
    a = Interval(dt(2026, 3, 2, 9), dt(2026, 3, 2, 10))
    b = Interval(dt(2026, 3, 2, 9, 30), dt(2026, 3, 2, 11))
    assert a.overlap_minutes(b) == 30
    c = Interval(dt(2026, 3, 2, 12), dt(2026, 3, 2, 13))
    assert a.overlap_minutes(c) == 0


def test_contains_is_half_open():
    a = Interval(dt(2026, 3, 2, 9), dt(2026, 3, 2, 10))
    assert a.contains(dt(2026, 3, 2, 9))
    assert not a.contains(dt(2026, 3, 2, 10))


def test_day_bounds_cover_dst_transitions():
    # 2026-03-08: springs forward in Toronto, only 23 local hours
    short = day_bounds(date(2026, 3, 8), TORONTO)
    assert short.minutes == 23 * 60
    # 2026-11-01: falls back, 25 local hours
    long = day_bounds(date(2026, 11, 1), TORONTO)
    assert long.minutes == 25 * 60
    plain = day_bounds(date(2026, 7, 1), TORONTO)
    assert plain.minutes == 24 * 60


def test_week_and_month_bounds():
    week = week_bounds(date(2026, 9, 9), ZoneInfo("UTC"))
    assert week.start == dt(2026, 9, 7)
    assert week.end == dt(2026, 9, 14)
    month = month_bounds(date(2026, 12, 15), ZoneInfo("UTC"))
    assert month.start == dt(2026, 12, 1)
    assert month.end == dt(2027, 1, 1)


def test_local_days_touched_splits_overnight_shift():
    # 23:00 Toronto to 02:00 next day
    iv = Interval(dt(2026, 9, 8, 3), dt(2026, 9, 8, 6))
    got = list(local_days_touched(iv, TORONTO))
    assert got == [(date(2026, 9, 7), 60), (date(2026, 9, 8), 120)]


def test_local_day_segments_overnight():
    iv = Interval(dt(2026, 9, 8, 3), dt(2026, 9, 8, 6))
    got = list(local_day_segments(iv, TORONTO))
    assert got == [
        (date(2026, 9, 7), 23 * 60, 24 * 60),
        (date(2026, 9, 8), 0, 120),
    ]


def test_local_day_segments_single_day():
    iv = Interval(dt(2026, 9, 7, 13), dt(2026, 9, 7, 17))
    assert list(local_day_segments(iv, TORONTO)) == [(date(2026, 9, 7),
                                                      9 * 60, 13 * 60)]


def test_iso_week_label_year_boundary():
    # 2026-01-01 falls in ISO week 2026-W01; 2027-01-01 in 2026-W53
    assert iso_week_label(date(2026, 1, 1)) == "2026-W01"
    assert iso_week_label(date(2027, 1, 1)) == "2026-W53"


@pytest.mark.parametrize("text, minute", [
    ("00:00", 0), ("08:30", 510), ("24:00", 1440),
])
def test_parse_hhmm(text, minute):
    assert parse_hhmm(text) == minute
    if minute < 1440:
        assert fmt_hhmm(minute) == text


@pytest.mark.parametrize("text", ["25:00", "08:60", "24:01"])
def test_parse_hhmm_rejects(text):
    with pytest.raises(ValueError):
        parse_hhmm(text)
