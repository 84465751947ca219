"""Opening-hours totals against a minute-set day-by-day oracle."""

import random
from datetime import date, timedelta

from rosterd.model.records import OpeningHoursCalendar, OpeningPeriod
from rosterd.reporting.opening_hours import annual_open_hours

from oracles import bucket_of, open_minutes_by_day


def term_calendar() -> OpeningHoursCalendar:
    weekday_hours = {wd: ((8 * 60, 18 * 60),) for wd in range(5)}
    return OpeningHoursCalendar(
        id="default",
        periods=[
            OpeningPeriod(name="term", start=date(2026, 9, 1),
                          end=date(2026, 12, 20), hours=weekday_hours),
            OpeningPeriod(name="break", start=date(2026, 12, 20),
                          end=date(2027, 1, 5),
                          hours={wd: ((10 * 60, 14 * 60),) for wd in range(5)}),
        ],
        overrides={date(2026, 10, 12): ()},
    )


def test_one_term_week_is_3000_minutes():
    total, breakdown = annual_open_hours(
        term_calendar(), (date(2026, 9, 7), date(2026, 9, 14)))
    assert total == 5 * 600
    assert breakdown == {"term": 3000}


def test_holiday_override_removes_one_day():
    total, breakdown = annual_open_hours(
        term_calendar(), (date(2026, 10, 12), date(2026, 10, 19)))
    assert total == 4 * 600
    assert breakdown == {"term": 2400}


def test_breakdown_splits_on_period_boundaries():
    # Dec 14-25: term Mon-Fri 14..18 (5 days), break Mon 21-Fri 25 (5 days)
    total, breakdown = annual_open_hours(
        term_calendar(), (date(2026, 12, 14), date(2026, 12, 26)))
    assert breakdown["term"] == 5 * 600
    assert breakdown["break"] == 5 * 240
    assert total == sum(breakdown.values())


def test_override_outside_every_period_lands_in_exceptions():
    cal = term_calendar()
    cal.overrides[date(2027, 2, 1)] = ((9 * 60, 12 * 60),)
    total, breakdown = annual_open_hours(
        cal, (date(2027, 1, 25), date(2027, 2, 8)))
    assert breakdown == {"exceptions": 180}
    assert total == 180


def random_calendar(rng: random.Random) -> OpeningHoursCalendar:
    periods = []
    cursor = date(2026, 1, 1) + timedelta(days=rng.randrange(0, 30))
    for index in range(rng.randrange(1, 4)):
        length = rng.randrange(20, 90)
        hours = {}
        for wd in rng.sample(range(7), rng.randrange(0, 7)):
            slots = []
            lo = 60 * rng.randrange(0, 10)
            for _ in range(rng.randrange(1, 3)):
                hi = min(1440, lo + 30 * rng.randrange(1, 20))
                if lo < hi:
                    slots.append((lo, hi))
                lo = hi + 30 * rng.randrange(1, 5)
                if lo >= 1440:
                    break
            if slots:
                hours[wd] = tuple(slots)
        periods.append(OpeningPeriod(
            name=f"period-{index}", start=cursor,
            end=cursor + timedelta(days=length), hours=hours))
        cursor += timedelta(days=length + rng.randrange(0, 15))

    overrides = {}
    span = (cursor - periods[0].start).days
    for _ in range(rng.randrange(0, 6)):
        day = periods[0].start + timedelta(days=rng.randrange(0, span + 20))
        if rng.random() < 0.4:
            overrides[day] = ()
        else:
            lo = 60 * rng.randrange(0, 20)
            overrides[day] = ((lo, min(1440, lo + 60 * rng.randrange(1, 6))),)
    return OpeningHoursCalendar(id="default", periods=periods,
                                overrides=overrides)


def check_against_oracle(instances: int, seed: int) -> int:
    """Random calendars and ranges; returns divergence count."""
    rng = random.Random(seed)
    divergences = 0
    for _ in range(instances):
        cal = random_calendar(rng)
        start = cal.periods[0].start - timedelta(days=rng.randrange(0, 10))
        end = start + timedelta(days=rng.randrange(1, 45))
        got_total, got_breakdown = annual_open_hours(cal, (start, end))

        plain = [(p.name, p.start, p.end, p.hours) for p in cal.periods]
        by_day = open_minutes_by_day(plain, cal.overrides, start, end)
        want_total = sum(by_day.values())
        want_breakdown: dict[str, int] = {}
        for day, minutes in by_day.items():
            bucket = bucket_of(plain, day)
            want_breakdown[bucket] = want_breakdown.get(bucket, 0) + minutes

        if got_total != want_total or got_breakdown != want_breakdown:
            divergences += 1
    return divergences


def test_randomized_agreement_with_day_by_day_oracle():
    assert check_against_oracle(instances=200, seed=8675309) == 0
