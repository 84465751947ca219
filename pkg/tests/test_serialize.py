"""Codec round trips: every record kind survives to_jsonable/from_jsonable."""

import json
from datetime import date, datetime, timedelta, timezone

from hypothesis import given, settings
from hypothesis import strategies as st

from rosterd.model.records import (
    Account,
    AvailabilityGrid,
    ElevatedRights,
    ExchangeRequest,
    OpeningHoursCalendar,
    OpeningPeriod,
    PayRates,
    QuotaSet,
    RequestKind,
    RequestState,
    Role,
    Schedule,
    ScheduleSettings,
    Shift,
    SystemSettings,
    TimeOff,
    TimeOffState,
)
from rosterd.serialize import from_jsonable, to_jsonable
from rosterd.timeutil import Interval

ids = st.text(st.characters(categories=("Ll", "Nd")), min_size=1, max_size=8)
names = st.text(min_size=0, max_size=20)

minutes = st.integers(0, 5_000_000).map(
    lambda n: datetime(2020, 1, 1, tzinfo=timezone.utc) + timedelta(minutes=n))


@st.composite
def intervals(draw):
    start = draw(minutes)
    length = draw(st.integers(1, 2000))
    return Interval(start, start + timedelta(minutes=length))


slots = st.lists(
    st.tuples(st.integers(0, 1439), st.integers(1, 1440)).map(
        lambda p: (min(p), max(p)) if p[0] != p[1] else (p[0], p[0] + 1)),
    max_size=3,
).map(tuple)

grids = st.one_of(
    st.none(),
    st.dictionaries(st.integers(0, 6), slots, max_size=3),
).map(AvailabilityGrid)

quota_values = st.one_of(st.none(), st.integers(1, 10000))

accounts = st.builds(
    Account,
    id=ids, given_name=names, family_name=names, email=names,
    role=st.sampled_from(Role),
    positions=st.frozensets(ids, max_size=3),
    color=st.one_of(st.none(), st.just("#AB12CD")),
    quotas=st.builds(QuotaSet, max_hours_per_week=quota_values,
                     max_consecutive_days=quota_values),
    availability=grids,
    pay=st.one_of(st.none(), st.builds(
        PayRates, regular_rate=st.integers(0, 10000),
        overtime_rate=st.integers(0, 10000),
        weekly_overtime_threshold=st.integers(1, 10000))),
    anonymized=st.booleans(),
)

schedules = st.builds(
    Schedule,
    id=ids, name=names,
    location=st.one_of(st.none(), ids),
    members=st.frozensets(ids, max_size=5),
    is_public=st.booleans(),
    settings=st.builds(ScheduleSettings, swap_enabled=st.booleans(),
                       claiming_enabled=st.booleans()),
    grants=st.dictionaries(ids, st.builds(
        ElevatedRights, manage_shifts=st.booleans(),
        view_stats=st.booleans()), max_size=3),
)

shifts = st.builds(
    Shift,
    id=ids, schedule=ids, title=names, interval=intervals(),
    min_staff=st.integers(0, 4),
    max_staff=st.one_of(st.none(), st.integers(1, 6)),
    required_positions=st.frozensets(ids, max_size=2),
    favorites=st.frozensets(ids, max_size=3),
    assignments=st.frozensets(ids, max_size=4),
    work_from_home=st.booleans(),
)

time_off = st.builds(
    TimeOff, id=ids, account=ids, interval=intervals(),
    reason=names, state=st.sampled_from(TimeOffState),
)

requests = st.builds(
    ExchangeRequest,
    id=ids, kind=st.sampled_from(RequestKind), shift=ids, initiator=ids,
    created_at=minutes,
    counterparty=st.one_of(st.none(), ids),
    counter_shift=st.one_of(st.none(), ids),
    state=st.sampled_from(RequestState),
)

calendars = st.builds(
    OpeningHoursCalendar,
    id=ids,
    periods=st.lists(st.builds(
        OpeningPeriod, name=names,
        start=st.just(date(2026, 1, 1)), end=st.just(date(2026, 6, 1)),
        hours=st.dictionaries(st.integers(0, 6), slots, max_size=3),
    ), max_size=2),
    overrides=st.dictionaries(
        st.dates(date(2026, 1, 1), date(2026, 12, 31)), slots, max_size=3),
)

system_settings = st.builds(
    SystemSettings,
    self_time_off_enabled=st.booleans(),
    ip_allowlist=st.lists(st.just("10.0.0.0/8"), max_size=2).map(tuple),
    default_dashboard_days=st.integers(1, 30),
    display_timezone=st.sampled_from(["UTC", "America/Toronto"]),
)


def round_trip(record):
    encoded = to_jsonable(record)
    # must actually survive the JSON layer, not just the dict layer
    decoded = json.loads(json.dumps(encoded))
    return from_jsonable(type(record), decoded)


@settings(max_examples=60, deadline=None)
@given(st.one_of(accounts, schedules, shifts, time_off, requests,
                 calendars, system_settings))
def test_round_trip_identity(record):
    assert round_trip(record) == record


def test_datetimes_encode_as_minute_utc_strings():
    iv = Interval(datetime(2026, 9, 7, 9, 0, tzinfo=timezone.utc),
                  datetime(2026, 9, 7, 17, 0, tzinfo=timezone.utc))
    encoded = to_jsonable(iv)
    assert encoded == {"start": "2026-09-07T09:00Z", "end": "2026-09-07T17:00Z"}


def test_date_keyed_dicts_round_trip():
    cal = OpeningHoursCalendar(
        id="default", overrides={date(2026, 10, 12): ((480, 720),)})
    assert round_trip(cal) == cal
