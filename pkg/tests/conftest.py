"""Shared builders for the test suite."""

from __future__ import annotations

from datetime import date, datetime, timedelta, timezone

import pytest

from rosterd.model.records import (
    Account,
    PayRates,
    Role,
    Schedule,
    ScheduleSettings,
    Shift,
)
from rosterd.model.roster import Roster
from rosterd.timeutil import Interval

UTC = timezone.utc


def dt(y, mo, d, h=0, mi=0):
    return datetime(y, mo, d, h, mi, tzinfo=UTC)


def iv(start, end) -> Interval:
    return Interval(start, end)


def mk_account(aid, *, role=Role.REGULAR, email=None, given=None, family=None,
               **kw) -> Account:
    return Account(
        id=aid,
        given_name=given or aid.capitalize(),
        family_name=family or "Tester",
        email=email or f"{aid}@example.com",
        role=role,
        **kw,
    )


def mk_shift(sid, schedule, start, end, *, title=None, **kw) -> Shift:
    return Shift(
        id=sid,
        schedule=schedule,
        title=title or sid,
        interval=Interval(start, end),
        **kw,
    )


def mk_roster(accounts=(), schedules=(), shifts=(), time_off=(),
              settings=None) -> Roster:
    roster = Roster()
    if settings is not None:
        roster.settings = settings
    for rec in (*accounts, *schedules, *shifts, *time_off):
        roster.put(rec)
    roster.changes.clear()
    return roster


def random_staffed_roster(rng, with_pay=True) -> Roster:
    """Small random roster with assignments already in place.

    Used by the reporting and calendar round-trip properties; texture over
    realism: odd titles, mixed schedules, occasional overstaffing.
    """
    import dataclasses
    from datetime import timedelta

    from rosterd.model.records import Position, SystemSettings

    tz = rng.choice(["UTC", "America/Toronto"])
    accounts = []
    for i in range(rng.randrange(2, 6)):
        acct = mk_account(f"a-{i}")
        if with_pay and rng.random() < 0.7:
            acct = dataclasses.replace(acct, pay=PayRates(
                regular_rate=rng.choice([900, 1000, 1250, 1337]),
                overtime_rate=rng.choice([1500, 1875, 2000]),
                weekly_overtime_threshold=60 * rng.randrange(4, 40),
            ))
        accounts.append(acct)
    ids = [a.id for a in accounts]

    schedules = [
        Schedule(id="s-1", name="Desk, front", members=frozenset(ids),
                 location="loc-1"),
        Schedule(id="s-2", name="Phones; back", members=frozenset(ids)),
    ]
    positions = [Position(id="p-1", name="Student"),
                 Position(id="p-2", name="Librarian")]

    titles = ["Open", "Close", "Mid, day", "Ref desk \"late\"",
              "Réserve", "Backup\nline"]
    shifts = []
    for i in range(rng.randrange(3, 12)):
        start = dt(2026, 9, 7 + rng.randrange(0, 12), rng.randrange(6, 20))
        length = timedelta(minutes=15 * rng.randrange(2, 40))
        staff = frozenset(rng.sample(ids, rng.randrange(0, min(3, len(ids)) + 1)))
        shift = mk_shift(
            f"sh-{i:02d}", rng.choice(("s-1", "s-2")), start, start + length,
            title=rng.choice(titles),
            min_staff=rng.choice([1, 1, 2]),
            assignments=staff,
            work_from_home=rng.random() < 0.2,
        )
        if rng.random() < 0.3:
            shift = dataclasses.replace(
                shift, required_positions=frozenset({rng.choice(("p-1", "p-2"))}))
        shifts.append(shift)

    roster = mk_roster(accounts=accounts, schedules=schedules, shifts=shifts,
                       settings=SystemSettings(display_timezone=tz))
    for pos in positions:
        roster.put(pos)
    roster.changes.clear()
    return roster


def desk_records() -> list:
    """Records of the standard desk: one admin, three members, three shifts."""
    ada = mk_account("a-0", role=Role.ADMIN, given="Ada", family="Admin")
    alice = mk_account("a-1", given="Alice", family="Ame",
                       pay=PayRates(1000, 1500, 2400))
    bob = mk_account("a-2", given="Bob", family="Bee")
    cleo = mk_account("a-3", given="Cleo", family="Cyr")
    front = Schedule(id="s-1", name="Front desk",
                     members=frozenset({"a-1", "a-2", "a-3"}))
    phones = Schedule(id="s-2", name="Phones",
                      members=frozenset({"a-2", "a-3"}),
                      settings=ScheduleSettings(swap_requires_approval=True))
    open_shift = mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17),
                          title="Open", assignments=frozenset({"a-1"}))
    close_shift = mk_shift("sh-2", "s-1", dt(2026, 9, 8, 9), dt(2026, 9, 8, 17),
                           title="Close")
    line = mk_shift("sh-3", "s-2", dt(2026, 9, 9, 9), dt(2026, 9, 9, 12),
                    title="Line")
    return [ada, alice, bob, cleo, front, phones,
            open_shift, close_shift, line]


@pytest.fixture
def desk() -> Roster:
    """Small two-schedule desk: one admin, three members, three shifts."""
    roster = Roster()
    for rec in desk_records():
        roster.put(rec)
    roster.changes.clear()
    return roster
