"""Acceptance sweep: the product's headline guarantees, one test each.

Each test here is one verdict line under ``pytest -v``. The randomized
checks reuse the oracle harnesses from the topic suites but run them at
full scale, so a pass means the sampled behavior space is clean, not
just the handful of cases the unit tests pin down.
"""

import dataclasses
import itertools
from datetime import date, datetime, timezone

import pytest

import test_authz as authz
from conftest import dt, iv, mk_account, mk_roster, mk_shift
from rosterd import errors
from rosterd.api.ops import copy_week, dashboard_data, grant_rights
from rosterd.engine.autoschedule import AutoScheduleParams, auto_schedule
from rosterd.engine.quotas import check_quotas
from rosterd.engine.scheduler import assign, expand_recurring_shift, understaffed
from rosterd.model.records import (
    CopyMode,
    ElevatedRights,
    ExchangeRequest,
    QuotaSet,
    Recurrence,
    RequestKind,
    RequestState,
    Role,
    Schedule,
    SystemSettings,
    TimeOff,
    TimeOffState,
)
from rosterd.timeutil import Interval
from rosterd.workflows.exchange import TRANSITIONS, transition
from rosterd.workflows.timeoff import resolve_time_off
from test_autoschedule import run_property
from test_concurrency import race_once
from test_conflicts import check_against_oracle as conflict_divergences
from test_ical import run_roundtrip as ical_divergences
from test_opening_hours import check_against_oracle as opening_divergences
from test_reports import check_csv_roundtrip, check_pay_oracle

WEEK = (date(2026, 9, 7), date(2026, 9, 14))


def one_member_roster(shifts, accounts=("a-1",), time_off=()):
    return mk_roster(
        accounts=[mk_account(a) for a in accounts],
        schedules=[Schedule(id="s-1", name="Desk",
                            members=frozenset(accounts))],
        shifts=shifts,
        time_off=time_off,
    )


# -- feature table ------------------------------------------------------------


def check_default_min_staff():
    shift = mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17))
    assert shift.min_staff == 1
    assert understaffed(shift)
    assert not understaffed(dataclasses.replace(
        shift, assignments=frozenset({"a-1"})))


def quota_row(kind, quotas, base_shifts, proposal, advisory=False):
    """One quota kind: the violation is named, and assignment reacts."""

    def check():
        bases = [dataclasses.replace(s, assignments=frozenset({"a-1"}))
                 for s in base_shifts]
        roster = one_member_roster(bases + [proposal])
        roster.put(dataclasses.replace(roster.account("a-1"), quotas=quotas))
        named = [v for v in check_quotas(roster, "a-1", proposal.interval)
                 if v.which == kind]
        assert named, f"no {kind} violation surfaced"
        if advisory:
            assert all(v.advisory for v in named)
            assign(roster, proposal.id, "a-1")
            assert "a-1" in roster.shift(proposal.id).assignments
        else:
            assert not any(v.advisory for v in named)
            with pytest.raises(errors.QuotaRefused) as exc:
                assign(roster, proposal.id, "a-1")
            assert any(v.which == kind for v in exc.value.violations)

    return check


def check_minute_precision():
    shift = mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9, 7), dt(2026, 9, 7, 13, 23))
    assert shift.interval.minutes == 256
    with pytest.raises(ValueError):
        Interval(datetime(2026, 9, 7, 9, 0, 30, tzinfo=timezone.utc),
                 dt(2026, 9, 7, 17))


def check_force_is_per_instance():
    roster = one_member_roster([
        mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17),
                 assignments=frozenset({"a-1"})),
        mk_shift("sh-2", "s-1", dt(2026, 9, 7, 12), dt(2026, 9, 7, 18)),
    ])
    with pytest.raises(errors.ConflictRefused):
        assign(roster, "sh-2", "a-1")
    assign(roster, "sh-2", "a-1", force=True)
    assert "a-1" in roster.shift("sh-2").assignments

    # forcing the template never carries into its occurrences: the copy
    # that would double-book is skipped and reported instead
    roster = one_member_roster([
        mk_shift("sh-t", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17),
                 assignments=frozenset({"a-1"}),
                 recurrence=Recurrence(weekdays=frozenset({1}),
                                       until=date(2026, 9, 8))),
        mk_shift("sh-block", "s-1", dt(2026, 9, 8, 10), dt(2026, 9, 8, 12),
                 assignments=frozenset({"a-1"})),
    ])
    created, skipped = expand_recurring_shift(roster, "sh-t")
    assert len(created) == 1
    assert created[0].assignments == frozenset()
    assert [(s[0], s[1]) for s in skipped] == [(date(2026, 9, 8), "a-1")]


def check_copy_week_modes():
    def fresh():
        return mk_roster(
            accounts=[mk_account("a-1"), mk_account("a-2")],
            schedules=[Schedule(id="s-1", name="Desk",
                                members=frozenset({"a-1", "a-2"}))],
            shifts=[mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9),
                             dt(2026, 9, 7, 17),
                             assignments=frozenset({"a-1", "a-2"}))],
            time_off=[TimeOff(id="to-1", account="a-1",
                              interval=iv(dt(2026, 9, 14, 0),
                                          dt(2026, 9, 15, 0)),
                              state=TimeOffState.APPROVED)],
        )

    created, skipped = copy_week(fresh(), "s-1", "2026-W37", ["2026-W38"],
                                 CopyMode.WITH_STAFF_CHECKED)
    assert len(created) == 1
    assert created[0].assignments == frozenset({"a-2"})
    assert [s[2] for s in skipped] == ["a-1"]

    created, skipped = copy_week(fresh(), "s-1", "2026-W37", ["2026-W38"],
                                 CopyMode.WITH_STAFF_UNCHECKED)
    assert created[0].assignments == frozenset({"a-1", "a-2"})
    assert skipped == []

    created, skipped = copy_week(fresh(), "s-1", "2026-W37", ["2026-W38"],
                                 CopyMode.SHIFTS_ONLY)
    assert created[0].assignments == frozenset()
    assert skipped == []


def check_dashboard_default_window():
    assert SystemSettings().default_dashboard_days == 7
    now = dt(2026, 9, 7, 8)
    roster = one_member_roster([
        mk_shift("sh-in", "s-1", dt(2026, 9, 13, 9), dt(2026, 9, 13, 17),
                 assignments=frozenset({"a-1"})),
        mk_shift("sh-out", "s-1", dt(2026, 9, 15, 9), dt(2026, 9, 15, 17),
                 assignments=frozenset({"a-1"})),
    ])
    data = dashboard_data(roster, "a-1", now=now)
    assert [s.id for s in data["assignments"]] == ["sh-in"]
    wide = dashboard_data(roster, "a-1", days=9, now=now)
    assert [s.id for s in wide["assignments"]] == ["sh-in", "sh-out"]


def check_rights_cascade():
    roster = mk_roster(
        accounts=[mk_account("a-0", role=Role.ADMIN), mk_account("a-1")],
        schedules=[Schedule(id="s-1", name="Desk",
                            members=frozenset({"a-1"}))],
    )
    with pytest.raises(errors.CascadeViolation):
        grant_rights(roster, "s-1", "a-1",
                     ElevatedRights(view_stats=True), actor="a-0")
    with pytest.raises(errors.CascadeViolation):
        grant_rights(roster, "s-1", "a-1",
                     ElevatedRights(approve_time_off=True), actor="a-0")
    updated = grant_rights(roster, "s-1", "a-1",
                           ElevatedRights(manage_shifts=True,
                                          view_stats=True), actor="a-0")
    assert updated.grants["a-1"].manage_shifts
    cleared = grant_rights(roster, "s-1", "a-1", ElevatedRights(),
                           actor="a-0")
    assert "a-1" not in cleared.grants


FEATURE_ROWS = [
    ("default-min-staff", check_default_min_staff),
    ("quota-max-hours-per-day", quota_row(
        "max_hours_per_day", QuotaSet(max_hours_per_day=480),
        [mk_shift("sh-base", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 14))],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 7, 15), dt(2026, 9, 7, 19)))),
    ("quota-max-hours-per-week", quota_row(
        "max_hours_per_week", QuotaSet(max_hours_per_week=600),
        [mk_shift("sh-base", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17))],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 9, 9), dt(2026, 9, 9, 12)))),
    ("quota-max-hours-per-month", quota_row(
        "max_hours_per_month", QuotaSet(max_hours_per_month=600),
        [mk_shift("sh-base", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17))],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 28, 9), dt(2026, 9, 28, 12)))),
    ("quota-min-hours-per-week-advisory", quota_row(
        "min_hours_per_week", QuotaSet(min_hours_per_week=1200),
        [],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17)),
        advisory=True)),
    ("quota-max-consecutive-hours", quota_row(
        "max_consecutive_hours", QuotaSet(max_consecutive_hours=540),
        [mk_shift("sh-base", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17))],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 7, 17), dt(2026, 9, 7, 19)))),
    ("quota-max-consecutive-days", quota_row(
        "max_consecutive_days", QuotaSet(max_consecutive_days=2),
        [mk_shift("sh-b1", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 12)),
         mk_shift("sh-b2", "s-1", dt(2026, 9, 8, 9), dt(2026, 9, 8, 12))],
        mk_shift("sh-prop", "s-1", dt(2026, 9, 9, 9), dt(2026, 9, 9, 12)))),
    ("minute-precision", check_minute_precision),
    ("force-per-instance-only", check_force_is_per_instance),
    ("copy-week-three-modes", check_copy_week_modes),
    ("dashboard-seven-day-default", check_dashboard_default_window),
    ("rights-cascade", check_rights_cascade),
]


def test_feature_matrix_conformance():
    failures = []
    for name, check in FEATURE_ROWS:
        try:
            check()
        except Exception as exc:
            failures.append(f"{name}: {exc!r}")
    assert not failures, \
        f"{len(failures)}/{len(FEATURE_ROWS)} feature rows failed:\n" \
        + "\n".join(failures)


# -- randomized equivalences ---------------------------------------------------


def test_conflict_engine_equals_bruteforce_oracle():
    assert conflict_divergences(instances=1000, seed=260814) == 0


def test_autoschedule_feasible_maximal_deterministic():
    run_property(instances=500, seed=260814)


def test_favorites_semantics():
    def build(favorites):
        return one_member_roster(
            [mk_shift("sh-1", "s-1", dt(2026, 9, 7, 9), dt(2026, 9, 7, 17),
                      favorites=favorites)],
            accounts=("a-1", "a-2"))

    def send_away(roster, who):
        roster.put(TimeOff(id="to-1", account=who,
                           interval=roster.shift("sh-1").interval,
                           state=TimeOffState.APPROVED))

    mixed = AutoScheduleParams(schedules=frozenset({"s-1"}), date_range=WEEK)
    only = dataclasses.replace(mixed, favorites_only=True)

    # favorites-only + sole favorite away: the slot stays open
    roster = build(frozenset({"a-2"}))
    send_away(roster, "a-2")
    result = auto_schedule(roster, only)
    assert result.assignments == []
    assert result.unfilled == ["sh-1"]
    assert roster.shift("sh-1").assignments == frozenset()

    # favorites-only never drafts willing non-favorites
    roster = build(frozenset())
    result = auto_schedule(roster, only)
    assert result.assignments == []
    assert result.unfilled == ["sh-1"]

    # mixed mode: the favorite wins when free
    roster = build(frozenset({"a-2"}))
    assert auto_schedule(roster, mixed).assignments == [("sh-1", "a-2")]

    # mixed mode: non-favorites fill in when every favorite is away
    roster = build(frozenset({"a-2"}))
    send_away(roster, "a-2")
    result = auto_schedule(roster, mixed)
    assert result.assignments == [("sh-1", "a-1")]
    assert result.unfilled == []


def test_workflow_machines_and_single_winner_race():
    # every (state, target) pair either follows the table or refuses
    for state, target in itertools.product(RequestState, RequestState):
        request = ExchangeRequest(id="req-1", kind=RequestKind.GIVE_UP,
                                  shift="sh-1", initiator="a-1",
                                  created_at=dt(2026, 9, 1, 8), state=state)
        if target in TRANSITIONS[state]:
            assert transition(request, target).state == target
        else:
            with pytest.raises(errors.IllegalTransition):
                transition(request, target)

    # time off resolves from Pending only, to exactly the decided state
    for state, decision in itertools.product(TimeOffState,
                                             ("Approve", "Deny")):
        roster = mk_roster(
            accounts=[mk_account("a-0", role=Role.ADMIN), mk_account("a-1")],
            schedules=[Schedule(id="s-1", name="Desk",
                                members=frozenset({"a-1"}))],
            time_off=[TimeOff(id="to-1", account="a-1",
                              interval=iv(dt(2026, 9, 21), dt(2026, 9, 22)),
                              state=state)],
        )
        if state == TimeOffState.PENDING:
            want = (TimeOffState.APPROVED if decision == "Approve"
                    else TimeOffState.DENIED)
            assert resolve_time_off(roster, "to-1", decision,
                                    "a-0").state == want
        else:
            with pytest.raises(errors.NotPending):
                resolve_time_off(roster, "to-1", decision, "a-0")

    # two simultaneous acceptors of one give-up: exactly one winner
    for trial in range(100):
        outcomes, assignments = race_once()
        assert sorted(outcomes) == ["lost", "won"], f"trial {trial}"
        assert len(assignments) == 1, f"trial {trial}: {assignments}"
        assert assignments <= {"a-2", "a-3"}, f"trial {trial}"


def test_round_trips_and_aggregation_oracles():
    assert ical_divergences(instances=200, seed=260814) == 0
    assert check_csv_roundtrip(instances=200, seed=260815) == 0
    assert check_pay_oracle(instances=120, seed=260816) == 0
    assert opening_divergences(instances=200, seed=260817) == 0


def test_authorization_matrix_zero_unauthorized():
    cells = 0
    for row in authz.ROWS:
        for actor in authz.ACTORS:
            authz.run_cell(row, actor)
            cells += 1
    assert cells == len(authz.ROWS) * len(authz.ACTORS)
