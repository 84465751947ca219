"""Time-off entry and approval."""

import dataclasses

import pytest

from rosterd import errors
from rosterd.model.records import ElevatedRights, SystemSettings, TimeOffState
from rosterd.workflows.timeoff import request_time_off, resolve_time_off

from conftest import dt, iv

NOW = dt(2026, 9, 1, 8)
WINDOW = iv(dt(2026, 9, 9, 0), dt(2026, 9, 10, 0))


def test_self_entry_starts_pending_and_notifies_approvers(desk):
    record = request_time_off(desk, "a-2", WINDOW, reason="dentist", now=NOW)
    assert record.state == TimeOffState.PENDING
    assert desk.time_off[record.id] == record
    recipients = {n.recipient for n in desk.notifications.values()}
    assert recipients == {"a-0"}


def test_self_entry_toggle(desk):
    desk.put_settings(SystemSettings(self_time_off_enabled=False))
    with pytest.raises(errors.SelfEntryDisabled):
        request_time_off(desk, "a-2", WINDOW, now=NOW)


def test_no_approval_means_immediately_approved(desk):
    desk.put_settings(SystemSettings(time_off_requires_approval=False))
    record = request_time_off(desk, "a-2", WINDOW, now=NOW)
    assert record.state == TimeOffState.APPROVED


def test_on_behalf_requires_approver_rights(desk):
    with pytest.raises(errors.Forbidden):
        request_time_off(desk, "a-2", WINDOW, entered_by="a-3", now=NOW)
    # admin may always enter on behalf
    record = request_time_off(desk, "a-2", WINDOW, entered_by="a-0", now=NOW)
    assert record.account == "a-2"
    # so may a granted approver on one of the member's schedules
    sched = desk.schedule("s-1")
    desk.put(dataclasses.replace(sched, grants={
        "a-1": ElevatedRights(manage_shifts=True, approve_time_off=True)}))
    record = request_time_off(desk, "a-2", WINDOW, entered_by="a-1", now=NOW)
    assert record.account == "a-2"


def test_self_entry_allowed_even_when_toggle_off_for_approvers(desk):
    desk.put_settings(SystemSettings(self_time_off_enabled=False))
    record = request_time_off(desk, "a-2", WINDOW, entered_by="a-0", now=NOW)
    assert record.state == TimeOffState.PENDING


def test_empty_interval_is_refused(desk):
    with pytest.raises(errors.EmptyInterval):
        request_time_off(desk, "a-2", iv(dt(2026, 9, 9), dt(2026, 9, 9)),
                         now=NOW)


def test_resolution_happy_paths(desk):
    record = request_time_off(desk, "a-2", WINDOW, now=NOW)
    desk.notifications.clear()
    approved = resolve_time_off(desk, record.id, "Approve", "a-0", now=NOW)
    assert approved.state == TimeOffState.APPROVED
    assert {n.recipient for n in desk.notifications.values()} == {"a-2"}

    second = request_time_off(desk, "a-3", WINDOW, now=NOW)
    denied = resolve_time_off(desk, second.id, "Deny", "a-0", now=NOW)
    assert denied.state == TimeOffState.DENIED


def test_double_resolution_is_refused(desk):
    record = request_time_off(desk, "a-2", WINDOW, now=NOW)
    resolve_time_off(desk, record.id, "Approve", "a-0", now=NOW)
    with pytest.raises(errors.NotPending):
        resolve_time_off(desk, record.id, "Deny", "a-0", now=NOW)


def test_resolution_needs_approver_rights(desk):
    record = request_time_off(desk, "a-2", WINDOW, now=NOW)
    with pytest.raises(errors.Forbidden):
        resolve_time_off(desk, record.id, "Approve", "a-3", now=NOW)
    with pytest.raises(errors.ValidationError):
        resolve_time_off(desk, record.id, "Maybe", "a-0", now=NOW)


def test_approved_time_off_never_unassigns_existing_work(desk):
    # alice keeps sh-1 even after approving overlapping leave
    record = request_time_off(desk, "a-1",
                              desk.shift("sh-1").interval, now=NOW)
    resolve_time_off(desk, record.id, "Approve", "a-0", now=NOW)
    assert "a-1" in desk.shift("sh-1").assignments
