"""Time-off request and approval workflow."""

from __future__ import annotations

import dataclasses
from datetime import datetime, timezone

from .. import errors
from ..model.records import TimeOff, TimeOffState
from ..timeutil import Interval
from .notify import enqueue


def _now(now: datetime | None) -> datetime:
    return now or datetime.now(timezone.utc).replace(second=0, microsecond=0)


def request_time_off(roster, account_id: str, iv: Interval, reason: str = "",
                     entered_by: str | None = None,
                     now: datetime | None = None) -> TimeOff:
    """File an unavailability interval for the account.

    Members file for themselves when self entry is enabled; an Admin or
    an approver for the member may always enter it on their behalf. The
    state starts Approved when approval is switched off, Pending
    otherwise. Existing assignments are never touched.
    """
    acct = roster.account(account_id)
    actor = entered_by if entered_by is not None else account_id
    if actor == account_id:
        if not roster.settings.self_time_off_enabled:
            raise errors.SelfEntryDisabled(account_id)
    elif actor not in roster.approvers_for(account_id):
        raise errors.Forbidden(actor, "enter time off on behalf")
    if iv.start >= iv.end:
        raise errors.EmptyInterval(str(iv))

    state = (TimeOffState.PENDING if roster.settings.time_off_requires_approval
             else TimeOffState.APPROVED)
    record = TimeOff(
        id=roster.next_id("to"),
        account=account_id,
        interval=iv,
        reason=reason,
        state=state,
    )
    roster.put(record)
    enqueue(
        roster,
        roster.approvers_for(account_id) - {account_id},
        "time_off_requested",
        {"requester": acct.display_name, "interval": str(iv), "reason": reason or "-"},
        now=_now(now),
    )
    return record


def resolve_time_off(roster, time_off_id: str, decision: str, approver: str,
                     now: datetime | None = None) -> TimeOff:
    """Approve or deny a pending request; only Pending may transition."""
    record = roster.one_time_off(time_off_id)
    if record.state != TimeOffState.PENDING:
        raise errors.NotPending(time_off_id, record.state.value)
    if approver not in roster.approvers_for(record.account):
        raise errors.Forbidden(approver, "resolve time off")
    if decision not in ("Approve", "Deny"):
        raise errors.ValidationError([f"unknown decision {decision!r}"])

    state = TimeOffState.APPROVED if decision == "Approve" else TimeOffState.DENIED
    updated = dataclasses.replace(record, state=state)
    roster.put(updated)
    enqueue(
        roster,
        [record.account],
        "time_off_resolved",
        {"interval": str(record.interval), "decision": state.value},
        now=_now(now),
    )
    return updated
