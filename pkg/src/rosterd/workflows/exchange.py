"""Shift exchange workflows: claim, give-up, drop, and swap.

Each operation runs every check on the current snapshot, builds the
complete set of replacement records (shifts, the request, notifications)
and commits them in one apply, so a refused or failed step changes
nothing. Request lifecycles follow one transition table; anything else
raises IllegalTransition.
"""

from __future__ import annotations

import dataclasses
from datetime import datetime, timezone

from .. import errors
from ..engine.conflicts import conflicts_for
from ..engine.quotas import blocking, check_quotas
from ..engine.scheduler import eligible_accounts, understaffed
from ..model.records import ExchangeRequest, RequestKind, RequestState
from .notify import build

TRANSITIONS: dict[RequestState, frozenset[RequestState]] = {
    RequestState.OPEN: frozenset({
        RequestState.ACCEPTED, RequestState.CANCELLED, RequestState.REJECTED}),
    RequestState.ACCEPTED: frozenset({
        RequestState.APPROVED_PENDING, RequestState.COMPLETED}),
    RequestState.APPROVED_PENDING: frozenset({
        RequestState.COMPLETED, RequestState.REJECTED}),
    RequestState.COMPLETED: frozenset(),
    RequestState.CANCELLED: frozenset(),
    RequestState.REJECTED: frozenset(),
}


def transition(request: ExchangeRequest, to: RequestState) -> ExchangeRequest:
    if to not in TRANSITIONS[request.state]:
        raise errors.IllegalTransition(
            f"{request.state.value} -> {to.value} on {request.id}")
    return dataclasses.replace(request, state=to)


def _now(now: datetime | None) -> datetime:
    return now or datetime.now(timezone.utc).replace(second=0, microsecond=0)


def _live_duplicate(roster, shift_id: str, kind: RequestKind, initiator: str) -> bool:
    return any(
        r.shift == shift_id and r.kind == kind and r.initiator == initiator
        and r.state in (RequestState.OPEN, RequestState.ACCEPTED)
        for r in roster.requests.values()
    )


def _check_takeover(roster, shift, account_id: str,
                    exclude_shifts: frozenset = frozenset()) -> None:
    """All assign-grade checks for an account taking a slot on ``shift``."""
    acct = roster.account(account_id)
    sched = roster.schedule(shift.schedule)
    if account_id not in sched.members:
        raise errors.NotMember(account_id, sched.id)
    if acct.anonymized:
        raise errors.AccountAnonymized(account_id)
    if shift.required_positions and not (acct.positions & shift.required_positions):
        raise errors.NotEligiblePosition(account_id, shift.id)
    reports = conflicts_for(
        roster, account_id, shift.interval, shift.schedule, exclude_shifts)
    if reports:
        raise errors.ConflictRefused(reports)
    violations = blocking(check_quotas(
        roster, account_id, shift.interval, exclude_shifts=exclude_shifts))
    if violations:
        raise errors.QuotaRefused(violations)


# -- claim ---------------------------------------------------------------


def claim_shift(roster, shift_id: str, account_id: str,
                now: datetime | None = None):
    """Self-service take-up of an understaffed shift by an eligible member."""
    shift = roster.shift(shift_id)
    sched = roster.schedule(shift.schedule)
    acct = roster.account(account_id)
    if not sched.settings.claiming_enabled:
        raise errors.ClaimingDisabled(sched.id)
    if account_id in shift.assignments:
        return shift
    if not understaffed(shift):
        raise errors.NotUnderstaffed(shift_id)
    if shift.max_staff is not None and len(shift.assignments) >= shift.max_staff:
        raise errors.MaxStaffReached(shift_id, shift.max_staff)
    _check_takeover(roster, shift, account_id)

    updated = dataclasses.replace(
        shift, assignments=shift.assignments | {account_id})
    request = ExchangeRequest(
        id=roster.next_id("req"),
        kind=RequestKind.CLAIM,
        shift=shift_id,
        initiator=account_id,
        created_at=_now(now),
        state=RequestState.COMPLETED,
    )
    notes = build(
        roster,
        roster.managers_of(sched.id) - {account_id},
        "shift_claimed",
        {"claimant": acct.display_name, "shift": shift.title or shift.id,
         "interval": str(shift.interval), "schedule": sched.name},
        now=_now(now),
    )
    roster.apply(puts=[updated, request, *notes])
    return updated


# -- give up ---------------------------------------------------------------


def give_up_shift(roster, shift_id: str, initiator: str,
                  now: datetime | None = None) -> ExchangeRequest:
    """Offer a held slot to colleagues; effective only on acceptance."""
    shift = roster.shift(shift_id)
    sched = roster.schedule(shift.schedule)
    acct = roster.account(initiator)
    if not sched.settings.give_up_enabled:
        raise errors.GiveUpDisabled(sched.id)
    if initiator not in shift.assignments:
        raise errors.NotAssigned(initiator, shift_id)
    if _live_duplicate(roster, shift_id, RequestKind.GIVE_UP, initiator):
        raise errors.DuplicateRequest(shift_id, initiator)

    request = ExchangeRequest(
        id=roster.next_id("req"),
        kind=RequestKind.GIVE_UP,
        shift=shift_id,
        initiator=initiator,
        created_at=_now(now),
    )
    eligible = [c.account for c in eligible_accounts(roster, shift_id)
                if c.selectable]
    notes = build(
        roster,
        eligible,
        "give_up_opened",
        {"initiator": acct.display_name, "shift": shift.title or shift.id,
         "interval": str(shift.interval)},
        now=_now(now),
    )
    roster.apply(puts=[request, *notes])
    return request


def accept_give_up(roster, request_id: str, acceptor: str,
                   now: datetime | None = None) -> ExchangeRequest:
    """First eligible acceptor wins the offered slot; later callers get
    NotPending. The initiator comes off and the acceptor goes on in one
    step, so the staffing count never dips."""
    request = roster.request(request_id)
    if request.kind != RequestKind.GIVE_UP:
        raise errors.ValidationError([f"{request_id} is not a give-up request"])
    if request.state == RequestState.REJECTED:
        raise errors.ManagerRejected(request_id)
    if request.state != RequestState.OPEN:
        raise errors.NotPending(request_id, request.state.value)
    shift = roster.shift(request.shift)
    if request.initiator not in shift.assignments:
        raise errors.NotAssigned(request.initiator, shift.id)
    if acceptor == request.initiator or acceptor in shift.assignments:
        raise errors.ValidationError(
            [f"{acceptor} cannot accept a slot they already hold"])
    _check_takeover(roster, shift, acceptor)

    updated_shift = dataclasses.replace(
        shift, assignments=(shift.assignments - {request.initiator}) | {acceptor})
    done = transition(transition(request, RequestState.ACCEPTED),
                      RequestState.COMPLETED)
    done = dataclasses.replace(done, counterparty=acceptor)
    notes = build(
        roster,
        {request.initiator} | (roster.managers_of(shift.schedule) - {acceptor}),
        "give_up_completed",
        {"acceptor": roster.account(acceptor).display_name,
         "initiator": roster.account(request.initiator).display_name,
         "shift": shift.title or shift.id, "interval": str(shift.interval)},
        now=_now(now),
    )
    roster.apply(puts=[updated_shift, done, *notes])
    return done


def cancel_request(roster, request_id: str, actor: str) -> ExchangeRequest:
    request = roster.request(request_id)
    if request.state != RequestState.OPEN:
        raise errors.NotPending(request_id, request.state.value)
    shift = roster.shift(request.shift)
    if actor != request.initiator and not roster.can_manage(actor, shift.schedule):
        raise errors.Forbidden(actor, f"cancel {request_id}")
    cancelled = transition(request, RequestState.CANCELLED)
    roster.put(cancelled)
    return cancelled


# -- drop -------------------------------------------------------------------


def drop_shift(roster, shift_id: str, initiator: str,
               replacement: str | None = None,
               now: datetime | None = None):
    """Immediate relinquishment; the manager inherits the hole unless a
    replacement is named and passes every assign check."""
    shift = roster.shift(shift_id)
    sched = roster.schedule(shift.schedule)
    acct = roster.account(initiator)
    if not sched.settings.drop_enabled:
        raise errors.DropDisabled(sched.id)
    if initiator not in shift.assignments:
        raise errors.NotAssigned(initiator, shift_id)

    assignments = shift.assignments - {initiator}
    replacement_name = "-"
    if replacement is not None:
        if replacement == initiator or replacement in shift.assignments:
            raise errors.ValidationError(
                [f"{replacement} already holds a slot on {shift_id}"])
        _check_takeover(roster, shift, replacement)
        assignments |= {replacement}
        replacement_name = roster.account(replacement).display_name

    updated = dataclasses.replace(shift, assignments=assignments)
    request = ExchangeRequest(
        id=roster.next_id("req"),
        kind=RequestKind.DROP,
        shift=shift_id,
        initiator=initiator,
        created_at=_now(now),
        counterparty=replacement,
        state=RequestState.COMPLETED,
    )
    notes = build(
        roster,
        roster.managers_of(sched.id) - {initiator},
        "shift_dropped",
        {"initiator": acct.display_name, "shift": shift.title or shift.id,
         "interval": str(shift.interval), "replacement": replacement_name},
        now=_now(now),
    )
    roster.apply(puts=[updated, request, *notes])
    return updated


# -- swap -------------------------------------------------------------------


def _swap_payload(roster, request: ExchangeRequest) -> dict[str, str]:
    shifts = request.shift
    if request.counter_shift:
        shifts = f"{request.shift} + {request.counter_shift}"
    return {
        "initiator": roster.account(request.initiator).display_name,
        "counterparty": roster.account(request.counterparty).display_name,
        "shifts": shifts,
    }


def _swap_deltas(roster, request: ExchangeRequest):
    """Validate both directions and return the replacement shift records.

    The slot each party trades away is excluded from their own conflict
    and quota baselines. Counterparty problems surface as
    CounterpartyConflict; initiator problems as ConflictRefused or
    QuotaRefused.
    """
    shift_a = roster.shift(request.shift)
    sched = roster.schedule(shift_a.schedule)
    initiator, counterparty = request.initiator, request.counterparty
    if initiator not in shift_a.assignments:
        raise errors.NotAssigned(initiator, shift_a.id)

    shift_b = None
    exclude_b = frozenset()
    if request.counter_shift:
        shift_b = roster.shift(request.counter_shift)
        if counterparty not in shift_b.assignments:
            raise errors.NotAssigned(counterparty, shift_b.id)
        exclude_b = frozenset({shift_b.id})

    cp = roster.account(counterparty)
    if cp.anonymized:
        raise errors.AccountAnonymized(counterparty)
    problems = []
    if shift_a.required_positions and not (cp.positions & shift_a.required_positions):
        problems.append(f"{counterparty} holds no required position for {shift_a.id}")
    problems.extend(conflicts_for(
        roster, counterparty, shift_a.interval, sched.id, exclude_b))
    problems.extend(blocking(check_quotas(
        roster, counterparty, shift_a.interval, exclude_shifts=exclude_b)))
    if problems:
        raise errors.CounterpartyConflict(problems)

    if shift_b is not None:
        _check_takeover(roster, shift_b, initiator,
                        exclude_shifts=frozenset({shift_a.id}))

    puts = [dataclasses.replace(
        shift_a,
        assignments=(shift_a.assignments - {initiator}) | {counterparty})]
    if shift_b is not None:
        puts.append(dataclasses.replace(
            shift_b,
            assignments=(shift_b.assignments - {counterparty}) | {initiator}))
    return puts


def swap_shifts(roster, initiator: str, shift_id: str, counterparty: str,
                counter_shift: str | None = None,
                now: datetime | None = None) -> ExchangeRequest:
    """Exchange slots between two members of one schedule.

    Without approval the exchange applies immediately; with approval the
    request parks at ApprovedPending until a manager resolves it.
    """
    shift_a = roster.shift(shift_id)
    sched = roster.schedule(shift_a.schedule)
    if not sched.settings.swap_enabled:
        raise errors.SwapDisabled(sched.id)
    if counterparty == initiator:
        raise errors.ValidationError(["cannot swap with yourself"])
    for party in (initiator, counterparty):
        roster.account(party)
        if party not in sched.members:
            raise errors.NotMember(party, sched.id)
    if counter_shift is not None:
        shift_b = roster.shift(counter_shift)
        if shift_b.schedule != sched.id:
            raise errors.ValidationError(
                ["swaps stay within one schedule"])
    if _live_duplicate(roster, shift_id, RequestKind.SWAP, initiator):
        raise errors.DuplicateRequest(shift_id, initiator)

    request = ExchangeRequest(
        id=roster.next_id("req"),
        kind=RequestKind.SWAP,
        shift=shift_id,
        initiator=initiator,
        created_at=_now(now),
        counterparty=counterparty,
        counter_shift=counter_shift,
    )
    shift_puts = _swap_deltas(roster, request)
    accepted = transition(request, RequestState.ACCEPTED)

    if sched.settings.swap_requires_approval:
        parked = transition(accepted, RequestState.APPROVED_PENDING)
        notes = build(
            roster,
            roster.managers_of(sched.id) - {initiator},
            "swap_pending",
            _swap_payload(roster, parked),
            now=_now(now),
        )
        roster.apply(puts=[parked, *notes])
        return parked

    done = transition(accepted, RequestState.COMPLETED)
    notes = build(
        roster,
        {initiator, counterparty},
        "swap_completed",
        _swap_payload(roster, done),
        now=_now(now),
    )
    roster.apply(puts=[*shift_puts, done, *notes])
    return done


def resolve_swap(roster, request_id: str, decision: str, manager: str,
                 now: datetime | None = None) -> ExchangeRequest:
    """Manager approval step for a parked swap.

    Approve re-validates both directions against the current state and
    applies the exchange; a now-invalid swap refuses and stays parked.
    Reject ends the request; the parties are told either way.
    """
    request = roster.request(request_id)
    if request.kind != RequestKind.SWAP:
        raise errors.ValidationError([f"{request_id} is not a swap request"])
    if request.state != RequestState.APPROVED_PENDING:
        raise errors.NotPending(request_id, request.state.value)
    shift = roster.shift(request.shift)
    if not roster.can_manage(manager, shift.schedule):
        raise errors.Forbidden(manager, f"resolve swap {request_id}")
    if decision not in ("Approve", "Reject"):
        raise errors.ValidationError([f"unknown decision {decision!r}"])

    parties = {request.initiator, request.counterparty}
    if decision == "Reject":
        rejected = transition(request, RequestState.REJECTED)
        notes = build(roster, parties, "swap_rejected",
                      _swap_payload(roster, rejected), now=_now(now))
        roster.apply(puts=[rejected, *notes])
        return rejected

    shift_puts = _swap_deltas(roster, request)
    done = transition(request, RequestState.COMPLETED)
    notes = build(roster, parties, "swap_completed",
                  _swap_payload(roster, done), now=_now(now))
    roster.apply(puts=[*shift_puts, done, *notes])
    return done
