"""Account lifecycle operations: validation, bulk recolor, anonymization."""

from __future__ import annotations

import dataclasses
import re
import secrets

from .. import errors
from .invariants import grid_problems, pay_problems
from .records import Account, AvailabilityGrid, HEX_COLOR, QuotaSet
from .roster import Roster


def _normalized_grid(grid: AvailabilityGrid) -> AvailabilityGrid:
    if grid.days is None:
        return grid
    days = {wd: tuple(sorted(slots)) for wd, slots in sorted(grid.days.items())}
    return AvailabilityGrid(days=days)


def validate_account(roster: Roster, draft: Account) -> Account:
    """Validate a new or updated account and return its normalized form.

    Normalization uppercases the color and sorts availability slots.
    Every broken rule is collected; if any, a ValidationError carrying
    the full list is raised so callers can show all problems at once.
    """
    violations: list[errors.RosterError] = []

    email = draft.email.strip()
    for other in roster.accounts.values():
        if other.id == draft.id or other.anonymized:
            continue
        if other.email == email:
            violations.append(errors.DuplicateEmail(email))
            break

    color = draft.color
    if color is not None:
        if HEX_COLOR.match(color):
            color = color.upper()
        else:
            violations.append(errors.MalformedColor(draft.color))

    quota_issues = []
    for name, value in draft.quotas.items():
        if value is not None and value <= 0:
            quota_issues.append(f"{name}={value} is not strictly positive")
    q = draft.quotas
    if (
        q.min_hours_per_week is not None
        and q.max_hours_per_week is not None
        and q.min_hours_per_week > q.max_hours_per_week
    ):
        quota_issues.append(
            f"min_hours_per_week {q.min_hours_per_week} exceeds "
            f"max_hours_per_week {q.max_hours_per_week}"
        )
    if quota_issues:
        violations.append(errors.QuotaInconsistent("; ".join(quota_issues)))

    grid = _normalized_grid(draft.availability)
    for problem in grid_problems(grid):
        violations.append(errors.ValidationError([problem]))
    if draft.pay is not None:
        for problem in pay_problems(draft.pay):
            violations.append(errors.ValidationError([problem]))

    if violations:
        raise errors.ValidationError(violations)

    return dataclasses.replace(
        draft,
        email=email,
        color=color,
        availability=grid,
    )


def apply_position_color(roster: Roster, position_id: str, color: str) -> int:
    """Set ``color`` on every account holding the position.

    Returns how many accounts were written, counting idempotent
    overwrites (an account already carrying the color still counts).
    """
    roster.position(position_id)
    if not HEX_COLOR.match(color):
        raise errors.MalformedColor(color)
    color = color.upper()
    touched = 0
    for acct in list(roster.accounts.values()):
        if position_id in acct.positions:
            roster.put(dataclasses.replace(acct, color=color))
            touched += 1
    return touched


def _scrub_payload(payload: dict, needles: list[str], token: str) -> dict:
    out = {}
    for key, value in payload.items():
        if isinstance(value, str):
            for needle in needles:
                if needle:
                    value = re.sub(re.escape(needle), token, value,
                                   flags=re.IGNORECASE)
        out[key] = value
    return out


def anonymize_account(roster: Roster, account_id: str) -> Account:
    """Irreversibly strip personal data from an account.

    The name and email collapse into one fresh opaque token. Historical
    shift assignments stay attached to the account id, but the account
    leaves every schedule (and loses any elevated rights with the
    membership) so nothing new can be assigned to it. Stored
    notification payloads mentioning the old name or email are scrubbed.
    """
    acct = roster.account(account_id)
    if acct.anonymized:
        raise errors.AlreadyAnonymized(account_id)

    token = f"anon-{secrets.token_hex(6)}"
    needles = [acct.email, f"{acct.given_name} {acct.family_name}",
               acct.given_name, acct.family_name]

    puts = [dataclasses.replace(
        acct,
        given_name=token,
        family_name=token,
        email=token,
        anonymized=True,
        quotas=QuotaSet(),
        availability=AvailabilityGrid(),
    )]
    for sched in roster.schedules.values():
        if account_id in sched.members:
            grants = {k: v for k, v in sched.grants.items() if k != account_id}
            puts.append(dataclasses.replace(
                sched,
                members=sched.members - {account_id},
                grants=grants,
            ))
    for note in roster.notifications.values():
        mentions = any(
            isinstance(v, str) and any(
                n and re.search(re.escape(n), v, re.IGNORECASE)
                for n in needles)
            for v in note.payload.values()
        )
        if note.recipient == account_id or mentions:
            puts.append(dataclasses.replace(
                note, payload=_scrub_payload(note.payload, needles, token)
            ))
    roster.apply(puts)
    return puts[0]


TOMBSTONE_ID = "tombstone"


def _tombstone(roster: Roster) -> Account:
    """The shared opaque account past work is re-pointed to on delete."""
    existing = roster.accounts.get(TOMBSTONE_ID)
    if existing is not None:
        return existing
    return Account(
        id=TOMBSTONE_ID,
        given_name="deleted",
        family_name="deleted",
        email="deleted",
        anonymized=True,
    )


def delete_account(roster: Roster, account_id: str, now) -> dict:
    """Remove an account outright.

    Future shifts simply lose the assignee; past assignments are
    re-pointed to a shared tombstone so historical staffing counts
    survive. Requests keep their history through the same token. The
    account's own time off and undelivered notifications go away with
    it.

    Returns counts of what was touched.
    """
    acct = roster.account(account_id)
    if account_id == TOMBSTONE_ID:
        raise errors.ValidationError(["the tombstone account cannot be deleted"])
    stone = _tombstone(roster)
    puts: list = [stone]
    deletes: list = []
    unassigned = repointed = 0

    for shift in roster.shifts.values():
        changed = shift
        if account_id in changed.assignments:
            if changed.interval.start >= now:
                changed = dataclasses.replace(
                    changed, assignments=changed.assignments - {account_id})
                unassigned += 1
            else:
                changed = dataclasses.replace(
                    changed,
                    assignments=(changed.assignments - {account_id})
                    | {stone.id},
                )
                repointed += 1
        if account_id in changed.favorites:
            changed = dataclasses.replace(
                changed, favorites=changed.favorites - {account_id})
        if changed is not shift:
            puts.append(changed)

    for sched in roster.schedules.values():
        if account_id in sched.members or account_id in sched.grants:
            puts.append(dataclasses.replace(
                sched,
                members=sched.members - {account_id},
                grants={k: v for k, v in sched.grants.items()
                        if k != account_id},
            ))

    for req in roster.requests.values():
        if account_id in (req.initiator, req.counterparty):
            puts.append(dataclasses.replace(
                req,
                initiator=stone.id if req.initiator == account_id else req.initiator,
                counterparty=(stone.id if req.counterparty == account_id
                              else req.counterparty),
            ))

    for item in roster.time_off.values():
        if item.account == account_id:
            deletes.append(item)
    for note in roster.notifications.values():
        if note.recipient == account_id:
            deletes.append(note)

    deletes.append(acct)
    roster.apply(puts, deletes)
    return {
        "account": account_id,
        "future_unassigned": unassigned,
        "past_repointed": repointed,
    }
