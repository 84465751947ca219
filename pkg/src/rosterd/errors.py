"""Exception hierarchy shared by every rosterd module.

Every error carries a stable ``code`` (its class name) so the HTTP layer and
the CLI can map failures without string matching.
"""

from __future__ import annotations


class RosterError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- lookups ---------------------------------------------------------------

class UnknownAccount(RosterError):
    pass


class UnknownSchedule(RosterError):
    pass


class UnknownShift(RosterError):
    pass


class UnknownPosition(RosterError):
    pass


class UnknownTimeOff(RosterError):
    pass


class UnknownRequest(RosterError):
    pass


# --- domain validation -----------------------------------------------------

class ValidationError(RosterError):
    """One or more record invariants violated; ``violations`` lists them all."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class DuplicateEmail(RosterError):
    pass


class MalformedColor(RosterError):
    pass


class QuotaInconsistent(RosterError):
    pass


class AlreadyAnonymized(RosterError):
    pass


class AccountAnonymized(RosterError):
    """Anonymized accounts accept no new assignments."""


class CascadeViolation(RosterError):
    """view_stats / approve_time_off require manage_shifts."""


class NotMember(RosterError):
    pass


# --- assignment legality ---------------------------------------------------

class NotEligiblePosition(RosterError):
    pass


class ConflictRefused(RosterError):
    """Assignment refused because of conflicts; the reports ride along."""

    def __init__(self, reports, message="assignment conflicts"):
        self.reports = list(reports)
        super().__init__(message)


class QuotaRefused(RosterError):
    """Assignment refused because a quota would be exceeded."""

    def __init__(self, violations, message="quota exceeded"):
        self.violations = list(violations)
        super().__init__(message)


class MaxStaffReached(RosterError):
    pass


class ForbiddenForce(RosterError):
    """force=true attempted by a caller without manage_shifts."""


class NotAssigned(RosterError):
    pass


class SplitOutOfRange(RosterError):
    pass


class EmptyRange(RosterError):
    pass


class Forbidden(RosterError):
    pass


# --- workflows ---------------------------------------------------------------

class SelfEntryDisabled(RosterError):
    pass


class EmptyInterval(RosterError):
    pass


class NotPending(RosterError):
    pass


class ClaimingDisabled(RosterError):
    pass


class NotUnderstaffed(RosterError):
    pass


class GiveUpDisabled(RosterError):
    pass


class DuplicateRequest(RosterError):
    """A live (Open/Accepted) request of this kind already exists."""


class DropDisabled(RosterError):
    pass


class SwapDisabled(RosterError):
    pass


class CounterpartyConflict(RosterError):
    def __init__(self, reports, message="counterparty unavailable"):
        self.reports = list(reports)
        super().__init__(message)


class ManagerRejected(RosterError):
    pass


class IllegalTransition(RosterError):
    """(state, event) pair outside the declared transition table."""


# --- calendar / reporting ----------------------------------------------------

class MalformedCalendar(RosterError):
    pass


# --- service api -------------------------------------------------------------

class BadCredentials(RosterError):
    pass


class IpNotAllowed(RosterError):
    pass


class SourceWeekEmpty(RosterError):
    pass


class VersionConflict(RosterError):
    pass


# --- cli ---------------------------------------------------------------------

class ParseError(RosterError):
    pass


class InvariantViolation(RosterError):
    """Fixture or stored record violating an invariant; names the entity."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class BadFlags(RosterError):
    pass
