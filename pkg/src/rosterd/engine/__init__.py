from .autoschedule import AutoScheduleParams, AutoScheduleResult, auto_schedule
from .conflicts import ConflictKind, ConflictReport, ExternalEvent, conflicts_for
from .quotas import QuotaViolation, blocking, check_quotas
from .scheduler import (
    Candidate,
    assign,
    assigned_week_minutes,
    eligible_accounts,
    expand_recurring_shift,
    split_shift,
    unassign,
    understaffed,
)

__all__ = [
    "AutoScheduleParams", "AutoScheduleResult", "Candidate", "ConflictKind",
    "ConflictReport", "ExternalEvent", "QuotaViolation", "assign",
    "assigned_week_minutes", "auto_schedule", "blocking", "check_quotas",
    "conflicts_for", "eligible_accounts", "expand_recurring_shift",
    "split_shift", "unassign", "understaffed",
]
