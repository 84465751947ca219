from .exchange import (
    TRANSITIONS,
    accept_give_up,
    cancel_request,
    claim_shift,
    drop_shift,
    give_up_shift,
    resolve_swap,
    swap_shifts,
    transition,
)
from .notify import FileSinkTransport, catalog, deliver_outbox, enqueue, render
from .timeoff import request_time_off, resolve_time_off

__all__ = [
    "TRANSITIONS", "FileSinkTransport", "accept_give_up", "cancel_request",
    "catalog", "claim_shift", "deliver_outbox", "drop_shift", "enqueue",
    "give_up_shift", "render", "request_time_off", "resolve_swap",
    "resolve_time_off", "swap_shifts", "transition",
]
