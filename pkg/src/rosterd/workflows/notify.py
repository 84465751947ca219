"""Notification outbox: template rendering and pluggable delivery.

Message bodies live as text files under ``templates/<locale>/<key>.txt``
with ``{placeholder}`` substitution; every key must exist for both en
and fr. Workflow code only enqueues Notification records; a transport
drains the outbox later, so tests can assert the fan-out without any
mail infrastructure. The desk-scale transport appends rendered messages
to a plain file.
"""

from __future__ import annotations

from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path

from ..model.records import Locale, Notification

TEMPLATE_ROOT = Path(__file__).parent / "templates"


@lru_cache(maxsize=None)
def catalog(locale: str) -> dict[str, str]:
    root = TEMPLATE_ROOT / locale
    out = {}
    for path in sorted(root.glob("*.txt")):
        out[path.stem] = path.read_text(encoding="utf-8").rstrip("\n")
    return out


def render(template: str, locale: Locale, payload: dict[str, str]) -> str:
    text = catalog(locale.value)[template]
    return text.format(**payload)


def build(roster, recipients, template: str, payload: dict[str, str],
          now: datetime | None = None) -> list[Notification]:
    """Create Notification records without storing them.

    Workflows collect these and commit them together with the rest of
    their delta in one apply, keeping failures all-or-nothing.
    """
    for locale in Locale:
        if template not in catalog(locale.value):
            raise KeyError(f"template {template!r} missing for {locale.value}")
    now = now or datetime.now(timezone.utc).replace(second=0, microsecond=0)
    notes = []
    for recipient in sorted(set(recipients)):
        if recipient not in roster.accounts:
            continue
        notes.append(Notification(
            id=roster.next_id("note"),
            recipient=recipient,
            template=template,
            locale=roster.settings.locale_default,
            payload=dict(payload),
            created_at=now,
        ))
    return notes


def enqueue(roster, recipients, template: str, payload: dict[str, str],
            now: datetime | None = None) -> list[Notification]:
    """Queue one notification per recipient; rendering happens at delivery."""
    notes = build(roster, recipients, template, payload, now)
    for note in notes:
        roster.put(note)
    return notes


class FileSinkTransport:
    """Appends rendered messages to a file, one block per notification."""

    def __init__(self, path):
        self.path = Path(path)

    def deliver(self, notification: Notification, body: str) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(
                f"To: {notification.recipient}\n"
                f"Template: {notification.template}\n"
                f"{body}\n\n"
            )


def deliver_outbox(roster, transport) -> int:
    """Render and hand every undelivered notification to the transport."""
    import dataclasses

    count = 0
    for note in list(roster.notifications.values()):
        if note.delivered:
            continue
        body = render(note.template, note.locale, note.payload)
        transport.deliver(note, body)
        roster.put(dataclasses.replace(note, delivered=True))
        count += 1
    return count
