"""Notification catalog and outbox."""

import re

import pytest

from rosterd.model.records import Locale
from rosterd.workflows.notify import (
    FileSinkTransport,
    TEMPLATE_ROOT,
    build,
    catalog,
    deliver_outbox,
    enqueue,
    render,
)

from conftest import dt

NOW = dt(2026, 9, 1, 8)


def test_catalogs_are_complete_in_both_directions():
    en = catalog("en")
    fr = catalog("fr")
    assert en, "catalog must not be empty"
    assert set(en) == set(fr)


def test_catalog_placeholders_match_across_locales():
    pattern = re.compile(r"\{(\w+)\}")
    en = catalog("en")
    fr = catalog("fr")
    for key in en:
        assert set(pattern.findall(en[key])) == set(pattern.findall(fr[key])), key


def test_every_template_file_has_a_twin():
    en_files = {p.name for p in (TEMPLATE_ROOT / "en").glob("*.txt")}
    fr_files = {p.name for p in (TEMPLATE_ROOT / "fr").glob("*.txt")}
    assert en_files == fr_files


def test_render_substitutes_payload():
    body_en = render("shift_claimed", Locale.EN,
                     {"claimant": "Bob", "shift": "Open",
                      "interval": "x", "schedule": "Front desk"})
    assert "Bob" in body_en
    body_fr = render("shift_claimed", Locale.FR,
                     {"claimant": "Bob", "shift": "Open",
                      "interval": "x", "schedule": "Front desk"})
    assert "Bob" in body_fr
    assert body_en != body_fr


def test_build_rejects_unknown_template(desk):
    with pytest.raises(KeyError):
        build(desk, ["a-1"], "no_such_template", {}, now=NOW)


def test_build_skips_unknown_recipients_and_stores_nothing(desk):
    notes = build(desk, ["a-1", "ghost"], "shift_claimed",
                  {"claimant": "x", "shift": "y", "interval": "z",
                   "schedule": "w"}, now=NOW)
    assert [n.recipient for n in notes] == ["a-1"]
    assert desk.notifications == {}


def test_enqueue_stores_and_deliver_drains(tmp_path, desk):
    enqueue(desk, ["a-1", "a-2"], "shift_claimed",
            {"claimant": "Bob Bee", "shift": "Open", "interval": "i",
             "schedule": "Front desk"}, now=NOW)
    sink = tmp_path / "outbox.txt"
    delivered = deliver_outbox(desk, FileSinkTransport(sink))
    assert delivered == 2
    text = sink.read_text()
    assert "To: a-1" in text and "To: a-2" in text
    assert "Bob Bee" in text
    assert all(n.delivered for n in desk.notifications.values())
    # a second drain finds nothing new
    assert deliver_outbox(desk, FileSinkTransport(sink)) == 0
