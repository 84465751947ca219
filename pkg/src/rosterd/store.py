"""Embedded key-value store with transactions and optimistic locking.

Keys are strings, values anything the JSON codec accepts. A transaction
stages writes and applies them all at commit while holding the store
lock; nothing is visible (in memory or on disk) until then. Version
guards let callers detect concurrent edits: schedule mutation bumps a
``version:<schedule_id>`` counter, and a transaction opened with an
expected version fails with VersionConflict if the counter moved.

Persistence is one JSON file, written via tempfile + rename so a crash
mid-save never leaves a torn file.
"""

from __future__ import annotations

import copy
import json
import os
import tempfile
import threading
from pathlib import Path

from . import errors
from .model import records
from .model.roster import KIND_OF, Roster
from .serialize import from_jsonable, to_jsonable

_DELETED = object()


class KVStore:
    def __init__(self, path: str | Path | None = None):
        self._data: dict[str, object] = {}
        self._lock = threading.Lock()
        self.path = Path(path) if path else None
        self._commit_hook = None  # tests may set this to inject faults
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                self._data = json.load(fh)

    def get(self, key: str, default=None):
        with self._lock:
            value = self._data.get(key, default)
        return copy.deepcopy(value)

    def keys(self, prefix: str = "") -> list[str]:
        with self._lock:
            return sorted(k for k in self._data if k.startswith(prefix))

    def txn(self) -> "Transaction":
        return Transaction(self)

    def _commit(self, staged: dict, guards: dict[str, int]) -> None:
        with self._lock:
            for key, expected in guards.items():
                actual = self._data.get(key, 0)
                if actual != expected:
                    raise errors.VersionConflict(key, expected, actual)
            if self._commit_hook is not None:
                self._commit_hook()
            for key, value in staged.items():
                if value is _DELETED:
                    self._data.pop(key, None)
                else:
                    self._data[key] = value
            if self.path:
                self._save_locked()

    def _save_locked(self) -> None:
        payload = json.dumps(self._data, indent=1, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=str(self.path.parent), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class Transaction:
    """Staged writes against a KVStore, applied atomically on commit."""

    def __init__(self, store: KVStore):
        self.store = store
        self.staged: dict[str, object] = {}
        self.guards: dict[str, int] = {}

    def get(self, key: str, default=None):
        if key in self.staged:
            value = self.staged[key]
            return default if value is _DELETED else copy.deepcopy(value)
        return self.store.get(key, default)

    def put(self, key: str, value) -> None:
        self.staged[key] = copy.deepcopy(value)

    def delete(self, key: str) -> None:
        self.staged[key] = _DELETED

    def expect(self, key: str, version: int) -> None:
        self.guards[key] = version

    def bump(self, key: str) -> int:
        value = self.get(key, 0) + 1
        self.put(key, value)
        return value

    def __enter__(self) -> "Transaction":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.store._commit(self.staged, self.guards)


_BY_KIND = {kind: cls for cls, kind in KIND_OF.items()}


def version_key(schedule_id: str) -> str:
    return f"version:{schedule_id}"


class Repo:
    """A Roster materialized from a KVStore, with atomic mutations.

    ``mutate`` runs the given function on a private copy of the roster
    and commits the delta to the store in one transaction; if anything
    raises (including a version guard), neither the in-memory roster
    nor the file changes.
    """

    def __init__(self, store: KVStore | None = None):
        self.store = store if store is not None else KVStore()
        self._mutate_lock = threading.Lock()
        self.roster = self._load()

    def _load(self) -> Roster:
        roster = Roster()
        for key in self.store.keys():
            kind, _, rest = key.partition(":")
            if kind in _BY_KIND:
                rec = from_jsonable(_BY_KIND[kind], self.store.get(key))
                roster._table(kind)[rec.id] = rec
            elif key == "settings:system":
                roster.settings = from_jsonable(
                    records.SystemSettings, self.store.get(key))
        return roster

    def schedule_version(self, schedule_id: str) -> int:
        return self.store.get(version_key(schedule_id), 0)

    def mutate(self, fn, expect: dict[str, int] | None = None):
        # One writer at a time: the second of two racing calls re-reads the
        # state the first one committed instead of a stale snapshot.
        with self._mutate_lock:
            work = copy.deepcopy(self.roster)
            work.changes = []
            result = fn(work)
            with self.store.txn() as txn:
                for sid, version in (expect or {}).items():
                    txn.expect(version_key(sid), version)
                touched: set[str] = set()
                for action, kind, rec_id in work.changes:
                    if kind == "settings":
                        txn.put("settings:system", to_jsonable(work.settings))
                        continue
                    key = f"{kind}:{rec_id}"
                    if action == "put":
                        rec = work._table(kind)[rec_id]
                        txn.put(key, to_jsonable(rec))
                        if kind == "shift":
                            touched.add(rec.schedule)
                    else:
                        old = self.roster._table(kind).get(rec_id)
                        txn.delete(key)
                        if kind == "shift" and old is not None:
                            touched.add(old.schedule)
                    if kind == "schedule":
                        touched.add(rec_id)
                for sid in touched:
                    txn.bump(version_key(sid))
            self.roster = work
            return result
