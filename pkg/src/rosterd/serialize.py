"""Reflection-based JSON codec for the dataclass records.

Encodes dataclasses to plain dicts and back using the declared field
types, so the store can persist anything in the model without
per-record glue. Supported field shapes: nested dataclasses, enums,
datetime/date, frozenset, tuple, dict with str/int/date keys, and
Optional of any of those.
"""

from __future__ import annotations

import dataclasses
import datetime as dt
import enum
import types
import typing

from .timeutil import Interval


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dt.datetime):
        return obj.strftime("%Y-%m-%dT%H:%MZ")
    if isinstance(obj, dt.date):
        return obj.isoformat()
    if isinstance(obj, Interval):
        return {"start": to_jsonable(obj.start), "end": to_jsonable(obj.end)}
    if isinstance(obj, frozenset):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {_key_str(k): to_jsonable(v) for k, v in obj.items()}
    if dataclasses.is_dataclass(obj):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _key_str(key) -> str:
    if isinstance(key, dt.date):
        return key.isoformat()
    return str(key)


def _parse_dt(text: str) -> dt.datetime:
    parsed = dt.datetime.fromisoformat(text.replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=dt.timezone.utc)
    return parsed.astimezone(dt.timezone.utc)


def from_jsonable(tp, data):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)

    if origin in (typing.Union, types.UnionType):
        if data is None:
            return None
        inner = [a for a in args if a is not type(None)]
        return from_jsonable(inner[0], data)
    if data is None:
        return None
    if tp is dt.datetime:
        return _parse_dt(data)
    if tp is dt.date:
        return dt.date.fromisoformat(data)
    if tp is Interval:
        return Interval(_parse_dt(data["start"]), _parse_dt(data["end"]))
    if isinstance(tp, type) and issubclass(tp, enum.Enum):
        return tp(data)
    if origin is frozenset:
        return frozenset(from_jsonable(args[0], x) for x in data)
    if origin is tuple:
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(from_jsonable(args[0], x) for x in data)
        return tuple(from_jsonable(a, x) for a, x in zip(args, data))
    if origin is list:
        return [from_jsonable(args[0], x) for x in data]
    if origin is dict:
        key_tp, val_tp = args
        return {
            _parse_key(key_tp, k): from_jsonable(val_tp, v)
            for k, v in data.items()
        }
    if dataclasses.is_dataclass(tp):
        hints = typing.get_type_hints(tp)
        kwargs = {}
        for f in dataclasses.fields(tp):
            if f.name in data:
                kwargs[f.name] = from_jsonable(hints[f.name], data[f.name])
        return tp(**kwargs)
    return data


def _parse_key(key_tp, key: str):
    if key_tp is int:
        return int(key)
    if key_tp is dt.date:
        return dt.date.fromisoformat(key)
    return key
