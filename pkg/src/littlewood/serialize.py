"""JSON encoding for every report type.

Integers are written as decimal strings, rationals as ``"p/q"`` strings and
enclosures as ``{"lo": ..., "hi": ...}``. Decoding is driven by the type
hints of the target dataclass, so ``loads(cls, dumps(x)) == x``.
"""

from __future__ import annotations

import dataclasses
import json
import typing
from fractions import Fraction
from typing import Any

from .enclosure import Enclosure


def to_jsonable(obj) -> Any:
    if obj is None or isinstance(obj, (bool, str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enclosure):
        return {"lo": str(obj.lo), "hi": str(obj.hi)}
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_jsonable(tp, data):
    if data is None:
        return None
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin is typing.Union:
        inner = [a for a in args if a is not type(None)]
        if len(inner) != 1:
            raise TypeError(f"ambiguous union {tp}")
        return from_jsonable(inner[0], data)
    if origin in (tuple, list):
        if origin is tuple and not (len(args) == 2 and args[1] is Ellipsis):
            return tuple(from_jsonable(a, d) for a, d in zip(args, data))
        item = args[0] if args else Any
        seq = [from_jsonable(item, d) for d in data]
        return tuple(seq) if origin is tuple else seq
    if origin is dict:
        kt, vt = args
        return {from_jsonable(kt, k): from_jsonable(vt, v) for k, v in data.items()}
    if tp is Any:
        return data
    if tp is bool:
        return bool(data)
    if tp is int:
        return int(data)
    if tp is float:
        return float(data)
    if tp is str:
        return str(data)
    if tp is Fraction:
        return Fraction(data)
    if tp is Enclosure:
        return Enclosure(Fraction(data["lo"]), Fraction(data["hi"]))
    if dataclasses.is_dataclass(tp):
        hints = typing.get_type_hints(tp)
        kwargs = {f.name: from_jsonable(hints[f.name], data[f.name]) for f in dataclasses.fields(tp) if f.name in data}
        return tp(**kwargs)
    raise TypeError(f"cannot decode into {tp}")


def dumps(obj, **kw) -> str:
    return json.dumps(to_jsonable(obj), **kw)


def loads(tp, text: str):
    return from_jsonable(tp, json.loads(text))
