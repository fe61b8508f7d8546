"""JSON Lines storage for uncertain databases.

One object per line::

    {"id": "B", "instances": [{"x": 1.0, "y": 2.0, "p": 0.3}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Union

from .spatial import Instance, Point, UncertainDatabase, UncertainObject

PathLike = Union[str, Path]


class DatasetError(ValueError):
    """The dataset file is malformed or violates an object invariant."""


def _parse_record(record, lineno: int) -> UncertainObject:
    if not isinstance(record, dict):
        raise DatasetError(f"line {lineno}: expected a JSON object")
    oid = record.get("id")
    if not isinstance(oid, str):
        raise DatasetError(f"line {lineno}: missing or non-string 'id'")
    raw = record.get("instances")
    if not isinstance(raw, list):
        raise DatasetError(f"line {lineno}: object {oid!r} has no 'instances' list")
    instances = []
    for inst in raw:
        try:
            instances.append(Instance(Point(inst["x"], inst["y"]), float(inst["p"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"line {lineno}: object {oid!r} has a bad instance {inst!r}: {exc}") from None
    try:
        return UncertainObject(oid, tuple(instances))
    except ValueError as exc:
        raise DatasetError(f"line {lineno}: {exc}") from None


def read_dataset(fh: IO[str]) -> UncertainDatabase:
    objects = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: invalid JSON: {exc.msg}") from None
        obj = _parse_record(record, lineno)
        if obj.id in seen:
            raise DatasetError(
                f"line {lineno}: duplicate object id {obj.id!r} (first seen on line {seen[obj.id]})"
            )
        seen[obj.id] = lineno
        objects.append(obj)
    return UncertainDatabase(objects)


def load_dataset(path: PathLike) -> UncertainDatabase:
    with open(path, encoding="utf-8") as fh:
        return read_dataset(fh)


def object_to_record(obj: UncertainObject) -> dict:
    return {
        "id": obj.id,
        "instances": [
            {"x": i.location.x, "y": i.location.y, "p": i.probability} for i in obj.instances
        ],
    }


def write_dataset(db: UncertainDatabase, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for obj in db:
            fh.write(json.dumps(object_to_record(obj)) + "\n")
