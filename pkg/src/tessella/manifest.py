"""Line-delimited JSON interchange.

One manifest per line: ``{"kind":...,"payload":...,"schema_version":1}``,
written with sorted keys and no insignificant whitespace, so that parsing and
re-serializing a canonical document reproduces it byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import FormatError, TessellaError
from .gallery import WindowSet
from .padic import ColoringInstance, ColoringTable, SudokuWindow
from .solver import PeriodicSet
from .tiles import Tile, TileSystem
from .wang import WangAssignment, WangInstance

SCHEMA_VERSION = 1
KINDS = ("tile", "system", "periodic_set", "window", "wang", "sudoku", "coloring", "report")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class Manifest:
    kind: str
    payload: Any
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FormatError(f"unknown kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload, "schema_version": self.schema_version}

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    @classmethod
    def of(cls, obj) -> Manifest:
        """Wrap a domain object; plain dicts become reports."""
        if isinstance(obj, Tile):
            return cls("tile", obj.to_json())
        if isinstance(obj, TileSystem):
            return cls("system", obj.to_json())
        if isinstance(obj, PeriodicSet):
            return cls("periodic_set", obj.to_json())
        if isinstance(obj, WindowSet):
            return cls("window", obj.to_json())
        if isinstance(obj, WangInstance):
            return cls("wang", obj.to_json())
        if isinstance(obj, WangAssignment):
            return cls("wang", {"assignment": obj.to_json()})
        if isinstance(obj, SudokuWindow):
            return cls("sudoku", obj.to_json())
        if isinstance(obj, ColoringInstance):
            return cls("coloring", obj.to_json())
        if isinstance(obj, dict):
            if "type" not in obj:
                raise FormatError("a report needs a 'type' field")
            return cls("report", obj)
        raise FormatError(f"no manifest kind for {type(obj).__name__}")

    def decode(self):
        """The domain object behind the payload.

        ``wang`` payloads give a WangInstance, a WangAssignment, or both as a
        pair; ``coloring`` payloads with ``tables`` give (instance, tables).
        Reports stay plain dicts.
        """
        p = self.payload
        try:
            if self.kind == "tile":
                return Tile.from_json(p)
            if self.kind == "system":
                return TileSystem.from_json(p)
            if self.kind == "periodic_set":
                return PeriodicSet.from_json(p)
            if self.kind == "window":
                return WindowSet.from_json(p)
            if self.kind == "wang":
                inst = WangInstance.from_json(p) if "squares" in p else None
                asg = WangAssignment.from_json(p["assignment"]) if "assignment" in p else None
                if inst is not None and asg is not None:
                    return inst, asg
                if inst is None and asg is None:
                    raise FormatError("wang payload needs squares or an assignment")
                return inst if asg is None else asg
            if self.kind == "sudoku":
                return SudokuWindow.from_json(p)
            if self.kind == "coloring":
                inst = ColoringInstance.from_json(p)
                if "tables" in p:
                    return inst, [ColoringTable.from_json(t) for t in p["tables"]]
                return inst
            if not isinstance(p, dict) or "type" not in p:
                raise FormatError("a report payload is an object with a 'type' field")
            return p
        except FormatError:
            raise
        except (KeyError, TypeError, ValueError, TessellaError) as exc:
            raise FormatError(f"bad {self.kind} payload: {exc}") from exc


def report(type_: str, **fields) -> Manifest:
    return Manifest("report", {"type": type_, **fields})


def _check_schema(obj, line: int) -> Manifest:
    if not isinstance(obj, dict):
        raise FormatError("a manifest must be a JSON object", line, 1)
    missing = {"kind", "payload", "schema_version"} - obj.keys()
    if missing:
        raise FormatError(f"missing field(s) {', '.join(sorted(missing))}", line, 1)
    extra = obj.keys() - {"kind", "payload", "schema_version"}
    if extra:
        raise FormatError(f"unexpected field(s) {', '.join(sorted(extra))}", line, 1)
    if obj["schema_version"] != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {obj['schema_version']!r}", line, 1)
    if obj["kind"] not in KINDS:
        raise FormatError(f"unknown kind {obj['kind']!r}", line, 1)
    return Manifest(obj["kind"], obj["payload"], obj["schema_version"])


def parse(text: str) -> list[Manifest]:
    """Manifests from JSON-lines text; blank lines are skipped."""
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, i, exc.colno) from None
        out.append(_check_schema(obj, i))
    return out


def serialize(manifests: Iterable[Manifest]) -> str:
    return "".join(m.dumps() + "\n" for m in manifests)
