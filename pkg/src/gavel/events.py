"""Append-only event records: the persistence, audit, and replay unit.

Wire envelope is ``{"seq": int, "at": int_ms, "kind": str, "payload": {...}}``,
one JSON object per line in the event log.  Field order and separators are
fixed so identical histories serialize byte-for-byte identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import CorruptLog


class EventKind(str, Enum):
    CREATED = "created"
    OPENED = "opened"
    BID_ACCEPTED = "bid_accepted"
    BID_REJECTED = "bid_rejected"
    EXTENDED = "extended"
    ROUND_CLOSED = "round_closed"
    PHASE_ADVANCED = "phase_advanced"
    DUTCH_TICK = "dutch_tick"
    DUTCH_ACCEPTED = "dutch_accepted"
    CLOSED = "closed"
    CANCELLED = "cancelled"
    LINKED_ALLOCATION = "linked_allocation"
    LINK_BROKEN = "link_broken"


@dataclass(frozen=True)
class Event:
    seq: int
    at: int
    kind: EventKind
    payload: dict[str, Any] = field(default_factory=dict)

    def to_wire(self) -> dict[str, Any]:
        return {"seq": self.seq, "at": self.at, "kind": self.kind.value, "payload": self.payload}

    def to_line(self) -> str:
        return json.dumps(self.to_wire(), separators=(",", ":"))

    @classmethod
    def from_wire(cls, raw: dict[str, Any]) -> Event:
        try:
            return cls(
                seq=int(raw["seq"]),
                at=int(raw["at"]),
                kind=EventKind(raw["kind"]),
                payload=raw.get("payload", {}),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptLog(f"malformed event: {exc}") from exc

    @classmethod
    def from_line(cls, line: str) -> Event:
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLog(f"bad event line: {exc}") from exc
        if not isinstance(raw, dict):
            raise CorruptLog("event line is not an object")
        return cls.from_wire(raw)


def dump_events(events: list[Event]) -> str:
    """Serialize events as JSON lines, trailing newline included."""
    return "".join(e.to_line() + "\n" for e in events)


def load_events(text: str) -> list[Event]:
    return [Event.from_line(line) for line in text.splitlines() if line.strip()]
