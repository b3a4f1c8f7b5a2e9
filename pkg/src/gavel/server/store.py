"""Append-only JSON-lines event logs, one file per auction.

Durability contract: ``append`` returns only after the lines are flushed
and fsynced, so an acknowledged bid is always on disk.  Recovery trims a
torn trailing line (the artifact of dying mid-write of an unacknowledged
event) but quarantines an auction whose log is structurally corrupt
further up: a seq gap, an unparseable interior line, or a bad first
event.  Quarantine isolates that auction; the rest of the data directory
keeps working.
"""

from __future__ import annotations

import logging
import os
import threading
from pathlib import Path

from ..errors import CorruptLog
from ..events import Event

logger = logging.getLogger(__name__)

AUCTIONS_SUBDIR = "auctions"


class EventLogStore:
    def __init__(self, data_dir: Path):
        self.root = Path(data_dir) / AUCTIONS_SUBDIR
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def path_for(self, auction_id: str) -> Path:
        if not auction_id or "/" in auction_id or auction_id.startswith("."):
            raise CorruptLog(f"unusable auction id: {auction_id!r}")
        return self.root / f"{auction_id}.jsonl"

    def append(self, auction_id: str, events: list[Event]) -> None:
        """Durably append a batch; fsync before returning."""
        if not events:
            return
        path = self.path_for(auction_id)
        data = "".join(ev.to_line() + "\n" for ev in events)
        with self._lock:
            with open(path, "a", encoding="utf-8") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())

    def load(self, auction_id: str) -> list[Event]:
        return self._read(self.path_for(auction_id))

    def _read(self, path: Path) -> list[Event]:
        raw = path.read_bytes()
        if not raw:
            raise CorruptLog("empty log file")
        body, torn, tail = raw.rpartition(b"\n")
        if tail:
            # torn write of an unacked event: drop it and repair the file
            logger.warning("trimming torn tail (%d bytes) from %s", len(tail), path.name)
            with open(path, "r+b") as f:
                f.truncate(len(body) + len(torn))
            raw = body + torn
        events = []
        expected = 1
        for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                ev = Event.from_line(line)
            except CorruptLog as exc:
                raise CorruptLog(f"{path.name}:{lineno}: {exc}") from exc
            if ev.seq != expected:
                raise CorruptLog(f"{path.name}:{lineno}: seq {ev.seq}, expected {expected}")
            expected += 1
            events.append(ev)
        if not events:
            raise CorruptLog(f"{path.name}: no events")
        return events

    def auction_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.jsonl"))

    def load_all(self) -> tuple[dict[str, list[Event]], dict[str, str]]:
        """Load every auction log; corrupt ones are quarantined, not fatal."""
        loaded: dict[str, list[Event]] = {}
        quarantined: dict[str, str] = {}
        for auction_id in self.auction_ids():
            try:
                loaded[auction_id] = self.load(auction_id)
            except CorruptLog as exc:
                logger.error("quarantining auction %s: %s", auction_id, exc)
                quarantined[auction_id] = str(exc)
        return loaded, quarantined
