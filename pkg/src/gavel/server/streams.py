"""Fan-out of role-projected views to live subscribers.

One subscription = one queue.  On every event batch the hub computes a
fresh view per subscriber (each sees only its role's projection) and
enqueues it; the SSE endpoint drains the queue.  Online-competitor counts
derive from the set of currently subscribed bidders, which is the
observable liveness signal.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass, field

from ..visibility import Role

QUEUE_LIMIT = 256


def wall_ms() -> int:
    return time.time_ns() // 1_000_000


@dataclass
class Subscription:
    auction_id: str
    role: Role
    inbox: "queue.Queue[dict]" = field(default_factory=lambda: queue.Queue(maxsize=QUEUE_LIMIT))

    def push(self, view: dict) -> None:
        try:
            self.inbox.put_nowait(view)
        except queue.Full:
            # slow consumer: drop the oldest snapshot, views are self-contained
            try:
                self.inbox.get_nowait()
            except queue.Empty:
                pass
            self.inbox.put_nowait(view)


class StreamHub:
    def __init__(self):
        self._lock = threading.Lock()
        self._subs: dict[str, list[Subscription]] = {}

    def subscribe(self, auction_id: str, role: Role) -> Subscription:
        sub = Subscription(auction_id=auction_id, role=role)
        with self._lock:
            self._subs.setdefault(auction_id, []).append(sub)
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            subs = self._subs.get(sub.auction_id, [])
            if sub in subs:
                subs.remove(sub)

    def subscribers(self, auction_id: str) -> list[Subscription]:
        with self._lock:
            return list(self._subs.get(auction_id, ()))

    def online(self, auction_id: str) -> set[str]:
        with self._lock:
            return {s.role.participant_id for s in self._subs.get(auction_id, ())}
