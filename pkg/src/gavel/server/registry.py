"""Live auction registry: serial command queues, timers, and recovery.

One lock per auction is the concurrency unit; commands for one auction
apply in lock order, which is also ack order and log order.  A single
timer thread fires due deadlines (close, rounds, phases, Dutch ticks) and
is kicked whenever a command may have moved a deadline, e.g. a soft-close
extension.  Linked auctions acquire both locks in sorted id order.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..dependency import DependencyLink, notify_linked
from ..engine import Auction
from ..errors import AuctionError, UnknownAuction
from ..events import Event
from ..visibility import Role, project_view
from .store import EventLogStore
from .streams import StreamHub, wall_ms

logger = logging.getLogger(__name__)


@dataclass
class LiveAuction:
    auction: Auction
    events: list[Event]
    lock: threading.RLock = field(default_factory=threading.RLock)


class AuctionRegistry:
    def __init__(self, data_dir: Path, hub: StreamHub | None = None, clock: Callable[[], int] = wall_ms):
        self.store = EventLogStore(data_dir)
        self.hub = hub or StreamHub()
        self.clock = clock
        self._auctions: dict[str, LiveAuction] = {}
        self._quarantined: dict[str, str] = {}
        self._links: dict[str, DependencyLink] = {}
        self._lock = threading.Lock()
        self._timer_wakeup = threading.Event()
        self._timer_thread: threading.Thread | None = None
        self._stopping = False

    # --- lifecycle -----------------------------------------------------------

    def recover(self) -> tuple[list[str], dict[str, str]]:
        """Rebuild every auction from its log; quarantine corrupt ones."""
        loaded, self._quarantined = self.store.load_all()
        recovered = []
        for auction_id, events in loaded.items():
            try:
                auction = Auction.replay(events)
            except AuctionError as exc:
                logger.error("quarantining auction %s: replay failed: %s", auction_id, exc)
                self._quarantined[auction_id] = str(exc)
                continue
            self._auctions[auction_id] = LiveAuction(auction=auction, events=events)
            recovered.append(auction_id)
        self._timer_wakeup.set()
        return recovered, dict(self._quarantined)

    def start_timers(self) -> None:
        if self._timer_thread is not None:
            return
        self._stopping = False
        self._timer_thread = threading.Thread(target=self._timer_loop, name="auction-timers", daemon=True)
        self._timer_thread.start()

    def stop(self) -> None:
        self._stopping = True
        self._timer_wakeup.set()
        if self._timer_thread is not None:
            self._timer_thread.join(timeout=5)
            self._timer_thread = None

    # --- access ----------------------------------------------------------------

    def get(self, auction_id: str) -> LiveAuction:
        live = self._auctions.get(auction_id)
        if live is None:
            detail = self._quarantined.get(auction_id)
            if detail:
                raise AuctionError(f"auction quarantined: {detail}")
            raise UnknownAuction(auction_id)
        return live

    def auction_ids(self) -> list[str]:
        return sorted(self._auctions)

    def quarantined(self) -> dict[str, str]:
        return dict(self._quarantined)

    def add_link(self, link: DependencyLink) -> None:
        link.validate()
        with self._lock:
            self._links[link.link_id] = link

    # --- commands -----------------------------------------------------------------

    def create(self, config) -> LiveAuction:
        auction, events = Auction.create(config, at=self.clock())
        with self._lock:
            if config.auction_id in self._auctions or config.auction_id in self._quarantined:
                raise AuctionError(f"auction {config.auction_id} already exists")
            live = LiveAuction(auction=auction, events=list(events))
            self._auctions[config.auction_id] = live
        self.store.append(config.auction_id, events)
        self._timer_wakeup.set()
        return live

    def apply(self, auction_id: str, command: Callable[[Auction, int], list[Event]]) -> list[Event]:
        """Run one command under the auction's serial lock, persist the
        emitted events, then fan out fresh views.  The ack (return) happens
        strictly after fsync."""
        live = self.get(auction_id)
        with live.lock:
            now = self.clock()
            events = list(command(live.auction, now))
            if events:
                live.events.extend(events)
                self.store.append(auction_id, events)
        if events:
            self.publish(auction_id)
            self._after_events(auction_id, events)
            self._timer_wakeup.set()
        return events

    def _after_events(self, auction_id: str, events: list[Event]) -> None:
        from ..events import EventKind

        if not any(ev.kind is EventKind.BID_ACCEPTED for ev in events):
            return
        for link in list(self._links.values()):
            if auction_id not in (link.auction_a, link.auction_b):
                continue
            try:
                first, second = sorted((link.auction_a, link.auction_b))
                live_first, live_second = self.get(first), self.get(second)
            except AuctionError:
                continue
            with live_first.lock, live_second.lock:
                a = self.get(link.auction_a)
                b = self.get(link.auction_b)
                before_a = a.auction.event_seq
                linked = notify_linked(a.auction, b.auction, link, self.clock())
                emitted_by_a = a.auction.event_seq - before_a
                for i, ev in enumerate(linked):
                    owner = link.auction_a if i < emitted_by_a else link.auction_b
                    self.get(owner).events.append(ev)
                    self.store.append(owner, [ev])
            for aid in (link.auction_a, link.auction_b):
                self.publish(aid)

    # --- streaming -------------------------------------------------------------------

    def publish(self, auction_id: str, exclude=None) -> None:
        live = self._auctions.get(auction_id)
        if live is None:
            return
        subs = [s for s in self.hub.subscribers(auction_id) if s is not exclude]
        if not subs:
            return
        online = self.hub.online(auction_id)
        now = self.clock()
        with live.lock:
            for sub in subs:
                try:
                    view = project_view(live.auction, sub.role, now, live.events, online=online)
                except AuctionError:
                    continue
                view["server_now"] = now
                sub.push(view)

    def snapshot_view(self, auction_id: str, role: Role) -> dict:
        live = self.get(auction_id)
        with live.lock:
            now = self.clock()
            view = project_view(live.auction, role, now, live.events, online=self.hub.online(auction_id))
            view["server_now"] = now
            return view

    # --- timers ----------------------------------------------------------------------

    def tick(self) -> int | None:
        """Fire every due deadline once; returns the earliest pending one."""
        next_at = None
        for auction_id in self.auction_ids():
            live = self._auctions.get(auction_id)
            if live is None:
                continue
            with live.lock:
                deadline = live.auction.next_deadline()
            if deadline is None:
                continue
            if deadline[0] <= self.clock():
                try:
                    self.apply(auction_id, lambda auction, now: auction.fire_due(now))
                except AuctionError as exc:
                    logger.error("timer on %s failed: %s", auction_id, exc)
                continue
            next_at = deadline[0] if next_at is None else min(next_at, deadline[0])
        return next_at

    def _timer_loop(self) -> None:
        while not self._stopping:
            next_at = self.tick()
            timeout = 0.5 if next_at is None else min(0.5, max(0.0, (next_at - self.clock()) / 1000))
            self._timer_wakeup.wait(timeout)
            self._timer_wakeup.clear()
