"""Pure deterministic auction state machine.

Commands validate against the current state, emit events, and apply those
events; events are the only thing that ever mutates state, so replaying a
log reproduces the live state structurally.  The engine never reads a
clock or any other ambient input: identical (config, command sequence,
timestamps) produce byte-identical event logs.

Callers serialize all commands for one auction; distinct auctions are
independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from .config import (
    AuctionConfig,
    Direction,
    FormatKind,
    config_from_wire,
    config_to_wire,
)
from .errors import (
    REJECT_CURRENCY_MISMATCH,
    REJECT_NON_POSITIVE,
    REJECT_ROUND_ALREADY_BID,
    REJECT_SLOT_CONFLICT,
    REJECT_STEP_TOO_SMALL,
    REJECT_WRONG_DIRECTION,
    AlreadyOpen,
    AuctionClosed,
    AuctionError,
    AuctionNotOpen,
    CorruptLog,
    InsufficientSupply,
    NotAdmitted,
    NotYetOpen,
    PhaseStillRunning,
    RoundIncomplete,
    StillOpen,
    UnknownSlot,
    WrongFormat,
)
from .events import Event, EventKind
from .money import Money


class Status(str, Enum):
    SCHEDULED = "scheduled"
    OPEN = "open"
    EXTENDED = "extended"
    CLOSED = "closed"
    CANCELLED = "cancelled"


OPEN_STATUSES = (Status.OPEN, Status.EXTENDED)


class Obligation(str, Enum):
    OBLIGED = "obliged"
    FREE = "free"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class BidRec:
    """An accepted bid as stored in state; amount is in the auction currency."""

    bid_id: str
    bidder_id: str
    slot_id: str
    amount: int
    submitted_at: int
    seq: int
    round: int | None = None
    phase: int | None = None

    def to_wire(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "bid_id": self.bid_id,
            "bidder_id": self.bidder_id,
            "slot_id": self.slot_id,
            "amount": self.amount,
            "submitted_at": self.submitted_at,
        }
        if self.round is not None:
            out["round"] = self.round
        if self.phase is not None:
            out["phase"] = self.phase
        return out


@dataclass(frozen=True)
class Allocation:
    """One Dutch acceptance: quantity bought at the price valid at that time."""

    bidder_id: str
    quantity: int
    price: int
    at: int

    def to_wire(self) -> dict[str, Any]:
        return {
            "bidder_id": self.bidder_id,
            "quantity": self.quantity,
            "price": self.price,
            "at": self.at,
        }


def _share_to_wire(share: Fraction | None) -> str | None:
    if share is None:
        return None
    n = share.numerator * 10_000 * 2 + share.denominator
    q = n // (share.denominator * 2)
    return f"{q // 10_000}.{q % 10_000:04d}"


def _share_from_wire(raw: str | None) -> Fraction | None:
    return None if raw is None else Fraction(raw)


@dataclass(frozen=True)
class Outcome:
    """Winner map, closing prices, and the buyer's obligation at close."""

    winners: dict[str, str | None]
    closing_prices: dict[str, int | None]
    obligation: Obligation
    dutch_allocations: tuple[Allocation, ...] = ()
    linked_share: Fraction | None = None

    def to_wire(self) -> dict[str, Any]:
        return {
            "winners": dict(self.winners),
            "closing_prices": dict(self.closing_prices),
            "obligation": self.obligation.value,
            "dutch_allocations": [a.to_wire() for a in self.dutch_allocations],
            "linked_share": _share_to_wire(self.linked_share),
        }

    @classmethod
    def from_wire(cls, raw: dict[str, Any]) -> Outcome:
        return cls(
            winners=dict(raw["winners"]),
            closing_prices={k: (None if v is None else int(v)) for k, v in raw["closing_prices"].items()},
            obligation=Obligation(raw["obligation"]),
            dutch_allocations=tuple(
                Allocation(a["bidder_id"], int(a["quantity"]), int(a["price"]), int(a["at"]))
                for a in raw.get("dutch_allocations", [])
            ),
            linked_share=_share_from_wire(raw.get("linked_share")),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Outcome):
            return NotImplemented
        return self.to_wire() == other.to_wire()

    def __hash__(self) -> int:
        return hash(repr(self.to_wire()))


@dataclass(frozen=True)
class SubmitResult:
    accepted: bool
    events: tuple[Event, ...]
    reason: str | None = None
    bid: BidRec | None = None


@dataclass(eq=True)
class Auction:
    """The evolving state machine of one auction."""

    config: AuctionConfig
    status: Status = Status.SCHEDULED
    open_time: int | None = None
    now_close: int = 0
    extension_count: int = 0
    bids: dict[str, list[BidRec]] = field(default_factory=dict)
    admitted: frozenset[str] = frozenset()
    current_round: int = 0
    current_phase: int = 0
    dutch_price: int | None = None
    dutch_remaining: int | None = None
    dutch_step: int = -1
    dutch_allocations: tuple[Allocation, ...] = ()
    event_seq: int = 0
    outcome: Outcome | None = None
    linked_share: Fraction | None = None
    link_broken: bool = False

    # --- construction -------------------------------------------------

    @classmethod
    def create(cls, config: AuctionConfig, at: int = 0) -> tuple[Auction, list[Event]]:
        """Validate the config and produce the initial Scheduled state."""
        config.validate()
        ev = Event(seq=1, at=at, kind=EventKind.CREATED, payload={"config": config_to_wire(config)})
        auction = cls.__new__(cls)
        auction._init_empty()
        auction._apply(ev)
        return auction, [ev]

    @classmethod
    def replay(cls, events: list[Event]) -> Auction:
        """Rebuild state from an event log; raises CorruptLog on structural damage."""
        if not events:
            raise CorruptLog("empty log: created must come first")
        if events[0].kind is not EventKind.CREATED or events[0].seq != 1:
            raise CorruptLog("log must start with created at seq 1")
        auction = cls.__new__(cls)
        auction._init_empty()
        for ev in events:
            auction._apply(ev)
        return auction

    def _init_empty(self) -> None:
        self.config = None  # type: ignore[assignment]  # set by created
        self.status = Status.SCHEDULED
        self.open_time = None
        self.now_close = 0
        self.extension_count = 0
        self.bids = {}
        self.admitted = frozenset()
        self.current_round = 0
        self.current_phase = 0
        self.dutch_price = None
        self.dutch_remaining = None
        self.dutch_step = -1
        self.dutch_allocations = ()
        self.event_seq = 0
        self.outcome = None
        self.linked_share = None
        self.link_broken = False

    # --- event application (the only state mutation path) --------------

    def _apply(self, ev: Event) -> None:
        if ev.seq != self.event_seq + 1:
            raise CorruptLog(f"seq gap: expected {self.event_seq + 1}, got {ev.seq}")
        handler = getattr(self, f"_on_{ev.kind.value}", None)
        if handler is None:
            raise CorruptLog(f"unknown event kind: {ev.kind}")
        handler(ev)
        self.event_seq = ev.seq

    def _on_created(self, ev: Event) -> None:
        if self.config is not None:
            raise CorruptLog("duplicate created event")
        cfg = config_from_wire(ev.payload["config"])
        cfg.validate()
        self.config = cfg
        self.now_close = cfg.scheduled_close
        self.bids = {s.slot_id: [] for s in cfg.slots}
        self.admitted = frozenset(cfg.invited_bidders)

    def _on_opened(self, ev: Event) -> None:
        self.status = Status.OPEN
        self.open_time = int(ev.payload["open_time"])
        self.now_close = int(ev.payload["now_close"])
        kind = self.config.format.kind
        if kind is FormatKind.MULTI_ROUND:
            self.current_round = 1
        elif kind is FormatKind.MULTI_PHASE:
            self.current_phase = 1
        elif kind is FormatKind.DUTCH:
            self.dutch_price = int(ev.payload["dutch_price"])
            self.dutch_remaining = self.config.format.dutch_terms.supply
            self.dutch_step = 0

    def _on_bid_accepted(self, ev: Event) -> None:
        p = ev.payload
        rec = BidRec(
            bid_id=p["bid_id"],
            bidder_id=p["bidder_id"],
            slot_id=p["slot_id"],
            amount=int(p["amount"]),
            submitted_at=int(p["submitted_at"]),
            seq=ev.seq,
            round=p.get("round"),
            phase=p.get("phase"),
        )
        self.bids[rec.slot_id].append(rec)

    def _on_bid_rejected(self, ev: Event) -> None:
        pass  # audit-only; rejected bids change nothing

    def _on_extended(self, ev: Event) -> None:
        self.now_close = int(ev.payload["new_close"])
        self.extension_count = int(ev.payload["extension_count"])
        self.status = Status.EXTENDED

    def _on_round_closed(self, ev: Event) -> None:
        dropped = set(ev.payload.get("dropped", ()))
        self.admitted = frozenset(self.admitted - dropped)
        self.current_round += 1

    def _on_phase_advanced(self, ev: Event) -> None:
        self.admitted = frozenset(ev.payload["admitted"])
        self.current_phase += 1

    def _on_dutch_tick(self, ev: Event) -> None:
        self.dutch_step = int(ev.payload["step"])
        self.dutch_price = int(ev.payload["price"])

    def _on_dutch_accepted(self, ev: Event) -> None:
        p = ev.payload
        alloc = Allocation(p["bidder_id"], int(p["quantity"]), int(p["price"]), ev.at)
        self.dutch_allocations = self.dutch_allocations + (alloc,)
        self.dutch_remaining = int(p["remaining"])

    def _on_closed(self, ev: Event) -> None:
        self.status = Status.CLOSED
        self.outcome = Outcome.from_wire(ev.payload["outcome"])

    def _on_cancelled(self, ev: Event) -> None:
        self.status = Status.CANCELLED

    def _on_linked_allocation(self, ev: Event) -> None:
        self.linked_share = _share_from_wire(ev.payload.get("own_share"))

    def _on_link_broken(self, ev: Event) -> None:
        self.linked_share = Fraction(1)
        self.link_broken = True

    def _emit(self, at: int, kind: EventKind, payload: dict[str, Any]) -> Event:
        ev = Event(seq=self.event_seq + 1, at=at, kind=kind, payload=payload)
        self._apply(ev)
        return ev

    # --- queries --------------------------------------------------------

    @property
    def is_open(self) -> bool:
        return self.status in OPEN_STATUSES

    @property
    def descending(self) -> bool:
        return self.config.format.direction is Direction.DESCENDING

    def _slot_bids_visible(self, slot_id: str) -> list[BidRec]:
        """Accepted bids already unsealed: everything, except the current
        round of a still-running multi-round auction."""
        recs = self.bids[slot_id]
        if self.config.format.kind is FormatKind.MULTI_ROUND and self.is_open:
            return [b for b in recs if b.round is not None and b.round < self.current_round]
        return recs

    def _best_visible(self, slot_id: str) -> BidRec | None:
        recs = self._slot_bids_visible(slot_id)
        if not recs:
            return None
        sign = 1 if self.descending else -1
        return min(recs, key=lambda b: (sign * b.amount, b.submitted_at, b.seq))

    def leading(self, slot_id: str) -> BidRec | None:
        if self.config.slot(slot_id) is None:
            raise UnknownSlot(slot_id)
        return self._best_visible(slot_id)

    def ranking(self, slot_id: str) -> list[tuple[str, Money]]:
        """Bidders best-first in the format direction; ties go to the
        earlier best bid; bidders with no bid are excluded."""
        if self.config.slot(slot_id) is None:
            raise UnknownSlot(slot_id)
        sign = 1 if self.descending else -1
        best: dict[str, BidRec] = {}
        for rec in self._slot_bids_visible(slot_id):
            cur = best.get(rec.bidder_id)
            if cur is None or (sign * rec.amount, rec.submitted_at, rec.seq) < (
                sign * cur.amount,
                cur.submitted_at,
                cur.seq,
            ):
                best[rec.bidder_id] = rec
        ordered = sorted(best.values(), key=lambda b: (sign * b.amount, b.submitted_at, b.seq))
        return [(b.bidder_id, Money(b.amount, self.config.currency)) for b in ordered]

    def min_acceptable(self, slot_id: str) -> Money | None:
        """Boundary of admissible bids on the slot, or None for "any positive
        amount" when there is neither a bid nor a configured opening bound."""
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        if self.config.slot(slot_id) is None:
            raise UnknownSlot(slot_id)
        if self.config.format.kind is FormatKind.DUTCH:
            return Money(self.dutch_price, self.config.currency)
        best = self._best_visible(slot_id)
        if best is None:
            return self.config.historic_value
        step = self.config.slot(slot_id).step.amount
        bound = best.amount - step if self.descending else best.amount + step
        return Money(bound, self.config.currency)

    def next_deadline(self) -> tuple[int, str] | None:
        """Earliest pending timer as (at_ms, kind); kind is one of
        close / round / phase / tick for fire_due dispatch."""
        if not self.is_open:
            return None
        kind = self.config.format.kind
        if kind is FormatKind.MULTI_ROUND:
            boundary = self.open_time + self.current_round * self.config.format.round_duration_ms
            return (boundary, "round")
        if kind is FormatKind.MULTI_PHASE:
            durations = [g.duration_ms for g in self.config.format.phases]
            boundary = self.open_time + sum(durations[: self.current_phase])
            return (boundary, "phase")
        if kind is FormatKind.DUTCH:
            d = self.config.format.dutch_terms
            if self.dutch_price > d.reserve.amount:
                tick_at = self.open_time + (self.dutch_step + 1) * d.step_ms
                if tick_at < self.now_close:
                    return (tick_at, "tick")
            return (self.now_close, "close")
        return (self.now_close, "close")

    def fire_due(self, now: int) -> list[Event]:
        """Apply every timer transition due at or before now, in order."""
        out: list[Event] = []
        while True:
            deadline = self.next_deadline()
            if deadline is None or deadline[0] > now:
                return out
            at, kind = deadline
            if kind == "round":
                out.extend(self.advance_round(at))
            elif kind == "phase":
                out.extend(self.advance_phase(at))
            elif kind == "tick":
                out.extend(self.dutch_tick(at))
            else:
                events, _ = self.close(at)
                out.extend(events)

    # --- lifecycle commands ---------------------------------------------

    def open(self, now: int) -> list[Event]:
        if self.status is not Status.SCHEDULED:
            raise AlreadyOpen(self.status.value)
        if now < self.config.scheduled_open:
            raise NotYetOpen(f"opens at {self.config.scheduled_open}")
        f = self.config.format
        if f.kind is FormatKind.MULTI_ROUND:
            close_at = now + f.rounds * f.round_duration_ms
        elif f.kind is FormatKind.MULTI_PHASE:
            close_at = now + sum(g.duration_ms for g in f.phases)
        else:
            close_at = max(self.config.scheduled_close, now)
        payload: dict[str, Any] = {"open_time": now, "now_close": close_at}
        if f.kind is FormatKind.DUTCH:
            payload["dutch_price"] = f.dutch_terms.start_price.amount
        return [self._emit(now, EventKind.OPENED, payload)]

    def cancel(self, now: int, reason: str = "") -> list[Event]:
        if self.status in (Status.CLOSED, Status.CANCELLED):
            raise AuctionClosed(self.status.value)
        return [self._emit(now, EventKind.CANCELLED, {"reason": reason})]

    def close(self, now: int) -> tuple[list[Event], Outcome]:
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        if now < self.now_close:
            raise StillOpen(f"closes at {self.now_close}")
        events: list[Event] = []
        # A still-sealed final round is unsealed on the way out.
        if self.config.format.kind is FormatKind.MULTI_ROUND and self.current_round <= self.config.format.rounds:
            events.extend(self._close_round(now))
            if self.status is Status.CLOSED:
                return events, self.outcome
        events.append(self._emit_closed(now))
        return events, self.outcome

    def _emit_closed(self, now: int) -> Event:
        outcome = self._compute_outcome()
        return self._emit(now, EventKind.CLOSED, {"outcome": outcome.to_wire()})

    # --- bidding ----------------------------------------------------------

    def submit_bid(
        self,
        bidder_id: str,
        slot_id: str,
        amount: Money,
        now: int,
        bid_id: str | None = None,
    ) -> SubmitResult:
        """Admit or reject one bid.

        Precondition violations (closed auction, unknown slot, bidder not
        admitted) raise; price-level violations append a bid_rejected event
        with a reason code and leave the rest of the state untouched.
        """
        if self.status in (Status.CLOSED, Status.CANCELLED):
            raise AuctionClosed(self.status.value)
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        if now > self.now_close:
            raise AuctionClosed(f"closed at {self.now_close}")
        if self.config.format.kind is FormatKind.DUTCH:
            raise WrongFormat("dutch auctions take accepts, not bids")
        if bidder_id not in self.admitted:
            raise NotAdmitted(bidder_id)
        if self.config.slot(slot_id) is None:
            raise UnknownSlot(slot_id)

        reason = self._admission_failure(bidder_id, slot_id, amount)
        if reason is not None:
            ev = self._emit(
                now,
                EventKind.BID_REJECTED,
                {"bidder_id": bidder_id, "slot_id": slot_id, "amount": amount.amount, "reason": reason},
            )
            return SubmitResult(accepted=False, events=(ev,), reason=reason)

        payload: dict[str, Any] = {
            "bid_id": bid_id or f"b{self.event_seq + 1}",
            "bidder_id": bidder_id,
            "slot_id": slot_id,
            "amount": amount.amount,
            "submitted_at": now,
        }
        if self.config.format.kind is FormatKind.MULTI_ROUND:
            payload["round"] = self.current_round
        elif self.config.format.kind is FormatKind.MULTI_PHASE:
            payload["phase"] = self.current_phase
        accepted = self._emit(now, EventKind.BID_ACCEPTED, payload)
        events = [accepted, *self.maybe_extend(now)]
        rec = self.bids[slot_id][-1]
        return SubmitResult(accepted=True, events=tuple(events), bid=rec)

    def _admission_failure(self, bidder_id: str, slot_id: str, amount: Money) -> str | None:
        if amount.currency != self.config.currency:
            return REJECT_CURRENCY_MISMATCH
        if not amount.is_positive:
            return REJECT_NON_POSITIVE
        if self.config.format.kind is FormatKind.MULTI_ROUND and any(
            b.bidder_id == bidder_id and b.round == self.current_round for b in self.bids[slot_id]
        ):
            return REJECT_ROUND_ALREADY_BID
        if self.config.one_slot_per_supplier:
            for other in self.config.slots:
                if other.slot_id == slot_id:
                    continue
                lead = self._best_visible(other.slot_id)
                if lead is not None and lead.bidder_id == bidder_id:
                    return REJECT_SLOT_CONFLICT

        best = self._best_visible(slot_id)
        step = self.config.slot(slot_id).step.amount
        if best is None:
            bound = self.config.historic_value
            if bound is not None:
                if self.descending and amount > bound:
                    return REJECT_WRONG_DIRECTION
                if not self.descending and amount < bound:
                    return REJECT_WRONG_DIRECTION
            return None
        if self.descending:
            if amount.amount >= best.amount:
                return REJECT_WRONG_DIRECTION
            if amount.amount > best.amount - step:
                return REJECT_STEP_TOO_SMALL
        else:
            if amount.amount <= best.amount:
                return REJECT_WRONG_DIRECTION
            if amount.amount < best.amount + step:
                return REJECT_STEP_TOO_SMALL
        return None

    def maybe_extend(self, bid_time: int) -> list[Event]:
        """Push the close out when a bid lands inside the active guard window.

        Only the continuous formats soft-close; sealed rounds, phase gates,
        and the Dutch schedule have fixed timers.
        """
        if not self.is_open or self.config.format.kind not in (FormatKind.ENGLISH, FormatKind.REVERSE):
            return []
        guard = self.config.extension.guard_ms(self.extension_count)
        if self.now_close - bid_time >= guard:
            return []
        ev = self._emit(
            bid_time,
            EventKind.EXTENDED,
            {
                "new_close": bid_time + guard,
                "guard_ms": guard,
                "extension_count": self.extension_count + 1,
            },
        )
        return [ev]

    # --- multi-round ------------------------------------------------------

    def round_complete(self) -> bool:
        if self.config.format.kind is not FormatKind.MULTI_ROUND or not self.is_open:
            return False
        slot_id = self.config.slots[0].slot_id
        bid_by = {b.bidder_id for b in self.bids[slot_id] if b.round == self.current_round}
        return self.admitted <= bid_by

    def advance_round(self, now: int) -> list[Event]:
        """Unseal the current round, drop no-shows, move on or close."""
        if self.config.format.kind is not FormatKind.MULTI_ROUND:
            raise WrongFormat("not a multi-round auction")
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        boundary = self.open_time + self.current_round * self.config.format.round_duration_ms
        if now < boundary and not self.round_complete():
            raise RoundIncomplete(f"round {self.current_round} runs until {boundary}")
        events = self._close_round(now)
        return events

    def _close_round(self, now: int) -> list[Event]:
        slot_id = self.config.slots[0].slot_id
        round_no = self.current_round
        round_bids = [b for b in self.bids[slot_id] if b.round == round_no]
        bid_by = {b.bidder_id for b in round_bids}
        dropped = sorted(self.admitted - bid_by)
        ev = self._emit(
            now,
            EventKind.ROUND_CLOSED,
            {
                "round": round_no,
                "bids": [b.to_wire() for b in round_bids],
                "dropped": dropped,
            },
        )
        events = [ev]
        if self.current_round > self.config.format.rounds or not self.admitted:
            events.append(self._emit_closed(now))
        return events

    # --- multi-phase --------------------------------------------------------

    def current_phase_gate(self):
        if self.config.format.kind is not FormatKind.MULTI_PHASE:
            return None
        if not 1 <= self.current_phase <= len(self.config.format.phases):
            return None
        return self.config.format.phases[self.current_phase - 1]

    def advance_phase(self, now: int) -> list[Event]:
        """Filter admission by the closing phase's gate target; onlookers and
        non-qualifiers drop out and cannot bid again."""
        if self.config.format.kind is not FormatKind.MULTI_PHASE:
            raise WrongFormat("not a multi-phase auction")
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        durations = [g.duration_ms for g in self.config.format.phases]
        boundary = self.open_time + sum(durations[: self.current_phase])
        if now < boundary:
            raise PhaseStillRunning(f"phase {self.current_phase} runs until {boundary}")
        gate = self.config.format.phases[self.current_phase - 1]
        slot_id = self.config.slots[0].slot_id
        qualifiers = set()
        for bidder in self.admitted:
            amounts = [
                b.amount
                for b in self.bids[slot_id]
                if b.bidder_id == bidder and b.phase == self.current_phase
            ]
            if not amounts:
                continue
            best = min(amounts) if self.descending else max(amounts)
            meets = best <= gate.target.amount if self.descending else best >= gate.target.amount
            if meets:
                qualifiers.add(bidder)
        excluded = sorted(self.admitted - qualifiers)
        ev = self._emit(
            now,
            EventKind.PHASE_ADVANCED,
            {
                "phase_closed": self.current_phase,
                "admitted": sorted(qualifiers),
                "excluded": excluded,
            },
        )
        events = [ev]
        if self.current_phase > len(self.config.format.phases) or not self.admitted:
            events.append(self._emit_closed(now))
        return events

    # --- dutch ---------------------------------------------------------------

    def dutch_tick(self, now: int) -> list[Event]:
        """Advance the price schedule to now, one event per price change."""
        if self.config.format.kind is not FormatKind.DUTCH:
            raise WrongFormat("not a dutch auction")
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        d = self.config.format.dutch_terms
        steps_elapsed = (now - self.open_time) // d.step_ms
        events = []
        for step in range(self.dutch_step + 1, steps_elapsed + 1):
            price = max(d.reserve.amount, d.start_price.amount - d.decrement.amount * step)
            if price == self.dutch_price:
                break  # price pinned at the reserve; no more ticks
            events.append(
                self._emit(self.open_time + step * d.step_ms, EventKind.DUTCH_TICK, {"step": step, "price": price})
            )
        return events

    def dutch_accept(self, bidder_id: str, quantity: int, now: int) -> list[Event]:
        if self.config.format.kind is not FormatKind.DUTCH:
            raise WrongFormat("not a dutch auction")
        if self.status in (Status.CLOSED, Status.CANCELLED):
            raise AuctionClosed(self.status.value)
        if not self.is_open:
            raise AuctionNotOpen(self.status.value)
        if now > self.now_close:
            raise AuctionClosed(f"closed at {self.now_close}")
        if bidder_id not in self.admitted:
            raise NotAdmitted(bidder_id)
        events = self.dutch_tick(now)
        if quantity < 1:
            raise InsufficientSupply("quantity must be at least 1")
        if quantity > self.dutch_remaining:
            raise InsufficientSupply(f"{quantity} asked, {self.dutch_remaining} remain")
        events.append(
            self._emit(
                now,
                EventKind.DUTCH_ACCEPTED,
                {
                    "bidder_id": bidder_id,
                    "quantity": quantity,
                    "price": self.dutch_price,
                    "remaining": self.dutch_remaining - quantity,
                },
            )
        )
        if self.dutch_remaining == 0:
            events.append(self._emit_closed(now))
        return events

    # --- outcome ---------------------------------------------------------------

    def _compute_outcome(self) -> Outcome:
        winners: dict[str, str | None] = {}
        closing: dict[str, int | None] = {}
        for slot in self.config.slots:
            best = self._best_visible(slot.slot_id)
            winners[slot.slot_id] = best.bidder_id if best else None
            closing[slot.slot_id] = best.amount if best else None
        return Outcome(
            winners=winners,
            closing_prices=closing,
            obligation=self._obligation(winners, closing),
            dutch_allocations=self.dutch_allocations,
            linked_share=self.linked_share,
        )

    def _obligation(self, winners: dict[str, str | None], closing: dict[str, int | None]) -> Obligation:
        if self.config.format.kind is FormatKind.DUTCH:
            return Obligation.NOT_APPLICABLE
        target = self.config.target_value
        won_prices = [p for p in closing.values() if p is not None]
        if target is None or not won_prices:
            return Obligation.NOT_APPLICABLE
        total = sum(won_prices)
        met = total <= target.amount if self.descending else total >= target.amount
        return Obligation.OBLIGED if met else Obligation.FREE

    # --- dependency hooks --------------------------------------------------------

    def record_linked_share(self, now: int, link_id: str, share: Fraction | None) -> Event:
        """Append the advisory share from a linked-auction update; the payload
        carries only this auction's own share, never counterpart prices."""
        return self._emit(
            now,
            EventKind.LINKED_ALLOCATION,
            {"link_id": link_id, "own_share": _share_to_wire(share), "pending": share is None},
        )

    def record_link_broken(self, now: int, link_id: str) -> Event:
        return self._emit(now, EventKind.LINK_BROKEN, {"link_id": link_id})


def winner_map_injective(outcome: Outcome) -> bool:
    winners = [w for w in outcome.winners.values() if w is not None]
    return len(winners) == len(set(winners))
