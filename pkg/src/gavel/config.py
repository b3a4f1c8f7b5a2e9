"""Immutable auction definitions: formats, timing policy, slots, config.

Timestamps and durations are integer milliseconds throughout.  The engine
never reads a clock; callers inject every timestamp, which is what makes
simulation and replay deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from .errors import InvalidConfig
from .money import Money

DEFAULT_INITIAL_GUARD_MS = 180_000
DEFAULT_GUARD_DECAY = Fraction(1, 2)
DEFAULT_GUARD_FLOOR_MS = 5_000

# Identity-reveal auctions are kept short so bidders cannot collude
# mid-auction; default cap is the 15-minute upper bound.
DEFAULT_REVEAL_CAP_MS = 15 * 60_000


class FormatKind(str, Enum):
    ENGLISH = "english"
    REVERSE = "reverse"
    DUTCH = "dutch"
    MULTI_ROUND = "multi_round"
    MULTI_PHASE = "multi_phase"


class Direction(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


class Anonymity(str, Enum):
    ANONYMOUS = "anonymous"
    REVEALED_AT_START = "revealed_at_start"


class PercentBaseline(str, Enum):
    HISTORIC_VALUE = "historic_value"
    FIRST_BID = "first_bid"


@dataclass(frozen=True)
class PhaseGate:
    """One phase of a multi-phase auction: its admission target and length."""

    target: Money
    duration_ms: int


@dataclass(frozen=True)
class DutchTerms:
    """Price decay schedule for a Dutch auction.

    The price starts at ``start_price`` and drops by ``decrement`` every
    ``step_ms`` until it reaches ``reserve``, where it stays.
    """

    supply: int
    start_price: Money
    decrement: Money
    step_ms: int
    reserve: Money


@dataclass(frozen=True)
class AuctionFormat:
    """Format of one auction; direction is fixed by the kind where the kind
    implies it (english ascending, reverse descending) and configurable for
    the sealed/phased formats, defaulting to descending procurement."""

    kind: FormatKind
    direction: Direction = Direction.DESCENDING
    rounds: int | None = None
    round_duration_ms: int | None = None
    phases: tuple[PhaseGate, ...] = ()
    dutch_terms: DutchTerms | None = None

    def __post_init__(self) -> None:
        if self.kind is FormatKind.ENGLISH:
            object.__setattr__(self, "direction", Direction.ASCENDING)
        elif self.kind in (FormatKind.REVERSE, FormatKind.DUTCH):
            object.__setattr__(self, "direction", Direction.DESCENDING)

    @classmethod
    def english(cls) -> AuctionFormat:
        return cls(kind=FormatKind.ENGLISH)

    @classmethod
    def reverse(cls) -> AuctionFormat:
        return cls(kind=FormatKind.REVERSE)

    @classmethod
    def dutch(cls, terms: DutchTerms) -> AuctionFormat:
        return cls(kind=FormatKind.DUTCH, dutch_terms=terms)

    @classmethod
    def multi_round(
        cls, rounds: int, round_duration_ms: int, direction: Direction = Direction.DESCENDING
    ) -> AuctionFormat:
        return cls(
            kind=FormatKind.MULTI_ROUND,
            direction=direction,
            rounds=rounds,
            round_duration_ms=round_duration_ms,
        )

    @classmethod
    def multi_phase(
        cls, phases: tuple[PhaseGate, ...], direction: Direction = Direction.DESCENDING
    ) -> AuctionFormat:
        return cls(kind=FormatKind.MULTI_PHASE, direction=direction, phases=tuple(phases))


@dataclass(frozen=True)
class ExtensionPolicy:
    """Soft-close guard schedule: g(0) = initial, g(n+1) = max(floor, g(n)*decay).

    A bid landing within the current guard pushes the close to bid time plus
    that guard, so competitors always get the full reaction window.
    """

    initial_guard_ms: int = DEFAULT_INITIAL_GUARD_MS
    decay: Fraction = DEFAULT_GUARD_DECAY
    floor_ms: int = DEFAULT_GUARD_FLOOR_MS

    def guard_ms(self, extension_count: int) -> int:
        g = Fraction(self.initial_guard_ms) * self.decay**extension_count
        return max(self.floor_ms, int(g))


@dataclass(frozen=True)
class Slot:
    """One sub-lot of the auctioned demand, awardable to its own supplier."""

    slot_id: str
    description: str
    quantity: int
    unit: str
    delivery_point: str
    step: Money


@dataclass(frozen=True)
class AuctionConfig:
    auction_id: str
    format: AuctionFormat
    currency: str
    slots: tuple[Slot, ...]
    scheduled_open: int
    scheduled_close: int
    extension: ExtensionPolicy = field(default_factory=ExtensionPolicy)
    historic_value: Money | None = None
    target_value: Money | None = None
    one_slot_per_supplier: bool = False
    anonymity: Anonymity = Anonymity.ANONYMOUS
    invited_bidders: tuple[str, ...] = ()
    percentage_baseline: PercentBaseline = PercentBaseline.HISTORIC_VALUE
    reveal_cap_ms: int = DEFAULT_REVEAL_CAP_MS
    auctioneer: str = "auctioneer"
    originator: str = "originator"

    @property
    def duration_ms(self) -> int:
        return self.scheduled_close - self.scheduled_open

    def slot(self, slot_id: str) -> Slot | None:
        for s in self.slots:
            if s.slot_id == slot_id:
                return s
        return None

    def validate(self) -> None:
        """Raise InvalidConfig naming the first violated invariant."""
        f = self.format
        if self.scheduled_open >= self.scheduled_close:
            raise InvalidConfig("scheduled_open must precede scheduled_close")
        if not self.slots:
            raise InvalidConfig("at least one slot is required")
        ids = [s.slot_id for s in self.slots]
        if len(set(ids)) != len(ids):
            raise InvalidConfig("slot ids must be unique")
        if not self.invited_bidders:
            raise InvalidConfig("at least one invited bidder is required")
        if len(set(self.invited_bidders)) != len(self.invited_bidders):
            raise InvalidConfig("invited bidders must be unique")
        for s in self.slots:
            if s.quantity < 1:
                raise InvalidConfig(f"slot {s.slot_id}: quantity must be positive")
            if s.step.currency != self.currency:
                raise InvalidConfig(f"slot {s.slot_id}: step currency differs from auction currency")
            if not s.step.is_positive:
                raise InvalidConfig(f"slot {s.slot_id}: step must be positive")

        ext = self.extension
        if ext.floor_ms > ext.initial_guard_ms:
            raise InvalidConfig("extension floor exceeds initial guard")
        if not (0 < ext.decay <= 1):
            raise InvalidConfig("extension decay must be in (0, 1]")
        if ext.floor_ms <= 0 or ext.initial_guard_ms <= 0:
            raise InvalidConfig("extension durations must be positive")

        if self.anonymity is Anonymity.REVEALED_AT_START and self.duration_ms > self.reveal_cap_ms:
            raise InvalidConfig(
                f"identity-reveal auctions are capped at {self.reveal_cap_ms} ms"
            )

        for value, name in ((self.historic_value, "historic_value"), (self.target_value, "target_value")):
            if value is not None:
                if value.currency != self.currency:
                    raise InvalidConfig(f"{name} currency differs from auction currency")
                if not value.is_positive:
                    raise InvalidConfig(f"{name} must be positive")
        if self.historic_value is not None and self.target_value is not None:
            if f.direction is Direction.DESCENDING and self.target_value > self.historic_value:
                raise InvalidConfig("target_value must not exceed historic_value")
            if f.direction is Direction.ASCENDING and self.target_value < self.historic_value:
                raise InvalidConfig("target_value must not undercut historic_value")

        if f.kind is FormatKind.MULTI_ROUND:
            if not f.rounds or f.rounds < 1:
                raise InvalidConfig("multi-round needs rounds >= 1")
            if not f.round_duration_ms or f.round_duration_ms <= 0:
                raise InvalidConfig("multi-round needs a positive round duration")
            if len(self.slots) != 1:
                raise InvalidConfig("multi-round auctions carry exactly one slot")
            if f.rounds * f.round_duration_ms != self.duration_ms:
                raise InvalidConfig("rounds x round duration must equal the scheduled duration")
        elif f.kind is FormatKind.MULTI_PHASE:
            if not f.phases:
                raise InvalidConfig("multi-phase needs at least one phase gate")
            if len(self.slots) != 1:
                raise InvalidConfig("multi-phase auctions carry exactly one slot")
            for i, gate in enumerate(f.phases, start=1):
                if gate.duration_ms <= 0:
                    raise InvalidConfig(f"phase {i}: duration must be positive")
                if gate.target.currency != self.currency:
                    raise InvalidConfig(f"phase {i}: gate currency differs from auction currency")
                if not gate.target.is_positive:
                    raise InvalidConfig(f"phase {i}: gate target must be positive")
            if sum(g.duration_ms for g in f.phases) != self.duration_ms:
                raise InvalidConfig("phase durations must sum to the scheduled duration")
        elif f.kind is FormatKind.DUTCH:
            d = f.dutch_terms
            if d is None:
                raise InvalidConfig("dutch format needs dutch terms")
            if len(self.slots) != 1:
                raise InvalidConfig("dutch auctions carry exactly one slot")
            if d.supply < 1:
                raise InvalidConfig("dutch supply must be >= 1")
            if d.step_ms <= 0:
                raise InvalidConfig("dutch step duration must be positive")
            for m, name in ((d.start_price, "start price"), (d.decrement, "decrement"), (d.reserve, "reserve")):
                if m.currency != self.currency:
                    raise InvalidConfig(f"dutch {name} currency differs from auction currency")
            if not d.start_price.is_positive or not d.decrement.is_positive or not d.reserve.is_positive:
                raise InvalidConfig("dutch prices must be positive")
            if d.reserve > d.start_price:
                raise InvalidConfig("dutch reserve must not exceed start price")


# --- wire format -----------------------------------------------------------
#
# Configs travel inside created events and scenario files, so the dict shape
# below is a persistence contract.  Money is a bare int in the auction
# currency; durations and timestamps are int milliseconds.


def _money_wire(m: Money | None) -> int | None:
    return None if m is None else m.amount


def config_to_wire(cfg: AuctionConfig) -> dict[str, Any]:
    f = cfg.format
    fmt: dict[str, Any] = {"kind": f.kind.value, "direction": f.direction.value}
    if f.kind is FormatKind.MULTI_ROUND:
        fmt["rounds"] = f.rounds
        fmt["round_duration_ms"] = f.round_duration_ms
    elif f.kind is FormatKind.MULTI_PHASE:
        fmt["phases"] = [
            {"target": g.target.amount, "duration_ms": g.duration_ms} for g in f.phases
        ]
    elif f.kind is FormatKind.DUTCH:
        d = f.dutch_terms
        fmt["dutch"] = {
            "supply": d.supply,
            "start_price": d.start_price.amount,
            "decrement": d.decrement.amount,
            "step_ms": d.step_ms,
            "reserve": d.reserve.amount,
        }
    return {
        "auction_id": cfg.auction_id,
        "format": fmt,
        "currency": cfg.currency,
        "slots": [
            {
                "slot_id": s.slot_id,
                "description": s.description,
                "quantity": s.quantity,
                "unit": s.unit,
                "delivery_point": s.delivery_point,
                "step": s.step.amount,
            }
            for s in cfg.slots
        ],
        "scheduled_open": cfg.scheduled_open,
        "scheduled_close": cfg.scheduled_close,
        "extension": {
            "initial_guard_ms": cfg.extension.initial_guard_ms,
            "decay": str(cfg.extension.decay),
            "floor_ms": cfg.extension.floor_ms,
        },
        "historic_value": _money_wire(cfg.historic_value),
        "target_value": _money_wire(cfg.target_value),
        "one_slot_per_supplier": cfg.one_slot_per_supplier,
        "anonymity": cfg.anonymity.value,
        "invited_bidders": list(cfg.invited_bidders),
        "percentage_baseline": cfg.percentage_baseline.value,
        "reveal_cap_ms": cfg.reveal_cap_ms,
        "auctioneer": cfg.auctioneer,
        "originator": cfg.originator,
    }


def _parse_fraction(raw: Any) -> Fraction:
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        # Treat floats as their decimal spelling, not their binary expansion.
        return Fraction(str(raw))
    raise InvalidConfig(f"cannot parse ratio: {raw!r}")


def config_from_wire(raw: dict[str, Any]) -> AuctionConfig:
    try:
        currency = raw["currency"]

        def money(value: Any) -> Money | None:
            return None if value is None else Money(int(value), currency)

        fraw = raw["format"]
        kind = FormatKind(fraw["kind"])
        direction = Direction(fraw.get("direction", Direction.DESCENDING.value))
        fmt = AuctionFormat(
            kind=kind,
            direction=direction,
            rounds=fraw.get("rounds"),
            round_duration_ms=fraw.get("round_duration_ms"),
            phases=tuple(
                PhaseGate(target=money(p["target"]), duration_ms=int(p["duration_ms"]))
                for p in fraw.get("phases", [])
            ),
            dutch_terms=(
                DutchTerms(
                    supply=int(fraw["dutch"]["supply"]),
                    start_price=money(fraw["dutch"]["start_price"]),
                    decrement=money(fraw["dutch"]["decrement"]),
                    step_ms=int(fraw["dutch"]["step_ms"]),
                    reserve=money(fraw["dutch"]["reserve"]),
                )
                if "dutch" in fraw
                else None
            ),
        )
        ext_raw = raw.get("extension", {})
        extension = ExtensionPolicy(
            initial_guard_ms=int(ext_raw.get("initial_guard_ms", DEFAULT_INITIAL_GUARD_MS)),
            decay=_parse_fraction(ext_raw.get("decay", DEFAULT_GUARD_DECAY)),
            floor_ms=int(ext_raw.get("floor_ms", DEFAULT_GUARD_FLOOR_MS)),
        )
        return AuctionConfig(
            auction_id=raw["auction_id"],
            format=fmt,
            currency=currency,
            slots=tuple(
                Slot(
                    slot_id=s["slot_id"],
                    description=s.get("description", ""),
                    quantity=int(s.get("quantity", 1)),
                    unit=s.get("unit", "unit"),
                    delivery_point=s.get("delivery_point", ""),
                    step=money(s["step"]),
                )
                for s in raw["slots"]
            ),
            scheduled_open=int(raw["scheduled_open"]),
            scheduled_close=int(raw["scheduled_close"]),
            extension=extension,
            historic_value=money(raw.get("historic_value")),
            target_value=money(raw.get("target_value")),
            one_slot_per_supplier=bool(raw.get("one_slot_per_supplier", False)),
            anonymity=Anonymity(raw.get("anonymity", Anonymity.ANONYMOUS.value)),
            invited_bidders=tuple(raw.get("invited_bidders", ())),
            percentage_baseline=PercentBaseline(
                raw.get("percentage_baseline", PercentBaseline.HISTORIC_VALUE.value)
            ),
            reveal_cap_ms=int(raw.get("reveal_cap_ms", DEFAULT_REVEAL_CAP_MS)),
            auctioneer=raw.get("auctioneer", "auctioneer"),
            originator=raw.get("originator", "originator"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfig(f"malformed config: {exc}") from exc
