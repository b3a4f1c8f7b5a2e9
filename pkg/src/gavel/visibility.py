"""Role-specific redacted projections of auction state.

A View is the JSON-ready dict a participant is allowed to see, and it is
the only thing clients ever receive:

* the auctioneer sees everything, including the bid-to-bidder mapping;
* the originator sees amounts and rankings, with bidders pseudonymous
  until the auction closes;
* a bidder sees its own amounts, the leading amount, its rank, stable
  pseudonyms, and how many competitors are online;
* a guest sees percentages of the configured baseline and nothing that
  names currency, amounts, participants, or the traded goods.

All functions are pure over immutable snapshots and freely parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Collection, Iterable

from .config import Anonymity, FormatKind, PercentBaseline
from .engine import Auction, BidRec, Status
from .errors import CurrencyMismatch, UnknownParticipant, ZeroBaseline
from .events import Event, EventKind
from .money import Money

# Views carry at most this many trailing events.
EVENT_WINDOW = 200


class RoleKind(str, Enum):
    AUCTIONEER = "auctioneer"
    BIDDER = "bidder"
    ORIGINATOR = "originator"
    GUEST = "guest"


@dataclass(frozen=True)
class Role:
    kind: RoleKind
    participant_id: str


View = dict[str, Any]


def mask_percent(amount: Money, baseline: Money) -> float:
    """100 * amount / baseline, rounded half-up to one decimal."""
    if baseline.currency != amount.currency:
        raise CurrencyMismatch(f"{amount.currency} vs {baseline.currency}")
    if baseline.amount <= 0:
        raise ZeroBaseline(str(baseline))
    tenths = (Fraction(1000 * amount.amount, baseline.amount) + Fraction(1, 2)).__floor__()
    return tenths / 10


def pseudonymize(auction: Auction, viewer: Role) -> dict[str, str]:
    """Stable per-auction labels for every invited bidder.

    Labels are "Bidder 1".."Bidder N" in invitation order and never change.
    Real identities substitute for the auctioneer, for everyone once a
    revealed-at-start auction has opened, and for the originator at close.
    """
    cfg = auction.config
    reveal = viewer.kind is RoleKind.AUCTIONEER
    if cfg.anonymity is Anonymity.REVEALED_AT_START and auction.open_time is not None:
        reveal = True
    if viewer.kind is RoleKind.ORIGINATOR and auction.status is Status.CLOSED:
        reveal = True
    return {
        bidder: (bidder if reveal else f"Bidder {i}")
        for i, bidder in enumerate(cfg.invited_bidders, start=1)
    }


def check_registered(auction: Auction, role: Role) -> None:
    cfg = auction.config
    if role.kind is RoleKind.BIDDER and role.participant_id not in cfg.invited_bidders:
        raise UnknownParticipant(role.participant_id)
    if role.kind is RoleKind.AUCTIONEER and role.participant_id != cfg.auctioneer:
        raise UnknownParticipant(role.participant_id)
    if role.kind is RoleKind.ORIGINATOR and role.participant_id != cfg.originator:
        raise UnknownParticipant(role.participant_id)


def _slot_baseline(auction: Auction, slot_id: str) -> int | None:
    """Denominator for percentage masking: the historic value when configured
    and present, else the first accepted amount on the slot."""
    cfg = auction.config
    if cfg.percentage_baseline is PercentBaseline.HISTORIC_VALUE and cfg.historic_value is not None:
        return cfg.historic_value.amount
    if cfg.format.kind is FormatKind.DUTCH:
        return cfg.format.dutch_terms.start_price.amount
    recs = auction.bids.get(slot_id, [])
    if recs:
        return min(recs, key=lambda b: b.seq).amount
    return None


def _percent_of(auction: Auction, slot_id: str, amount: int) -> float | None:
    base = _slot_baseline(auction, slot_id)
    if base is None or base <= 0:
        return None
    return mask_percent(Money(amount, auction.config.currency), Money(base, auction.config.currency))


def _target_hit(auction: Auction) -> bool | None:
    target = auction.config.target_value
    if target is None or auction.config.format.kind is FormatKind.DUTCH:
        return None
    leads = [auction.leading(s.slot_id) for s in auction.config.slots]
    if any(lead is None for lead in leads):
        return False if any(lead is not None for lead in leads) or auction.is_open else None
    total = sum(lead.amount for lead in leads)
    return total <= target.amount if auction.descending else total >= target.amount


def _slot_index(auction: Auction, slot_id: str) -> int:
    for i, s in enumerate(auction.config.slots, start=1):
        if s.slot_id == slot_id:
            return i
    return 0


def project_view(
    auction: Auction,
    role: Role,
    now: int,
    events: Iterable[Event] = (),
    online: Collection[str] = (),
) -> View:
    """Compute the role-projected snapshot of the auction at time now."""
    check_registered(auction, role)
    cfg = auction.config
    labels = pseudonymize(auction, role)
    online_bidders = set(online) & set(auction.admitted)
    me = role.participant_id

    view: View = {
        "auction_id": cfg.auction_id,
        "role": role.kind.value,
        "status": auction.status.value,
        "format": cfg.format.kind.value,
        "direction": cfg.format.direction.value,
        "as_of_seq": auction.event_seq,
        "time_remaining_ms": max(0, auction.now_close - now) if auction.status is not Status.SCHEDULED else None,
        "opens_in_ms": max(0, cfg.scheduled_open - now) if auction.status is Status.SCHEDULED else None,
        "now_close": auction.now_close,
        "extension_count": auction.extension_count,
    }

    if role.kind is RoleKind.BIDDER:
        view["competitor_count_online"] = len(online_bidders - {me})
        view["competitor_count_total"] = len(set(auction.admitted) - {me})
        view["admitted"] = me in auction.admitted
    else:
        view["competitor_count_online"] = len(online_bidders)
        view["competitor_count_total"] = len(auction.admitted)

    if cfg.format.kind is FormatKind.MULTI_ROUND:
        view["current_round"] = auction.current_round
        view["rounds"] = cfg.format.rounds
    if cfg.format.kind is FormatKind.MULTI_PHASE:
        view["current_phase"] = auction.current_phase
        view["phases"] = len(cfg.format.phases)
        gate = auction.current_phase_gate()
        if gate is not None and role.kind is not RoleKind.GUEST:
            # Later-phase targets stay hidden from anyone filtered out.
            if role.kind is not RoleKind.BIDDER or me in auction.admitted:
                view["phase_target"] = gate.target.amount

    if role.kind is RoleKind.GUEST:
        view["slots"] = [_guest_slot(auction, s.slot_id, i) for i, s in enumerate(cfg.slots, start=1)]
        view["bid_count"] = sum(len(auction._slot_bids_visible(s.slot_id)) for s in cfg.slots)
        if cfg.format.kind is FormatKind.DUTCH and auction.dutch_price is not None:
            view["dutch"] = {"price_percent": _percent_of(auction, cfg.slots[0].slot_id, auction.dutch_price)}
        view["events"] = _guest_events(auction, events)
        return view

    view["currency"] = cfg.currency
    view["historic_value"] = cfg.historic_value.amount if cfg.historic_value else None
    view["target_hit"] = _target_hit(auction)
    if role.kind in (RoleKind.AUCTIONEER, RoleKind.ORIGINATOR):
        view["target_value"] = cfg.target_value.amount if cfg.target_value else None

    if cfg.format.kind is FormatKind.DUTCH and auction.dutch_price is not None:
        view["dutch"] = {
            "price": auction.dutch_price,
            "remaining": auction.dutch_remaining,
            "supply": cfg.format.dutch_terms.supply,
        }

    view["slots"] = [_slot_view(auction, s.slot_id, role, labels) for s in cfg.slots]
    view["events"] = _participant_events(auction, events, role, labels)
    return view


def _guest_slot(auction: Auction, slot_id: str, index: int) -> dict[str, Any]:
    lead = auction._best_visible(slot_id)
    return {
        "slot": index,
        "leading_percent": _percent_of(auction, slot_id, lead.amount) if lead else None,
        "bid_count": len(auction._slot_bids_visible(slot_id)),
    }


def _slot_view(auction: Auction, slot_id: str, role: Role, labels: dict[str, str]) -> dict[str, Any]:
    cfg = auction.config
    slot = cfg.slot(slot_id)
    lead = auction._best_visible(slot_id)
    ranking = auction.ranking(slot_id)
    me = role.participant_id
    out: dict[str, Any] = {
        "slot_id": slot_id,
        "description": slot.description,
        "quantity": slot.quantity,
        "unit": slot.unit,
        "delivery_point": slot.delivery_point,
        "step": slot.step.amount,
        "bid_count": len(auction._slot_bids_visible(slot_id)),
        "min_acceptable": (
            auction.min_acceptable(slot_id).amount
            if auction.is_open and auction.min_acceptable(slot_id) is not None
            else None
        ),
    }

    if role.kind is RoleKind.AUCTIONEER:
        out["leading"] = {"bidder_id": lead.bidder_id, "amount": lead.amount} if lead else None
        out["ranking"] = [{"bidder_id": b, "amount": m.amount} for b, m in ranking]
        out["bids"] = [b.to_wire() for b in auction.bids[slot_id]]
        return out

    if role.kind is RoleKind.ORIGINATOR:
        out["leading"] = {"label": labels[lead.bidder_id], "amount": lead.amount} if lead else None
        out["ranking"] = [{"label": labels[b], "amount": m.amount} for b, m in ranking]
        return out

    # bidder
    mine = [b for b in auction.bids[slot_id] if b.bidder_id == me]
    my_best = None
    if mine:
        my_best = min(b.amount for b in mine) if auction.descending else max(b.amount for b in mine)
    my_rank = next((i for i, (b, _) in enumerate(ranking, start=1) if b == me), None)
    out["my_best"] = my_best
    out["my_rank"] = my_rank
    out["leading"] = {"label": _label_for(labels, lead.bidder_id, me), "amount": lead.amount} if lead else None
    out["bidder_labels"] = [
        {"label": _label_for(labels, b, me), "you": b == me} for b, _ in ranking
    ]
    return out


def _label_for(labels: dict[str, str], bidder_id: str, me: str) -> str:
    return "you" if bidder_id == me else labels[bidder_id]


def _tail(events: Iterable[Event]) -> list[Event]:
    evs = list(events)
    return evs[-EVENT_WINDOW:]


def _guest_events(auction: Auction, events: Iterable[Event]) -> list[dict[str, Any]]:
    out = []
    for ev in _tail(events):
        entry: dict[str, Any] = {"seq": ev.seq, "at": ev.at, "kind": ev.kind.value}
        if ev.kind is EventKind.BID_ACCEPTED:
            if _sealed(auction, ev):
                continue
            entry["slot"] = _slot_index(auction, ev.payload["slot_id"])
            entry["percent"] = _percent_of(auction, ev.payload["slot_id"], int(ev.payload["amount"]))
        elif ev.kind is EventKind.BID_REJECTED:
            continue
        elif ev.kind is EventKind.DUTCH_TICK:
            entry["percent"] = _percent_of(auction, auction.config.slots[0].slot_id, int(ev.payload["price"]))
        elif ev.kind is EventKind.DUTCH_ACCEPTED:
            entry["percent"] = _percent_of(auction, auction.config.slots[0].slot_id, int(ev.payload["price"]))
            entry["quantity"] = ev.payload["quantity"]
        elif ev.kind is EventKind.ROUND_CLOSED:
            entry["bid_count"] = len(ev.payload.get("bids", ()))
        elif ev.kind is EventKind.PHASE_ADVANCED:
            entry["admitted_count"] = len(ev.payload.get("admitted", ()))
        elif ev.kind is EventKind.CLOSED:
            prices = ev.payload["outcome"]["closing_prices"]
            percents = {}
            for slot_id, price in prices.items():
                if price is not None:
                    percents[str(_slot_index(auction, slot_id))] = _percent_of(auction, slot_id, int(price))
            entry["closing_percents"] = percents
        out.append(entry)
    return out


def _sealed(auction: Auction, ev: Event) -> bool:
    """Current-round bids of a running multi-round auction stay invisible."""
    if auction.config.format.kind is not FormatKind.MULTI_ROUND or not auction.is_open:
        return False
    return ev.payload.get("round") == auction.current_round


def _participant_events(
    auction: Auction, events: Iterable[Event], role: Role, labels: dict[str, str]
) -> list[dict[str, Any]]:
    if role.kind is RoleKind.AUCTIONEER:
        return [ev.to_wire() for ev in _tail(events)]
    me = role.participant_id
    is_bidder = role.kind is RoleKind.BIDDER
    out = []
    for ev in _tail(events):
        entry: dict[str, Any] = {"seq": ev.seq, "at": ev.at, "kind": ev.kind.value}
        p = ev.payload
        if ev.kind is EventKind.BID_ACCEPTED:
            own = p["bidder_id"] == me
            if is_bidder and not own and _sealed(auction, ev):
                continue  # sealed round: competitors' amounts stay hidden
            entry.update(
                {
                    "slot_id": p["slot_id"],
                    "label": _label_for(labels, p["bidder_id"], me if is_bidder else ""),
                    "amount": p["amount"],
                }
            )
            if "round" in p:
                entry["round"] = p["round"]
            if "phase" in p:
                entry["phase"] = p["phase"]
        elif ev.kind is EventKind.BID_REJECTED:
            if not is_bidder or p["bidder_id"] != me:
                continue  # rejections are private to their bidder
            entry.update({"slot_id": p["slot_id"], "amount": p["amount"], "reason": p["reason"], "label": "you"})
        elif ev.kind is EventKind.ROUND_CLOSED:
            entry.update(
                {
                    "round": p["round"],
                    "bids": [
                        {
                            "label": _label_for(labels, b["bidder_id"], me if is_bidder else ""),
                            "amount": b["amount"],
                        }
                        for b in p["bids"]
                    ],
                    "dropped": [_label_for(labels, d, me if is_bidder else "") for d in p["dropped"]],
                }
            )
        elif ev.kind is EventKind.PHASE_ADVANCED:
            entry.update(
                {
                    "phase_closed": p["phase_closed"],
                    "admitted": [_label_for(labels, b, me if is_bidder else "") for b in p["admitted"]],
                    "excluded": [_label_for(labels, b, me if is_bidder else "") for b in p["excluded"]],
                }
            )
        elif ev.kind is EventKind.EXTENDED:
            entry.update({"new_close": p["new_close"], "guard_ms": p["guard_ms"]})
        elif ev.kind is EventKind.DUTCH_TICK:
            entry.update({"step": p["step"], "price": p["price"]})
        elif ev.kind is EventKind.DUTCH_ACCEPTED:
            entry.update(
                {
                    "label": _label_for(labels, p["bidder_id"], me if is_bidder else ""),
                    "quantity": p["quantity"],
                    "price": p["price"],
                    "remaining": p["remaining"],
                }
            )
        elif ev.kind is EventKind.CLOSED:
            oc = p["outcome"]
            entry["outcome"] = {
                "winners": {
                    slot: (_label_for(labels, w, me if is_bidder else "") if w else None)
                    for slot, w in oc["winners"].items()
                },
                "closing_prices": oc["closing_prices"],
                "obligation": oc["obligation"],
            }
        elif ev.kind is EventKind.LINKED_ALLOCATION:
            entry.update({"own_share": p["own_share"], "pending": p["pending"]})
        elif ev.kind is EventKind.LINK_BROKEN:
            entry["link_id"] = p.get("link_id")
        # created / opened / cancelled / extended fall through with kind only
        out.append(entry)
    return out
