"""Post-auction reports, one redaction level per role.

The winner's report proves the win and names the winning price; a losing
bidder gets its own best bid and final rank plus the anonymous winning
price, never a competitor's amounts; guests get percentages only.
Contents are derived purely from the closed state, so repeated calls
return the same report; generated_at is pinned to the close time.
"""

from __future__ import annotations

from typing import Any

from ..engine import Auction, Status
from ..errors import NotClosed
from ..events import Event, EventKind
from ..visibility import Role, RoleKind, _percent_of, check_registered, pseudonymize


def generate_report(auction: Auction, events: list[Event], role: Role) -> dict[str, Any]:
    if auction.status is not Status.CLOSED:
        raise NotClosed(auction.status.value)
    check_registered(auction, role)
    outcome = auction.outcome
    closed_at = next(ev.at for ev in events if ev.kind is EventKind.CLOSED)
    opened_at = next((ev.at for ev in events if ev.kind is EventKind.OPENED), closed_at)
    bid_count = sum(1 for ev in events if ev.kind is EventKind.BID_ACCEPTED)
    report: dict[str, Any] = {
        "auction_id": auction.config.auction_id,
        "role": role.kind.value,
        "generated_at": closed_at,
        "status": auction.status.value,
        "audit": {
            "bid_count": bid_count,
            "extensions": auction.extension_count,
            "duration_ms": closed_at - opened_at,
        },
    }

    if role.kind is RoleKind.GUEST:
        percents = {}
        for i, slot in enumerate(auction.config.slots, start=1):
            price = outcome.closing_prices[slot.slot_id]
            percents[str(i)] = _percent_of(auction, slot.slot_id, price) if price is not None else None
        report["closing_percents"] = percents
        if outcome.dutch_allocations:
            report["allocation_count"] = len(outcome.dutch_allocations)
        return report

    labels = pseudonymize(auction, role)
    report["obligation"] = outcome.obligation.value
    report["currency"] = auction.config.currency

    if role.kind in (RoleKind.AUCTIONEER, RoleKind.ORIGINATOR):
        # identities are revealed to both at close; the auctioneer had them live
        report["winners"] = dict(outcome.winners)
        report["closing_prices"] = dict(outcome.closing_prices)
        if outcome.dutch_allocations:
            report["allocations"] = [a.to_wire() for a in outcome.dutch_allocations]
        if outcome.linked_share is not None:
            report["linked_share"] = f"{float(outcome.linked_share):.4f}"
        return report

    # bidder: own results plus the anonymous winning price per slot
    me = role.participant_id
    slots = []
    for slot in auction.config.slots:
        sid = slot.slot_id
        ranking = auction.ranking(sid)
        my_rank = next((i for i, (b, _) in enumerate(ranking, start=1) if b == me), None)
        mine = [b.amount for b in auction.bids[sid] if b.bidder_id == me]
        winner = outcome.winners[sid]
        slots.append(
            {
                "slot_id": sid,
                "your_best": (min(mine) if auction.descending else max(mine)) if mine else None,
                "your_rank": my_rank,
                "winner": winner == me,
                "winning_label": ("you" if winner == me else labels.get(winner)) if winner else None,
                "winning_price": outcome.closing_prices[sid],
            }
        )
    report["slots"] = slots
    report["won_any"] = any(s["winner"] for s in slots)
    my_allocs = [a.to_wire() for a in outcome.dutch_allocations if a.bidder_id == me]
    if my_allocs:
        report["your_allocations"] = my_allocs
    return report
