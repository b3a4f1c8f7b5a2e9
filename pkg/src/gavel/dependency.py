"""Linking simultaneous auctions on competing materials.

When two goods can substitute for each other, the buyer runs both auctions
at once and splits the purchase between them according to the live price
difference.  The split is advisory: it is recorded as events in both logs
and in the outcomes, never enforced as a contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import Auction, Status
from .errors import AuctionError, CurrencyMismatch, InvalidConfig
from .events import Event
from .money import Money


class NonPositivePrice(AuctionError):
    """Share allocation needs strictly positive prices."""

    code = "NON_POSITIVE_PRICE"


@dataclass(frozen=True)
class DependencyLink:
    """A pairwise link between auctions on substitutable goods.

    ``sensitivity`` is the share shift per unit of relative price
    difference; shares are clamped into [share_floor, share_cap] and the
    counterpart always receives the complement.
    """

    link_id: str
    auction_a: str
    auction_b: str
    sensitivity: Fraction = Fraction(1)
    share_floor: Fraction = Fraction(0)
    share_cap: Fraction = Fraction(1)

    def validate(self) -> None:
        if self.auction_a == self.auction_b:
            raise InvalidConfig("a link needs two distinct auctions")
        if self.sensitivity < 0:
            raise InvalidConfig("sensitivity must be >= 0")
        if not (0 <= self.share_floor <= Fraction(1, 2) <= self.share_cap <= 1):
            raise InvalidConfig("need 0 <= floor <= 1/2 <= cap <= 1")


def allocate_shares(
    price_a: Money, price_b: Money, link: DependencyLink
) -> tuple[Fraction, Fraction]:
    """Purchase shares (share_a, share_b) from current leading prices.

    share_a = clamp(1/2 + k * (price_b - price_a) / max(price_a, price_b));
    the normalizer makes the result invariant under rescaling both prices,
    e.g. quoting in cents versus whole units.  Clamping uses the symmetric
    interval [max(floor, 1-cap), min(cap, 1-floor)] so that swapping the
    auctions swaps the shares and both shares respect both bounds.
    """
    if price_a.currency != price_b.currency:
        raise CurrencyMismatch(f"{price_a.currency} vs {price_b.currency}")
    if price_a.amount <= 0 or price_b.amount <= 0:
        raise NonPositivePrice(f"{price_a}, {price_b}")
    raw = Fraction(1, 2) + link.sensitivity * Fraction(
        price_b.amount - price_a.amount, max(price_a.amount, price_b.amount)
    )
    lo = max(link.share_floor, 1 - link.share_cap)
    hi = min(link.share_cap, 1 - link.share_floor)
    share_a = min(max(raw, lo), hi)
    return share_a, 1 - share_a


def _reference_price(auction: Auction) -> Money | None:
    """The auction's live price for share purposes: the leading bid on its
    first slot, or None while nothing has been bid."""
    lead = auction._best_visible(auction.config.slots[0].slot_id)
    if lead is None:
        return None
    return Money(lead.amount, auction.config.currency)


def notify_linked(state_a: Auction, state_b: Auction, link: DependencyLink, now: int) -> list[Event]:
    """Record the current shares in both auctions' logs.

    Each log receives only its own auction's share; counterpart prices never
    cross the link.  A cancelled counterpart breaks the link and the survivor
    reverts to a standalone full allocation.
    """
    link.validate()
    events: list[Event] = []
    for mine, other in ((state_a, state_b), (state_b, state_a)):
        if not mine.is_open:
            continue
        if other.status is Status.CANCELLED:
            if not mine.link_broken:
                events.append(mine.record_link_broken(now, link.link_id))
            continue
        price_mine = _reference_price(mine)
        price_other = _reference_price(other)
        if price_mine is None or price_other is None:
            events.append(mine.record_linked_share(now, link.link_id, None))
            continue
        if mine is state_a:
            share, _ = allocate_shares(price_mine, price_other, link)
        else:
            _, share = allocate_shares(price_other, price_mine, link)
        events.append(mine.record_linked_share(now, link.link_id, share))
    return events
