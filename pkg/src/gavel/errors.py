"""Exception hierarchy and bid-rejection reason codes.

Every exception carries a stable ``code`` string that the server maps
directly onto wire error codes, so the hierarchy doubles as the error
contract of the HTTP API.
"""

from __future__ import annotations


class AuctionError(Exception):
    """Base class for all auction failures."""

    code = "AUCTION_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__)


class InvalidConfig(AuctionError):
    """Auction configuration violates an invariant."""

    code = "INVALID_CONFIG"


class NotYetOpen(AuctionError):
    """Open requested before the scheduled open time."""

    code = "NOT_YET_OPEN"


class AlreadyOpen(AuctionError):
    """Open requested on an auction that already opened."""

    code = "ALREADY_OPEN"


class AuctionNotOpen(AuctionError):
    """Operation requires an open (or extended) auction."""

    code = "AUCTION_NOT_OPEN"


class AuctionClosed(AuctionError):
    """Command arrived after the effective close."""

    code = "AUCTION_CLOSED"


class NotAdmitted(AuctionError):
    """Bidder is not admitted to the current phase."""

    code = "NOT_ADMITTED"


class UnknownSlot(AuctionError):
    """Slot id does not exist in this auction."""

    code = "UNKNOWN_SLOT"


class UnknownAuction(AuctionError):
    """Auction id is not registered."""

    code = "UNKNOWN_AUCTION"


class UnknownParticipant(AuctionError):
    """Participant is not registered on this auction."""

    code = "UNKNOWN_PARTICIPANT"


class WrongFormat(AuctionError):
    """Operation does not apply to this auction format."""

    code = "WRONG_FORMAT"


class RoundIncomplete(AuctionError):
    """Round timer still running and sealed bids are missing."""

    code = "ROUND_INCOMPLETE"


class PhaseStillRunning(AuctionError):
    """Phase timer has not expired yet."""

    code = "PHASE_STILL_RUNNING"


class StillOpen(AuctionError):
    """Close requested before the effective close time."""

    code = "STILL_OPEN"


class InsufficientSupply(AuctionError):
    """Dutch accept asked for more items than remain."""

    code = "INSUFFICIENT_SUPPLY"


class CurrencyMismatch(AuctionError):
    """Arithmetic or comparison across different currencies."""

    code = "CURRENCY_MISMATCH"


class ZeroBaseline(AuctionError):
    """Percentage masking against a non-positive baseline."""

    code = "ZERO_BASELINE"


class CorruptLog(AuctionError):
    """Event log is structurally broken (gap, bad line, bad first event)."""

    code = "CORRUPT_LOG"


class NotClosed(AuctionError):
    """Report requested before the auction closed."""

    code = "NOT_CLOSED"


class Unauthorized(AuctionError):
    """Token missing, unknown, or bound to the wrong role."""

    code = "UNAUTHORIZED"


class ScenarioInvalid(AuctionError):
    """Simulation scenario failed validation."""

    code = "SCENARIO_INVALID"


class TooLarge(AuctionError):
    """Scenario exceeds the oracle's small-instance bounds."""

    code = "TOO_LARGE"


# Reason codes carried by bid_rejected events.  These are content-level
# rejections: the command was well-formed and authorized, the price was not.
REJECT_WRONG_DIRECTION = "wrong_direction"
REJECT_STEP_TOO_SMALL = "step_too_small"
REJECT_SLOT_CONFLICT = "slot_conflict"
REJECT_CURRENCY_MISMATCH = "currency_mismatch"
REJECT_NON_POSITIVE = "non_positive"
REJECT_ROUND_ALREADY_BID = "round_already_bid"
