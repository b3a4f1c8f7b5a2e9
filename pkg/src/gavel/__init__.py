"""Real-time business auction engine: formats, timing, visibility, and tooling."""

from .config import (
    Anonymity,
    AuctionConfig,
    AuctionFormat,
    Direction,
    DutchTerms,
    ExtensionPolicy,
    FormatKind,
    PercentBaseline,
    PhaseGate,
    Slot,
    config_from_wire,
    config_to_wire,
)
from .dependency import DependencyLink, allocate_shares, notify_linked
from .engine import (
    Allocation,
    Auction,
    BidRec,
    Obligation,
    Outcome,
    Status,
    SubmitResult,
    winner_map_injective,
)
from .events import Event, EventKind, dump_events, load_events
from .money import Money
from .visibility import Role, RoleKind, mask_percent, project_view, pseudonymize

__all__ = [
    "Allocation",
    "Anonymity",
    "Auction",
    "AuctionConfig",
    "AuctionFormat",
    "BidRec",
    "DependencyLink",
    "Direction",
    "DutchTerms",
    "Event",
    "EventKind",
    "ExtensionPolicy",
    "FormatKind",
    "Money",
    "Obligation",
    "Outcome",
    "PercentBaseline",
    "PhaseGate",
    "Role",
    "RoleKind",
    "Slot",
    "Status",
    "SubmitResult",
    "allocate_shares",
    "config_from_wire",
    "config_to_wire",
    "dump_events",
    "load_events",
    "mask_percent",
    "notify_linked",
    "project_view",
    "pseudonymize",
    "winner_map_injective",
]

__version__ = "0.1.0"
