"""Network edge: authenticated commands, streaming views, persistence, reports."""

from .app import create_app
from .auth import Credential, TokenStore
from .registry import AuctionRegistry
from .reports import generate_report
from .settings import ServerSettings
from .store import EventLogStore
from .streams import StreamHub

__all__ = [
    "AuctionRegistry",
    "Credential",
    "EventLogStore",
    "ServerSettings",
    "StreamHub",
    "TokenStore",
    "create_app",
    "generate_report",
]
