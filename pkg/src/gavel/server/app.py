"""HTTP edge: command endpoints plus a server-push view stream.

Commands are plain POSTs acknowledged only after the emitted events are
fsynced; the stream is server-sent events, one JSON view per message,
starting with a full snapshot so a reconnect needs no gap handling.
Every auction-core error surfaces as a stable wire code.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from ..config import config_from_wire
from ..dependency import DependencyLink
from ..engine import Auction
from ..errors import AuctionError, InvalidConfig, Unauthorized
from ..money import Money
from ..visibility import RoleKind
from .auth import Credential, TokenStore
from .registry import AuctionRegistry
from .reports import generate_report
from .settings import ServerSettings
from .streams import StreamHub

logger = logging.getLogger(__name__)

ERROR_STATUS = {
    "UNAUTHORIZED": 401,
    "UNKNOWN_AUCTION": 404,
    "UNKNOWN_SLOT": 404,
    "UNKNOWN_PARTICIPANT": 404,
    "NOT_CLOSED": 409,
    "AUCTION_CLOSED": 409,
    "AUCTION_NOT_OPEN": 409,
    "ALREADY_OPEN": 409,
    "NOT_YET_OPEN": 409,
    "STILL_OPEN": 409,
    "INVALID_CONFIG": 422,
    "INSUFFICIENT_SUPPLY": 409,
    "NOT_ADMITTED": 403,
    "WRONG_FORMAT": 409,
}


class BidBody(BaseModel):
    slot_id: str
    amount: int


class DutchAcceptBody(BaseModel):
    quantity: int


class CreateBody(BaseModel):
    config: dict[str, Any]
    link: dict[str, Any] | None = None


class TokenBody(BaseModel):
    participant_id: str
    role: str


def create_app(settings: ServerSettings | None = None, registry: AuctionRegistry | None = None) -> FastAPI:
    settings = settings or ServerSettings.load()
    settings.data_dir.mkdir(parents=True, exist_ok=True)
    hub = StreamHub()
    registry = registry or AuctionRegistry(settings.data_dir, hub=hub)
    tokens = TokenStore(settings.data_dir)
    admin_token = _load_admin_token(settings.data_dir)

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        recovered, quarantined = registry.recover()
        if recovered:
            logger.info("recovered %d auction(s): %s", len(recovered), ", ".join(recovered))
        for auction_id, reason in quarantined.items():
            logger.error("auction %s quarantined: %s", auction_id, reason)
        registry.start_timers()
        yield
        registry.stop()

    app = FastAPI(title="gavel auction server", version="0.1.0", lifespan=lifespan)
    app.state.registry = registry
    app.state.tokens = tokens
    app.state.settings = settings
    app.state.admin_token = admin_token

    from fastapi.middleware.cors import CORSMiddleware

    # the console may be served from another origin; auth is bearer-token
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["Authorization", "Content-Type"],
    )

    @app.exception_handler(AuctionError)
    def _auction_error(_request: Request, exc: AuctionError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"error": exc.code, "detail": str(exc)})

    def authed(authorization: str | None = Header(default=None)) -> Credential:
        if authorization and authorization.lower().startswith("bearer "):
            return tokens.resolve(authorization[7:].strip())
        raise Unauthorized("missing bearer token")

    def admin(authorization: str | None = Header(default=None)) -> None:
        if not authorization or authorization[7:].strip() != admin_token:
            raise Unauthorized("admin token required")

    # --- administration ---------------------------------------------------

    @app.post("/api/auctions", status_code=201)
    def create_auction(body: CreateBody, _: None = Depends(admin)) -> dict[str, Any]:
        config = config_from_wire(body.config)
        registry.create(config)
        minted = {
            "auctioneer": tokens.mint(config.auction_id, config.auctioneer, RoleKind.AUCTIONEER).token,
            "originator": tokens.mint(config.auction_id, config.originator, RoleKind.ORIGINATOR).token,
            "bidders": {
                b: tokens.mint(config.auction_id, b, RoleKind.BIDDER).token for b in config.invited_bidders
            },
        }
        if body.link:
            registry.add_link(
                DependencyLink(
                    link_id=body.link["link_id"],
                    auction_a=body.link["auction_a"],
                    auction_b=body.link["auction_b"],
                )
            )
        return {"auction_id": config.auction_id, "tokens": minted}

    @app.post("/api/auctions/{auction_id}/tokens", status_code=201)
    def mint_token(auction_id: str, body: TokenBody, _: None = Depends(admin)) -> dict[str, Any]:
        registry.get(auction_id)
        cred = tokens.mint(auction_id, body.participant_id, RoleKind(body.role))
        return {"token": cred.token, "role": cred.role.kind.value}

    # --- session and commands -----------------------------------------------

    @app.get("/api/session")
    def session(cred: Credential = Depends(authed)) -> dict[str, Any]:
        return {
            "auction_id": cred.auction_id,
            "participant_id": cred.participant_id,
            "role": cred.role.kind.value,
        }

    @app.get("/api/auctions")
    def list_auctions(cred: Credential = Depends(authed)) -> dict[str, Any]:
        return {"auction_ids": [cred.auction_id]}

    @app.post("/api/auctions/{auction_id}/open")
    def open_auction(auction_id: str, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, RoleKind.AUCTIONEER)
        events = registry.apply(auction_id, lambda auction, now: auction.open(now))
        return {"opened": True, "seq": events[-1].seq}

    @app.post("/api/auctions/{auction_id}/cancel")
    def cancel_auction(auction_id: str, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, RoleKind.AUCTIONEER)
        events = registry.apply(auction_id, lambda auction, now: auction.cancel(now))
        return {"cancelled": True, "seq": events[-1].seq}

    @app.post("/api/auctions/{auction_id}/bids")
    def submit_bid(auction_id: str, body: BidBody, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, RoleKind.BIDDER)
        live = registry.get(auction_id)
        currency = live.auction.config.currency
        outcome: dict[str, Any] = {}

        def command(auction: Auction, now: int):
            result = auction.submit_bid(cred.participant_id, body.slot_id, Money(body.amount, currency), now)
            outcome["accepted"] = result.accepted
            outcome["reason"] = result.reason
            outcome["seq"] = result.events[-1].seq if result.events else auction.event_seq
            bound = auction.min_acceptable(body.slot_id) if auction.is_open else None
            outcome["min_acceptable"] = bound.amount if bound is not None else None
            return list(result.events)

        registry.apply(auction_id, command)
        return {
            "accepted": outcome["accepted"],
            "reason": outcome["reason"],
            "seq": outcome["seq"],
            "min_acceptable": outcome["min_acceptable"],
        }

    @app.post("/api/auctions/{auction_id}/dutch-accept")
    def dutch_accept(auction_id: str, body: DutchAcceptBody, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, RoleKind.BIDDER)
        events = registry.apply(
            auction_id, lambda auction, now: auction.dutch_accept(cred.participant_id, body.quantity, now)
        )
        accepted = [ev for ev in events if ev.kind.value == "dutch_accepted"][-1]
        return {"accepted": True, "price": accepted.payload["price"], "remaining": accepted.payload["remaining"]}

    # --- views, stream, report -------------------------------------------------

    @app.get("/api/auctions/{auction_id}/view")
    def view(auction_id: str, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, None)
        return registry.snapshot_view(auction_id, cred.role)

    @app.get("/api/auctions/{auction_id}/report")
    def report(auction_id: str, cred: Credential = Depends(authed)) -> dict[str, Any]:
        _require(cred, auction_id, None)
        live = registry.get(auction_id)
        with live.lock:
            return generate_report(live.auction, live.events, cred.role)

    @app.get("/api/auctions/{auction_id}/stream")
    def stream(auction_id: str, cred: Credential = Depends(authed)) -> StreamingResponse:
        _require(cred, auction_id, None)
        registry.get(auction_id)
        sub = registry.hub.subscribe(auction_id, cred.role)
        # presence changed: refresh the other subscribers' online counts
        registry.publish(auction_id, exclude=sub)

        def event_stream():
            import queue as _queue

            try:
                snapshot = registry.snapshot_view(auction_id, cred.role)
                yield f"data: {json.dumps(snapshot, separators=(',', ':'))}\n\n"
                while True:
                    try:
                        view = sub.inbox.get(timeout=10.0)
                    except _queue.Empty:
                        yield ": keep-alive\n\n"
                        continue
                    yield f"data: {json.dumps(view, separators=(',', ':'))}\n\n"
            finally:
                registry.hub.unsubscribe(sub)
                registry.publish(auction_id)

        return StreamingResponse(event_stream(), media_type="text/event-stream")

    @app.get("/healthz")
    def healthz() -> dict[str, Any]:
        return {
            "ok": True,
            "auctions": registry.auction_ids(),
            "quarantined": registry.quarantined(),
        }

    _mount_console(app)
    return app


def _mount_console(app: FastAPI) -> None:
    """Serve the built web console at /console when frontend/ is present."""
    from fastapi.staticfiles import StaticFiles

    root = Path(__file__).resolve().parents[3] / "frontend"
    if (root / "index.html").exists() and (root / "dist").exists():
        app.mount("/console", StaticFiles(directory=root, html=True), name="console")


def _require(cred: Credential, auction_id: str, role: RoleKind | None) -> None:
    if cred.auction_id != auction_id:
        raise Unauthorized("token bound to a different auction")
    if role is not None and cred.role.kind is not role:
        raise Unauthorized(f"{cred.role.kind.value} token cannot do this")


def _load_admin_token(data_dir: Path) -> str:
    import secrets

    path = Path(data_dir) / "admin_token"
    if path.exists():
        return path.read_text().strip()
    token = secrets.token_urlsafe(24)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(token)
    return token
