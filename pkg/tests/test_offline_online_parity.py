"""The same command sequence offline and through the server yields the
same event log, modulo the wall-clock epoch offset."""

from fastapi.testclient import TestClient

from gavel import Auction, config_to_wire
from gavel.server import AuctionRegistry, ServerSettings, StreamHub
from gavel.server.app import create_app
from tests.conftest import MIN, eur, reverse_config
from tests.test_server_api import FakeClock, auth

EPOCH = 1_700_000_000_000  # the server's wall clock starts here

SCRIPT = [
    ("open", None, 0),
    ("bid", ("acme", 100_000), 5_000),
    ("bid", ("bolt", 99_500), 9_000),
    ("bid", ("acme", 99_600), 12_000),  # rejected: step too small
    ("bid", ("corax", 99_000), 30 * MIN - 20_000),  # triggers an extension
    ("close", None, 35 * MIN),
]


def run_offline():
    auction, events = Auction.create(reverse_config(), at=0)
    for verb, args, at in SCRIPT:
        if verb == "open":
            events += auction.open(at)
        elif verb == "bid":
            bidder, amount = args
            events += auction.submit_bid(bidder, "s1", eur(amount), at).events
        else:
            events += auction.fire_due(at)
    return events


def run_online(tmp_path):
    clock = FakeClock(EPOCH)
    registry = AuctionRegistry(tmp_path, hub=StreamHub(), clock=clock)
    app = create_app(ServerSettings.load(env={}, data_dir=tmp_path), registry=registry)
    with TestClient(app) as client:
        admin = (tmp_path / "admin_token").read_text().strip()
        config = reverse_config(scheduled_open=EPOCH, scheduled_close=EPOCH + 30 * MIN)
        created = client.post(
            "/api/auctions", json={"config": config_to_wire(config)}, headers=auth(admin)
        ).json()
        tokens = created["tokens"]
        for verb, args, at in SCRIPT:
            clock.now = EPOCH + at
            if verb == "open":
                client.post("/api/auctions/a1/open", headers=auth(tokens["auctioneer"]))
            elif verb == "bid":
                bidder, amount = args
                client.post(
                    "/api/auctions/a1/bids",
                    json={"slot_id": "s1", "amount": amount},
                    headers=auth(tokens["bidders"][bidder]),
                )
            else:
                registry.tick()
        return list(registry.get("a1").events)


def normalize(events, epoch):
    out = []
    for ev in events:
        wire = ev.to_wire()
        wire["at"] -= epoch
        payload = dict(wire["payload"])
        for key in ("submitted_at", "new_close", "open_time", "now_close"):
            if key in payload:
                payload[key] -= epoch
        if "config" in payload:
            payload["config"] = dict(payload["config"])
            payload["config"]["scheduled_open"] -= epoch
            payload["config"]["scheduled_close"] -= epoch
        wire["payload"] = payload
        out.append(wire)
    return out


def test_offline_and_online_logs_identical_modulo_epoch(tmp_path):
    offline = normalize(run_offline(), 0)
    online = normalize(run_online(tmp_path), EPOCH)
    assert offline == online
    # both runs include the rejection and the soft-close extension
    kinds = [ev["kind"] for ev in offline]
    assert "bid_rejected" in kinds and "extended" in kinds and kinds[-1] == "closed"
