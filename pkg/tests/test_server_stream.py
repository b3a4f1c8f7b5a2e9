"""Server-push view streaming over SSE against a live server."""

import json

from gavel import config_to_wire
from tests.conftest import wall_config


def setup_auction(srv, config=None):
    resp = srv.http.post(
        "/api/auctions",
        json={"config": config_to_wire(config or wall_config())},
        headers=srv.admin_headers(),
    )
    assert resp.status_code == 201, resp.text
    return resp.json()["tokens"]


def test_snapshot_then_push_on_events(live_server):
    srv = live_server
    tokens = setup_auction(srv)
    reader = srv.reader("a1", tokens["bidders"]["acme"])
    snapshot = reader.next()
    assert snapshot["status"] == "scheduled" and snapshot["as_of_seq"] == 1

    srv.http.post("/api/auctions/a1/open", headers=srv.headers(tokens["auctioneer"]))
    opened = reader.next()
    assert opened["status"] == "open" and opened["as_of_seq"] == 2

    srv.http.post(
        "/api/auctions/a1/bids",
        json={"slot_id": "s1", "amount": 95_000},
        headers=srv.headers(tokens["bidders"]["bolt"]),
    )
    after_bid = reader.next()
    assert after_bid["as_of_seq"] == 3
    assert after_bid["slots"][0]["leading"] == {"label": "Bidder 2", "amount": 95_000}
    reader.stop()


def test_guest_stream_shows_percentages_only(live_server):
    srv = live_server
    tokens = setup_auction(srv)
    guest = srv.http.post(
        "/api/auctions/a1/tokens",
        json={"participant_id": "v1", "role": "guest"},
        headers=srv.admin_headers(),
    ).json()["token"]
    reader = srv.reader("a1", guest)
    reader.next()
    srv.http.post("/api/auctions/a1/open", headers=srv.headers(tokens["auctioneer"]))
    reader.next()
    srv.http.post(
        "/api/auctions/a1/bids",
        json={"slot_id": "s1", "amount": 80_000},
        headers=srv.headers(tokens["bidders"]["acme"]),
    )
    view = reader.next()
    assert view["slots"][0]["leading_percent"] == 80.0
    assert "currency" not in json.dumps(view)
    reader.stop()


def test_online_competitor_count_tracks_subscriptions(live_server):
    srv = live_server
    tokens = setup_auction(srv)
    srv.http.post("/api/auctions/a1/open", headers=srv.headers(tokens["auctioneer"]))
    acme = srv.reader("a1", tokens["bidders"]["acme"])
    first = acme.next()
    assert first["competitor_count_online"] == 0  # alone online, self excluded

    bolt = srv.reader("a1", tokens["bidders"]["bolt"])
    bolt.next()
    refreshed = acme.next()
    assert refreshed["competitor_count_online"] == 1
    assert refreshed["competitor_count_total"] == 2
    acme.stop()
    bolt.stop()


def test_reconnect_gets_full_snapshot(live_server):
    srv = live_server
    tokens = setup_auction(srv)
    srv.http.post("/api/auctions/a1/open", headers=srv.headers(tokens["auctioneer"]))
    srv.http.post(
        "/api/auctions/a1/bids",
        json={"slot_id": "s1", "amount": 95_000},
        headers=srv.headers(tokens["bidders"]["acme"]),
    )
    reader = srv.reader("a1", tokens["bidders"]["bolt"])
    snapshot = reader.next()
    assert snapshot["as_of_seq"] == 3
    assert snapshot["slots"][0]["leading"]["amount"] == 95_000
    reader.stop()
