"""Acceptance suite: one test per release criterion, one PASS line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Budgeted criteria assert their own runtime.
"""

from __future__ import annotations

import json
import random
import re
import statistics
import time

import pytest

from gavel import (
    Auction,
    AuctionFormat,
    DependencyLink,
    ExtensionPolicy,
    Money,
    Obligation,
    Role,
    RoleKind,
    allocate_shares,
    config_to_wire,
    project_view,
    winner_map_injective,
)
from gavel.config import FormatKind
from gavel.events import EventKind
from gavel.server import AuctionRegistry
from gavel.simulation import generate_scenario, oracle_outcome, run_scenario
from tests.conftest import MIN, eur, make_config, reverse_config, wall_config

PASS = "ACCEPTANCE PASS"


# --- soft close ---------------------------------------------------------------


def test_soft_close_over_1000_seeded_scenarios():
    started = time.monotonic()
    continuous = (FormatKind.REVERSE, FormatKind.ENGLISH)
    checked = 0
    extensions_seen = 0
    for seed in range(1000):
        scenario = generate_scenario(seed, kinds=continuous, with_sniper=seed % 2 == 0)
        result = run_scenario(scenario)
        log = result.event_log
        accepted = [e for e in log if e.kind is EventKind.BID_ACCEPTED]
        if not accepted:
            continue
        checked += 1
        last = accepted[-1]
        extensions_before = sum(
            1 for e in log if e.kind is EventKind.EXTENDED and e.seq < last.seq
        )
        guard_at_bid = scenario.config.extension.guard_ms(extensions_before)
        final_close = result.final_states[result.primary_id].now_close
        assert final_close - last.at >= guard_at_bid, (
            f"seed {seed}: closed {final_close - last.at} ms after the last bid, "
            f"inside its {guard_at_bid} ms guard"
        )
        # first extension with the default policy lands exactly 180 s after
        # its triggering bid
        first_ext = next((e for e in log if e.kind is EventKind.EXTENDED), None)
        if first_ext is not None:
            extensions_seen += 1
            trigger = next(e for e in reversed(log) if e.kind is EventKind.BID_ACCEPTED and e.seq < first_ext.seq)
            assert first_ext.payload["new_close"] == trigger.at + 180_000
            assert first_ext.payload["guard_ms"] == 180_000
    elapsed = time.monotonic() - started
    assert elapsed < 60, f"soft-close sweep took {elapsed:.1f}s"
    assert checked >= 900 and extensions_seen >= 100
    print(
        f"{PASS}: soft-close: 1000 seeded scenarios, zero closes inside the guard window "
        f"({extensions_seen} runs extended, first extension exactly +180 s; {elapsed:.1f}s)"
    )


def test_guard_decay_sequence_exact():
    policy = ExtensionPolicy()
    got_ms = [policy.guard_ms(n) for n in range(9)]
    expected_seconds = [180, 90, 45, 22.5, 11.25, 5.625, 5, 5, 5]
    assert got_ms == [int(s * 1000) for s in expected_seconds]
    print(f"{PASS}: guard decay: defaults give {expected_seconds} s exactly")


# --- direction monotonicity ------------------------------------------------------


def test_direction_monotonicity_property():
    rng = random.Random(2026)
    streams_per_format = 10_000
    for format_kind, descending in ((FormatKind.REVERSE, True), (FormatKind.ENGLISH, False)):
        for _ in range(streams_per_format):
            step = rng.choice((1, 100, 500))
            config = make_config(
                format=AuctionFormat.reverse() if descending else AuctionFormat.english(),
                slots=(make_slot_with_step(step),),
                historic_value=eur(rng.randrange(50, 150) * 1000) if rng.random() < 0.5 else None,
            )
            auction, _ = Auction.create(config)
            auction.open(0)
            anchor = config.historic_value.amount if config.historic_value else 100_000
            price = anchor
            accepted: list[int] = []
            for i in range(rng.randrange(2, 12)):
                delta = rng.randrange(-3, 4) * step + rng.randrange(-2, 3)
                amount = max(1, price + (-delta if descending else delta))
                bidder = config.invited_bidders[rng.randrange(len(config.invited_bidders))]
                result = auction.submit_bid(bidder, "s1", eur(amount), i + 1)
                if result.accepted:
                    accepted.append(amount)
                    price = amount
            for earlier, later in zip(accepted, accepted[1:]):
                if descending:
                    assert later <= earlier - step, (accepted, step)
                else:
                    assert later >= earlier + step, (accepted, step)
    print(f"{PASS}: direction monotonicity: {streams_per_format} random bid streams per format, all strictly monotone")


def make_slot_with_step(step: int):
    from tests.conftest import make_slot

    return make_slot(step=step)


# --- obligation ---------------------------------------------------------------------


def test_obligation_exhaustive_lattice():
    mismatches = 0
    for target_k in range(1, 101):
        for price_k in range(1, 101):
            target = target_k * 1000
            price = price_k * 1000
            config = reverse_config(
                historic_value=eur(200_000), target_value=eur(target), slots=(make_slot_with_step(1),)
            )
            auction, _ = Auction.create(config)
            auction.open(0)
            assert auction.submit_bid("acme", "s1", eur(price), 1).accepted
            auction.fire_due(10**9)
            oracle = Obligation.OBLIGED if price <= target else Obligation.FREE
            if auction.outcome.obligation is not oracle:
                mismatches += 1
    assert mismatches == 0
    print(f"{PASS}: obligation: 100x100 (target, price) lattice matches the one-line oracle, zero mismatches")


# --- engine vs oracle -----------------------------------------------------------------


def test_engine_oracle_equivalence_500_scenarios():
    started = time.monotonic()
    for seed in range(500):
        scenario = generate_scenario(seed)
        result = run_scenario(scenario)
        oracle = oracle_outcome(scenario)
        engine = result.outcome
        assert engine.winners == oracle.winners, seed
        assert engine.closing_prices == oracle.closing_prices, seed
        assert engine.obligation.value == oracle.obligation, seed
        assert (
            tuple((a.bidder_id, a.quantity, a.price) for a in engine.dutch_allocations)
            == oracle.dutch_allocations
        ), seed
        assert tuple(result.phase_admissions[result.primary_id]) == oracle.phase_admissions, seed
        assert result.extension_counts[result.primary_id] == oracle.extension_count, seed
    elapsed = time.monotonic() - started
    assert elapsed < 120, f"equivalence sweep took {elapsed:.1f}s"
    print(f"{PASS}: engine/oracle: 500 random scenarios, identical outcomes and phase admissions ({elapsed:.1f}s)")


# --- slot injectivity -------------------------------------------------------------------


def test_slot_injectivity_1000_multi_slot_scenarios():
    winners_assigned = 0
    for seed in range(1000):
        scenario = generate_scenario(
            seed,
            kinds=(FormatKind.REVERSE, FormatKind.ENGLISH),
            slots=2 + seed % 2,
            one_slot_per_supplier=True,
        )
        result = run_scenario(scenario)
        outcome = result.outcome
        assert winner_map_injective(outcome), (seed, outcome.winners)
        winners_assigned += sum(1 for w in outcome.winners.values() if w is not None)
    assert winners_assigned > 500  # the sweep actually exercised awards
    print(f"{PASS}: slot injectivity: 1000 one-slot-per-supplier scenarios, every winner map injective")


# --- dutch conservation -----------------------------------------------------------------


def test_dutch_conservation_every_event():
    scenarios = [generate_scenario(seed, kinds=(FormatKind.DUTCH,)) for seed in range(200)]
    exhausted = 0
    for scenario in scenarios:
        supply = scenario.config.format.dutch_terms.supply
        result = run_scenario(scenario)
        allocated = 0
        remaining = supply
        log = result.event_log
        for i, ev in enumerate(log):
            if ev.kind is EventKind.DUTCH_ACCEPTED:
                allocated += ev.payload["quantity"]
                remaining = ev.payload["remaining"]
                assert allocated + remaining == supply, scenario.seed
                if remaining == 0:
                    # sold out: the close happens in the same instant
                    assert log[i + 1].kind is EventKind.CLOSED, scenario.seed
                    assert log[i + 1].at == ev.at, scenario.seed
                    exhausted += 1
        final = result.final_states[result.primary_id]
        assert sum(a.quantity for a in final.dutch_allocations) + final.dutch_remaining == supply
        # every allocation was priced at the schedule value of its instant
        terms = scenario.config.format.dutch_terms
        open_at = next(e.at for e in log if e.kind is EventKind.OPENED)
        for alloc in final.dutch_allocations:
            steps = (alloc.at - open_at) // terms.step_ms
            expected = max(terms.reserve.amount, terms.start_price.amount - terms.decrement.amount * steps)
            assert alloc.price == expected, scenario.seed
    assert exhausted >= 20
    print(
        f"{PASS}: dutch conservation: 200 scenarios, allocations + remaining == supply at every event; "
        f"{exhausted} sold out and closed at that instant"
    )


# --- redaction ---------------------------------------------------------------------------


def test_redaction_soundness_fuzz_10000_guest_views():
    serializations = 0
    seed = 0
    guest = Role(RoleKind.GUEST, "onlooker-0")
    while serializations < 10_000:
        # compact scenarios keep every time value far below every amount,
        # so a byte-level token scan cannot collide with timestamps
        scenario = generate_scenario(seed, compact=True)
        seed += 1
        result = run_scenario(scenario)
        config = scenario.config
        secrets_strings = {b for b in config.invited_bidders}
        secrets_strings |= {s.slot_id for s in config.slots}
        secrets_strings |= {s.description for s in config.slots}
        secrets_strings |= {s.delivery_point for s in config.slots}
        secrets_strings.add(config.currency)
        log = result.event_log
        max_time = max(max(e.at for e in log), result.final_states[result.primary_id].now_close)
        prefixes = range(1, len(log) + 1, max(1, len(log) // 12))
        for cut in prefixes:
            state = Auction.replay(log[:cut])
            amounts = {b.amount for recs in state.bids.values() for b in recs}
            if config.historic_value:
                amounts.add(config.historic_value.amount)
            if config.target_value:
                amounts.add(config.target_value.amount)
            assert max_time < min(amounts, default=10**9), "generator drifted: time/amount ranges overlap"
            view = project_view(state, guest, log[cut - 1].at + 1, log[:cut])
            raw = json.dumps(view, separators=(",", ":"))
            serializations += 1
            for secret in secrets_strings:
                assert secret not in raw, (scenario.seed, secret)
            tokens = {t for t in re.findall(r"-?\d+(?:\.\d+)?", raw)}
            leaked = {str(a) for a in amounts} & tokens
            assert not leaked, (scenario.seed, leaked)
    print(f"{PASS}: redaction: {serializations} fuzzed guest-view serializations, zero leaked amounts/currencies/identities/goods")


# --- replay determinism and crash recovery ---------------------------------------------------


def test_replay_determinism_and_crash_recovery():
    # pick the first seeded sniper duel whose log is long enough for 20+
    # distinct crash points
    for seed in range(100):
        scenario = generate_scenario(seed, kinds=(FormatKind.REVERSE,), with_sniper=True)
        result = run_scenario(scenario)
        log = result.event_log
        if len(log) >= 12:
            break
    assert len(log) >= 12, "no scenario large enough to place 20 crash points"

    import tempfile
    from pathlib import Path

    crash_points = 0
    losses = 0
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = Path(tmp)
        registry = AuctionRegistry(data_dir, clock=lambda: 0)
        lines = [ev.to_line() + "\n" for ev in log]
        path = registry.store.root / f"{scenario.config.auction_id}.jsonl"
        # batch boundaries are ack points; also exercise torn tails at each
        for upto in range(1, len(lines)):
            acked = "".join(lines[:upto])
            for tail in ("", lines[upto][: len(lines[upto]) // 2].rstrip("\n")):
                path.write_text(acked + tail)
                reborn = AuctionRegistry(data_dir, clock=lambda: 0)
                recovered, quarantined = reborn.recover()
                crash_points += 1
                if quarantined or reborn.get(scenario.config.auction_id).auction != Auction.replay(log[:upto]):
                    losses += 1
    assert crash_points >= 20
    assert losses == 0
    # straight determinism: the same scenario replayed executes byte-identically
    from gavel import dump_events

    again = run_scenario(scenario)
    assert dump_events(again.event_log) == dump_events(log)
    print(
        f"{PASS}: replay determinism and crash recovery: {crash_points} injected crash points "
        f"(incl. torn tails), zero losses; reruns byte-identical"
    )


# --- dependency algebra -----------------------------------------------------------------------


def test_dependency_algebra_10000_pairs():
    from fractions import Fraction

    rng = random.Random(404)
    for _ in range(10_000):
        link = DependencyLink(
            link_id="l",
            auction_a="a",
            auction_b="b",
            sensitivity=Fraction(rng.randrange(0, 400), 100),
            share_floor=Fraction(rng.randrange(0, 51), 100),
            share_cap=Fraction(rng.randrange(50, 101), 100),
        )
        pa = rng.randrange(1, 10**6)
        pb = rng.randrange(1, 10**6)
        share_a, share_b = allocate_shares(eur(pa), eur(pb), link)
        assert share_a + share_b == 1
        assert link.share_floor <= share_a <= link.share_cap
        assert allocate_shares(eur(pb), eur(pa), link) == (share_b, share_a)
        lower_a, _ = allocate_shares(eur(rng.randrange(1, pa + 1)), eur(pb), link)
        assert lower_a >= share_a
        equal = allocate_shares(eur(pa), eur(pa), link)
        assert equal == (Fraction(1, 2), Fraction(1, 2))
    print(f"{PASS}: dependency algebra: 10000 random price pairs satisfy symmetry, antisymmetry, monotonicity, clamping")


# --- streaming freshness ------------------------------------------------------------------------


TIME_KEYS = ("server_now", "time_remaining_ms", "opens_in_ms")


def _strip_time(view: dict) -> dict:
    return {k: v for k, v in view.items() if k not in TIME_KEYS}


def test_streaming_freshness_10_clients_100_bids(live_server):
    srv = live_server
    config = wall_config(
        invited_bidders=tuple(f"bidder-{i}" for i in range(6)),
        target_value=None,
        scheduled_close=(time.time_ns() // 1_000_000) + 120 * MIN,
    )
    resp = srv.http.post(
        "/api/auctions", json={"config": config_to_wire(config)}, headers=srv.admin_headers()
    )
    assert resp.status_code == 201, resp.text
    tokens = resp.json()["tokens"]
    guest_tokens = [
        srv.http.post(
            "/api/auctions/a1/tokens",
            json={"participant_id": f"guest-{i}", "role": "guest"},
            headers=srv.admin_headers(),
        ).json()["token"]
        for i in range(2)
    ]
    client_tokens = (
        [tokens["bidders"][f"bidder-{i}"] for i in range(6)]
        + [tokens["auctioneer"], tokens["originator"]]
        + guest_tokens
    )
    readers = [srv.reader("a1", t) for t in client_tokens]
    for reader in readers:
        reader.next()  # snapshot

    srv.http.post("/api/auctions/a1/open", headers=srv.headers(tokens["auctioneer"]))

    send_times: dict[int, float] = {}
    price = 100_000  # first bid must not exceed the historic value
    for i in range(100):
        bidder = f"bidder-{i % 6}"
        t0 = time.time()
        ack = srv.http.post(
            "/api/auctions/a1/bids",
            json={"slot_id": "s1", "amount": price},
            headers=srv.headers(tokens["bidders"][bidder]),
        ).json()
        assert ack["accepted"], ack
        send_times[ack["seq"]] = t0
        price -= 500

    # drain every reader until all have seen the final state
    final_seq_views: list[dict] = []
    latencies: list[float] = []
    for reader in readers:
        last = None
        seen_seqs: dict[int, float] = {}
        while True:
            try:
                at, view = reader.next_timed(timeout=5)
            except Exception:
                break
            last = view
            seq = view["as_of_seq"]
            if seq in send_times and seq not in seen_seqs:
                seen_seqs[seq] = at - send_times[seq]
            if seq >= 102:  # created + opened + 100 bids
                break
        assert last is not None and last["as_of_seq"] >= 102
        final_seq_views.append(last)
        latencies.extend(seen_seqs.values())

    # every client's final view equals the fresh projection of final state
    for view in final_seq_views:
        token = client_tokens[final_seq_views.index(view)]
        expected = srv.http.get("/api/auctions/a1/view", headers=srv.headers(token)).json()
        assert _strip_time(view) == _strip_time(expected)

    median_latency = statistics.median(latencies)
    assert median_latency < 0.250, f"median event-to-view latency {median_latency * 1000:.0f} ms"
    for reader in readers:
        reader.stop()
    print(
        f"{PASS}: streaming freshness: 10 clients x 100 bids, final views equal the projection; "
        f"median latency {median_latency * 1000:.0f} ms"
    )
