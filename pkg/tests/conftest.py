"""Shared builders for auction configs and the live-server fixture."""

from __future__ import annotations

import json
import queue
import socket
import threading
import time

import pytest

from gavel import (
    AuctionConfig,
    AuctionFormat,
    DutchTerms,
    ExtensionPolicy,
    Money,
    PhaseGate,
    Slot,
)

EUR = "EUR"
MIN = 60_000


def eur(amount: int) -> Money:
    return Money(amount, EUR)


def make_slot(slot_id: str = "s1", step: int = 500, description: str = "copper wire") -> Slot:
    return Slot(
        slot_id=slot_id,
        description=description,
        quantity=100,
        unit="t",
        delivery_point="Hamburg",
        step=eur(step),
    )


def make_config(**overrides) -> AuctionConfig:
    base = dict(
        auction_id="a1",
        format=AuctionFormat.reverse(),
        currency=EUR,
        slots=(make_slot(),),
        scheduled_open=0,
        scheduled_close=30 * MIN,
        invited_bidders=("acme", "bolt", "corax"),
    )
    base.update(overrides)
    return AuctionConfig(**base)


def reverse_config(**overrides) -> AuctionConfig:
    base = dict(historic_value=eur(100_000), target_value=eur(90_000))
    base.update(overrides)
    return make_config(**base)


def english_config(**overrides) -> AuctionConfig:
    return make_config(format=AuctionFormat.english(), **overrides)


def dutch_config(**overrides) -> AuctionConfig:
    terms = overrides.pop(
        "terms",
        DutchTerms(supply=10, start_price=eur(1000), decrement=eur(10), step_ms=1000, reserve=eur(500)),
    )
    return make_config(format=AuctionFormat.dutch(terms), **overrides)


def multi_round_config(rounds: int = 3, round_duration_ms: int = 10 * MIN, **overrides) -> AuctionConfig:
    base = dict(
        format=AuctionFormat.multi_round(rounds, round_duration_ms),
        scheduled_close=rounds * round_duration_ms,
        historic_value=eur(100_000),
    )
    base.update(overrides)
    return make_config(**base)


def multi_phase_config(targets: tuple[int, ...] = (95_000, 92_000), duration_ms: int = 10 * MIN, **overrides) -> AuctionConfig:
    phases = tuple(PhaseGate(target=eur(t), duration_ms=duration_ms) for t in targets)
    base = dict(
        format=AuctionFormat.multi_phase(phases),
        scheduled_close=len(targets) * duration_ms,
        historic_value=eur(100_000),
    )
    base.update(overrides)
    return make_config(**base)


@pytest.fixture
def policy_defaults() -> ExtensionPolicy:
    return ExtensionPolicy()


def wall_config(**overrides) -> AuctionConfig:
    """Reverse config whose schedule starts at the current wall clock."""
    now = time.time_ns() // 1_000_000
    base = dict(
        scheduled_open=now,
        scheduled_close=now + 30 * MIN,
        historic_value=eur(100_000),
        target_value=eur(90_000),
    )
    base.update(overrides)
    return make_config(**base)


class SseReader:
    """Background SSE consumer collecting decoded view payloads."""

    def __init__(self, base_url: str, path: str, token: str):
        import httpx

        self.views: "queue.Queue[tuple[float, dict]]" = queue.Queue()
        self._stop = threading.Event()
        self._client = httpx.Client(base_url=base_url, timeout=30)
        self._thread = threading.Thread(target=self._run, args=(path, token), daemon=True)
        self._thread.start()

    def _run(self, path: str, token: str) -> None:
        try:
            with self._client.stream("GET", path, headers={"Authorization": f"Bearer {token}"}) as resp:
                for line in resp.iter_lines():
                    if self._stop.is_set():
                        break
                    if line.startswith("data: "):
                        self.views.put((time.time(), json.loads(line[6:])))
        except Exception:
            if not self._stop.is_set():
                raise

    def next(self, timeout: float = 10.0) -> dict:
        return self.views.get(timeout=timeout)[1]

    def next_timed(self, timeout: float = 10.0) -> tuple[float, dict]:
        return self.views.get(timeout=timeout)

    def stop(self) -> None:
        self._stop.set()
        self._client.close()


class LiveServer:
    def __init__(self, base_url: str, admin_token: str, data_dir):
        import httpx

        self.base_url = base_url
        self.admin = admin_token
        self.data_dir = data_dir
        self.http = httpx.Client(base_url=base_url, timeout=30)

    def headers(self, token: str) -> dict:
        return {"Authorization": f"Bearer {token}"}

    def admin_headers(self) -> dict:
        return self.headers(self.admin)

    def reader(self, auction_id: str, token: str) -> SseReader:
        return SseReader(self.base_url, f"/api/auctions/{auction_id}/stream", token)

    def close(self) -> None:
        self.http.close()


@pytest.fixture
def live_server(tmp_path):
    import uvicorn

    from gavel.server import ServerSettings
    from gavel.server.app import create_app

    settings = ServerSettings.load(env={}, data_dir=tmp_path)
    app = create_app(settings)
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    sock.listen(128)
    port = sock.getsockname()[1]
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    thread = threading.Thread(target=server.run, kwargs={"sockets": [sock]}, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server failed to start")
        time.sleep(0.02)
    handle = LiveServer(f"http://127.0.0.1:{port}", (tmp_path / "admin_token").read_text().strip(), tmp_path)
    try:
        yield handle
    finally:
        handle.close()
        server.should_exit = True
        thread.join(timeout=5)
