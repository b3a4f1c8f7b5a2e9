"""Virtual-clock scenario execution against the auction engine.

The loop owns the clock.  At every timestamp, engine timers fire first,
then script actions, then agent wakes in agent order; see the package
docstring for the agent contract.  Agents decide from their own bidder
views plus the published auction terms, never from raw state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..config import ExtensionPolicy, FormatKind
from ..dependency import notify_linked
from ..engine import Auction, Outcome
from ..errors import ScenarioInvalid
from ..events import Event, EventKind
from ..money import Money
from ..visibility import Role, RoleKind, project_view
from .scenario import Scenario, Strategy, StrategyKind

MAX_ITERATIONS = 200_000

# Event kinds that make agents reconsider.
OBSERVABLE = frozenset(
    {
        EventKind.OPENED,
        EventKind.BID_ACCEPTED,
        EventKind.EXTENDED,
        EventKind.ROUND_CLOSED,
        EventKind.PHASE_ADVANCED,
        EventKind.DUTCH_TICK,
        EventKind.DUTCH_ACCEPTED,
    }
)

CONTINUOUS = (FormatKind.ENGLISH, FormatKind.REVERSE)


@dataclass
class _AgentState:
    index: int
    bidder_id: str
    auction_id: str
    strategy: Strategy
    wake: int | None = None
    bought: bool = False
    round_bid: int = 0
    trace: list[dict[str, Any]] = field(default_factory=list)


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    events: dict[str, list[Event]]
    outcomes: dict[str, Outcome | None]
    traces: dict[str, list[dict[str, Any]]]
    phase_admissions: dict[str, list[frozenset[str]]]
    extension_counts: dict[str, int]
    final_states: dict[str, Auction]

    @property
    def primary_id(self) -> str:
        return self.scenario.config.auction_id

    @property
    def event_log(self) -> list[Event]:
        return self.events[self.primary_id]

    @property
    def outcome(self) -> Outcome | None:
        return self.outcomes[self.primary_id]


def run_scenario(scenario: Scenario) -> RunResult:
    scenario.validate()
    auctions: dict[str, Auction] = {}
    logs: dict[str, list[Event]] = {}
    for cfg in (scenario.config, scenario.second_config):
        if cfg is None:
            continue
        auction, created = Auction.create(cfg, at=0)
        auctions[cfg.auction_id] = auction
        logs[cfg.auction_id] = list(created)

    agents = [
        _AgentState(
            index=i,
            bidder_id=spec.bidder_id,
            auction_id=spec.auction_id or scenario.config.auction_id,
            strategy=spec.strategy,
        )
        for i, spec in enumerate(scenario.agents)
    ]
    script = sorted(enumerate(scenario.script), key=lambda kv: (kv[1].at, kv[0]))
    script_pos = 0

    def observe(auction_id: str, batch: list[Event], now: int) -> None:
        """Re-arm agent wakes after an observable batch, then refresh shares."""
        if not any(ev.kind in OBSERVABLE for ev in batch):
            return
        auction = auctions[auction_id]
        for agent in agents:
            if agent.auction_id == auction_id:
                _rearm(agent, auction, now)
        if scenario.link is not None and any(ev.kind is EventKind.BID_ACCEPTED for ev in batch):
            a = auctions[scenario.link.auction_a]
            b = auctions[scenario.link.auction_b]
            before_a = a.event_seq
            linked = notify_linked(a, b, scenario.link, now)
            emitted_by_a = a.event_seq - before_a
            for i, ev in enumerate(linked):
                owner = scenario.link.auction_a if i < emitted_by_a else scenario.link.auction_b
                logs[owner].append(ev)

    for _ in range(MAX_ITERATIONS):
        if not any(a.status.value in ("scheduled", "open", "extended") for a in auctions.values()):
            break
        candidates: list[tuple[int, int, int, str]] = []
        for aid, auction in auctions.items():
            deadline = auction.next_deadline()
            if deadline is not None:
                candidates.append((deadline[0], 0, 0, aid))
        if script_pos < len(script):
            idx, action = script[script_pos]
            candidates.append((action.at, 1, idx, action.auction_id or scenario.config.auction_id))
        for agent in agents:
            if agent.wake is not None:
                candidates.append((agent.wake, 2, agent.index, agent.auction_id))
        if not candidates:
            raise ScenarioInvalid("scenario deadlocked: auctions pending but nothing scheduled")
        now, prio, idx, aid = min(candidates)
        auction = auctions[aid]

        if prio == 0:
            batch = auction.fire_due(now)
        elif prio == 1:
            _, action = script[script_pos]
            script_pos += 1
            if action.action == "open" and auction.status.value == "scheduled":
                batch = auction.open(now)
            elif action.action == "cancel" and auction.status.value in ("scheduled", "open", "extended"):
                batch = auction.cancel(now, action.reason)
            else:
                batch = []
        else:
            agent = agents[idx]
            agent.wake = None
            batch = _act(agent, auction, logs[aid], now)
        logs[aid].extend(batch)
        observe(aid, batch, now)
    else:
        raise ScenarioInvalid("scenario exceeded the iteration budget")

    phase_admissions = {
        aid: [
            frozenset(ev.payload["admitted"])
            for ev in logs[aid]
            if ev.kind is EventKind.PHASE_ADVANCED
        ]
        for aid in auctions
    }
    return RunResult(
        scenario=scenario,
        events=logs,
        outcomes={aid: auctions[aid].outcome for aid in auctions},
        traces={f"{a.auction_id}/{a.bidder_id}": a.trace for a in agents},
        phase_admissions=phase_admissions,
        extension_counts={aid: auctions[aid].extension_count for aid in auctions},
        final_states=auctions,
    )


def _rearm(agent: _AgentState, auction: Auction, now: int) -> None:
    if not auction.is_open or agent.bidder_id not in auction.admitted or agent.bought:
        return
    strat = agent.strategy
    if strat.kind is StrategyKind.SNIPER and auction.config.format.kind in CONTINUOUS:
        guard = auction.config.extension.guard_ms(auction.extension_count)
        agent.wake = max(now, auction.now_close - min(strat.reaction_delay_ms, guard))
    elif agent.wake is None:
        agent.wake = now + strat.reaction_delay_ms


def _act(agent: _AgentState, auction: Auction, log: list[Event], now: int) -> list[Event]:
    if not auction.is_open or now > auction.now_close:
        return []
    view = project_view(auction, Role(RoleKind.BIDDER, agent.bidder_id), now, log)
    if not view["admitted"]:
        return []
    strat = agent.strategy
    if strat.kind is StrategyKind.ONLOOKER:
        return []

    if auction.config.format.kind is FormatKind.DUTCH:
        if agent.bought:
            return []
        dutch = view.get("dutch")
        if dutch is None or dutch["price"] > strat.limit_price.amount:
            return []
        qty = min(strat.quantity, dutch["remaining"])
        if qty < 1:
            return []
        events = auction.dutch_accept(agent.bidder_id, qty, now)
        agent.bought = True
        agent.trace.append({"at": now, "action": "accept", "quantity": qty, "price": auction.dutch_price})
        return events

    if auction.config.one_slot_per_supplier and any(
        s["leading"] and s["leading"]["label"] == "you" for s in view["slots"]
    ):
        return []
    if auction.config.format.kind is FormatKind.MULTI_ROUND and view["current_round"] == agent.round_bid:
        return []

    for slot_view in view["slots"]:
        amount = _candidate(
            strat,
            slot_view,
            view,
            now,
            auction.descending,
            auction.config.format.kind,
            auction.config.extension,
        )
        if amount is None:
            continue
        result = auction.submit_bid(agent.bidder_id, slot_view["slot_id"], Money(amount, view["currency"]), now)
        agent.trace.append(
            {
                "at": now,
                "action": "bid",
                "slot_id": slot_view["slot_id"],
                "amount": amount,
                "accepted": result.accepted,
                "reason": result.reason,
            }
        )
        if result.accepted and auction.config.format.kind is FormatKind.MULTI_ROUND:
            agent.round_bid = view["current_round"]
        return list(result.events)
    return []


def _candidate(
    strat: Strategy,
    slot_view: dict[str, Any],
    view: dict[str, Any],
    now: int,
    descending: bool,
    format_kind: FormatKind,
    policy: ExtensionPolicy,
) -> int | None:
    leading = slot_view["leading"]
    if leading is not None and leading["label"] == "you":
        return None
    limit = strat.limit_price.amount

    if strat.kind is StrategyKind.SNIPER and format_kind in CONTINUOUS:
        if view["now_close"] - now > policy.guard_ms(view["extension_count"]):
            return None  # outside the guard window: hold fire

    bound = slot_view["min_acceptable"]
    amount: int | None
    if bound is None:
        if strat.opening_bid is None:
            return None
        amount = strat.opening_bid.amount
    elif strat.kind is StrategyKind.INCREMENTAL and leading is not None:
        jump = leading["amount"] + (-1 if descending else 1) * slot_view["step"] * strat.step_multiplier
        if descending and jump < limit:
            amount = limit if limit <= bound else None
        elif not descending and jump > limit:
            amount = limit if limit >= bound else None
        else:
            amount = jump
        if amount is None:
            return None
    else:
        amount = bound

    if format_kind is FormatKind.MULTI_PHASE and "phase_target" in view:
        gate = view["phase_target"]
        if descending and amount > gate >= limit:
            amount = gate
        elif not descending and amount < gate <= limit:
            amount = gate

    if amount < 1:
        return None
    if descending and amount < limit:
        return None
    if not descending and amount > limit:
        return None
    return amount
