"""Scenario files: agents, strategies, scripts, and a seeded generator."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..config import (
    AuctionConfig,
    AuctionFormat,
    Direction,
    DutchTerms,
    ExtensionPolicy,
    FormatKind,
    PhaseGate,
    Slot,
    config_from_wire,
    config_to_wire,
)
from ..dependency import DependencyLink
from ..errors import ScenarioInvalid
from ..money import Money


class StrategyKind(str, Enum):
    LIMIT = "limit"
    SNIPER = "sniper"
    INCREMENTAL = "incremental"
    ONLOOKER = "onlooker"


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind
    limit_price: Money
    reaction_delay_ms: int = 1000
    step_multiplier: int = 1
    opening_bid: Money | None = None
    quantity: int = 1

    def to_wire(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "limit_price": self.limit_price.amount,
            "reaction_delay_ms": self.reaction_delay_ms,
            "step_multiplier": self.step_multiplier,
            "opening_bid": self.opening_bid.amount if self.opening_bid else None,
            "quantity": self.quantity,
        }


@dataclass(frozen=True)
class AgentSpec:
    bidder_id: str
    strategy: Strategy
    auction_id: str | None = None  # defaults to the scenario's primary auction

    def to_wire(self) -> dict[str, Any]:
        out = {"bidder_id": self.bidder_id, "strategy": self.strategy.to_wire()}
        if self.auction_id is not None:
            out["auction_id"] = self.auction_id
        return out


@dataclass(frozen=True)
class ScriptAction:
    at: int
    action: str  # open | cancel
    auction_id: str | None = None
    reason: str = ""

    def to_wire(self) -> dict[str, Any]:
        out: dict[str, Any] = {"at": self.at, "action": self.action}
        if self.auction_id is not None:
            out["auction_id"] = self.auction_id
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Scenario:
    seed: int
    config: AuctionConfig
    agents: tuple[AgentSpec, ...]
    script: tuple[ScriptAction, ...] = ()
    second_config: AuctionConfig | None = None
    link: DependencyLink | None = None

    def validate(self) -> None:
        self.config.validate()
        if self.second_config is not None:
            self.second_config.validate()
            if self.link is None:
                raise ScenarioInvalid("second_config without a link")
        if self.link is not None:
            if self.second_config is None:
                raise ScenarioInvalid("link without a second_config")
            self.link.validate()
            ids = {self.config.auction_id, self.second_config.auction_id}
            if {self.link.auction_a, self.link.auction_b} != ids:
                raise ScenarioInvalid("link does not reference the scenario auctions")
        configs = {self.config.auction_id: self.config}
        if self.second_config is not None:
            configs[self.second_config.auction_id] = self.second_config
        for agent in self.agents:
            cfg = configs.get(agent.auction_id or self.config.auction_id)
            if cfg is None:
                raise ScenarioInvalid(f"agent {agent.bidder_id}: unknown auction {agent.auction_id}")
            if agent.bidder_id not in cfg.invited_bidders:
                raise ScenarioInvalid(f"agent {agent.bidder_id} is not invited")
            s = agent.strategy
            if s.limit_price.currency != cfg.currency:
                raise ScenarioInvalid(f"agent {agent.bidder_id}: limit currency mismatch")
            if not s.limit_price.is_positive:
                raise ScenarioInvalid(f"agent {agent.bidder_id}: limit must be positive")
            if s.reaction_delay_ms < 0 or s.step_multiplier < 1 or s.quantity < 1:
                raise ScenarioInvalid(f"agent {agent.bidder_id}: bad strategy numbers")
        opened: set[str] = set()
        for action in self.script:
            if action.action not in ("open", "cancel"):
                raise ScenarioInvalid(f"unknown script action {action.action!r}")
            if action.action == "open":
                opened.add(action.auction_id or self.config.auction_id)
        for aid in self.auction_ids():
            if aid not in opened:
                raise ScenarioInvalid(f"script never opens auction {aid}")

    def auction_ids(self) -> list[str]:
        ids = [self.config.auction_id]
        if self.second_config is not None:
            ids.append(self.second_config.auction_id)
        return ids

    def to_wire(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "seed": self.seed,
            "config": config_to_wire(self.config),
            "agents": [a.to_wire() for a in self.agents],
            "script": [s.to_wire() for s in self.script],
        }
        if self.second_config is not None:
            out["second_config"] = config_to_wire(self.second_config)
        if self.link is not None:
            out["link"] = {
                "link_id": self.link.link_id,
                "auction_a": self.link.auction_a,
                "auction_b": self.link.auction_b,
                "sensitivity": str(self.link.sensitivity),
                "share_floor": str(self.link.share_floor),
                "share_cap": str(self.link.share_cap),
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_wire(), indent=2)


def scenario_from_wire(raw: dict[str, Any]) -> Scenario:
    try:
        config = config_from_wire(raw["config"])
        currency = config.currency
        second = config_from_wire(raw["second_config"]) if raw.get("second_config") else None

        def agent(entry: dict[str, Any]) -> AgentSpec:
            s = entry["strategy"]
            cur = currency
            if second is not None and entry.get("auction_id") == second.auction_id:
                cur = second.currency
            return AgentSpec(
                bidder_id=entry["bidder_id"],
                auction_id=entry.get("auction_id"),
                strategy=Strategy(
                    kind=StrategyKind(s["kind"]),
                    limit_price=Money(int(s["limit_price"]), cur),
                    reaction_delay_ms=int(s.get("reaction_delay_ms", 1000)),
                    step_multiplier=int(s.get("step_multiplier", 1)),
                    opening_bid=(Money(int(s["opening_bid"]), cur) if s.get("opening_bid") else None),
                    quantity=int(s.get("quantity", 1)),
                ),
            )

        link = None
        if raw.get("link"):
            lk = raw["link"]
            link = DependencyLink(
                link_id=lk["link_id"],
                auction_a=lk["auction_a"],
                auction_b=lk["auction_b"],
                sensitivity=Fraction(lk.get("sensitivity", "1")),
                share_floor=Fraction(lk.get("share_floor", "0")),
                share_cap=Fraction(lk.get("share_cap", "1")),
            )
        scenario = Scenario(
            seed=int(raw.get("seed", 0)),
            config=config,
            agents=tuple(agent(a) for a in raw.get("agents", [])),
            script=tuple(
                ScriptAction(
                    at=int(s["at"]),
                    action=s["action"],
                    auction_id=s.get("auction_id"),
                    reason=s.get("reason", ""),
                )
                for s in raw.get("script", [])
            ),
            second_config=second,
            link=link,
        )
    except ScenarioInvalid:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioInvalid(f"malformed scenario: {exc}") from exc
    scenario.validate()
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioInvalid(f"scenario JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scenario_from_wire(raw)


# --- seeded generator ---------------------------------------------------------

CURRENCY = "EUR"
GENERATOR_KINDS = (
    FormatKind.REVERSE,
    FormatKind.ENGLISH,
    FormatKind.MULTI_ROUND,
    FormatKind.MULTI_PHASE,
    FormatKind.DUTCH,
)


def generate_scenario(
    seed: int,
    kinds: tuple[FormatKind, ...] = GENERATOR_KINDS,
    max_agents: int = 5,
    slots: int | None = None,
    one_slot_per_supplier: bool | None = None,
    with_sniper: bool | None = None,
    compact: bool = False,
) -> Scenario:
    """Small random but always-valid scenario for property and acceptance tests.

    With ``compact`` set, every time quantity (schedule, delays, guards)
    stays small while every money amount stays large, so serialized views
    can be byte-scanned for amount leaks without numeric collisions.
    """
    rng = random.Random(seed)
    kind = rng.choice(list(kinds))
    step = rng.choice((100, 250, 500)) if compact else rng.choice((100, 250, 500, 1000))
    historic = rng.randrange(90 if compact else 50, 200) * 1000
    descending = kind is not FormatKind.ENGLISH
    minute = 1_000 if compact else 60_000

    n_slots = 1
    if kind in (FormatKind.REVERSE, FormatKind.ENGLISH) and slots is None:
        n_slots = rng.choice((1, 1, 2, 3))
    elif slots is not None and kind in (FormatKind.REVERSE, FormatKind.ENGLISH):
        n_slots = slots
    slot_tuple = tuple(
        Slot(
            slot_id=f"slot-{i + 1}",
            description=f"material lot {i + 1}",
            quantity=rng.randrange(10, 500),
            unit="t",
            delivery_point=f"plant-{i + 1}",
            step=Money(step, CURRENCY),
        )
        for i in range(n_slots)
    )

    duration = rng.randrange(4, 10 if compact else 30) * minute
    fmt = AuctionFormat.reverse() if kind is FormatKind.REVERSE else AuctionFormat.english()
    dutch_terms = None
    if kind is FormatKind.MULTI_ROUND:
        rounds = rng.randrange(2, 5)
        round_ms = rng.randrange(1, 5) * minute
        fmt = AuctionFormat.multi_round(rounds, round_ms)
        duration = rounds * round_ms
    elif kind is FormatKind.MULTI_PHASE:
        n_phases = rng.randrange(2, 4)
        gates = []
        gate = historic - rng.randrange(1, 10) * step
        for _ in range(n_phases):
            gates.append(PhaseGate(target=Money(max(step * 2, gate), CURRENCY), duration_ms=rng.randrange(2, 6) * minute))
            gate -= rng.randrange(2, 12) * step
        fmt = AuctionFormat.multi_phase(tuple(gates))
        duration = sum(g.duration_ms for g in gates)
    elif kind is FormatKind.DUTCH:
        start = historic
        decrement = rng.choice((step, step * 2))
        reserve = max(decrement, start - rng.randrange(8, 26) * decrement)
        dutch_terms = DutchTerms(
            supply=rng.randrange(3, 13),
            start_price=Money(start, CURRENCY),
            decrement=Money(decrement, CURRENCY),
            step_ms=rng.randrange(1, 5) * (100 if compact else 500),
            reserve=Money(reserve, CURRENCY),
        )
        fmt = AuctionFormat.dutch(dutch_terms)

    n_agents = rng.randrange(2, max_agents + 1)
    bidders = tuple(f"supplier-{chr(ord('a') + i)}" for i in range(n_agents))

    use_historic = descending and (kind is not FormatKind.DUTCH) and rng.random() < 0.85
    historic_money = Money(historic, CURRENCY) if use_historic else None
    target = None
    if use_historic and rng.random() < 0.6:
        target = Money(historic - rng.randrange(1, 30) * step, CURRENCY)

    if one_slot_per_supplier is None:
        one_slot_per_supplier = n_slots > 1 and rng.random() < 0.5

    config = AuctionConfig(
        auction_id=f"auc-{seed}",
        format=fmt,
        currency=CURRENCY,
        slots=slot_tuple,
        scheduled_open=0,
        scheduled_close=duration,
        extension=ExtensionPolicy(900, Fraction(1, 2), 100) if compact else ExtensionPolicy(),
        historic_value=historic_money,
        target_value=target,
        one_slot_per_supplier=one_slot_per_supplier,
        invited_bidders=bidders,
    )

    agents = []
    sniper_budget = 1 if (with_sniper or (with_sniper is None and rng.random() < 0.5)) else 0
    sniper_allowed = kind in (FormatKind.REVERSE, FormatKind.ENGLISH)
    for i, bidder in enumerate(bidders):
        roll = rng.random()
        if sniper_budget and sniper_allowed and roll < 0.4:
            kind_choice = StrategyKind.SNIPER
            sniper_budget -= 1
        elif roll < 0.1 and kind is FormatKind.MULTI_PHASE:
            kind_choice = StrategyKind.ONLOOKER
        elif roll < 0.55:
            kind_choice = StrategyKind.LIMIT
        else:
            kind_choice = StrategyKind.INCREMENTAL
        if kind is FormatKind.DUTCH:
            low = dutch_terms.reserve.amount
            high = dutch_terms.start_price.amount
            limit = rng.randrange(low, high + 1)
        elif descending:
            limit = max(step, historic - rng.randrange(2, 40) * step)
        else:
            limit = historic + rng.randrange(2, 40) * step
        opening = None
        if kind is not FormatKind.DUTCH and kind_choice is not StrategyKind.ONLOOKER:
            if descending and historic_money is None:
                opening = limit + rng.randrange(5, 40) * step
            elif not descending:
                opening = max(step, limit - rng.randrange(5, 40) * step)
        agents.append(
            AgentSpec(
                bidder_id=bidder,
                strategy=Strategy(
                    kind=kind_choice,
                    limit_price=Money(limit, CURRENCY),
                    reaction_delay_ms=rng.randrange(50, 900) if compact else rng.randrange(200, 5000),
                    step_multiplier=rng.randrange(1, 4),
                    opening_bid=Money(opening, CURRENCY) if opening else None,
                    quantity=rng.randrange(1, 5),
                ),
            )
        )

    scenario = Scenario(
        seed=seed,
        config=config,
        agents=tuple(agents),
        script=(ScriptAction(at=0, action="open"),),
    )
    scenario.validate()
    return scenario
