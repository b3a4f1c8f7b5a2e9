"""Independent outcome oracle for small scenarios.

Recomputes winners, closing prices, extensions, phase admissions, Dutch
allocations, and the obligation by direct step-by-step interpretation of
the published auction rules.  It deliberately shares no code with the
engine or the view layer: guard decay, bid admission, gate filters, and
the Dutch schedule are all re-derived here from first principles, so a
bug would have to be made twice to go unnoticed.

Bounds: at most 5 agents and at most 200 state-changing virtual steps
(accepted bids, timer firings, script actions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import TooLarge
from .scenario import Scenario, StrategyKind

MAX_AGENTS = 5
MAX_STEPS = 200


@dataclass(frozen=True)
class OracleOutcome:
    winners: dict[str, str | None]
    closing_prices: dict[str, int | None]
    obligation: str
    phase_admissions: tuple[frozenset[str], ...]
    extension_count: int
    dutch_allocations: tuple[tuple[str, int, int], ...]
    cancelled: bool = False


@dataclass
class _Agent:
    order: int
    bidder: str
    kind: StrategyKind
    limit: int
    delay: int
    multiplier: int
    opening: int | None
    quantity: int
    wake: int | None = None
    bought: bool = False
    round_bid: int = 0


@dataclass
class _Bid:
    slot: str
    bidder: str
    amount: int
    at: int
    order: int
    round: int | None
    phase: int | None


class _Interp:
    """Straight-line interpreter over plain values."""

    def __init__(self, scenario: Scenario):
        cfg = scenario.config
        f = cfg.format
        self.kind = f.kind.value
        self.descending = f.direction.value == "descending"
        self.slots = [(s.slot_id, s.step.amount) for s in cfg.slots]
        self.historic = cfg.historic_value.amount if cfg.historic_value else None
        self.target = cfg.target_value.amount if cfg.target_value else None
        self.one_slot = cfg.one_slot_per_supplier
        self.scheduled_open = cfg.scheduled_open
        self.scheduled_close = cfg.scheduled_close
        self.g0 = cfg.extension.initial_guard_ms
        self.decay = cfg.extension.decay
        self.floor = cfg.extension.floor_ms
        self.rounds = f.rounds or 0
        self.round_ms = f.round_duration_ms or 0
        self.phases = [(g.target.amount, g.duration_ms) for g in f.phases]
        if f.dutch_terms is not None:
            d = f.dutch_terms
            self.dutch = (d.supply, d.start_price.amount, d.decrement.amount, d.step_ms, d.reserve.amount)
        else:
            self.dutch = None

        self.agents = [
            _Agent(
                order=i,
                bidder=spec.bidder_id,
                kind=spec.strategy.kind,
                limit=spec.strategy.limit_price.amount,
                delay=spec.strategy.reaction_delay_ms,
                multiplier=spec.strategy.step_multiplier,
                opening=spec.strategy.opening_bid.amount if spec.strategy.opening_bid else None,
                quantity=spec.strategy.quantity,
            )
            for i, spec in enumerate(scenario.agents)
            if (spec.auction_id or cfg.auction_id) == cfg.auction_id
        ]
        self.script = sorted(
            (
                (a.at, i, a.action)
                for i, a in enumerate(scenario.script)
                if (a.auction_id or cfg.auction_id) == cfg.auction_id
            ),
            key=lambda x: (x[0], x[1]),
        )

        self.opened = False
        self.closed = False
        self.cancelled = False
        self.open_t = 0
        self.close_t = cfg.scheduled_close
        self.ext_count = 0
        self.admitted = set(cfg.invited_bidders)
        self.bids: list[_Bid] = []
        self.round_no = 0
        self.phase_no = 0
        self.admission_history: list[frozenset[str]] = []
        self.dutch_step = 0
        self.dutch_price = self.dutch[1] if self.dutch else None
        self.dutch_remaining = self.dutch[0] if self.dutch else None
        self.allocations: list[tuple[str, int, int]] = []
        self.bid_order = 0
        self.steps = 0

    # --- rule primitives, derived independently of the engine ---------------

    def guard(self, n: int) -> int:
        g = Fraction(self.g0) * self.decay**n
        return max(self.floor, int(g))

    def best_visible(self, slot: str):
        """Best unsealed bid: in a running multi-round auction only earlier
        rounds count; ties go to the earlier (time, arrival) bid."""
        pool = [b for b in self.bids if b.slot == slot]
        if self.kind == "multi_round" and not self.closed:
            pool = [b for b in pool if b.round is not None and b.round < self.round_no]
        if not pool:
            return None
        sign = 1 if self.descending else -1
        return min(pool, key=lambda b: (sign * b.amount, b.at, b.order))

    def boundary(self, slot: str, step: int) -> int | None:
        best = self.best_visible(slot)
        if best is None:
            return self.historic
        return best.amount - step if self.descending else best.amount + step

    def leads(self, agent: _Agent, slot: str) -> bool:
        best = self.best_visible(slot)
        return best is not None and best.bidder == agent.bidder

    # --- timers ---------------------------------------------------------------

    def next_deadline(self) -> tuple[int, str] | None:
        if not self.opened or self.closed or self.cancelled:
            return None
        if self.kind == "multi_round":
            return (self.open_t + self.round_no * self.round_ms, "round")
        if self.kind == "multi_phase":
            total = sum(d for _, d in self.phases[: self.phase_no])
            return (self.open_t + total, "phase")
        if self.kind == "dutch":
            supply, start, dec, step_ms, reserve = self.dutch
            if self.dutch_price > reserve:
                tick_at = self.open_t + (self.dutch_step + 1) * step_ms
                if tick_at < self.close_t:
                    return (tick_at, "tick")
            return (self.close_t, "close")
        return (self.close_t, "close")

    def fire_deadline(self, now: int, what: str) -> bool:
        """Apply one due timer; returns True when agents should reconsider."""
        if what == "round":
            round_bids = {b.bidder for b in self.bids if b.round == self.round_no}
            self.admitted -= self.admitted - round_bids
            self.round_no += 1
            if self.round_no > self.rounds or not self.admitted:
                self.close(now)
            return True
        if what == "phase":
            gate, _ = self.phases[self.phase_no - 1]
            qualifiers = set()
            for bidder in self.admitted:
                amounts = [b.amount for b in self.bids if b.bidder == bidder and b.phase == self.phase_no]
                if not amounts:
                    continue
                best = min(amounts) if self.descending else max(amounts)
                if (best <= gate) if self.descending else (best >= gate):
                    qualifiers.add(bidder)
            self.admission_history.append(frozenset(qualifiers))
            self.admitted = qualifiers
            self.phase_no += 1
            if self.phase_no > len(self.phases) or not self.admitted:
                self.close(now)
            return True
        if what == "tick":
            supply, start, dec, step_ms, reserve = self.dutch
            self.dutch_step += 1
            price = max(reserve, start - dec * self.dutch_step)
            changed = price != self.dutch_price
            self.dutch_price = price
            return changed
        self.close(now)
        return False

    def close(self, now: int) -> None:
        self.closed = True

    # --- agent behaviour (same contract as the runner, separate derivation) ----

    def rearm(self, agent: _Agent, now: int) -> None:
        if not self.opened or self.closed or self.cancelled:
            return
        if agent.bidder not in self.admitted or agent.bought:
            return
        if agent.kind is StrategyKind.SNIPER and self.kind in ("english", "reverse"):
            g = self.guard(self.ext_count)
            agent.wake = max(now, self.close_t - min(agent.delay, g))
        elif agent.wake is None:
            agent.wake = now + agent.delay

    def rearm_all(self, now: int) -> None:
        for agent in self.agents:
            self.rearm(agent, now)

    def act(self, agent: _Agent, now: int) -> bool:
        if not self.opened or self.closed or self.cancelled or now > self.close_t:
            return False
        if agent.bidder not in self.admitted or agent.kind is StrategyKind.ONLOOKER:
            return False

        if self.kind == "dutch":
            if agent.bought or self.dutch_price > agent.limit:
                return False
            qty = min(agent.quantity, self.dutch_remaining)
            if qty < 1:
                return False
            self.allocations.append((agent.bidder, qty, self.dutch_price))
            self.dutch_remaining -= qty
            agent.bought = True
            if self.dutch_remaining == 0:
                self.close(now)
            return True

        if self.one_slot and any(self.leads(agent, slot) for slot, _ in self.slots):
            return False
        if self.kind == "multi_round" and self.round_no == agent.round_bid:
            return False

        for slot, step in self.slots:
            amount = self.candidate(agent, slot, step, now)
            if amount is None:
                continue
            self.bid_order += 1
            self.bids.append(
                _Bid(
                    slot=slot,
                    bidder=agent.bidder,
                    amount=amount,
                    at=now,
                    order=self.bid_order,
                    round=self.round_no if self.kind == "multi_round" else None,
                    phase=self.phase_no if self.kind == "multi_phase" else None,
                )
            )
            if self.kind == "multi_round":
                agent.round_bid = self.round_no
            if self.kind in ("english", "reverse"):
                g = self.guard(self.ext_count)
                if self.close_t - now < g:
                    self.close_t = now + g
                    self.ext_count += 1
            return True
        return False

    def candidate(self, agent: _Agent, slot: str, step: int, now: int) -> int | None:
        if self.leads(agent, slot):
            return None
        if agent.kind is StrategyKind.SNIPER and self.kind in ("english", "reverse"):
            if self.close_t - now > self.guard(self.ext_count):
                return None
        bound = self.boundary(slot, step)
        best = self.best_visible(slot)
        if bound is None:
            if agent.opening is None:
                return None
            amount: int | None = agent.opening
        elif agent.kind is StrategyKind.INCREMENTAL and best is not None:
            jump = best.amount + (-step if self.descending else step) * agent.multiplier
            if self.descending and jump < agent.limit:
                amount = agent.limit if agent.limit <= bound else None
            elif not self.descending and jump > agent.limit:
                amount = agent.limit if agent.limit >= bound else None
            else:
                amount = jump
            if amount is None:
                return None
        else:
            amount = bound

        if self.kind == "multi_phase" and 1 <= self.phase_no <= len(self.phases) and agent.bidder in self.admitted:
            gate = self.phases[self.phase_no - 1][0]
            if self.descending and amount > gate >= agent.limit:
                amount = gate
            elif not self.descending and amount < gate <= agent.limit:
                amount = gate

        if amount < 1:
            return None
        if self.descending and amount < agent.limit:
            return None
        if not self.descending and amount > agent.limit:
            return None
        return amount

    # --- main loop ----------------------------------------------------------------

    def run(self) -> OracleOutcome:
        script_pos = 0
        for _ in range(100_000):
            if self.closed or self.cancelled:
                break
            candidates: list[tuple[int, int, int, str]] = []
            deadline = self.next_deadline()
            if deadline is not None:
                candidates.append((deadline[0], 0, 0, deadline[1]))
            if script_pos < len(self.script):
                at, idx, action = self.script[script_pos]
                candidates.append((at, 1, idx, action))
            for agent in self.agents:
                if agent.wake is not None:
                    candidates.append((agent.wake, 2, agent.order, "act"))
            if not candidates:
                break
            now, prio, idx, what = min(candidates)

            if prio == 0:
                self._count_step()
                if self.fire_deadline(now, what):
                    self.rearm_all(now)
            elif prio == 1:
                script_pos += 1
                self._count_step()
                if what == "open" and not self.opened:
                    self.opened = True
                    self.open_t = now
                    if self.kind == "multi_round":
                        self.close_t = now + self.rounds * self.round_ms
                        self.round_no = 1
                    elif self.kind == "multi_phase":
                        self.close_t = now + sum(d for _, d in self.phases)
                        self.phase_no = 1
                    else:
                        self.close_t = max(self.scheduled_close, now)
                    self.rearm_all(now)
                elif what == "cancel" and not self.closed:
                    self.cancelled = True
            else:
                agent = self.agents[idx]
                agent.wake = None
                if self.act(agent, now):
                    self._count_step()
                    self.rearm_all(now)
        return self.outcome()

    def _count_step(self) -> None:
        self.steps += 1
        if self.steps > MAX_STEPS:
            raise TooLarge(f"more than {MAX_STEPS} state-changing steps")

    def outcome(self) -> OracleOutcome:
        if self.cancelled:
            return OracleOutcome(
                winners={},
                closing_prices={},
                obligation="not_applicable",
                phase_admissions=tuple(self.admission_history),
                extension_count=self.ext_count,
                dutch_allocations=tuple(self.allocations),
                cancelled=True,
            )
        winners: dict[str, str | None] = {}
        closing: dict[str, int | None] = {}
        for slot, _ in self.slots:
            best = self.best_visible(slot)
            winners[slot] = best.bidder if best else None
            closing[slot] = best.amount if best else None
        won = [p for p in closing.values() if p is not None]
        if self.kind == "dutch" or self.target is None or not won:
            obligation = "not_applicable"
        else:
            total = sum(won)
            met = total <= self.target if self.descending else total >= self.target
            obligation = "obliged" if met else "free"
        return OracleOutcome(
            winners=winners,
            closing_prices=closing,
            obligation=obligation,
            phase_admissions=tuple(self.admission_history),
            extension_count=self.ext_count,
            dutch_allocations=tuple(self.allocations),
        )


def oracle_outcome(scenario: Scenario) -> OracleOutcome:
    """Recompute the primary auction's outcome without touching the engine."""
    scenario.validate()
    n_agents = sum(
        1 for a in scenario.agents if (a.auction_id or scenario.config.auction_id) == scenario.config.auction_id
    )
    if n_agents > MAX_AGENTS:
        raise TooLarge(f"{n_agents} agents exceed the oracle bound of {MAX_AGENTS}")
    return _Interp(scenario).run()
