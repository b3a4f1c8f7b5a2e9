"""Deterministic scenario harness: scripted bidder agents on a virtual clock.

Virtual time is integer milliseconds.  A scenario fully determines its run;
replaying it reproduces the identical event log byte for byte.

Execution order at one timestamp is fixed: engine timers fire first
(round and phase boundaries, Dutch ticks, the close), then script actions,
then agent wakes in agent-list order.  Agents never touch raw state; every
decision reads the agent's own bidder view plus the agent's own memory of
its past actions.

Agent semantics (the contract both the runner and the independent outcome
oracle implement):

* Wakes.  When the auction opens at t, every agent is scheduled at
  t + reaction_delay.  After any batch of observable events at t (accepted
  bid, extension, round close, phase advance, Dutch tick), an agent with no
  pending wake is re-scheduled at t + reaction_delay; a sniper is instead
  always re-aimed at max(t, now_close - min(reaction_delay, current guard)).
  Agents holding Dutch allocations, non-admitted agents, and agents leading
  a slot they would otherwise bid on do not re-arm.

* Acting.  At its wake an agent inspects its current view.  It bids on the
  first slot (config order) with a viable candidate, at most one bid per
  wake.  With one_slot_per_supplier set, an agent leading any slot stays
  quiet.  In a multi-round auction an agent bids at most once per round.

* Candidates (descending direction; ascending mirrors).  The admissible
  boundary is the view's min_acceptable: best - step, or the historic
  opening bound, or None when unbounded.
    - limit and sniper: bid the boundary itself; with no boundary bid the
      strategy's opening_bid; viable only while the candidate is >= the
      limit price.  A sniper acts only inside the soft-close guard window.
    - incremental: bid best - step * step_multiplier, clamped up to the
      limit price when that overshoots and the limit is still admissible.
    - onlooker: never bids.
  In a multi-phase auction an admitted agent stretches its candidate to
  meet the visible phase target when its limit allows.

* Dutch.  An agent accepts min(strategy quantity, remaining) once, at the
  first wake where the current price has fallen to its limit.

Simultaneous wakes are ordered by agent-list position, which is what makes
ties deterministic.
"""

from .oracle import OracleOutcome, oracle_outcome
from .runner import RunResult, run_scenario
from .scenario import AgentSpec, Scenario, Strategy, StrategyKind, generate_scenario

__all__ = [
    "AgentSpec",
    "OracleOutcome",
    "RunResult",
    "Scenario",
    "Strategy",
    "StrategyKind",
    "generate_scenario",
    "oracle_outcome",
    "run_scenario",
]
