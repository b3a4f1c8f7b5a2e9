"""Operator command line: administer auctions, run and verify simulations.

Every verb is non-interactive, supports ``--json`` for machine-readable
output, and exits nonzero on failure: 1 for parse or validation errors,
2 for an engine/oracle mismatch, 3 for a corrupt event log.  Humans bid
through the web console; programs through the HTTP API; this tool covers
everything an operator does around those.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from . import __version__
from .config import config_from_wire
from .engine import Auction, Status
from .errors import AuctionError, CorruptLog, ScenarioInvalid
from .events import dump_events, load_events
from .server.auth import TokenStore
from .server.reports import generate_report
from .server.store import EventLogStore
from .simulation import oracle_outcome, run_scenario
from .simulation.scenario import load_scenario
from .visibility import Role, RoleKind

EXIT_PARSE = 1
EXIT_MISMATCH = 2
EXIT_CORRUPT = 3


def wall_ms() -> int:
    return time.time_ns() // 1_000_000


data_dir_option = click.option(
    "--data-dir",
    type=click.Path(path_type=Path),
    default=Path("./gavel-data"),
    show_default=True,
    help="event log directory",
)
json_option = click.option("--json", "as_json", is_flag=True, help="machine-readable output")


@click.group()
@click.version_option(__version__, prog_name="gavel")
def main() -> None:
    """Business auction engine operator tooling."""


def _fail(message: str, code: int = EXIT_PARSE) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(payload: dict, as_json: bool, text: str) -> None:
    click.echo(json.dumps(payload, indent=2) if as_json else text)


# --- administration -------------------------------------------------------


@main.command()
@click.argument("config_file", type=click.Path(exists=True, path_type=Path))
@data_dir_option
@json_option
def create(config_file: Path, data_dir: Path, as_json: bool) -> None:
    """Create an auction from a config JSON file."""
    try:
        raw = json.loads(config_file.read_text())
        config = config_from_wire(raw)
        auction, events = Auction.create(config, at=wall_ms())
    except (json.JSONDecodeError, AuctionError) as exc:
        _fail(str(exc))
    store = EventLogStore(data_dir)
    if store.path_for(config.auction_id).exists():
        _fail(f"auction {config.auction_id} already exists in {data_dir}")
    store.append(config.auction_id, events)
    _emit(
        {"auction_id": config.auction_id, "status": auction.status.value},
        as_json,
        f"created {config.auction_id} ({config.format.kind.value}, {len(config.slots)} slot(s))",
    )


@main.command(name="open")
@click.argument("auction_id")
@click.option("--at", type=int, default=None, help="timestamp ms (default: now)")
@data_dir_option
@json_option
def open_cmd(auction_id: str, at: int | None, data_dir: Path, as_json: bool) -> None:
    """Open a scheduled auction (server must not be running on this data dir)."""
    _append_command(auction_id, data_dir, as_json, "open", at)


@main.command()
@click.argument("auction_id")
@click.option("--reason", default="", help="cancellation note for the log")
@click.option("--at", type=int, default=None, help="timestamp ms (default: now)")
@data_dir_option
@json_option
def cancel(auction_id: str, reason: str, at: int | None, data_dir: Path, as_json: bool) -> None:
    """Cancel an auction; cancelled auctions produce no outcome."""
    _append_command(auction_id, data_dir, as_json, "cancel", at, reason=reason)


def _append_command(auction_id, data_dir, as_json, verb, at, reason: str = "") -> None:
    store = EventLogStore(data_dir)
    try:
        events = store.load(auction_id)
        auction = Auction.replay(events)
        now = at if at is not None else wall_ms()
        new_events = auction.open(now) if verb == "open" else auction.cancel(now, reason)
    except FileNotFoundError:
        _fail(f"no auction {auction_id} in {data_dir}")
    except CorruptLog as exc:
        _fail(str(exc), EXIT_CORRUPT)
    except AuctionError as exc:
        _fail(str(exc))
    store.append(auction_id, new_events)
    _emit(
        {"auction_id": auction_id, "status": auction.status.value, "seq": auction.event_seq},
        as_json,
        f"{auction_id}: {auction.status.value}",
    )


@main.command()
@click.argument("auction_id")
@click.option("--participant", required=True, help="participant id to bind")
@click.option(
    "--role",
    type=click.Choice([r.value for r in RoleKind]),
    required=True,
)
@data_dir_option
@json_option
def token(auction_id: str, participant: str, role: str, data_dir: Path, as_json: bool) -> None:
    """Mint a login token bound to one participant role on one auction."""
    store = EventLogStore(data_dir)
    try:
        auction = Auction.replay(store.load(auction_id))
    except FileNotFoundError:
        _fail(f"no auction {auction_id} in {data_dir}")
    except CorruptLog as exc:
        _fail(str(exc), EXIT_CORRUPT)
    try:
        Role(RoleKind(role), participant)
        from .visibility import check_registered

        check_registered(auction, Role(RoleKind(role), participant))
    except AuctionError as exc:
        _fail(str(exc))
    cred = TokenStore(data_dir).mint(auction_id, participant, RoleKind(role))
    _emit(
        {"token": cred.token, "participant_id": participant, "role": role},
        as_json,
        cred.token,
    )


# --- inspection ---------------------------------------------------------------


def _summary(auction: Auction) -> dict:
    leaders = {}
    for slot in auction.config.slots:
        lead = auction.leading(slot.slot_id)
        leaders[slot.slot_id] = (
            {"bidder_id": lead.bidder_id, "amount": lead.amount} if lead else None
        )
    out = {
        "auction_id": auction.config.auction_id,
        "format": auction.config.format.kind.value,
        "status": auction.status.value,
        "event_seq": auction.event_seq,
        "now_close": auction.now_close,
        "extension_count": auction.extension_count,
        "leaders": leaders,
    }
    if auction.outcome is not None:
        out["outcome"] = auction.outcome.to_wire()
    if auction.is_open:
        out["note"] = "in progress as of last event"
    return out


def _summary_text(summary: dict) -> str:
    lines = [
        f"{summary['auction_id']} [{summary['format']}] status={summary['status']} events={summary['event_seq']}"
    ]
    for slot_id, lead in summary["leaders"].items():
        shown = f"{lead['bidder_id']} at {lead['amount']}" if lead else "no bids"
        lines.append(f"  {slot_id}: {shown}")
    if "outcome" in summary:
        lines.append(f"  obligation: {summary['outcome']['obligation']}")
    if "note" in summary:
        lines.append(f"  ({summary['note']})")
    return "\n".join(lines)


@main.command()
@click.argument("auction_id")
@data_dir_option
@json_option
def status(auction_id: str, data_dir: Path, as_json: bool) -> None:
    """Show the current state of an auction from its log."""
    store = EventLogStore(data_dir)
    try:
        auction = Auction.replay(store.load(auction_id))
    except FileNotFoundError:
        _fail(f"no auction {auction_id} in {data_dir}")
    except CorruptLog as exc:
        _fail(str(exc), EXIT_CORRUPT)
    summary = _summary(auction)
    _emit(summary, as_json, _summary_text(summary))


@main.command()
@click.argument("log_path", type=click.Path(exists=True, path_type=Path))
@json_option
def replay(log_path: Path, as_json: bool) -> None:
    """Rebuild state from an event log file and print the final summary."""
    try:
        events = load_events(log_path.read_text())
        auction = Auction.replay(events)
    except (CorruptLog, AuctionError) as exc:
        _fail(str(exc), EXIT_CORRUPT)
    summary = _summary(auction)
    _emit(summary, as_json, _summary_text(summary))


@main.command()
@click.argument("auction_id")
@click.option("--role", type=click.Choice([r.value for r in RoleKind]), required=True)
@click.option("--participant", default=None, help="participant id (bidders and guests)")
@data_dir_option
@json_option
def report(auction_id: str, role: str, participant: str | None, data_dir: Path, as_json: bool) -> None:
    """Emit the post-auction report for one role."""
    store = EventLogStore(data_dir)
    try:
        events = store.load(auction_id)
        auction = Auction.replay(events)
    except FileNotFoundError:
        _fail(f"no auction {auction_id} in {data_dir}")
    except CorruptLog as exc:
        _fail(str(exc), EXIT_CORRUPT)
    kind = RoleKind(role)
    if participant is None:
        participant = {
            RoleKind.AUCTIONEER: auction.config.auctioneer,
            RoleKind.ORIGINATOR: auction.config.originator,
        }.get(kind, "")
        if not participant:
            _fail("--participant is required for bidder and guest reports")
    try:
        payload = generate_report(auction, events, Role(kind, participant))
    except AuctionError as exc:
        _fail(str(exc))
    _emit(payload, as_json, json.dumps(payload, indent=2))


# --- simulation ------------------------------------------------------------------


def _outcome_mismatch(engine_outcome, oracle, phase_admissions, extension_count) -> list[str]:
    problems = []
    if oracle.cancelled:
        if engine_outcome is not None:
            problems.append("oracle saw a cancellation, engine produced an outcome")
        return problems
    if engine_outcome is None:
        return ["engine produced no outcome, oracle did"]
    if engine_outcome.winners != oracle.winners:
        problems.append(f"winners differ: engine {engine_outcome.winners} oracle {oracle.winners}")
    if engine_outcome.closing_prices != oracle.closing_prices:
        problems.append(
            f"closing prices differ: engine {engine_outcome.closing_prices} oracle {oracle.closing_prices}"
        )
    if engine_outcome.obligation.value != oracle.obligation:
        problems.append(
            f"obligation differs: engine {engine_outcome.obligation.value} oracle {oracle.obligation}"
        )
    engine_allocs = tuple((a.bidder_id, a.quantity, a.price) for a in engine_outcome.dutch_allocations)
    if engine_allocs != oracle.dutch_allocations:
        problems.append("dutch allocations differ")
    if tuple(phase_admissions) != oracle.phase_admissions:
        problems.append(
            f"phase admissions differ: engine {phase_admissions} oracle {list(oracle.phase_admissions)}"
        )
    if extension_count != oracle.extension_count:
        problems.append(
            f"extension counts differ: engine {extension_count} oracle {oracle.extension_count}"
        )
    return problems


@main.command()
@click.argument("scenario_path", type=click.Path(exists=True, path_type=Path))
@click.option("--seed", type=int, default=None, help="override the scenario seed")
@click.option("--verify", "do_verify", is_flag=True, help="also run the oracle and compare")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="write event log and outcome here")
@json_option
def simulate(scenario_path: Path, seed: int | None, do_verify: bool, out: Path | None, as_json: bool) -> None:
    """Run a scenario offline and print (or write) its event log and outcome."""
    try:
        scenario = load_scenario(scenario_path)
        if seed is not None:
            from dataclasses import replace

            scenario = replace(scenario, seed=seed)
        result = run_scenario(scenario)
    except (ScenarioInvalid, AuctionError) as exc:
        _fail(str(exc))

    outcome_wire = {aid: (o.to_wire() if o else None) for aid, o in result.outcomes.items()}
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        for aid, events in result.events.items():
            (out / f"{aid}.events.jsonl").write_text(dump_events(events))
        (out / "outcome.json").write_text(json.dumps(outcome_wire, indent=2))
        (out / "traces.json").write_text(json.dumps(result.traces, indent=2))

    verified = None
    if do_verify:
        try:
            oracle = oracle_outcome(scenario)
        except AuctionError as exc:
            _fail(f"oracle refused the scenario: {exc}")
        problems = _outcome_mismatch(
            result.outcome,
            oracle,
            result.phase_admissions[result.primary_id],
            result.extension_counts[result.primary_id],
        )
        if problems:
            for problem in problems:
                click.echo(f"mismatch: {problem}", err=True)
            sys.exit(EXIT_MISMATCH)
        verified = True

    payload = {
        "auction_ids": result.scenario.auction_ids(),
        "events": {aid: len(evs) for aid, evs in result.events.items()},
        "outcomes": outcome_wire,
        "verified": verified,
    }
    primary = result.outcome
    text = [
        f"simulated {scenario_path.name}: {sum(len(e) for e in result.events.values())} events"
    ]
    if primary is not None:
        for slot_id, winner in primary.winners.items():
            price = primary.closing_prices[slot_id]
            text.append(f"  {slot_id}: {winner or 'no winner'}" + (f" at {price}" if price else ""))
        text.append(f"  obligation: {primary.obligation.value}")
    else:
        text.append("  cancelled: no outcome")
    if verified:
        text.append("  oracle: outcomes match")
    _emit(payload, as_json, "\n".join(text))


@main.command()
@click.argument("scenario_path", type=click.Path(exists=True, path_type=Path))
@click.option("--seed", type=int, default=None, help="override the scenario seed")
@click.pass_context
def verify(ctx: click.Context, scenario_path: Path, seed: int | None) -> None:
    """Run a scenario through both the engine and the oracle; fail on mismatch."""
    ctx.invoke(simulate, scenario_path=scenario_path, seed=seed, do_verify=True, out=None, as_json=False)


if __name__ == "__main__":
    main()
