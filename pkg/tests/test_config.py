from fractions import Fraction

import pytest

from gavel import (
    Anonymity,
    AuctionFormat,
    ExtensionPolicy,
    config_from_wire,
    config_to_wire,
)
from gavel.errors import InvalidConfig
from tests.conftest import MIN, dutch_config, eur, make_config, make_slot, multi_phase_config, multi_round_config, reverse_config


def test_open_must_precede_close():
    cfg = make_config(scheduled_open=100, scheduled_close=100)
    with pytest.raises(InvalidConfig, match="precede"):
        cfg.validate()


def test_slot_ids_unique():
    cfg = make_config(slots=(make_slot("s1"), make_slot("s1")))
    with pytest.raises(InvalidConfig, match="unique"):
        cfg.validate()


def test_revealed_at_start_capped_at_fifteen_minutes():
    cfg = make_config(anonymity=Anonymity.REVEALED_AT_START, scheduled_close=3 * 60 * MIN)
    with pytest.raises(InvalidConfig, match="capped"):
        cfg.validate()
    short = make_config(anonymity=Anonymity.REVEALED_AT_START, scheduled_close=12 * MIN)
    short.validate()


def test_reverse_target_not_above_historic():
    cfg = make_config(historic_value=eur(90_000), target_value=eur(95_000))
    with pytest.raises(InvalidConfig, match="target_value"):
        cfg.validate()


def test_multi_round_duration_consistency():
    cfg = multi_round_config(rounds=3, round_duration_ms=10 * MIN, scheduled_close=25 * MIN)
    with pytest.raises(InvalidConfig, match="duration"):
        cfg.validate()


def test_dutch_reserve_not_above_start():
    from gavel import DutchTerms

    cfg = dutch_config(terms=DutchTerms(supply=5, start_price=eur(100), decrement=eur(1), step_ms=1000, reserve=eur(200)))
    with pytest.raises(InvalidConfig, match="reserve"):
        cfg.validate()


def test_direction_forced_by_kind():
    from gavel import Direction

    assert AuctionFormat.english().direction is Direction.ASCENDING
    assert AuctionFormat.reverse().direction is Direction.DESCENDING


def test_guard_sequence_defaults():
    # g(n) = max(floor, 180s * (1/2)^n): 180, 90, 45, 22.5, 11.25, 5.625, then the 5 s floor
    policy = ExtensionPolicy()
    guards = [policy.guard_ms(n) for n in range(8)]
    assert guards == [180_000, 90_000, 45_000, 22_500, 11_250, 5_625, 5_000, 5_000]


def test_guard_monotone_decay_property():
    import random

    rng = random.Random(7)
    for _ in range(200):
        g0 = rng.randrange(1_000, 600_000)
        floor = rng.randrange(1, g0 + 1)
        decay = Fraction(rng.randrange(1, 100), 100)
        policy = ExtensionPolicy(initial_guard_ms=g0, decay=decay, floor_ms=floor)
        prev = None
        for n in range(12):
            g = policy.guard_ms(n)
            assert g >= floor
            if prev is not None:
                assert g <= prev
            prev = g


def test_config_wire_roundtrip():
    for cfg in (
        reverse_config(),
        make_config(format=AuctionFormat.english()),
        dutch_config(),
        multi_round_config(),
        multi_phase_config(),
        make_config(extension=ExtensionPolicy(120_000, Fraction(3, 10), 2_000)),
    ):
        cfg.validate()
        assert config_from_wire(config_to_wire(cfg)) == cfg
