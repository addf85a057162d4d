"""Tests for seeded random streams and provenance hashing."""

import numpy as np

from ris_uav_planner.core.config import ScenarioBundle, config_hash, rng_stream


def test_same_seed_and_label_repeat() -> None:
    first = rng_stream(42, "fading").standard_normal(10)
    second = rng_stream(42, "fading").standard_normal(10)

    assert np.array_equal(first, second)


def test_label_and_seed_both_separate_streams() -> None:
    base = rng_stream(42, "fading").standard_normal(10)

    assert not np.array_equal(base, rng_stream(42, "noise").standard_normal(10))
    assert not np.array_equal(base, rng_stream(43, "fading").standard_normal(10))


def test_config_hash_tracks_content() -> None:
    bundle = ScenarioBundle()

    assert config_hash(bundle) == config_hash(ScenarioBundle())
    assert len(config_hash(bundle)) == 16
    assert config_hash(bundle) != config_hash(bundle.with_mission_time(20.0))
