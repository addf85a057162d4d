"""Reusable builders for concise unit tests."""

from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ris_uav_planner.core.config import HyperParams, ScenarioBundle, ScenarioConfig
from ris_uav_planner.learning.agents import Transition
from ris_uav_planner.physics.channel import ChannelSnapshot

REPO_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_SCENARIO = REPO_ROOT / "configs" / "default_scenario.json"


def tiny_hyper(**overrides) -> HyperParams:
    """Small networks and short episodes so learner tests run in milliseconds."""
    base = HyperParams(
        replay_capacity=500,
        episodes=3,
        steps_per_episode=10,
        batch_size=8,
        warmup_steps=5,
        actor_hidden=(8, 8),
        critic_hidden=(8, 8),
        checkpoint_interval=2,
    )
    return replace(base, **overrides)


def tiny_bundle(rows: int = 2, cols: int = 2, seed: int = 0, mission_time: float = 1.0, **hyper_overrides) -> ScenarioBundle:
    """Default geometry with a small RIS and a one-second mission."""
    scenario = ScenarioConfig(ris_rows=rows, ris_cols=cols, mission_time=mission_time)
    hyper = tiny_hyper(**hyper_overrides)
    return ScenarioBundle(scenario=scenario, hyper=hyper, seed=seed)


def unit_snapshot(n: int = 1, h_direct: complex = 1.0, h_jammer: complex = 1.0) -> ChannelSnapshot:
    """Snapshot whose RIS vectors are all ones."""
    ones = np.ones(n, dtype=complex)
    return ChannelSnapshot(h_bu=complex(h_direct), h_ju=complex(h_jammer), h_br=ones, h_jr=ones.copy(), h_ru=ones.copy())


def make_transition(
    reward: float = 1.0,
    state_dim: int = 7,
    action_dim: int = 7,
    fill: float = 0.0,
    terminal: bool = False,
    action: Optional[Sequence[float]] = None
) -> Transition:
    """Transition with constant state vectors; `fill` tags it for ordering checks."""
    return Transition(
        state=np.full(state_dim, fill),
        action=np.zeros(action_dim) if action is None else np.asarray(action, dtype=float),
        reward=reward,
        next_state=np.full(state_dim, fill + 1.0),
        terminal=terminal,
    )
