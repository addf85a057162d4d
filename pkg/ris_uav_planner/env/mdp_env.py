#!/usr/bin/env python3
"""
Episodic UAV/RIS environment.
Ties kinematics, channel sampling and the link budget into reset/step calls,
builds the 7-entry observation and keeps the per-episode accounting.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ris_uav_planner.baselines.ris_oracle import dinkelbach_metrics
from ris_uav_planner.core.config import KinematicLimits, ScenarioBundle
from ris_uav_planner.core.errors import EpisodeDoneError, ShapeMismatchError
from ris_uav_planner.learning.agents import ACCEL_DIM, STATE_DIM, denormalize_action
from ris_uav_planner.physics import kinematics
from ris_uav_planner.physics.channel import ChannelModel, ChannelSnapshot
from ris_uav_planner.physics.radio_link import LinkMetrics, RisPhaseVector, sinr, step_reward

# Observation scaling; fixed so checkpoints stay portable between runs.
POSITION_SCALE = 100.0

# 'ris': learned phases, 'none': reflected paths removed, 'oracle': per-slot Dinkelbach phases.
RIS_MODES = ("ris", "none", "oracle")


@dataclass(frozen=True)
class TraceRow:
    """One step of an exported episode trace."""
    t: int
    position: Tuple[float, float, float]
    velocity: Tuple[float, float, float]
    sinr: float
    rate: float
    reward: float
    finishing_distance: float

    @staticmethod
    def header() -> List[str]:
        return ["t", "q_x", "q_y", "q_z", "v_x", "v_y", "v_z", "sinr", "rate", "reward", "d_F"]

    def as_row(self) -> List[float]:
        return [self.t, *self.position, *self.velocity, self.sinr, self.rate, self.reward, self.finishing_distance]


@dataclass
class EpisodeState:
    """Everything that evolves inside one episode."""
    uav: kinematics.UavState
    goal: np.ndarray
    channel: ChannelModel
    snapshot: ChannelSnapshot
    metrics: LinkMetrics
    prev_distance: float
    ris_mode: str = "ris"
    step_index: int = 0
    cumulative_rate: float = 0.0
    cumulative_reward: float = 0.0
    done: bool = False
    fallback_steps: int = 0
    oracle_warnings: int = 0
    oracle_rng: Optional[np.random.Generator] = None
    oracle_objective: str = "sinr"
    trace: Optional[List[TraceRow]] = None

    @property
    def finishing_distance(self) -> float:
        return kinematics.finishing_distance(self.uav, self.goal)


def action_dim(n_elements: int, ris_mode: str) -> int:
    """Normalised action length: phases plus acceleration, or acceleration only."""
    if ris_mode not in RIS_MODES:
        raise ValueError(f"ris_mode={ris_mode!r} must be one of {RIS_MODES}")
    return n_elements + ACCEL_DIM if ris_mode == "ris" else ACCEL_DIM


def raw_observation(state: EpisodeState) -> np.ndarray:
    """[q_t - q_F, V_t, sinr] in physical units."""
    return np.concatenate([state.uav.position - state.goal, state.uav.velocity, [state.metrics.sinr]])


def observe(state: EpisodeState, limits: KinematicLimits) -> np.ndarray:
    """
    Network-ready observation.

    Positions are divided by POSITION_SCALE, velocities by v_max and the
    SINR enters as log1p(sinr). unscale_observation inverts the mapping.
    """
    raw = raw_observation(state)
    return np.concatenate([raw[:3] / POSITION_SCALE, raw[3:6] / limits.v_max, [math.log1p(max(raw[6], 0.0))]])


def unscale_observation(obs: Sequence[float], limits: KinematicLimits) -> np.ndarray:
    obs = np.asarray(obs, dtype=float)
    if obs.shape != (STATE_DIM,):
        raise ShapeMismatchError(f"observation shape {obs.shape} != ({STATE_DIM},)")
    return np.concatenate([obs[:3] * POSITION_SCALE, obs[3:6] * limits.v_max, [math.expm1(obs[6])]])


def _measure(snapshot: ChannelSnapshot, phases: RisPhaseVector, bundle: ScenarioBundle, ris_mode: str) -> LinkMetrics:
    cfg = bundle.scenario
    if ris_mode == "none":
        snapshot = snapshot.without_ris()
    return sinr(snapshot, phases, cfg.tx_power, cfg.jammer_power, cfg.noise_power)


def _draw_goal(bundle: ScenarioBundle, rng: np.random.Generator) -> np.ndarray:
    cfg = bundle.scenario
    if not cfg.random_goal:
        return kinematics.as_vec3(cfg.uav_goal)
    low, high = (np.asarray(corner, dtype=float) for corner in cfg.goal_box)
    return rng.uniform(low, high)


def reset(
    bundle: ScenarioBundle,
    rng: np.random.Generator,
    ris_mode: str = "ris",
    record_trace: bool = False,
    oracle_rng: Optional[np.random.Generator] = None,
    oracle_objective: str = "sinr"
) -> Tuple[EpisodeState, np.ndarray]:
    """
    Start an episode at q0 cruising at v_min toward the goal.

    The quasi-static RIS links are drawn here. The first observation carries
    the SINR measured with every phase at zero.
    """
    action_dim(bundle.scenario.n_elements, ris_mode)
    cfg = bundle.scenario
    channel = ChannelModel(cfg, bundle.channel)
    channel.reset(rng)
    goal = _draw_goal(bundle, rng)
    start = kinematics.as_vec3(cfg.uav_start)
    uav = kinematics.UavState(position=start, velocity=kinematics.initial_velocity(start, goal, bundle.kinematics))
    snapshot = channel.snapshot(uav.position, 0)
    metrics = _measure(snapshot, RisPhaseVector.zeros(cfg.n_elements), bundle, ris_mode)

    state = EpisodeState(
        uav=uav,
        goal=goal,
        channel=channel,
        snapshot=snapshot,
        metrics=metrics,
        prev_distance=kinematics.finishing_distance(uav, goal),
        ris_mode=ris_mode,
        oracle_rng=oracle_rng,
        oracle_objective=oracle_objective,
        trace=[] if record_trace else None,
    )
    return state, observe(state, bundle.kinematics)


def env_step(
    state: EpisodeState,
    phases: Optional[RisPhaseVector],
    accel: Sequence[float],
    bundle: ScenarioBundle
) -> Tuple[EpisodeState, np.ndarray, float, bool]:
    """
    Advance one slot: move the UAV, draw the new channels, measure the link.

    phases is ignored outside 'ris' mode; 'oracle' mode solves for them on
    the fresh snapshot. The state is updated in place and also returned.
    """
    if state.done:
        raise EpisodeDoneError(f"episode already finished after {state.step_index} steps; call reset()")
    cfg = bundle.scenario
    n = cfg.n_elements

    accel = kinematics.clamp_accel(accel, bundle.kinematics)
    uav = kinematics.step(state.uav, accel, cfg.slot_length, bundle.kinematics, cfg.slot_count)
    snapshot = state.channel.snapshot(uav.position, uav.slot_index)

    if state.ris_mode == "oracle":
        phases, metrics, result = dinkelbach_metrics(
            snapshot, cfg.tx_power, cfg.jammer_power, cfg.noise_power,
            objective=state.oracle_objective, rng=state.oracle_rng,
        )
        if not result.converged:
            state.oracle_warnings += 1
    else:
        if state.ris_mode == "none":
            phases = RisPhaseVector.zeros(n)
        elif phases is None or phases.n_elements != n:
            got = None if phases is None else phases.n_elements
            raise ShapeMismatchError(f"expected {n} RIS phases, got {got}")
        metrics = _measure(snapshot, phases, bundle, state.ris_mode)
    d_curr = kinematics.finishing_distance(uav, state.goal)
    reward = step_reward(metrics.rate, state.prev_distance, d_curr, bundle.hyper.reward_weight)

    state.uav = uav
    state.snapshot = snapshot
    state.metrics = metrics
    state.prev_distance = d_curr
    state.step_index += 1
    state.cumulative_rate += metrics.rate
    state.cumulative_reward += reward
    state.fallback_steps += int(uav.heading_fallback)
    state.done = state.step_index >= bundle.hyper.steps_per_episode
    if state.trace is not None:
        state.trace.append(TraceRow(
            t=state.step_index,
            position=tuple(float(x) for x in uav.position),
            velocity=tuple(float(x) for x in uav.velocity),
            sinr=metrics.sinr,
            rate=metrics.rate,
            reward=reward,
            finishing_distance=d_curr,
        ))
    return state, observe(state, bundle.kinematics), reward, state.done


@dataclass
class UavRisEnvironment:
    """Gym-style wrapper holding the bundle and the live episode."""
    bundle: ScenarioBundle
    ris_mode: str = "ris"
    record_trace: bool = False
    oracle_objective: str = "sinr"
    state: Optional[EpisodeState] = field(default=None, init=False)

    def __post_init__(self) -> None:
        action_dim(self.bundle.scenario.n_elements, self.ris_mode)

    @property
    def observation_dim(self) -> int:
        return STATE_DIM

    @property
    def action_dim(self) -> int:
        return action_dim(self.bundle.scenario.n_elements, self.ris_mode)

    def reset(self, rng: np.random.Generator, oracle_rng: Optional[np.random.Generator] = None) -> np.ndarray:
        self.state, obs = reset(
            self.bundle, rng, self.ris_mode, self.record_trace, oracle_rng, self.oracle_objective
        )
        return obs

    def decode(self, action: Sequence[float]) -> Tuple[Optional[RisPhaseVector], np.ndarray]:
        """Normalised action -> (phases or None, acceleration in m/s^2)."""
        a_max = self.bundle.kinematics.a_max
        if self.ris_mode == "ris":
            return denormalize_action(np.asarray(action, dtype=float), self.bundle.scenario.n_elements, a_max)
        _, accel = denormalize_action(np.asarray(action, dtype=float), 0, a_max)
        return None, accel

    def step(self, action: Sequence[float]) -> Tuple[np.ndarray, float, bool]:
        """Step with a normalised action vector from the agent."""
        if self.state is None:
            raise RuntimeError("UavRisEnvironment.reset() must be called before step()")
        phases, accel = self.decode(action)
        _, obs, reward, done = env_step(self.state, phases, accel, self.bundle)
        return obs, reward, done

    def episode_summary(self) -> "EpisodeSummary":
        if self.state is None:
            raise RuntimeError("no episode has been started")
        return EpisodeSummary.from_state(self.state)


@dataclass(frozen=True)
class EpisodeSummary:
    """Totals reported for one finished (or interrupted) episode."""
    steps: int
    cumulative_rate: float
    cumulative_reward: float
    finishing_distance: float
    fallback_steps: int = 0
    oracle_warnings: int = 0

    @classmethod
    def from_state(cls, state: EpisodeState) -> "EpisodeSummary":
        return cls(
            steps=state.step_index,
            cumulative_rate=state.cumulative_rate,
            cumulative_reward=state.cumulative_reward,
            finishing_distance=state.finishing_distance,
            fallback_steps=state.fallback_steps,
            oracle_warnings=state.oracle_warnings,
        )
