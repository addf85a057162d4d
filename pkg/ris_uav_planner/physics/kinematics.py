#!/usr/bin/env python3
"""
Discrete-time UAV mobility model.
Integrates position and velocity per slot and repairs infeasible velocities
so the acceleration, speed and pitch limits hold after every step.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ris_uav_planner.core.config import KinematicLimits

# Relative slack below which a bound counts as satisfied; keeps project() idempotent.
_SLACK = 1e-12
_ZERO_SPEED = 1e-12


@dataclass(frozen=True)
class UavState:
    """Position, velocity and slot index of the UAV."""
    position: np.ndarray
    velocity: np.ndarray
    slot_index: int = 0
    heading_fallback: bool = False


def as_vec3(values: Sequence[float]) -> np.ndarray:
    vec = np.asarray(values, dtype=float)
    if vec.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {vec.shape}")
    return vec


def clamp_accel(raw: Sequence[float], limits: KinematicLimits) -> np.ndarray:
    """Clip each acceleration component into [-a_max, a_max]."""
    return np.clip(as_vec3(raw), -limits.a_max, limits.a_max)


def _limit_pitch(v: np.ndarray, limits: KinematicLimits, previous_heading: Optional[np.ndarray]) -> np.ndarray:
    sin_pitch = math.sin(limits.pitch_max)
    speed = float(np.linalg.norm(v))
    if abs(v[2]) <= sin_pitch * speed * (1.0 + _SLACK):
        return v

    horizontal = v[:2]
    horizontal_speed = float(np.linalg.norm(horizontal))
    sign = 1.0 if v[2] >= 0 else -1.0
    if horizontal_speed > _ZERO_SPEED * speed:
        # Keep the horizontal part; shrink |Vz| until Vz/|V| = sin(pitch).
        return np.array([horizontal[0], horizontal[1], sign * math.tan(limits.pitch_max) * horizontal_speed])

    # Purely vertical: borrow a horizontal direction and keep the speed.
    direction = np.array([1.0, 0.0])
    if previous_heading is not None:
        prev_h = np.asarray(previous_heading, dtype=float)[:2]
        prev_norm = float(np.linalg.norm(prev_h))
        if prev_norm > 0:
            direction = prev_h / prev_norm
    cos_pitch = math.cos(limits.pitch_max)
    return np.array([cos_pitch * speed * direction[0], cos_pitch * speed * direction[1], sign * sin_pitch * speed])


def project_checked(
    v_raw: Sequence[float],
    limits: KinematicLimits,
    previous_heading: Optional[Sequence[float]] = None
) -> Tuple[np.ndarray, bool]:
    """
    Repair a velocity so pitch and speed limits hold.

    Pitch is fixed first (vertical component shrunk, sign and horizontal
    direction kept), then the magnitude is rescaled into [v_min, v_max].

    Returns:
        (velocity, fallback) where fallback is True when a zero input had no
        previous heading and +x was used instead.
    """
    v = as_vec3(v_raw).copy()
    heading = None if previous_heading is None else as_vec3(previous_heading)
    speed = float(np.linalg.norm(v))

    if speed <= _ZERO_SPEED:
        fallback = heading is None or float(np.linalg.norm(heading)) <= _ZERO_SPEED
        direction = np.array([1.0, 0.0, 0.0]) if fallback else heading / np.linalg.norm(heading)
        v = _limit_pitch(direction, limits, None)
        return limits.v_min * v / np.linalg.norm(v), fallback

    v = _limit_pitch(v, limits, heading)
    speed = float(np.linalg.norm(v))
    if speed > limits.v_max * (1.0 + _SLACK):
        v = v * (limits.v_max / speed)
    elif speed < limits.v_min * (1.0 - _SLACK):
        v = v * (limits.v_min / speed)
    return v, False


def project(
    v_raw: Sequence[float],
    limits: KinematicLimits,
    previous_heading: Optional[Sequence[float]] = None
) -> np.ndarray:
    """Feasible velocity closest in direction to v_raw; see project_checked."""
    velocity, _ = project_checked(v_raw, limits, previous_heading)
    return velocity


def step(
    state: UavState,
    accel: Sequence[float],
    slot_length: float,
    limits: KinematicLimits,
    slot_count: Optional[int] = None
) -> UavState:
    """Advance one slot: q' = q + V d + a d^2 / 2, V' = project(V + a d)."""
    if slot_count is not None and state.slot_index >= slot_count:
        raise ValueError(f"slot_index={state.slot_index} has reached the slot count {slot_count}")
    a = as_vec3(accel)
    position = state.position + state.velocity * slot_length + 0.5 * a * slot_length ** 2
    velocity, fallback = project_checked(state.velocity + a * slot_length, limits, previous_heading=state.velocity)
    return UavState(position=position, velocity=velocity, slot_index=state.slot_index + 1, heading_fallback=fallback)


def initial_velocity(start: Sequence[float], goal: Sequence[float], limits: KinematicLimits) -> np.ndarray:
    """Cruise at v_min toward the goal; a fixed-wing airframe cannot hover."""
    direction = as_vec3(goal) - as_vec3(start)
    return project(direction / max(float(np.linalg.norm(direction)), _ZERO_SPEED) * limits.v_min, limits)


def finishing_distance(state: UavState, goal: Sequence[float]) -> float:
    """Euclidean distance from the UAV to its goal."""
    return float(np.linalg.norm(state.position - as_vec3(goal)))


def is_feasible(velocity: Sequence[float], limits: KinematicLimits, slack: float = 1e-12) -> bool:
    """True when speed and pitch limits hold within a relative slack."""
    v = as_vec3(velocity)
    speed = float(np.linalg.norm(v))
    if speed < limits.v_min * (1.0 - slack) or speed > limits.v_max * (1.0 + slack):
        return False
    return abs(v[2]) <= math.sin(limits.pitch_max) * speed * (1.0 + slack)
