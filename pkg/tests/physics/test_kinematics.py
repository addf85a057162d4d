"""Tests for the discrete-time mobility model."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ris_uav_planner.core.config import KinematicLimits
from ris_uav_planner.physics import kinematics
from ris_uav_planner.physics.kinematics import UavState

LIMITS = KinematicLimits()
component = st.floats(min_value=-120.0, max_value=120.0, allow_nan=False)
vec3 = st.tuples(component, component, component)


def test_clamp_accel_clips_per_axis() -> None:
    assert np.array_equal(kinematics.clamp_accel([3, 0, -5], LIMITS), [2, 0, -2])
    assert np.array_equal(kinematics.clamp_accel([0, 0, 0], LIMITS), [0, 0, 0])
    assert np.array_equal(kinematics.clamp_accel([1.9, -1.9, 2.0], LIMITS), [1.9, -1.9, 2.0])


def test_step_integrates_position_and_velocity() -> None:
    state = UavState(position=np.zeros(3), velocity=np.array([10.0, 0.0, 0.0]))

    moved = kinematics.step(state, [2.0, 0.0, 0.0], 0.1, LIMITS)

    assert moved.position == pytest.approx([1.01, 0.0, 0.0])
    assert moved.velocity == pytest.approx([10.2, 0.0, 0.0])
    assert moved.slot_index == 1


def test_zero_acceleration_keeps_feasible_velocity() -> None:
    state = UavState(position=np.array([1.0, 2.0, 3.0]), velocity=np.array([5.0, 5.0, 1.0]))

    moved = kinematics.step(state, [0.0, 0.0, 0.0], 0.1, LIMITS)

    assert np.array_equal(moved.velocity, state.velocity)
    assert moved.position == pytest.approx([1.5, 2.5, 3.1])


def test_slow_velocity_is_lifted_to_v_min() -> None:
    state = UavState(position=np.zeros(3), velocity=np.array([0.5, 0.0, 0.0]))

    moved = kinematics.step(state, [0.0, 0.0, 0.0], 0.1, LIMITS)

    assert np.linalg.norm(moved.velocity) == pytest.approx(2.0, rel=1e-12)
    assert moved.velocity[1:] == pytest.approx([0.0, 0.0])


def test_step_past_last_slot_is_rejected() -> None:
    state = UavState(position=np.zeros(3), velocity=np.array([5.0, 0.0, 0.0]), slot_index=300)

    with pytest.raises(ValueError, match="slot count"):
        kinematics.step(state, [0, 0, 0], 0.1, LIMITS, slot_count=300)


def test_project_rescales_fast_velocity() -> None:
    v = np.array([30.0, 40.0, 0.0])

    projected = kinematics.project(v, LIMITS)

    assert np.linalg.norm(projected) == pytest.approx(40.0)
    assert projected / np.linalg.norm(projected) == pytest.approx(v / 50.0)


def test_project_limits_pure_climb_to_pitch_bound() -> None:
    projected = kinematics.project([0.0, 0.0, 10.0], LIMITS)

    assert projected[2] / np.linalg.norm(projected) == pytest.approx(math.sin(LIMITS.pitch_max))
    assert projected[2] > 0
    assert kinematics.is_feasible(projected, LIMITS)


def test_project_keeps_horizontal_direction_when_pitch_limited() -> None:
    projected = kinematics.project([3.0, 4.0, 20.0], LIMITS)

    horizontal = projected[:2] / np.linalg.norm(projected[:2])
    assert horizontal == pytest.approx([0.6, 0.8])
    assert projected[2] / np.linalg.norm(projected) == pytest.approx(math.sin(LIMITS.pitch_max))


def test_zero_velocity_uses_previous_heading_or_flags_fallback() -> None:
    with_heading, flagged = kinematics.project_checked([0, 0, 0], LIMITS, previous_heading=[0.0, 3.0, 0.0])
    without, fallback = kinematics.project_checked([0, 0, 0], LIMITS)

    assert with_heading == pytest.approx([0.0, 2.0, 0.0])
    assert not flagged
    assert without == pytest.approx([2.0, 0.0, 0.0])
    assert fallback


def test_feasible_velocity_is_returned_unchanged() -> None:
    v = np.array([10.0, -3.0, 2.0])

    assert np.array_equal(kinematics.project(v, LIMITS), v)


def test_finishing_distance_examples() -> None:
    assert kinematics.finishing_distance(UavState(np.array([3.0, 4.0, 0.0]), np.zeros(3)), [0, 0, 0]) == 5.0
    start = UavState(np.array([-200.0, -100.0, 5.0]), np.zeros(3))
    assert kinematics.finishing_distance(start, [100, 60, 50]) == pytest.approx(math.sqrt(300 ** 2 + 160 ** 2 + 45 ** 2))
    assert kinematics.finishing_distance(start, [-200, -100, 5]) == 0.0


def test_initial_velocity_points_at_goal_with_v_min() -> None:
    v0 = kinematics.initial_velocity([-200, -100, 5], [100, 60, 50], LIMITS)

    assert np.linalg.norm(v0) == pytest.approx(LIMITS.v_min)
    assert v0 / LIMITS.v_min == pytest.approx(np.array([300.0, 160.0, 45.0]) / math.sqrt(300 ** 2 + 160 ** 2 + 45 ** 2))


def test_half_steps_match_full_step_when_unconstrained() -> None:
    state = UavState(position=np.array([0.0, 0.0, 10.0]), velocity=np.array([10.0, 5.0, 1.0]))
    accel = [0.5, -0.3, 0.1]

    full = kinematics.step(state, accel, 0.1, LIMITS)
    half = kinematics.step(kinematics.step(state, accel, 0.05, LIMITS), accel, 0.05, LIMITS)

    assert np.max(np.abs(full.position - half.position)) < 1e-9


@settings(max_examples=300, deadline=None)
@given(vec3)
def test_projection_is_feasible_and_idempotent(raw) -> None:
    projected = kinematics.project(raw, LIMITS)

    assert kinematics.is_feasible(projected, LIMITS)
    assert np.array_equal(kinematics.project(projected, LIMITS), projected)


@settings(max_examples=300, deadline=None)
@given(vec3, vec3, vec3)
def test_every_step_lands_feasible(position, velocity, accel) -> None:
    state = UavState(np.array(position), kinematics.project(velocity, LIMITS))

    moved = kinematics.step(state, kinematics.clamp_accel(accel, LIMITS), 0.1, LIMITS)

    assert kinematics.is_feasible(moved.velocity, LIMITS)
