#!/usr/bin/env python3
"""
Radio link budget at the UAV.
Combines the direct and RIS-reflected paths for a phase configuration and
computes SINR, spectral efficiency and the per-step reward.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ris_uav_planner.core.errors import ShapeMismatchError
from ris_uav_planner.physics.channel import ChannelSnapshot


def wrap_phase(theta: Sequence[float]) -> np.ndarray:
    """Wrap angles into the half-open interval [-pi, pi)."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    # np.mod can round up to 2*pi for tiny negative inputs.
    return np.where(wrapped >= math.pi, wrapped - 2.0 * math.pi, wrapped)


@dataclass(frozen=True)
class RisPhaseVector:
    """Per-element phase shifts; unit modulus is implicit."""
    theta: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_phase(np.atleast_1d(self.theta)))

    @classmethod
    def zeros(cls, n_elements: int) -> "RisPhaseVector":
        return cls(np.zeros(n_elements))

    @property
    def n_elements(self) -> int:
        return len(self.theta)

    def coefficients(self) -> np.ndarray:
        """Reflection coefficients exp(j theta)."""
        return np.exp(1j * self.theta)


@dataclass(frozen=True)
class LinkMetrics:
    """SINR (linear), rate (bits/s/Hz) and the two received powers (W)."""
    sinr: float
    rate: float
    desired_power: float
    interference_power: float


def effective_gain(h_direct: complex, h_ru: np.ndarray, theta: RisPhaseVector, h_x: np.ndarray) -> complex:
    """h_direct + h_ru^H diag(exp(j theta)) h_x."""
    h_ru = np.asarray(h_ru)
    h_x = np.asarray(h_x)
    if not len(h_ru) == len(h_x) == theta.n_elements:
        raise ShapeMismatchError(
            f"length mismatch: h_ru={len(h_ru)}, h_x={len(h_x)}, theta={theta.n_elements}"
        )
    return complex(h_direct + np.sum(np.conj(h_ru) * theta.coefficients() * h_x))


def metrics_from_powers(desired_power: float, interference_power: float, noise_power: float) -> LinkMetrics:
    sinr = desired_power / (interference_power + noise_power)
    return LinkMetrics(
        sinr=sinr,
        rate=math.log2(1.0 + sinr),
        desired_power=desired_power,
        interference_power=interference_power,
    )


def sinr(
    snapshot: ChannelSnapshot,
    theta: RisPhaseVector,
    tx_power: float,
    jammer_power: float,
    noise_power: float
) -> LinkMetrics:
    """SINR and rate at the UAV for one slot and phase configuration."""
    if tx_power < 0 or jammer_power < 0:
        raise ValueError(f"powers must be non-negative, got tx_power={tx_power}, jammer_power={jammer_power}")
    if not noise_power > 0:
        raise ValueError(f"noise_power={noise_power} must be positive")
    g_b = effective_gain(snapshot.h_bu, snapshot.h_ru, theta, snapshot.h_br)
    g_j = effective_gain(snapshot.h_ju, snapshot.h_ru, theta, snapshot.h_jr)
    return metrics_from_powers(tx_power * abs(g_b) ** 2, jammer_power * abs(g_j) ** 2, noise_power)


def step_reward(rate: float, d_prev: float, d_curr: float, reward_weight: float) -> float:
    """Rate plus weighted progress toward the goal."""
    if d_prev < 0 or d_curr < 0:
        raise ValueError(f"distances must be non-negative, got d_prev={d_prev}, d_curr={d_curr}")
    return rate + reward_weight * (d_prev - d_curr)


def alignment_phases(h_direct: complex, h_ru: np.ndarray, h_x: np.ndarray) -> RisPhaseVector:
    """Phases that co-phase every reflected term with the direct path."""
    reference = np.angle(h_direct) if h_direct != 0 else 0.0
    cascade = np.conj(np.asarray(h_ru)) * np.asarray(h_x)
    return RisPhaseVector(reference - np.angle(cascade))


def aligned_gain_bound(h_direct: complex, h_ru: np.ndarray, h_x: np.ndarray) -> float:
    """Largest achievable |gain|^2: (|h_direct| + sum |h_ru||h_x|)^2."""
    return float((abs(h_direct) + np.sum(np.abs(h_ru) * np.abs(h_x))) ** 2)
