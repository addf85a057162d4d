#!/usr/bin/env python3
"""
Perfect-CSI reference points for the RIS configuration.
No-RIS link metrics, per-slot Dinkelbach fractional programming with
Riemannian ascent on the unit-modulus manifold, and an exhaustive phase-grid
verifier for small arrays.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ris_uav_planner.physics.channel import ChannelSnapshot
from ris_uav_planner.physics.radio_link import (
    LinkMetrics,
    RisPhaseVector,
    alignment_phases,
    metrics_from_powers,
    sinr,
)

OBJECTIVES = ("sinr", "snr")
GRID_MAX_ELEMENTS = 3
_ARMIJO = 1e-4
_MAX_HALVINGS = 60


@dataclass
class DinkelbachResult:
    """Outcome of one Dinkelbach solve."""
    theta: RisPhaseVector
    ratio: float
    lambdas: List[float] = field(default_factory=list)
    outer_iterations: int = 0
    converged: bool = True
    warning: Optional[str] = None


@dataclass(frozen=True)
class _RatioProblem:
    """f(u) = P_t |a_b + b_b.u|^2 over g(u) = P_J |a_j + b_j.u|^2 + noise, with |u_n| = 1."""
    a_b: complex
    b_b: np.ndarray
    a_j: complex
    b_j: np.ndarray
    tx_power: float
    jammer_power: float
    noise_power: float

    @classmethod
    def from_snapshot(cls, snapshot: ChannelSnapshot, tx_power: float, jammer_power: float,
                      noise_power: float, objective: str) -> "_RatioProblem":
        if objective not in OBJECTIVES:
            raise ValueError(f"objective={objective!r} must be one of {OBJECTIVES}")
        # 'snr' ignores the jammer, matching the SNR wording of the CSI baseline.
        p_j = jammer_power if objective == "sinr" else 0.0
        return cls(
            a_b=complex(snapshot.h_bu),
            b_b=np.conj(snapshot.h_ru) * snapshot.h_br,
            a_j=complex(snapshot.h_ju),
            b_j=np.conj(snapshot.h_ru) * snapshot.h_jr,
            tx_power=tx_power,
            jammer_power=p_j,
            noise_power=noise_power,
        )

    def signals(self, u: np.ndarray) -> Tuple[complex, complex]:
        return self.a_b + np.dot(self.b_b, u), self.a_j + np.dot(self.b_j, u)

    def numerator(self, u: np.ndarray) -> float:
        s_b, _ = self.signals(u)
        return self.tx_power * abs(s_b) ** 2

    def denominator(self, u: np.ndarray) -> float:
        _, s_j = self.signals(u)
        return self.jammer_power * abs(s_j) ** 2 + self.noise_power

    def surrogate(self, u: np.ndarray, lam: float) -> float:
        return self.numerator(u) - lam * self.denominator(u)

    def riemannian_gradient(self, u: np.ndarray, lam: float) -> np.ndarray:
        """Euclidean gradient of f - lam g projected onto the tangent space at u."""
        s_b, s_j = self.signals(u)
        euclid = 2.0 * (self.tx_power * s_b * np.conj(self.b_b) - lam * self.jammer_power * s_j * np.conj(self.b_j))
        return euclid - np.real(euclid * np.conj(u)) * u


def _retract(u: np.ndarray) -> np.ndarray:
    """Back onto the unit-modulus manifold by renormalising every element."""
    magnitude = np.abs(u)
    return np.where(magnitude > 0, u / np.where(magnitude > 0, magnitude, 1.0), 1.0 + 0j)


def _ascend(problem: _RatioProblem, u: np.ndarray, lam: float, max_steps: int, tol: float) -> Tuple[np.ndarray, float]:
    """Riemannian gradient ascent with Armijo backtracking; every accepted step is non-decreasing."""
    value = problem.surrogate(u, lam)
    scale = max(abs(problem.numerator(u)), lam * problem.denominator(u), 1e-300)
    for _ in range(max_steps):
        grad = problem.riemannian_gradient(u, lam)
        grad_sq = float(np.real(np.vdot(grad, grad)))
        peak = float(np.max(np.abs(grad))) if grad.size else 0.0
        if peak == 0.0 or grad_sq <= (tol * scale) ** 2:
            break
        step = 1.0 / peak
        accepted = False
        for _ in range(_MAX_HALVINGS):
            candidate = _retract(u + step * grad)
            candidate_value = problem.surrogate(candidate, lam)
            if candidate_value >= value + _ARMIJO * step * grad_sq:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gain = candidate_value - value
        u, value = candidate, candidate_value
        if gain <= tol * scale:
            break
    return u, value


def no_ris_metrics(snapshot: ChannelSnapshot, tx_power: float, jammer_power: float, noise_power: float) -> LinkMetrics:
    """Link metrics with every reflected path removed."""
    return sinr(snapshot.without_ris(), RisPhaseVector.zeros(snapshot.n_elements), tx_power, jammer_power, noise_power)


def dinkelbach_optimize(
    snapshot: ChannelSnapshot,
    tx_power: float,
    jammer_power: float,
    noise_power: float,
    tol: float = 1e-9,
    max_iters: int = 50,
    objective: str = "sinr",
    restarts: int = 3,
    inner_steps: int = 500,
    rng: Optional[np.random.Generator] = None
) -> DinkelbachResult:
    """
    Maximise f(theta)/g(theta) over unit-modulus phases by Dinkelbach iteration.

    Each outer step solves max f - lam g by manifold ascent from the previous
    iterate (which keeps lam non-decreasing), from the BS-path alignment and
    from `restarts` random points, then sets lam = f/g at the best point.
    Stops once f - lam g < tol * g.
    """
    if not noise_power > 0:
        raise ValueError(f"noise_power={noise_power} must be positive")
    problem = _RatioProblem.from_snapshot(snapshot, tx_power, jammer_power, noise_power, objective)
    rng = rng if rng is not None else np.random.default_rng(0)
    n = snapshot.n_elements

    u = np.ones(n, dtype=complex)
    lam = problem.numerator(u) / problem.denominator(u)
    lambdas = [lam]
    aligned = alignment_phases(snapshot.h_bu, snapshot.h_ru, snapshot.h_br).coefficients()

    for iteration in range(1, max_iters + 1):
        starts = [u, aligned] + [np.exp(1j * rng.uniform(-math.pi, math.pi, n)) for _ in range(restarts)]
        best_u, best_value = u, problem.surrogate(u, lam)
        for start in starts:
            candidate, value = _ascend(problem, start, lam, inner_steps, tol)
            if value > best_value:
                best_u, best_value = candidate, value

        u = best_u
        g = problem.denominator(u)
        new_lam = problem.numerator(u) / g
        converged = best_value < tol * g
        if new_lam > lam:
            lam = new_lam
        lambdas.append(lam)
        if converged:
            return DinkelbachResult(RisPhaseVector(np.angle(u)), lam, lambdas, iteration, True)

    return DinkelbachResult(
        RisPhaseVector(np.angle(u)),
        lam,
        lambdas,
        max_iters,
        converged=False,
        warning=f"Dinkelbach did not converge in {max_iters} outer iterations; returning the best iterate",
    )


def dinkelbach_metrics(
    snapshot: ChannelSnapshot,
    tx_power: float,
    jammer_power: float,
    noise_power: float,
    objective: str = "sinr",
    rng: Optional[np.random.Generator] = None
) -> Tuple[RisPhaseVector, LinkMetrics, DinkelbachResult]:
    """Optimised phases with the true SINR they achieve (jammer included)."""
    result = dinkelbach_optimize(snapshot, tx_power, jammer_power, noise_power, objective=objective, rng=rng)
    return result.theta, sinr(snapshot, result.theta, tx_power, jammer_power, noise_power), result


def grid_verify(
    snapshot: ChannelSnapshot,
    tx_power: float,
    jammer_power: float,
    noise_power: float,
    points_per_dim: int,
    objective: str = "sinr"
) -> float:
    """Exhaustive ratio maximum over a uniform phase grid on [-pi, pi)^N."""
    n = snapshot.n_elements
    if n > GRID_MAX_ELEMENTS:
        raise ValueError(f"grid search is limited to N <= {GRID_MAX_ELEMENTS} elements, got N={n}")
    if points_per_dim < 1:
        raise ValueError(f"points_per_dim={points_per_dim} must be >= 1")
    problem = _RatioProblem.from_snapshot(snapshot, tx_power, jammer_power, noise_power, objective)
    if n == 0:
        return metrics_from_powers(problem.numerator(np.zeros(0)), problem.denominator(np.zeros(0)) - noise_power, noise_power).sinr

    axis = np.exp(1j * (-math.pi + 2.0 * math.pi * np.arange(points_per_dim) / points_per_dim))
    # Sweep the first element in a loop and the rest vectorised to bound memory.
    rest = np.stack(np.meshgrid(*([axis] * (n - 1)), indexing='ij'), axis=-1).reshape(-1, n - 1) if n > 1 else np.ones((1, 0))
    rest_b = problem.a_b + rest @ problem.b_b[1:]
    rest_j = problem.a_j + rest @ problem.b_j[1:]
    best = -math.inf
    for first in axis:
        num = problem.tx_power * np.abs(rest_b + problem.b_b[0] * first) ** 2
        den = problem.jammer_power * np.abs(rest_j + problem.b_j[0] * first) ** 2 + problem.noise_power
        best = max(best, float(np.max(num / den)))
    return best
