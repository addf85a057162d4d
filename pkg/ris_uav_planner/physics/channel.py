#!/usr/bin/env python3
"""
Channel models for the BS, jammer, RIS and UAV links.
Distances, path loss, the elevation-dependent Rician factor, URA steering
vectors and Rician small-scale fading, assembled into per-slot snapshots.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ris_uav_planner.core.config import ChannelParams, ScenarioConfig
from ris_uav_planner.core.errors import DegenerateGeometryError
from ris_uav_planner.physics.kinematics import as_vec3


@dataclass(frozen=True)
class SpatialFrequencies:
    """Direction cosines along the array x and y axes."""
    phi_x: float
    phi_y: float

    def __post_init__(self) -> None:
        for name in ("phi_x", "phi_y"):
            value = getattr(self, name)
            if not abs(value) <= 1.0 + 1e-12:
                raise ValueError(f"{name}={value} must lie in [-1, 1]")


@dataclass(frozen=True)
class LinkDistances:
    """Distances of the five links for one UAV position (meters)."""
    d_bu: float
    d_br: float
    d_jr: float
    d_ju: float
    d_ru: float


@dataclass(frozen=True)
class ChannelSnapshot:
    """All complex channel gains of one time slot."""
    h_bu: complex
    h_ju: complex
    h_br: np.ndarray
    h_jr: np.ndarray
    h_ru: np.ndarray
    slot_index: int = 0

    def __post_init__(self) -> None:
        n = len(self.h_ru)
        if len(self.h_br) != n or len(self.h_jr) != n:
            raise ValueError(
                f"RIS vectors must share one length, got h_br={len(self.h_br)}, h_jr={len(self.h_jr)}, h_ru={n}"
            )

    @property
    def n_elements(self) -> int:
        return len(self.h_ru)

    def without_ris(self) -> "ChannelSnapshot":
        """Same slot with every reflected path removed."""
        zeros = np.zeros(self.n_elements, dtype=complex)
        return replace(self, h_br=zeros, h_jr=zeros.copy(), h_ru=zeros.copy())

    def is_finite(self) -> bool:
        scalars = np.array([self.h_bu, self.h_ju])
        return bool(
            np.all(np.isfinite(scalars))
            and np.all(np.isfinite(self.h_br))
            and np.all(np.isfinite(self.h_jr))
            and np.all(np.isfinite(self.h_ru))
        )


def distances(q_t: Sequence[float], cfg: ScenarioConfig) -> LinkDistances:
    """Distances of the B-U, B-R, J-R, J-U and R-U links."""
    q = as_vec3(q_t)
    q_b = as_vec3(cfg.bs_position)
    q_j = as_vec3(cfg.jammer_position)
    q_r = as_vec3(cfg.ris_reference)
    return LinkDistances(
        d_bu=float(np.linalg.norm(q - q_b)),
        d_br=float(np.linalg.norm(q_r - q_b)),
        d_jr=float(np.linalg.norm(q_j - q_r)),
        d_ju=float(np.linalg.norm(q - q_j)),
        d_ru=float(np.linalg.norm(q - q_r)),
    )


def rician_factor_bu(z_t: float, d_bu: float, params: ChannelParams) -> float:
    """Elevation-dependent Rician factor xi1 * exp(xi2 * asin(z / d))."""
    if not d_bu > 0:
        raise DegenerateGeometryError(f"d_bu={d_bu}: UAV coincides with the base station")
    elevation = math.asin(max(-1.0, min(1.0, z_t / d_bu)))
    return params.rician_coeff_1 * math.exp(params.rician_coeff_2 * elevation)


def steering_vector(n_x: int, n_y: int, phi: SpatialFrequencies, spacing_ratio: float = 0.5) -> np.ndarray:
    """
    URA response, column-major over elements.

    Element (k_x, k_y) sits at flat index k_x * n_y + k_y and carries
    exp(-j 2 pi (d/lambda) (k_x phi_x + k_y phi_y)); at half-wavelength
    spacing the phase step is pi.
    """
    step = 2.0 * math.pi * spacing_ratio
    along_x = np.exp(-1j * step * np.arange(n_x) * phi.phi_x)
    along_y = np.exp(-1j * step * np.arange(n_y) * phi.phi_y)
    return np.kron(along_x, along_y)


def _cscg(rng: np.random.Generator, size: Union[None, int, Tuple[int, ...]] = None) -> np.ndarray:
    """Zero-mean, unit-variance circularly symmetric complex Gaussian draws."""
    shape = () if size is None else ((size,) if isinstance(size, int) else tuple(size))
    draws = rng.standard_normal(shape + (2,))
    return (draws[..., 0] + 1j * draws[..., 1]) / math.sqrt(2.0)


def _rician_weights(factor: float) -> Tuple[float, float]:
    if math.isinf(factor):
        return 1.0, 0.0
    return math.sqrt(factor / (1.0 + factor)), math.sqrt(1.0 / (1.0 + factor))


def sample_direct(
    d: float,
    beta_t: float,
    exponent: float,
    ref_path_loss: float,
    rng: np.random.Generator,
    los_component: complex = 1.0,
    size: Optional[int] = None
) -> Union[complex, np.ndarray]:
    """
    Rician B-U or J-U gain: path loss times (LoS + scattered) mix.

    With `size` set, returns that many independent draws as an array.
    """
    if not d > 0:
        raise DegenerateGeometryError(f"d={d}: link endpoints coincide")
    los_weight, nlos_weight = _rician_weights(beta_t)
    scatter = complex(_cscg(rng)) if size is None else _cscg(rng, size)
    amplitude = math.sqrt(ref_path_loss * d ** (-exponent))
    return amplitude * (los_weight * los_component + nlos_weight * scatter)


def ris_arrival_frequencies(cfg: ScenarioConfig) -> Tuple[SpatialFrequencies, SpatialFrequencies]:
    """AoA spatial frequencies of the BS->RIS and jammer->RIS links."""
    q_b = as_vec3(cfg.bs_position)
    q_j = as_vec3(cfg.jammer_position)
    q_r = as_vec3(cfg.ris_reference)
    d = distances(cfg.bs_position, cfg)
    if not d.d_br > 0 or not d.d_jr > 0:
        raise DegenerateGeometryError("RIS reference coincides with the base station or the jammer")
    # B-R uses (q_R - q_B), J-R uses (q_J - q_R), as the channel model writes them.
    bs = SpatialFrequencies((q_r[0] - q_b[0]) / d.d_br, (q_r[1] - q_b[1]) / d.d_br)
    jam = SpatialFrequencies((q_j[0] - q_r[0]) / d.d_jr, (q_j[1] - q_r[1]) / d.d_jr)
    return bs, jam


def sample_ris_links(
    cfg: ScenarioConfig,
    params: ChannelParams,
    rng: np.random.Generator,
    draws: Optional[int] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rician B-R and J-R vectors with URA line-of-sight parts.

    With `draws` set, each link comes back as a (draws, N) array of
    independent realisations.
    """
    d = distances(cfg.bs_position, cfg)
    phi_br, phi_jr = ris_arrival_frequencies(cfg)
    los_weight, nlos_weight = _rician_weights(params.rician_ris)
    n = cfg.n_elements

    links = []
    for distance, phi in ((d.d_br, phi_br), (d.d_jr, phi_jr)):
        los = steering_vector(cfg.ris_cols, cfg.ris_rows, phi, cfg.element_spacing_ratio)
        nlos = _cscg(rng, n if draws is None else (draws, n))
        amplitude = math.sqrt(params.ref_path_loss * distance ** (-params.exponent_ris))
        links.append(amplitude * (los_weight * los + nlos_weight * nlos))
    return links[0], links[1]


def ris_uav_link(q_t: Sequence[float], cfg: ScenarioConfig, params: ChannelParams) -> np.ndarray:
    """Deterministic LoS R-U vector with free-space (exponent 2) path loss."""
    q = as_vec3(q_t)
    q_r = as_vec3(cfg.ris_reference)
    d_ru = float(np.linalg.norm(q - q_r))
    if not d_ru > 0:
        raise DegenerateGeometryError("UAV coincides with the RIS reference point (d_RU = 0)")
    phi = SpatialFrequencies((q[0] - q_r[0]) / d_ru, (q[1] - q_r[1]) / d_ru)
    g_ru = steering_vector(cfg.ris_cols, cfg.ris_rows, phi, cfg.element_spacing_ratio)
    return math.sqrt(params.ref_path_loss * d_ru ** -2.0) * g_ru


class ChannelModel:
    """
    Per-episode channel state.

    B-R and J-R links are quasi-static: their scatter is drawn at reset and,
    unless `ris_link_redraw` is 'slot', kept for the whole episode. Direct
    links and R-U geometry follow the UAV every slot.
    """

    def __init__(self, cfg: ScenarioConfig, params: ChannelParams):
        self.cfg = cfg
        self.params = params
        self._rng: Optional[np.random.Generator] = None
        self._h_br: Optional[np.ndarray] = None
        self._h_jr: Optional[np.ndarray] = None

    def reset(self, rng: np.random.Generator) -> None:
        self._rng = rng
        self._h_br, self._h_jr = sample_ris_links(self.cfg, self.params, rng)

    def snapshot(self, q_t: Sequence[float], slot_index: int) -> ChannelSnapshot:
        """Draw the gains of one slot for the UAV at q_t."""
        if self._rng is None:
            raise RuntimeError("ChannelModel.reset() must be called before snapshot()")
        if self.cfg.ris_link_redraw == "slot" and slot_index > 0:
            self._h_br, self._h_jr = sample_ris_links(self.cfg, self.params, self._rng)

        q = as_vec3(q_t)
        d = distances(q, self.cfg)
        z_rel = q[2] - self.cfg.bs_position[2]
        beta_t = rician_factor_bu(z_rel, d.d_bu, self.params)
        h_bu = sample_direct(d.d_bu, beta_t, self.params.exponent_direct, self.params.ref_path_loss, self._rng)
        h_ju = sample_direct(d.d_ju, beta_t, self.params.exponent_direct, self.params.ref_path_loss, self._rng)
        return ChannelSnapshot(
            h_bu=h_bu,
            h_ju=h_ju,
            h_br=self._h_br.copy(),
            h_jr=self._h_jr.copy(),
            h_ru=ris_uav_link(q, self.cfg, self.params),
            slot_index=slot_index,
        )
