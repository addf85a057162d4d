#!/usr/bin/env python3
"""
Scenario configuration for the RIS-assisted UAV planner.
Holds every physical constant and learning hyperparameter, validates them,
and hands out deterministic random streams keyed by (seed, label).
"""

import hashlib
import json
import math
import os
import re
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Tuple

import numpy as np

from ris_uav_planner.core.errors import ConfigError

Vec3 = Tuple[float, float, float]

SEED_ENV_VAR = "RIS_UAV_SEED"
_QUANTITY_PATTERN = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB."""
    return 10.0 * math.log10(value)


def dbm_to_watts(value_dbm: float) -> float:
    """Convert dBm to watts."""
    return 10.0 ** ((value_dbm - 30.0) / 10.0)


def watts_to_dbm(value_w: float) -> float:
    """Convert watts to dBm."""
    return 10.0 * math.log10(value_w) + 30.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry, array size, timing and link powers of one scenario."""
    bs_position: Vec3 = (0.0, 0.0, 0.0)
    jammer_position: Vec3 = (-25.0, -25.0, 0.0)
    ris_reference: Vec3 = (50.0, 50.0, 30.0)
    ris_rows: int = 4
    ris_cols: int = 5
    uav_start: Vec3 = (-200.0, -100.0, 5.0)
    uav_goal: Vec3 = (100.0, 60.0, 50.0)
    mission_time: float = 30.0
    slot_length: float = 0.1
    tx_power: float = 0.1  # W, not given by the source scenario
    jammer_power: float = 0.1  # W, not given by the source scenario
    noise_power: float = dbm_to_watts(-169.0)
    element_spacing_ratio: float = 0.5
    ris_link_redraw: str = "episode"  # 'episode', 'slot'
    random_goal: bool = False
    goal_box: Tuple[Vec3, Vec3] = ((50.0, 20.0, 30.0), (150.0, 100.0, 70.0))

    def __post_init__(self) -> None:
        slots = self.mission_time / self.slot_length if self.slot_length > 0 else float("nan")
        if not self.slot_length > 0 or not self.mission_time > 0:
            raise ConfigError(
                f"scenario.mission_time={self.mission_time} and scenario.slot_length={self.slot_length} must both be positive"
            )
        if abs(round(slots) * self.slot_length - self.mission_time) > 1e-9 * self.mission_time:
            raise ConfigError(
                f"scenario.mission_time={self.mission_time} is not divisible by scenario.slot_length={self.slot_length}"
            )
        if self.ris_rows < 1 or self.ris_cols < 1:
            raise ConfigError(f"scenario.ris_rows={self.ris_rows} and scenario.ris_cols={self.ris_cols} must be >= 1")
        for key in ("tx_power", "jammer_power", "noise_power"):
            value = getattr(self, key)
            if not value > 0:
                raise ConfigError(f"scenario.{key}={value} must be positive")
        if self.jammer_position[2] != 0.0:
            raise ConfigError(f"scenario.jammer_position={list(self.jammer_position)} must have z = 0 (terrestrial jammer)")
        if not self.element_spacing_ratio > 0:
            raise ConfigError(f"scenario.element_spacing_ratio={self.element_spacing_ratio} must be positive")
        if self.ris_link_redraw not in ("episode", "slot"):
            raise ConfigError(f"scenario.ris_link_redraw={self.ris_link_redraw!r} must be 'episode' or 'slot'")
        low, high = self.goal_box
        if any(lo > hi for lo, hi in zip(low, high)):
            raise ConfigError(f"scenario.goal_box={[list(low), list(high)]} has a lower corner above its upper corner")

    @property
    def slot_count(self) -> int:
        """Number of slots T_w = T / delta."""
        return int(round(self.mission_time / self.slot_length))

    @property
    def n_elements(self) -> int:
        return self.ris_rows * self.ris_cols


@dataclass(frozen=True)
class KinematicLimits:
    """Acceleration, speed and pitch bounds of the fixed-wing UAV."""
    a_max: float = 2.0
    v_max: float = 40.0
    v_min: float = 2.0
    pitch_max: float = math.radians(45.0)

    def __post_init__(self) -> None:
        if not self.a_max > 0:
            raise ConfigError(f"kinematics.a_max={self.a_max} must be positive")
        if not self.v_min > 0:
            raise ConfigError(f"kinematics.v_min={self.v_min} must be positive")
        if self.v_min >= self.v_max:
            raise ConfigError(f"kinematics.v_min={self.v_min} must be below kinematics.v_max={self.v_max} (v_min ≥ v_max)")
        if not 0.0 < self.pitch_max < math.pi / 2:
            raise ConfigError(f"kinematics.pitch_max={self.pitch_max} must lie in (0, pi/2) radians")


@dataclass(frozen=True)
class ChannelParams:
    """Path-loss and Rician fading coefficients."""
    ref_path_loss: float = db_to_linear(-30.0)
    exponent_direct: float = 3.5
    exponent_ris: float = 2.8
    rician_coeff_1: float = 1.0
    rician_coeff_2: float = 4.4
    rician_ris: float = db_to_linear(3.0)

    def __post_init__(self) -> None:
        if not self.ref_path_loss > 0:
            raise ConfigError(f"channel.ref_path_loss={self.ref_path_loss} must be positive")
        if not self.exponent_direct > 2:
            raise ConfigError(f"channel.exponent_direct={self.exponent_direct} must exceed 2")
        if not self.rician_ris >= 0:
            raise ConfigError(f"channel.rician_ris={self.rician_ris} must be non-negative")


@dataclass(frozen=True)
class HyperParams:
    """DDPG/TD3 hyperparameters and training-loop knobs."""
    discount: float = 0.99
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    tau_actor: float = 5e-3
    tau_critic: float = 5e-3
    replay_capacity: int = 100_000
    episodes: int = 3000
    steps_per_episode: int = 300
    batch_size: int = 128
    exploration_noise_var: float = 0.2
    policy_noise_var: float = 0.2
    noise_clip: float = 0.5
    policy_delay: int = 2
    reward_weight: float = 1.0
    actor_hidden: Tuple[int, ...] = (64, 128, 64)
    critic_hidden: Tuple[int, ...] = (64, 128)
    warmup_steps: int = 1000
    bootstrap_on_time_limit: bool = True
    checkpoint_interval: int = 500
    updates_per_step: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.discount < 1.0:
            raise ConfigError(f"hyperparams.discount={self.discount} must lie in [0, 1)")
        for key in ("tau_actor", "tau_critic"):
            value = getattr(self, key)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"hyperparams.{key}={value} must lie in (0, 1]")
        for key in ("actor_lr", "critic_lr"):
            value = getattr(self, key)
            if not value > 0:
                raise ConfigError(f"hyperparams.{key}={value} must be positive")
        for key in ("replay_capacity", "episodes", "steps_per_episode", "batch_size", "checkpoint_interval", "updates_per_step"):
            value = getattr(self, key)
            if value < 1:
                raise ConfigError(f"hyperparams.{key}={value} must be >= 1")
        if self.batch_size > self.replay_capacity:
            raise ConfigError(
                f"hyperparams.batch_size={self.batch_size} exceeds hyperparams.replay_capacity={self.replay_capacity}"
            )
        if self.policy_delay < 1:
            raise ConfigError(f"hyperparams.policy_delay={self.policy_delay} must be >= 1")
        for key in ("exploration_noise_var", "policy_noise_var", "noise_clip", "warmup_steps"):
            value = getattr(self, key)
            if value < 0:
                raise ConfigError(f"hyperparams.{key}={value} must be non-negative")
        for key in ("actor_hidden", "critic_hidden"):
            dims = getattr(self, key)
            if not dims or any(d < 1 for d in dims):
                raise ConfigError(f"hyperparams.{key}={list(dims)} must be a non-empty list of positive sizes")


@dataclass(frozen=True)
class ScenarioBundle:
    """Everything a run needs: the four validated sections plus the master seed."""
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    kinematics: KinematicLimits = field(default_factory=KinematicLimits)
    channel: ChannelParams = field(default_factory=ChannelParams)
    hyper: HyperParams = field(default_factory=HyperParams)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.hyper.steps_per_episode > self.scenario.slot_count:
            raise ConfigError(
                f"hyperparams.steps_per_episode={self.hyper.steps_per_episode} exceeds the "
                f"slot count T/delta={self.scenario.slot_count}"
            )

    def with_mission_time(self, mission_time: float) -> "ScenarioBundle":
        """Copy with a new mission duration; the episode spans every slot of it."""
        scenario = replace(self.scenario, mission_time=mission_time)
        hyper = replace(self.hyper, steps_per_episode=scenario.slot_count)
        return replace(self, scenario=scenario, hyper=hyper)


# Section name -> (dataclass, {field: kind}). Kinds drive unit parsing.
_SECTIONS: Dict[str, Tuple[type, Dict[str, str]]] = {
    "scenario": (ScenarioConfig, {
        "bs_position": "vec3",
        "jammer_position": "vec3",
        "ris_reference": "vec3",
        "ris_rows": "int",
        "ris_cols": "int",
        "uav_start": "vec3",
        "uav_goal": "vec3",
        "mission_time": "float",
        "slot_length": "float",
        "tx_power": "power",
        "jammer_power": "power",
        "noise_power": "power",
        "element_spacing_ratio": "float",
        "ris_link_redraw": "str",
        "random_goal": "bool",
        "goal_box": "box",
    }),
    "kinematics": (KinematicLimits, {
        "a_max": "float",
        "v_max": "float",
        "v_min": "float",
        "pitch_max": "angle",
    }),
    "channel": (ChannelParams, {
        "ref_path_loss": "ratio",
        "exponent_direct": "float",
        "exponent_ris": "float",
        "rician_coeff_1": "float",
        "rician_coeff_2": "float",
        "rician_ris": "ratio",
    }),
    "hyperparams": (HyperParams, {
        "discount": "float",
        "actor_lr": "float",
        "critic_lr": "float",
        "tau_actor": "float",
        "tau_critic": "float",
        "replay_capacity": "int",
        "episodes": "int",
        "steps_per_episode": "int",
        "batch_size": "int",
        "exploration_noise_var": "float",
        "policy_noise_var": "float",
        "noise_clip": "float",
        "policy_delay": "int",
        "reward_weight": "float",
        "actor_hidden": "int_list",
        "critic_hidden": "int_list",
        "warmup_steps": "int",
        "bootstrap_on_time_limit": "bool",
        "checkpoint_interval": "int",
        "updates_per_step": "int",
    }),
}
_BUNDLE_ATTR = {"scenario": "scenario", "kinematics": "kinematics", "channel": "channel", "hyperparams": "hyper"}


def _parse_quantity(key: str, value: Any, kind: str) -> float:
    """Parse a number or a unit-suffixed string ('-30 dB', '20 dBm', '45 deg')."""
    if isinstance(value, bool):
        raise ConfigError(f"{key}={value!r} must be a number")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{key}={value!r} must be a number or a unit string")

    match = _QUANTITY_PATTERN.match(value)
    if not match:
        raise ConfigError(f"{key}={value!r} is not a recognised quantity")
    number, unit = float(match.group(1)), match.group(2)

    allowed = {
        "power": {"": lambda v: v, "W": lambda v: v, "dBm": dbm_to_watts, "dBW": db_to_linear},
        "ratio": {"": lambda v: v, "dB": db_to_linear},
        "angle": {"": lambda v: v, "rad": lambda v: v, "deg": math.radians},
        "float": {"": lambda v: v},
    }[kind]
    if unit not in allowed:
        raise ConfigError(f"{key}={value!r} has unit {unit!r}; expected one of {sorted(u for u in allowed if u)}")
    return allowed[unit](number)


def _parse_field(key: str, value: Any, kind: str) -> Any:
    if kind in ("float", "power", "ratio", "angle"):
        return _parse_quantity(key, value, kind)
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, (int, float)) or float(value) != int(value):
            raise ConfigError(f"{key}={value!r} must be an integer")
        return int(value)
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{key}={value!r} must be true or false")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{key}={value!r} must be a string")
        return value
    if kind == "vec3":
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise ConfigError(f"{key}={value!r} must be a list of three numbers")
        return tuple(_parse_quantity(key, v, "float") for v in value)
    if kind == "box":
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ConfigError(f"{key}={value!r} must hold two corners")
        return tuple(_parse_field(key, corner, "vec3") for corner in value)
    if kind == "int_list":
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{key}={value!r} must be a list of integers")
        return tuple(_parse_field(key, v, "int") for v in value)
    raise ConfigError(f"{key}: unsupported field kind {kind!r}")  # pragma: no cover


def _build_section(name: str, raw: Any) -> Any:
    cls, kinds = _SECTIONS[name]
    if not isinstance(raw, dict):
        raise ConfigError(f"section {name!r} must be an object, got {raw!r}")
    unknown = sorted(set(raw) - set(kinds))
    if unknown:
        raise ConfigError(f"unknown key(s) in section {name!r}: {', '.join(unknown)}")
    values = {key: _parse_field(f"{name}.{key}", value, kinds[key]) for key, value in raw.items()}
    return cls(**values)


def bundle_from_dict(data: Dict[str, Any]) -> ScenarioBundle:
    """Build a validated bundle from an already-decoded document."""
    if not isinstance(data, dict):
        raise ConfigError("scenario document must be a JSON object")
    unknown = sorted(set(data) - set(_SECTIONS) - {"seed"})
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")

    sections = {_BUNDLE_ATTR[name]: _build_section(name, data.get(name, {})) for name in _SECTIONS}
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed={seed!r} must be a non-negative integer")

    override = os.environ.get(SEED_ENV_VAR)
    if override is not None and override.strip():
        try:
            seed = int(override)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={override!r} must be an integer")
    return ScenarioBundle(seed=seed, **sections)


def load_scenario(text: str) -> ScenarioBundle:
    """Parse a scenario document and return a validated bundle."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Invalid JSON in scenario document: {exc}")
    return bundle_from_dict(data)


def load_scenario_file(path: str) -> ScenarioBundle:
    """Load a scenario file from disk."""
    if not os.path.exists(path):
        raise FileNotFoundError(
            f"Scenario file '{path}' not found. "
            "Copy 'configs/default_scenario.json' and adjust it for your experiment."
        )
    with open(path, 'r', encoding='utf-8') as f:
        return load_scenario(f.read())


def bundle_to_dict(bundle: ScenarioBundle) -> Dict[str, Any]:
    """Plain dictionary of linear SI values; lists in place of tuples."""
    def plain(value: Any) -> Any:
        if isinstance(value, (tuple, list)):
            return [plain(v) for v in value]
        return value

    data: Dict[str, Any] = {}
    for name in _SECTIONS:
        section = getattr(bundle, _BUNDLE_ATTR[name])
        data[name] = {key: plain(value) for key, value in asdict(section).items()}
    data["seed"] = bundle.seed
    return data


def dump_scenario(bundle: ScenarioBundle) -> str:
    """Canonical JSON text; re-loads to an equal bundle."""
    return json.dumps(bundle_to_dict(bundle), indent=2, sort_keys=True) + "\n"


def save_scenario(bundle: ScenarioBundle, path: str) -> None:
    """Write the canonical scenario document to a file."""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dump_scenario(bundle))


def config_hash(bundle: ScenarioBundle) -> str:
    """Short content hash used for provenance in metrics files."""
    return hashlib.sha256(dump_scenario(bundle).encode('utf-8')).hexdigest()[:16]


def section_field_names(name: str) -> List[str]:
    """Documented keys of one section, in declaration order."""
    cls, _ = _SECTIONS[name]
    return [f.name for f in fields(cls)]


def rng_stream(master_seed: int, label: str) -> np.random.Generator:
    """
    Independent, reproducible random stream for a (seed, label) pair.

    The label is hashed with SHA-256 so the mapping is identical across
    platforms and Python hash randomisation.
    """
    digest = hashlib.sha256(label.encode('utf-8')).digest()
    label_words = [int.from_bytes(digest[i:i + 4], 'little') for i in range(0, 16, 4)]
    sequence = np.random.SeedSequence([int(master_seed), *label_words])
    return np.random.Generator(np.random.PCG64(sequence))
