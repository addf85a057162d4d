#!/usr/bin/env python3
"""
Experiment orchestration for the planner.
Training loops, zero-noise evaluation, the no-RIS / perfect-CSI baselines,
mission-duration sweeps, episode metrics and the oracle verification suite.
"""

import math
import os
import time
from dataclasses import dataclass, field, fields
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ris_uav_planner import __version__
from ris_uav_planner.baselines.ris_oracle import dinkelbach_optimize, grid_verify
from ris_uav_planner.core.config import ScenarioBundle, config_hash, rng_stream
from ris_uav_planner.core.errors import NonFiniteError, ShapeMismatchError, TrainingAbortedError
from ris_uav_planner.env.mdp_env import EpisodeSummary, TraceRow, UavRisEnvironment, env_step, reset
from ris_uav_planner.learning.agents import (
    STATE_DIM,
    DdpgAgent,
    ReplayBuffer,
    Transition,
    build_agent,
    load_agent,
    random_action,
    save_agent,
    select_action,
)
from ris_uav_planner.learning.neural import MlpParameters, gradient_check
from ris_uav_planner.physics import kinematics
from ris_uav_planner.physics.channel import ChannelSnapshot
from ris_uav_planner.physics.radio_link import RisPhaseVector, alignment_phases, sinr
from ris_uav_planner.reporting.export import Provenance, write_csv
from ris_uav_planner.utils.logging import format_metrics, log_status

# Variant -> (learner, environment RIS mode).
ALGORITHMS: Dict[str, Tuple[str, str]] = {
    "ddpg": ("ddpg", "ris"),
    "td3": ("td3", "ris"),
    "td3-no-ris": ("td3", "none"),
    "td3-csi-baseline": ("td3", "oracle"),
}
TRAINING_HEADER = ["episode", "reward", "running_average", "cumulative_rate", "finishing_distance", "critic_loss"]
EVAL_HEADER = ["episode", "cumulative_rate", "cumulative_reward", "finishing_distance"]
SWEEP_HEADER = ["mission_time", "mean_rate", "std_rate", "mean_distance", "std_distance", "episodes"]
VERIFY_HEADER = ["check", "passed", "value", "threshold", "seconds"]

Policy = Callable[[np.ndarray, UavRisEnvironment], np.ndarray]


@dataclass
class TrainingResult:
    """Per-episode training curves plus where the artifacts went."""
    algorithm: str
    seed: int
    episode_rewards: List[float] = field(default_factory=list)
    running_average: List[float] = field(default_factory=list)
    cumulative_rates: List[float] = field(default_factory=list)
    finishing_distances: List[float] = field(default_factory=list)
    critic_losses: List[float] = field(default_factory=list)
    checkpoint_path: Optional[str] = None
    metrics_path: Optional[str] = None
    agent: Optional[DdpgAgent] = field(default=None, repr=False)

    @property
    def best_episode(self) -> int:
        """1-based index of the highest per-episode reward."""
        return reward_max_episode(self.episode_rewards)

    @property
    def convergence_episode(self) -> int:
        return convergence_episode(self.running_average)

    def rows(self) -> List[List[float]]:
        return [
            [i + 1, r, avg, rate, dist, loss]
            for i, (r, avg, rate, dist, loss) in enumerate(zip(
                self.episode_rewards, self.running_average, self.cumulative_rates,
                self.finishing_distances, self.critic_losses,
            ))
        ]


@dataclass
class EvalReport:
    """Zero-noise test episodes of one policy."""
    label: str
    cumulative_rates: List[float]
    cumulative_rewards: List[float]
    finishing_distances: List[float]
    trace: Optional[List[TraceRow]] = None
    snapshot: Optional[ChannelSnapshot] = None

    @property
    def n_episodes(self) -> int:
        return len(self.cumulative_rates)

    @property
    def mean_rate(self) -> float:
        return float(np.mean(self.cumulative_rates))

    @property
    def std_rate(self) -> float:
        return sample_std(self.cumulative_rates)

    @property
    def mean_distance(self) -> float:
        return float(np.mean(self.finishing_distances))

    @property
    def std_distance(self) -> float:
        return sample_std(self.finishing_distances)

    def rows(self) -> List[List[float]]:
        return [
            [i + 1, rate, reward, dist]
            for i, (rate, reward, dist) in enumerate(zip(self.cumulative_rates, self.cumulative_rewards, self.finishing_distances))
        ]

    def to_dict(self) -> Dict[str, object]:
        return {
            "label": self.label,
            "n_episodes": self.n_episodes,
            "mean_rate": self.mean_rate,
            "std_rate": self.std_rate,
            "mean_distance": self.mean_distance,
            "std_distance": self.std_distance,
            "cumulative_rates": list(self.cumulative_rates),
            "cumulative_rewards": list(self.cumulative_rewards),
            "finishing_distances": list(self.finishing_distances),
        }


@dataclass(frozen=True)
class SweepRow:
    """One mission duration of a sweep; spreads are sample standard deviations."""
    mission_time: float
    mean_rate: float
    std_rate: float
    mean_distance: float
    std_distance: float
    episodes: int

    def as_row(self) -> List[float]:
        return [self.mission_time, self.mean_rate, self.std_rate, self.mean_distance, self.std_distance, self.episodes]


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of one oracle check."""
    name: str
    passed: bool
    value: float
    threshold: float
    seconds: float
    detail: str = ""

    def as_row(self) -> List[object]:
        return [self.name, self.passed, self.value, self.threshold, self.seconds]


# --- metrics ---------------------------------------------------------------

def sample_std(values: Sequence[float]) -> float:
    """Sample standard deviation (ddof=1); 0.0 for a single value."""
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def running_average(values: Sequence[float]) -> List[float]:
    """r_bar_i = (1/i) * sum_{j<=i} r_j."""
    totals = np.cumsum(np.asarray(values, dtype=float))
    return [float(t / (i + 1)) for i, t in enumerate(totals)]


def cdf(values: Sequence[float]) -> List[Tuple[float, float]]:
    """Empirical CDF steps (v_(k), k/n), one pair per distinct value."""
    if len(values) == 0:
        raise ValueError("cdf needs at least one value")
    ordered = sorted(float(v) for v in values)
    n = len(ordered)
    steps: List[Tuple[float, float]] = []
    for k, value in enumerate(ordered, start=1):
        if steps and steps[-1][0] == value:
            steps[-1] = (value, k / n)
        else:
            steps.append((value, k / n))
    return steps


def reward_max_episode(rewards: Sequence[float]) -> int:
    if not rewards:
        raise ValueError("no episode rewards recorded")
    return int(np.argmax(rewards)) + 1


def convergence_episode(averages: Sequence[float], fraction: float = 0.9) -> int:
    """
    First 1-based episode whose running average reaches `fraction` of the final one.

    A final average <= 0 has no meaningful "90% of it", so there the level is
    measured as that fraction of the climb from the first episode instead.
    """
    if not averages:
        raise ValueError("no running averages recorded")
    start, final = averages[0], averages[-1]
    if final > 0:
        return next(i for i, value in enumerate(averages, start=1) if value >= fraction * final)
    level = start + fraction * (final - start)
    for i, value in enumerate(averages, start=1):
        if (final >= start and value >= level) or (final < start and value <= level):
            return i
    return len(averages)


def provenance(bundle: ScenarioBundle, seed: int) -> Provenance:
    return Provenance(config_hash=config_hash(bundle), seed=seed, version=__version__)


# --- training --------------------------------------------------------------

def _resolve(algorithm: str) -> Tuple[str, str]:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {sorted(ALGORITHMS)}")
    return ALGORITHMS[algorithm]


def _checkpoint_meta(algorithm: str, bundle: ScenarioBundle, seed: int, episode: int, ris_mode: str) -> Dict[str, object]:
    return {
        "variant": algorithm,
        "ris_mode": ris_mode,
        "episode": episode,
        "seed": seed,
        "rng_label": f"{algorithm}/init",
        "config_hash": config_hash(bundle),
        "n_elements": bundle.scenario.n_elements,
    }


def train(
    bundle: ScenarioBundle,
    algorithm: str = "td3",
    seed: Optional[int] = None,
    output_dir: Optional[str] = None,
    quiet: bool = True,
    oracle_objective: str = "sinr"
) -> TrainingResult:
    """
    Run hyper.episodes episodes of hyper.steps_per_episode steps.

    Environment streams are labelled by episode only, so every algorithm
    sees the same channel realisations for the same seed. A non-finite loss
    or parameter raises TrainingAbortedError naming the last good checkpoint.
    """
    learner, ris_mode = _resolve(algorithm)
    seed = bundle.seed if seed is None else seed
    hyper = bundle.hyper
    env = UavRisEnvironment(bundle, ris_mode, oracle_objective=oracle_objective)
    agent = build_agent(learner, STATE_DIM, env.action_dim, hyper, rng_stream(seed, f"{algorithm}/init"))
    buffer = ReplayBuffer(hyper.replay_capacity, STATE_DIM, env.action_dim)
    explore_rng = rng_stream(seed, f"{algorithm}/explore")
    replay_rng = rng_stream(seed, f"{algorithm}/replay")
    target_rng = rng_stream(seed, f"{algorithm}/target-noise")

    result = TrainingResult(algorithm=algorithm, seed=seed, agent=agent)
    last_checkpoint: Optional[str] = None
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
    log_status("info", f"Training {algorithm} (seed {seed}, {hyper.episodes} episodes x {hyper.steps_per_episode} steps)", quiet)
    report_every = max(1, hyper.episodes // 10)
    total_steps = 0

    for episode in range(hyper.episodes):
        obs = env.reset(rng_stream(seed, f"train-env/{episode}"), oracle_rng=rng_stream(seed, f"train-oracle/{episode}"))
        losses: List[float] = []
        done = False
        while not done:
            if total_steps < hyper.warmup_steps:
                action = random_action(env.action_dim, explore_rng)
            else:
                action = select_action(agent, obs, "explore", explore_rng)
            next_obs, reward, done = env.step(action)
            terminal = done and not hyper.bootstrap_on_time_limit
            try:
                buffer.push(Transition(obs, action, reward, next_obs, terminal))
                if len(buffer) >= hyper.batch_size:
                    for _ in range(hyper.updates_per_step):
                        diagnostics = agent.update(buffer.sample(hyper.batch_size, replay_rng), target_rng)
                        losses.append(diagnostics.critic_loss)
            except NonFiniteError as exc:
                log_status("error", f"Training aborted in episode {episode + 1}: {exc}", quiet)
                raise TrainingAbortedError(f"{algorithm} training aborted in episode {episode + 1}: {exc}", last_checkpoint) from exc
            obs = next_obs
            total_steps += 1

        if not all(net.is_finite() for net in agent.networks().values()):
            raise TrainingAbortedError(f"{algorithm} parameters became non-finite in episode {episode + 1}", last_checkpoint)

        summary = env.episode_summary()
        result.episode_rewards.append(summary.cumulative_reward)
        result.running_average.append(running_average(result.episode_rewards)[-1])
        result.cumulative_rates.append(summary.cumulative_rate)
        result.finishing_distances.append(summary.finishing_distance)
        result.critic_losses.append(float(np.mean(losses)) if losses else 0.0)
        if summary.oracle_warnings:
            log_status("warn", f"Episode {episode + 1}: Dinkelbach hit its iteration limit in {summary.oracle_warnings} slots", quiet)

        if output_dir and (episode + 1) % hyper.checkpoint_interval == 0:
            last_checkpoint = os.path.join(output_dir, f"{algorithm}-ep{episode + 1:05d}.ckpt.json")
            save_agent(agent, last_checkpoint, _checkpoint_meta(algorithm, bundle, seed, episode + 1, ris_mode))
        if (episode + 1) % report_every == 0 or episode + 1 == hyper.episodes:
            log_status("progress", f"{algorithm} episode {episode + 1}/{hyper.episodes} " + format_metrics({
                "reward": summary.cumulative_reward,
                "avg": result.running_average[-1],
                "rate": summary.cumulative_rate,
                "d_F": summary.finishing_distance,
            }), quiet)

    if output_dir:
        result.checkpoint_path = os.path.join(output_dir, f"{algorithm}-final.ckpt.json")
        save_agent(agent, result.checkpoint_path, _checkpoint_meta(algorithm, bundle, seed, hyper.episodes, ris_mode))
        result.metrics_path = write_csv(
            os.path.join(output_dir, f"{algorithm}-training.csv"), TRAINING_HEADER, result.rows(), provenance(bundle, seed)
        )
    log_status("ok", f"{algorithm} finished: best episode {result.best_episode}, "
                     f"90% of final average at episode {result.convergence_episode}", quiet)
    return result


# --- evaluation ------------------------------------------------------------

def rollout(
    env: UavRisEnvironment,
    policy: Policy,
    rng: np.random.Generator,
    oracle_rng: Optional[np.random.Generator] = None,
    snapshot_slot: Optional[int] = None
) -> Tuple[EpisodeSummary, Optional[ChannelSnapshot]]:
    """
    Play one full episode with a deterministic policy.

    Returns the episode summary and, when `snapshot_slot` is given, the
    channel snapshot of that slot (0 is the one drawn at reset).
    """
    if snapshot_slot is not None and not 0 <= snapshot_slot <= env.bundle.hyper.steps_per_episode:
        raise ValueError(f"snapshot_slot={snapshot_slot} must lie in [0, {env.bundle.hyper.steps_per_episode}]")
    obs = env.reset(rng, oracle_rng=oracle_rng)
    captured = env.state.snapshot if snapshot_slot == 0 else None
    done = False
    while not done:
        obs, _, done = env.step(policy(obs, env))
        if env.state.step_index == snapshot_slot:
            captured = env.state.snapshot
    return env.episode_summary(), captured


def agent_policy(agent: DdpgAgent) -> Policy:
    def act(obs: np.ndarray, env: UavRisEnvironment) -> np.ndarray:
        return select_action(agent, obs, "exploit")
    return act


def pursuit_policy(obs: np.ndarray, env: UavRisEnvironment) -> np.ndarray:
    """
    Acceleration-only guidance: steer toward the velocity that reaches the
    goal at mission end, phases left to the environment.
    """
    state = env.state
    bundle = env.bundle
    remaining = max(bundle.hyper.steps_per_episode - state.step_index, 1) * bundle.scenario.slot_length
    desired = (state.goal - state.uav.position) / remaining
    accel = (desired - state.uav.velocity) / bundle.scenario.slot_length
    normalized = np.clip(accel / bundle.kinematics.a_max, -1.0, 1.0)
    if env.ris_mode == "ris":
        return np.concatenate([np.zeros(bundle.scenario.n_elements), normalized])
    return normalized


def _evaluate_policy(
    env: UavRisEnvironment,
    policy: Policy,
    label: str,
    n_episodes: int,
    seed: int,
    trace_episode: Optional[int],
    snapshot_slot: Optional[int] = None
) -> EvalReport:
    if n_episodes < 1:
        raise ValueError(f"n_episodes={n_episodes} must be >= 1")
    rates, rewards, distances = [], [], []
    trace = snapshot = None
    # The snapshot comes from the traced episode, or the first one.
    snapshot_episode = 0 if trace_episode is None else trace_episode
    for episode in range(n_episodes):
        env.record_trace = trace_episode == episode
        summary, captured = rollout(
            env, policy, rng_stream(seed, f"eval-env/{episode}"), rng_stream(seed, f"eval-oracle/{episode}"),
            snapshot_slot if episode == snapshot_episode else None,
        )
        if captured is not None:
            snapshot = captured
        rates.append(summary.cumulative_rate)
        rewards.append(summary.cumulative_reward)
        distances.append(summary.finishing_distance)
        if env.record_trace:
            trace = list(env.state.trace)
    env.record_trace = False
    return EvalReport(label, rates, rewards, distances, trace, snapshot)


def evaluate(
    checkpoint: str,
    bundle: ScenarioBundle,
    n_episodes: int = 500,
    seed: Optional[int] = None,
    trace_episode: Optional[int] = None,
    oracle_objective: str = "sinr",
    snapshot_slot: Optional[int] = None
) -> EvalReport:
    """Zero-noise rollouts of a saved policy on the bundle's scenario."""
    agent, meta = load_agent(checkpoint, bundle.hyper)
    variant = str(meta.get("variant", agent.algorithm))
    ris_mode = str(meta.get("ris_mode", "ris"))
    env = UavRisEnvironment(bundle, ris_mode, oracle_objective=oracle_objective)
    if agent.state_dim != env.observation_dim or agent.action_dim != env.action_dim:
        raise ShapeMismatchError(
            f"checkpoint dims (state {agent.state_dim}, action {agent.action_dim}) do not match the scenario "
            f"(state {env.observation_dim}, action {env.action_dim}, N={bundle.scenario.n_elements})"
        )
    seed = bundle.seed if seed is None else seed
    return _evaluate_policy(env, agent_policy(agent), variant, n_episodes, seed, trace_episode, snapshot_slot)


def evaluate_baseline(
    bundle: ScenarioBundle,
    ris_mode: str = "none",
    n_episodes: int = 500,
    seed: Optional[int] = None,
    oracle_objective: str = "sinr",
    trace_episode: Optional[int] = None,
    snapshot_slot: Optional[int] = None
) -> EvalReport:
    """Pursuit-guided flights with the RIS removed ('none'), unconfigured ('ris') or CSI-optimised ('oracle')."""
    env = UavRisEnvironment(bundle, ris_mode, oracle_objective=oracle_objective)
    seed = bundle.seed if seed is None else seed
    label = {"none": "no-ris", "ris": "ris-unconfigured", "oracle": f"csi-{oracle_objective}"}[ris_mode]
    return _evaluate_policy(env, pursuit_policy, label, n_episodes, seed, trace_episode, snapshot_slot)


def sweep_mission_duration(
    bundle: ScenarioBundle,
    durations: Sequence[float],
    algorithm: str = "td3",
    n_episodes: int = 500,
    seed: Optional[int] = None,
    output_dir: Optional[str] = None,
    quiet: bool = True
) -> List[SweepRow]:
    """One train + evaluate cycle per mission duration."""
    seed = bundle.seed if seed is None else seed
    rows = []
    for mission_time in durations:
        scaled = bundle.with_mission_time(float(mission_time))
        run_dir = os.path.join(output_dir, f"T{mission_time:g}") if output_dir else None
        log_status("info", f"Sweep {algorithm}: T={mission_time:g} s ({scaled.scenario.slot_count} slots)", quiet)
        trained = train(scaled, algorithm, seed, run_dir, quiet)
        env = UavRisEnvironment(scaled, _resolve(algorithm)[1])
        report = _evaluate_policy(env, agent_policy(trained.agent), algorithm, n_episodes, seed, None)
        rows.append(SweepRow(float(mission_time), report.mean_rate, report.std_rate,
                             report.mean_distance, report.std_distance, report.n_episodes))
    return rows


# --- oracle suite ----------------------------------------------------------

def random_snapshot(n: int, rng: np.random.Generator, direct: bool = True, jammer: bool = True) -> ChannelSnapshot:
    """Unit-scale complex Gaussian gains for solver checks."""
    def draw(size=None):
        shape = () if size is None else (size,)
        parts = rng.standard_normal(shape + (2,))
        return (parts[..., 0] + 1j * parts[..., 1]) / math.sqrt(2.0)

    return ChannelSnapshot(
        h_bu=complex(draw()) if direct else 0j,
        h_ju=complex(draw()) if direct and jammer else 0j,
        h_br=draw(n),
        h_jr=draw(n) if jammer else np.zeros(n, dtype=complex),
        h_ru=draw(n),
    )


def _timed(name: str, threshold: float, check: Callable[[], Tuple[float, bool, str]]) -> VerificationResult:
    started = time.perf_counter()
    value, passed, detail = check()
    return VerificationResult(name, passed, value, threshold, time.perf_counter() - started, detail)


def check_gradients(rng: np.random.Generator, n_nets: int = 100) -> Tuple[float, bool, str]:
    worst = 0.0
    for i in range(n_nets):
        if i % 2 == 0:
            dims = [STATE_DIM, *rng.integers(2, 9, size=3), int(rng.integers(4, 12))]
            net = MlpParameters.initialize(dims, rng, "tanh", "tanh")
        else:
            dims = [STATE_DIM + int(rng.integers(4, 12)), *rng.integers(2, 9, size=2), 1]
            net = MlpParameters.initialize(dims, rng, "tanh", "identity")
        worst = max(worst, gradient_check(net, rng.standard_normal((3, dims[0])), rng))
    return worst, worst < 1e-4, f"{n_nets} networks"


def check_alignment(rng: np.random.Generator, n_snapshots: int = 50) -> Tuple[float, bool, str]:
    worst = 0.0
    for _ in range(n_snapshots):
        n = int(rng.integers(1, 9))
        snap = random_snapshot(n, rng, direct=False, jammer=False)
        bound = float(np.sum(np.abs(snap.h_ru) * np.abs(snap.h_br)) ** 2)
        for theta in (alignment_phases(0j, snap.h_ru, snap.h_br),
                      dinkelbach_optimize(snap, 1.0, 0.0, 1.0, rng=rng).theta):
            achieved = sinr(snap, theta, 1.0, 0.0, 1.0).desired_power
            worst = max(worst, abs(achieved - bound) / bound)
    return worst, worst < 1e-6, f"{n_snapshots} snapshots"


def check_dinkelbach_grid(rng: np.random.Generator, n_snapshots: int = 20, points: int = 64) -> Tuple[float, bool, str]:
    worst_gap = -math.inf
    monotone = True
    for i in range(n_snapshots):
        snap = random_snapshot(1 + i % 3, rng)
        result = dinkelbach_optimize(snap, 1.0, 1.0, 0.1, rng=rng)
        best = grid_verify(snap, 1.0, 1.0, 0.1, points)
        worst_gap = max(worst_gap, (best - result.ratio) / best)
        monotone = monotone and all(b >= a for a, b in zip(result.lambdas, result.lambdas[1:]))
    return worst_gap, worst_gap <= 1e-3 and monotone, f"lambda nondecreasing: {monotone}"


def check_kinematics(bundle: ScenarioBundle, rng: np.random.Generator, n_steps: int = 100_000) -> Tuple[float, bool, str]:
    limits = bundle.kinematics
    failures = 0
    for _ in range(n_steps):
        velocity = kinematics.project(rng.uniform(-2 * limits.v_max, 2 * limits.v_max, 3), limits)
        state = kinematics.UavState(rng.uniform(-300, 300, 3), velocity)
        accel = rng.uniform(-3 * limits.a_max, 3 * limits.a_max, 3)
        moved = kinematics.step(state, kinematics.clamp_accel(accel, limits), bundle.scenario.slot_length, limits)
        if not kinematics.is_feasible(moved.velocity, limits) or not np.array_equal(kinematics.project(moved.velocity, limits), moved.velocity):
            failures += 1
    return float(failures), failures == 0, f"{n_steps} steps"


def check_telescoping(bundle: ScenarioBundle, seed: int) -> Tuple[float, bool, str]:
    state, _ = reset(bundle, rng_stream(seed, "verify-env"))
    d_start = state.finishing_distance
    action_rng = rng_stream(seed, "verify-actions")
    rewards, rates = [], []
    while not state.done:
        phases = RisPhaseVector(action_rng.uniform(-math.pi, math.pi, bundle.scenario.n_elements))
        _, _, reward, _ = env_step(state, phases, action_rng.uniform(-1, 1, 3) * bundle.kinematics.a_max, bundle)
        rewards.append(reward)
        rates.append(state.metrics.rate)
    expected = math.fsum(rates) + bundle.hyper.reward_weight * (d_start - state.finishing_distance)
    gap = abs(math.fsum(rewards) - expected)
    return gap, gap <= 1e-9, f"{len(rewards)} steps"


def run_oracle_suite(bundle: ScenarioBundle, seed: Optional[int] = None, quick: bool = False) -> List[VerificationResult]:
    """Gradient, alignment, Dinkelbach-vs-grid, feasibility and telescoping checks."""
    seed = bundle.seed if seed is None else seed
    scale = 10 if quick else 1
    return [
        _timed("gradient_check", 1e-4, lambda: check_gradients(rng_stream(seed, "verify-grad"), 100 // scale)),
        _timed("phase_alignment", 1e-6, lambda: check_alignment(rng_stream(seed, "verify-align"), 50 // scale)),
        _timed("dinkelbach_vs_grid", 1e-3, lambda: check_dinkelbach_grid(rng_stream(seed, "verify-grid"), max(20 // scale, 3))),
        _timed("kinematic_feasibility", 0.0, lambda: check_kinematics(bundle, rng_stream(seed, "verify-kin"), 100_000 // scale)),
        _timed("reward_telescoping", 1e-9, lambda: check_telescoping(bundle, seed)),
    ]


def verification_rows(results: Sequence[VerificationResult]) -> List[List[object]]:
    return [result.as_row() for result in results]


def summary_dict(result: TrainingResult) -> Dict[str, object]:
    """JSON-ready view of a training run without the live agent."""
    data = {f.name: getattr(result, f.name) for f in fields(result) if f.name != "agent"}
    data["best_episode"] = result.best_episode
    data["convergence_episode"] = result.convergence_episode
    return data
