#!/usr/bin/env python3
"""
Experience replay and the DDPG / TD3 learners.
Actions live in the normalised box [-1, 1]^(N+3); denormalize_action maps
them to RIS phases and UAV accelerations.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ris_uav_planner.core.config import HyperParams
from ris_uav_planner.core.errors import NonFiniteError, ShapeMismatchError
from ris_uav_planner.learning.neural import (
    MlpParameters,
    OptimizerState,
    apply_update,
    backward,
    forward,
    predict,
    read_checkpoint,
    soft_update,
    write_checkpoint,
)
from ris_uav_planner.physics.radio_link import RisPhaseVector

STATE_DIM = 7
ACCEL_DIM = 3


@dataclass(frozen=True)
class Transition:
    """One experience tuple (s, a, r, s', terminal)."""
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    terminal: bool = False


@dataclass(frozen=True)
class TransitionBatch:
    """Column-stacked transitions sampled from the replay buffer."""
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray
    indices: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.rewards)

    @classmethod
    def from_transitions(cls, transitions: List[Transition]) -> "TransitionBatch":
        return cls(
            states=np.array([t.state for t in transitions], dtype=float),
            actions=np.array([t.action for t in transitions], dtype=float),
            rewards=np.array([t.reward for t in transitions], dtype=float),
            next_states=np.array([t.next_state for t in transitions], dtype=float),
            terminals=np.array([float(t.terminal) for t in transitions]),
        )


class ReplayBuffer:
    """Fixed-capacity ring of transitions; the oldest entry is evicted first."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        if capacity < 1:
            raise ValueError(f"capacity={capacity} must be >= 1")
        self.capacity = capacity
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros((capacity, action_dim))
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.terminals = np.zeros(capacity)
        self.size = 0
        self._next = 0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> "ReplayBuffer":
        state = np.asarray(transition.state, dtype=float)
        action = np.asarray(transition.action, dtype=float)
        if state.shape != (self.state_dim,) or action.shape != (self.action_dim,):
            raise ShapeMismatchError(
                f"transition shapes state={state.shape}, action={action.shape} do not match "
                f"buffer dims ({self.state_dim}, {self.action_dim})"
            )
        if not math.isfinite(transition.reward):
            raise NonFiniteError(f"reward={transition.reward} is not finite")
        i = self._next
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = transition.reward
        self.next_states[i] = transition.next_state
        self.terminals[i] = float(transition.terminal)
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)
        return self

    def sample(self, n: int, rng: np.random.Generator) -> TransitionBatch:
        """Uniform draw with replacement."""
        if self.size < n:
            raise ValueError(f"cannot sample {n} transitions from a buffer holding {self.size}")
        idx = rng.integers(0, self.size, size=n)
        return TransitionBatch(
            states=self.states[idx],
            actions=self.actions[idx],
            rewards=self.rewards[idx],
            next_states=self.next_states[idx],
            terminals=self.terminals[idx],
            indices=idx,
        )

    def contents(self) -> List[Transition]:
        """Stored transitions, oldest first."""
        start = self._next if self.size == self.capacity else 0
        order = [(start + k) % self.capacity for k in range(self.size)]
        return [
            Transition(self.states[i].copy(), self.actions[i].copy(), float(self.rewards[i]),
                       self.next_states[i].copy(), bool(self.terminals[i]))
            for i in order
        ]


def buffer_push(buf: ReplayBuffer, transition: Transition) -> ReplayBuffer:
    return buf.push(transition)


def buffer_sample(buf: ReplayBuffer, n: int, rng: np.random.Generator) -> TransitionBatch:
    return buf.sample(n, rng)


@dataclass(frozen=True)
class UpdateDiagnostics:
    """What one learner update did."""
    critic_loss: float
    actor_objective: Optional[float]
    actor_updated: bool
    mean_target: float


class DdpgAgent:
    """Actor, one critic and their target copies."""

    algorithm = "ddpg"
    n_critics = 1

    def __init__(self, state_dim: int, action_dim: int, hyper: HyperParams, rng: np.random.Generator):
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.hyper = hyper
        self.actor = MlpParameters.initialize([state_dim, *hyper.actor_hidden, action_dim], rng, "relu", "tanh")
        self.critics = [
            MlpParameters.initialize([state_dim + action_dim, *hyper.critic_hidden, 1], rng, "relu", "identity")
            for _ in range(self.n_critics)
        ]
        self.target_actor = self.actor.copy()
        self.target_critics = [critic.copy() for critic in self.critics]
        self.actor_opt = OptimizerState.for_network(self.actor, hyper.actor_lr)
        self.critic_opts = [OptimizerState.for_network(critic, hyper.critic_lr) for critic in self.critics]
        self.update_count = 0
        self.actor_update_count = 0

    def networks(self) -> Dict[str, MlpParameters]:
        nets = {"actor": self.actor, "target_actor": self.target_actor}
        for i, (critic, target) in enumerate(zip(self.critics, self.target_critics), start=1):
            nets[f"critic_{i}"] = critic
            nets[f"target_critic_{i}"] = target
        return nets

    def optimizers(self) -> Dict[str, OptimizerState]:
        opts = {"actor": self.actor_opt}
        for i, opt in enumerate(self.critic_opts, start=1):
            opts[f"critic_{i}"] = opt
        return opts

    def update(self, batch: TransitionBatch, rng: np.random.Generator) -> UpdateDiagnostics:
        return ddpg_update(self, batch)


class Td3Agent(DdpgAgent):
    """Actor plus twin critics, each with a target copy."""

    algorithm = "td3"
    n_critics = 2

    def update(self, batch: TransitionBatch, rng: np.random.Generator) -> UpdateDiagnostics:
        return td3_update(self, batch, rng)


AGENT_CLASSES = {"ddpg": DdpgAgent, "td3": Td3Agent}


def build_agent(kind: str, state_dim: int, action_dim: int, hyper: HyperParams, rng: np.random.Generator) -> DdpgAgent:
    if kind not in AGENT_CLASSES:
        raise ValueError(f"unknown learner {kind!r}; expected one of {sorted(AGENT_CLASSES)}")
    return AGENT_CLASSES[kind](state_dim, action_dim, hyper, rng)


def random_action(action_dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform action in the normalised box, used during warm-up."""
    return rng.uniform(-1.0, 1.0, size=action_dim)


def select_action(agent: DdpgAgent, state: np.ndarray, mode: str, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Actor output, plus clipped Gaussian exploration noise in 'explore' mode."""
    state = np.asarray(state, dtype=float)
    if state.shape != (agent.state_dim,):
        raise ShapeMismatchError(f"state shape {state.shape} != ({agent.state_dim},)")
    action = predict(agent.actor, state)
    if mode == "exploit":
        return action
    if mode != "explore":
        raise ValueError(f"mode={mode!r} must be 'explore' or 'exploit'")
    if rng is None:
        raise ValueError("explore mode needs a random stream")
    std = math.sqrt(agent.hyper.exploration_noise_var)
    if std == 0.0:
        return action
    return np.clip(action + rng.normal(0.0, std, size=action.shape), -1.0, 1.0)


def denormalize_action(action: np.ndarray, n_elements: int, a_max: float) -> Tuple[RisPhaseVector, np.ndarray]:
    """First N entries scale by pi (wrapped into [-pi, pi)); last three by a_max."""
    a = np.clip(np.asarray(action, dtype=float), -1.0, 1.0)
    if a.shape != (n_elements + ACCEL_DIM,):
        raise ShapeMismatchError(f"action shape {a.shape} != ({n_elements + ACCEL_DIM},)")
    return RisPhaseVector(math.pi * a[:n_elements]), a_max * a[n_elements:]


def bellman_targets(rewards: np.ndarray, terminals: np.ndarray, next_values: np.ndarray, discount: float) -> np.ndarray:
    """y = r + gamma * (1 - terminal) * Q'(s', a')."""
    return rewards + discount * (1.0 - terminals) * next_values


def clip_target_noise(noise: np.ndarray, clip: float) -> np.ndarray:
    return np.clip(noise, -clip, clip)


def smoothed_target_actions(agent: DdpgAgent, next_states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """clip(mu'(s') + clip(eps, -c, c), -1, 1) with eps ~ N(0, sigma_a^2)."""
    base = predict(agent.target_actor, next_states)
    noise = rng.normal(0.0, math.sqrt(agent.hyper.policy_noise_var), size=base.shape)
    return np.clip(base + clip_target_noise(noise, agent.hyper.noise_clip), -1.0, 1.0)


def _critic_input(states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    return np.concatenate([states, actions], axis=1)


def _regress_critic(critic: MlpParameters, opt: OptimizerState, states: np.ndarray, actions: np.ndarray, targets: np.ndarray) -> float:
    q, cache = forward(critic, _critic_input(states, actions))
    error = q[:, 0] - targets
    loss = float(np.mean(error ** 2))
    if not math.isfinite(loss):
        raise NonFiniteError(f"critic loss is not finite ({loss})")
    grads, _ = backward(critic, cache, (2.0 / len(targets)) * error[:, None])
    apply_update(critic, grads, opt)
    return loss


def _ascend_actor(agent: DdpgAgent, states: np.ndarray) -> float:
    """One step along grad_a Q(s, a) backpropagated through the actor."""
    actions, actor_cache = forward(agent.actor, states)
    critic = agent.critics[0]
    q, critic_cache = forward(critic, _critic_input(states, actions))
    objective = float(np.mean(q))
    if not math.isfinite(objective):
        raise NonFiniteError(f"actor objective is not finite ({objective})")
    _, input_grad = backward(critic, critic_cache, np.full_like(q, 1.0 / len(q)))
    action_grad = input_grad[:, agent.state_dim:]
    grads, _ = backward(agent.actor, actor_cache, -action_grad)
    apply_update(agent.actor, grads, agent.actor_opt)
    agent.actor_update_count += 1
    return objective


def _check_batch(agent: DdpgAgent, batch: TransitionBatch) -> None:
    if len(batch) == 0:
        raise ValueError("update needs a non-empty batch")
    if batch.states.shape[1] != agent.state_dim or batch.actions.shape[1] != agent.action_dim:
        raise ShapeMismatchError(
            f"batch dims ({batch.states.shape[1]}, {batch.actions.shape[1]}) != agent dims "
            f"({agent.state_dim}, {agent.action_dim})"
        )


def ddpg_update(agent: DdpgAgent, batch: TransitionBatch) -> UpdateDiagnostics:
    """Critic regression, actor ascent and soft target updates, every call."""
    _check_batch(agent, batch)
    hyper = agent.hyper
    next_actions = predict(agent.target_actor, batch.next_states)
    next_values = predict(agent.target_critics[0], _critic_input(batch.next_states, next_actions))[:, 0]
    targets = bellman_targets(batch.rewards, batch.terminals, next_values, hyper.discount)

    loss = _regress_critic(agent.critics[0], agent.critic_opts[0], batch.states, batch.actions, targets)
    objective = _ascend_actor(agent, batch.states)
    soft_update(agent.target_critics[0], agent.critics[0], hyper.tau_critic)
    soft_update(agent.target_actor, agent.actor, hyper.tau_actor)
    agent.update_count += 1
    return UpdateDiagnostics(loss, objective, True, float(np.mean(targets)))


def td3_targets(agent: DdpgAgent, batch: TransitionBatch, rng: np.random.Generator) -> np.ndarray:
    """Bellman targets from the smaller of the two target critics."""
    next_actions = smoothed_target_actions(agent, batch.next_states, rng)
    inputs = _critic_input(batch.next_states, next_actions)
    next_values = np.minimum(
        predict(agent.target_critics[0], inputs)[:, 0],
        predict(agent.target_critics[1], inputs)[:, 0],
    )
    return bellman_targets(batch.rewards, batch.terminals, next_values, agent.hyper.discount)


def td3_update(agent: DdpgAgent, batch: TransitionBatch, rng: np.random.Generator) -> UpdateDiagnostics:
    """Both critics every call; actor and all targets every policy_delay calls."""
    _check_batch(agent, batch)
    if len(agent.critics) != 2:
        raise ValueError("td3_update needs an agent with two critics")
    hyper = agent.hyper
    targets = td3_targets(agent, batch, rng)

    losses = [
        _regress_critic(critic, opt, batch.states, batch.actions, targets)
        for critic, opt in zip(agent.critics, agent.critic_opts)
    ]
    agent.update_count += 1

    objective = None
    actor_updated = agent.update_count % hyper.policy_delay == 0
    if actor_updated:
        objective = _ascend_actor(agent, batch.states)
        soft_update(agent.target_actor, agent.actor, hyper.tau_actor)
        for target, critic in zip(agent.target_critics, agent.critics):
            soft_update(target, critic, hyper.tau_critic)
    return UpdateDiagnostics(float(np.mean(losses)), objective, actor_updated, float(np.mean(targets)))


def save_agent(agent: DdpgAgent, path: str, metadata: Dict[str, Any]) -> None:
    """Checkpoint networks, optimizer moments and counters."""
    meta = dict(metadata)
    meta.update({
        "algorithm": agent.algorithm,
        "state_dim": agent.state_dim,
        "action_dim": agent.action_dim,
        "update_count": agent.update_count,
        "actor_update_count": agent.actor_update_count,
    })
    write_checkpoint(path, agent.networks(), agent.optimizers(), meta)


def load_agent(path: str, hyper: HyperParams) -> Tuple[DdpgAgent, Dict[str, Any]]:
    """Rebuild an agent from a checkpoint written by save_agent."""
    networks, optimizers, meta = read_checkpoint(path)
    cls = AGENT_CLASSES.get(meta.get("algorithm", ""))
    if cls is None:
        raise ValueError(f"checkpoint names unknown learner {meta.get('algorithm')!r}")

    agent = cls.__new__(cls)
    agent.state_dim = int(meta["state_dim"])
    agent.action_dim = int(meta["action_dim"])
    agent.hyper = hyper
    agent.actor = networks["actor"]
    agent.target_actor = networks["target_actor"]
    agent.critics = [networks[f"critic_{i}"] for i in range(1, cls.n_critics + 1)]
    agent.target_critics = [networks[f"target_critic_{i}"] for i in range(1, cls.n_critics + 1)]
    agent.actor_opt = optimizers["actor"]
    agent.critic_opts = [optimizers[f"critic_{i}"] for i in range(1, cls.n_critics + 1)]
    agent.update_count = int(meta.get("update_count", 0))
    agent.actor_update_count = int(meta.get("actor_update_count", 0))
    if agent.actor.input_dim != agent.state_dim or agent.actor.output_dim != agent.action_dim:
        raise ShapeMismatchError("checkpoint actor dims disagree with its metadata")
    return agent, meta
