"""Tests for the replay buffer and the DDPG/TD3 learners."""

import math

import numpy as np
import pytest
from shared.helpers import make_transition, tiny_hyper

from ris_uav_planner.core.config import rng_stream
from ris_uav_planner.core.errors import NonFiniteError, ShapeMismatchError
from ris_uav_planner.learning import agents
from ris_uav_planner.learning.agents import DdpgAgent, ReplayBuffer, Td3Agent, TransitionBatch
from ris_uav_planner.learning.neural import predict


def _agent(kind: str = "td3", action_dim: int = 7, **overrides) -> DdpgAgent:
    return agents.build_agent(kind, agents.STATE_DIM, action_dim, tiny_hyper(**overrides), rng_stream(0, f"{kind}/init"))


def _fixed_batch(action_dim: int = 7, terminal: bool = False) -> TransitionBatch:
    rewards = [0.1, 0.5, -0.3, 0.8]
    return TransitionBatch.from_transitions([
        make_transition(r, action_dim=action_dim, fill=float(i), terminal=terminal) for i, r in enumerate(rewards)
    ])


def test_buffer_evicts_oldest_first() -> None:
    buf = ReplayBuffer(2, 7, 7)
    for fill in (1.0, 2.0, 3.0):
        buf.push(make_transition(fill=fill))

    assert len(buf) == 2
    assert [t.state[0] for t in buf.contents()] == [2.0, 3.0]


def test_buffer_size_grows_then_saturates() -> None:
    buf = ReplayBuffer(5, 7, 7)
    buf.push(make_transition())
    assert len(buf) == 1

    for _ in range(20):
        buf.push(make_transition())
    assert len(buf) == 5


def test_buffer_rejects_bad_transitions() -> None:
    buf = ReplayBuffer(4, 7, 7)

    with pytest.raises(ShapeMismatchError):
        buf.push(make_transition(state_dim=6))
    with pytest.raises(NonFiniteError):
        buf.push(make_transition(reward=math.nan))
    assert len(buf) == 0


def test_sampling_sizes_and_errors() -> None:
    buf = ReplayBuffer(1000, 7, 7)
    for i in range(1000):
        buf.push(make_transition(fill=float(i)))

    assert len(buf.sample(128, np.random.default_rng(0))) == 128

    single = ReplayBuffer(3, 7, 7).push(make_transition(fill=9.0))
    batch = single.sample(1, np.random.default_rng(0))
    assert batch.states[0, 0] == 9.0

    with pytest.raises(ValueError, match="cannot sample"):
        single.sample(2, np.random.default_rng(0))


def test_sampling_is_reproducible() -> None:
    buf = ReplayBuffer(50, 7, 7)
    for i in range(50):
        buf.push(make_transition(fill=float(i)))

    first = buf.sample(16, rng_stream(3, "replay"))
    second = buf.sample(16, rng_stream(3, "replay"))

    assert np.array_equal(first.indices, second.indices)


def test_exploit_is_deterministic_and_zero_noise_explore_matches() -> None:
    agent = _agent(exploration_noise_var=0.0)
    state = np.linspace(-1, 1, 7)

    exploit = agents.select_action(agent, state, "exploit")

    assert np.array_equal(exploit, agents.select_action(agent, state, "exploit"))
    assert np.array_equal(exploit, agents.select_action(agent, state, "explore", np.random.default_rng(1)))


def test_explored_actions_stay_in_box() -> None:
    agent = _agent(exploration_noise_var=4.0)
    rng = np.random.default_rng(2)

    actions = np.array([agents.select_action(agent, rng.standard_normal(7), "explore", rng) for _ in range(2000)])

    assert np.all(actions >= -1.0) and np.all(actions <= 1.0)


def test_select_action_checks_state_shape() -> None:
    with pytest.raises(ShapeMismatchError):
        agents.select_action(_agent(), np.zeros(6), "exploit")


def test_denormalize_action_examples() -> None:
    phases, accel = agents.denormalize_action(np.zeros(7), 4, 2.0)
    assert np.array_equal(phases.theta, np.zeros(4))
    assert np.array_equal(accel, np.zeros(3))

    phases, accel = agents.denormalize_action(np.array([1.0, 0.5, -1.0, 1.0, 0.0]), 2, 2.0)
    assert phases.theta[0] == pytest.approx(-math.pi)
    assert phases.theta[1] == pytest.approx(math.pi / 2)
    assert accel == pytest.approx([-2.0, 2.0, 0.0])


def test_denormalize_action_shape() -> None:
    with pytest.raises(ShapeMismatchError):
        agents.denormalize_action(np.zeros(6), 4, 2.0)


def test_terminal_transitions_drop_bootstrap() -> None:
    targets = agents.bellman_targets(np.array([1.0, 1.0]), np.array([1.0, 0.0]), np.array([50.0, 50.0]), 0.9)

    assert targets == pytest.approx([1.0, 46.0])


def test_zero_discount_critic_regresses_to_rewards() -> None:
    agent = _agent("ddpg", discount=0.0, critic_lr=5e-3, critic_hidden=(16, 16))
    batch = _fixed_batch()

    for _ in range(3000):
        agents.ddpg_update(agent, batch)

    q = predict(agent.critics[0], np.concatenate([batch.states, batch.actions], axis=1))[:, 0]
    assert np.mean((q - batch.rewards) ** 2) < 1e-3


def test_ddpg_targets_move_by_tau() -> None:
    agent = _agent("ddpg", tau_actor=0.1, tau_critic=0.1)
    before = [p.copy() for p in agent.target_critics[0].parameters()]

    agents.ddpg_update(agent, _fixed_batch())

    for old, new, online in zip(before, agent.target_critics[0].parameters(), agent.critics[0].parameters()):
        assert new == pytest.approx(0.9 * old + 0.1 * online)


def test_noise_is_clipped_to_bound() -> None:
    assert agents.clip_target_noise(np.array([0.8, -0.8, 0.2]), 0.5) == pytest.approx([0.5, -0.5, 0.2])


def test_td3_target_uses_smaller_critic() -> None:
    agent = _agent("td3")
    agent.target_critics[0].biases[-1] += 100.0
    batch = _fixed_batch()

    targets = agents.td3_targets(agent, batch, np.random.default_rng(9))

    next_actions = agents.smoothed_target_actions(agent, batch.next_states, np.random.default_rng(9))
    inputs = np.concatenate([batch.next_states, next_actions], axis=1)
    second = predict(agent.target_critics[1], inputs)[:, 0]
    first = predict(agent.target_critics[0], inputs)[:, 0]
    assert np.all(first > second)
    assert targets == pytest.approx(batch.rewards + agent.hyper.discount * second)
    assert np.all(targets <= batch.rewards + agent.hyper.discount * first)


def test_smoothed_target_actions_stay_in_box() -> None:
    agent = _agent("td3", policy_noise_var=9.0, noise_clip=5.0)
    states = np.random.default_rng(0).standard_normal((64, 7))

    actions = agents.smoothed_target_actions(agent, states, np.random.default_rng(1))

    assert np.all(np.abs(actions) <= 1.0)


def test_td3_critics_are_independent() -> None:
    agent = _agent("td3")

    assert not np.array_equal(agent.critics[0].weights[0], agent.critics[1].weights[0])
    assert agent.target_critics[0].same_shape(agent.critics[0])


def test_policy_delay_updates_actor_every_other_call() -> None:
    agent = _agent("td3", policy_delay=2)
    batch = _fixed_batch()
    rng = np.random.default_rng(0)
    actor_before = agent.actor.weights[0].copy()

    first = agents.td3_update(agent, batch, rng)
    assert not first.actor_updated
    assert np.array_equal(agent.actor.weights[0], actor_before)

    for _ in range(9):
        agents.td3_update(agent, batch, rng)

    assert agent.update_count == 10
    assert agent.actor_update_count == 5


def test_update_checks_batch_dims() -> None:
    with pytest.raises(ShapeMismatchError):
        _agent("td3").update(_fixed_batch(action_dim=5), np.random.default_rng(0))


def test_updates_are_bit_reproducible() -> None:
    def run() -> DdpgAgent:
        agent = _agent("td3")
        rng = rng_stream(1, "target-noise")
        for _ in range(6):
            agent.update(_fixed_batch(), rng)
        return agent

    a, b = run(), run()

    for name, net in a.networks().items():
        assert all(np.array_equal(x, y) for x, y in zip(net.parameters(), b.networks()[name].parameters()))


def test_agent_checkpoint_round_trip(tmp_path) -> None:
    agent = _agent("td3")
    for _ in range(3):
        agent.update(_fixed_batch(), np.random.default_rng(0))
    path = str(tmp_path / "td3.ckpt.json")

    agents.save_agent(agent, path, {"episode": 2})
    loaded, meta = agents.load_agent(path, agent.hyper)

    assert isinstance(loaded, Td3Agent)
    assert meta["episode"] == 2 and meta["algorithm"] == "td3"
    assert loaded.update_count == 3
    state = np.linspace(-1, 1, 7)
    assert np.array_equal(agents.select_action(loaded, state, "exploit"), agents.select_action(agent, state, "exploit"))


def test_unknown_learner_is_rejected() -> None:
    with pytest.raises(ValueError, match="unknown learner"):
        agents.build_agent("sac", 7, 7, tiny_hyper(), np.random.default_rng(0))
