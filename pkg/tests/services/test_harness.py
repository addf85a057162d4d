"""Tests for training, evaluation, sweeps and the oracle suite."""

import numpy as np
import pytest
from shared.helpers import tiny_bundle

from ris_uav_planner.core.errors import NonFiniteError, ShapeMismatchError, TrainingAbortedError
from ris_uav_planner.learning.neural import MlpParameters
from ris_uav_planner.services import harness


def test_running_average_examples() -> None:
    assert harness.running_average([1, 2, 3]) == [1.0, 1.5, 2.0]
    assert harness.running_average([]) == []


def test_cdf_examples() -> None:
    assert harness.cdf([5]) == [(5.0, 1.0)]
    assert harness.cdf([2, 1, 4, 2]) == [(1.0, 0.25), (2.0, 0.75), (4.0, 1.0)]
    with pytest.raises(ValueError, match="at least one"):
        harness.cdf([])


def test_cdf_is_monotone_and_ends_at_one() -> None:
    values = np.random.default_rng(0).exponential(size=200)

    table = harness.cdf(values)

    assert all(b[0] > a[0] and b[1] > a[1] for a, b in zip(table, table[1:]))
    assert table[-1][1] == 1.0


def test_sample_std_uses_one_degree_of_freedom() -> None:
    assert harness.sample_std([1.0, 3.0]) == pytest.approx(np.sqrt(2.0))
    assert harness.sample_std([4.0]) == 0.0


def test_convergence_and_best_episode() -> None:
    averages = [0.0, 5.0, 9.0, 9.5, 10.0]

    assert harness.convergence_episode(averages) == 3
    assert harness.convergence_episode([0.0, -5.0, -10.0]) == 3
    assert harness.reward_max_episode([1.0, 7.0, 3.0]) == 2


def test_convergence_is_measured_against_the_final_average() -> None:
    # 0.9 * 200 = 180 is first reached at episode 3, not at 90% of the climb from 100.
    assert harness.convergence_episode([100.0, 150.0, 180.0, 190.0, 200.0]) == 3
    assert harness.convergence_episode([190.0, 170.0, 185.0, 200.0]) == 1
    assert harness.convergence_episode([100.0, 150.0, 180.0, 190.0, 200.0], fraction=0.5) == 1


def test_unknown_algorithm_is_rejected() -> None:
    with pytest.raises(ValueError, match="unknown algorithm"):
        harness.train(tiny_bundle(), "sac")


@pytest.mark.parametrize("algorithm", sorted(harness.ALGORITHMS))
def test_every_variant_trains(algorithm: str) -> None:
    bundle = tiny_bundle(episodes=2, steps_per_episode=4, mission_time=0.4)

    result = harness.train(bundle, algorithm, seed=0)

    assert len(result.episode_rewards) == 2
    assert result.running_average[0] == result.episode_rewards[0]
    assert all(np.isfinite(result.episode_rewards))


def test_training_writes_checkpoints_and_metrics(tmp_path) -> None:
    bundle = tiny_bundle(episodes=4, checkpoint_interval=2)

    result = harness.train(bundle, "td3", seed=1, output_dir=str(tmp_path))

    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["td3-ep00002.ckpt.json", "td3-ep00004.ckpt.json", "td3-final.ckpt.json", "td3-training.csv"]
    lines = (tmp_path / "td3-training.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# config_hash=")
    assert lines[3] == ",".join(harness.TRAINING_HEADER)
    assert len(lines) == 4 + 4
    assert result.checkpoint_path.endswith("td3-final.ckpt.json")


def test_training_metrics_are_byte_identical(tmp_path) -> None:
    bundle = tiny_bundle(episodes=20)

    harness.train(bundle, "td3", seed=7, output_dir=str(tmp_path / "a"))
    harness.train(bundle, "td3", seed=7, output_dir=str(tmp_path / "b"))

    first = (tmp_path / "a" / "td3-training.csv").read_bytes()
    assert first == (tmp_path / "b" / "td3-training.csv").read_bytes()


def test_non_finite_training_aborts(monkeypatch) -> None:
    def poisoned(self, batch, rng):
        raise NonFiniteError("critic loss is not finite (nan)")

    monkeypatch.setattr(harness.DdpgAgent, "update", poisoned)

    with pytest.raises(TrainingAbortedError, match="aborted in episode 1") as info:
        harness.train(tiny_bundle(), "ddpg", seed=0)
    assert info.value.last_checkpoint is None


def test_evaluate_is_deterministic(tmp_path) -> None:
    bundle = tiny_bundle(episodes=2)
    trained = harness.train(bundle, "td3", seed=0, output_dir=str(tmp_path))

    first = harness.evaluate(trained.checkpoint_path, bundle, n_episodes=3, trace_episode=0)
    second = harness.evaluate(trained.checkpoint_path, bundle, n_episodes=3)

    assert first.cumulative_rates == second.cumulative_rates
    assert first.finishing_distances == second.finishing_distances
    assert len(first.finishing_distances) == 3
    assert len(first.trace) == bundle.hyper.steps_per_episode
    assert first.label == "td3"


def test_evaluate_rejects_mismatched_scenario(tmp_path) -> None:
    trained = harness.train(tiny_bundle(episodes=1), "td3", seed=0, output_dir=str(tmp_path))

    with pytest.raises(ShapeMismatchError, match="do not match the scenario"):
        harness.evaluate(trained.checkpoint_path, tiny_bundle(rows=3), n_episodes=1)


def test_csi_baseline_checkpoint_evaluates_in_oracle_mode(tmp_path) -> None:
    bundle = tiny_bundle(episodes=1, steps_per_episode=3, mission_time=0.3)
    trained = harness.train(bundle, "td3-csi-baseline", seed=0, output_dir=str(tmp_path))

    report = harness.evaluate(trained.checkpoint_path, bundle, n_episodes=1)

    assert report.label == "td3-csi-baseline"
    assert trained.agent.action_dim == 3


def test_oracle_baseline_dominates_unconfigured_ris() -> None:
    bundle = tiny_bundle(steps_per_episode=5, mission_time=0.5)

    oracle = harness.evaluate_baseline(bundle, "oracle", n_episodes=2)
    plain = harness.evaluate_baseline(bundle, "ris", n_episodes=2)

    assert oracle.label == "csi-sinr" and plain.label == "ris-unconfigured"
    assert oracle.finishing_distances == plain.finishing_distances
    for better, base in zip(oracle.cumulative_rates, plain.cumulative_rates):
        assert better >= base * (1 - 1e-9)


def test_pursuit_policy_closes_distance() -> None:
    bundle = tiny_bundle()

    report = harness.evaluate_baseline(bundle, "none", n_episodes=1)

    start = float(np.linalg.norm(np.subtract(bundle.scenario.uav_start, bundle.scenario.uav_goal)))
    assert report.finishing_distances[0] < start


def test_evaluation_keeps_the_requested_channel_slot() -> None:
    bundle = tiny_bundle()

    report = harness.evaluate_baseline(bundle, "none", n_episodes=2, trace_episode=1, snapshot_slot=3)
    first = harness.evaluate_baseline(bundle, "none", n_episodes=1, snapshot_slot=0)

    assert report.snapshot.slot_index == 3
    assert len(report.snapshot.h_ru) == bundle.scenario.n_elements
    assert first.snapshot.slot_index == 0
    assert harness.evaluate_baseline(bundle, "none", n_episodes=1).snapshot is None
    with pytest.raises(ValueError, match="snapshot_slot=11"):
        harness.evaluate_baseline(bundle, "none", n_episodes=1, snapshot_slot=11)


def test_eval_report_statistics() -> None:
    report = harness.EvalReport("x", [1.0, 3.0], [0.0, 0.0], [10.0, 20.0])

    data = report.to_dict()

    assert data["mean_rate"] == 2.0
    assert data["std_distance"] == pytest.approx(np.sqrt(50.0))
    assert report.rows() == [[1, 1.0, 0.0, 10.0], [2, 3.0, 0.0, 20.0]]


def test_sweep_returns_one_row_per_duration(tmp_path) -> None:
    bundle = tiny_bundle(episodes=1)

    rows = harness.sweep_mission_duration(bundle, [0.5, 1.0], "td3", n_episodes=2, output_dir=str(tmp_path))

    assert [row.mission_time for row in rows] == [0.5, 1.0]
    assert all(row.episodes == 2 for row in rows)
    assert (tmp_path / "T0.5" / "td3-final.ckpt.json").exists()


def test_quick_oracle_suite_passes() -> None:
    results = harness.run_oracle_suite(tiny_bundle(), seed=0, quick=True)

    assert [r.name for r in results] == [
        "gradient_check", "phase_alignment", "dinkelbach_vs_grid", "kinematic_feasibility", "reward_telescoping",
    ]
    failed = [(r.name, r.value, r.detail) for r in results if not r.passed]
    assert failed == []


def test_telescoping_check_uses_an_absolute_bound() -> None:
    bundle = tiny_bundle(rows=4, cols=5, mission_time=30.0, steps_per_episode=300, reward_weight=3.7)

    gap, passed, detail = harness.check_telescoping(bundle, seed=4)

    assert detail == "300 steps"
    assert passed
    assert gap <= 1e-9


def test_gradient_check_flags_broken_backward(monkeypatch) -> None:
    import ris_uav_planner.learning.neural as neural

    original = neural.backward

    def skewed(net, cache, grad):
        grads, inputs = original(net, cache, grad)
        return grads.scaled(1.1), inputs

    monkeypatch.setattr(neural, "backward", skewed)
    net = MlpParameters.initialize([3, 4, 1], np.random.default_rng(0), "tanh", "identity")

    assert neural.gradient_check(net, np.ones((2, 3)), np.random.default_rng(1)) > 1e-2


def test_summary_dict_drops_agent() -> None:
    result = harness.train(tiny_bundle(episodes=1), "ddpg", seed=0)

    data = harness.summary_dict(result)

    assert "agent" not in data
    assert data["best_episode"] == 1
