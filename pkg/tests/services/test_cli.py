"""End-to-end tests for the ris-uav command line."""

import json

import pytest
from shared.helpers import tiny_bundle

from ris_uav_planner.core.config import save_scenario
from ris_uav_planner.reporting.export import read_csv
from ris_uav_planner.services.cli import build_parser, main


@pytest.fixture
def tiny_config(tmp_path, monkeypatch) -> str:
    monkeypatch.delenv("RIS_UAV_SEED", raising=False)
    path = tmp_path / "tiny.json"
    save_scenario(tiny_bundle(episodes=2), str(path))
    return str(path)


def test_parser_defaults() -> None:
    args = build_parser().parse_args(["eval", "--checkpoint", "x.json"])

    assert args.episodes == 500
    assert args.output == "runs"
    assert args.objective == "sinr"


def test_train_eval_export_pipeline(tiny_config, tmp_path) -> None:
    out = tmp_path / "runs"

    assert main(["train", "--config", tiny_config, "--output", str(out), "--algorithm", "td3", "ddpg", "--quiet"]) == 0
    assert (out / "td3-final.ckpt.json").exists()
    summary = json.loads((out / "ddpg-summary.json").read_text(encoding="utf-8"))
    assert len(summary["episode_rewards"]) == 2
    assert "provenance" in summary
    svg = (out / "reward-curves.svg").read_text(encoding="utf-8")
    assert svg.count('id="curve-td3"') == 1 and svg.count('id="curve-ddpg"') == 1

    code = main(["eval", "--config", tiny_config, "--checkpoint", str(out / "td3-final.ckpt.json"),
                 "--episodes", "3", "--output", str(out), "--quiet"])
    assert code == 0
    header, rows, origin = read_csv(str(out / "td3-eval.csv"))
    assert header == ["episode", "cumulative_rate", "cumulative_reward", "finishing_distance"]
    assert len(rows) == 3
    assert origin["seed"] == "0"
    assert (out / "td3-trace.csv").exists() and (out / "td3-trajectory.svg").exists()

    figure = tmp_path / "curves.svg"
    assert main(["export", str(out / "td3-training.csv"), str(out / "ddpg-training.csv"), "--output", str(figure), "--quiet"]) == 0
    assert 'id="curve-ddpg"' in figure.read_text(encoding="utf-8")

    table = tmp_path / "curves.json"
    assert main(["export", str(out / "td3-training.csv"), "--format", "json", "--output", str(table), "--quiet"]) == 0
    assert json.loads(table.read_text(encoding="utf-8"))["td3"]["episode"] == [1, 2]

    cdf = tmp_path / "cdf.svg"
    assert main(["export", str(out / "td3-eval.csv"), "--kind", "cdf", "--output", str(cdf), "--quiet"]) == 0
    assert 'id="curve-td3"' in cdf.read_text(encoding="utf-8")


def test_baseline_and_sweep_commands(tiny_config, tmp_path) -> None:
    out = tmp_path / "runs"

    assert main(["baseline", "--config", tiny_config, "--mode", "none", "--episodes", "2", "--output", str(out), "--quiet"]) == 0
    assert (out / "no-ris-eval.csv").exists()

    code = main(["sweep", "--config", tiny_config, "--durations", "0.5", "1.0", "--episodes", "2",
                 "--train-episodes", "1", "--output", str(out), "--quiet"])
    assert code == 0
    header, rows, _ = read_csv(str(out / "td3-sweep.csv"))
    assert [row[header.index("mission_time")] for row in rows] == [0.5, 1.0]
    assert (out / "td3-rate-vs-duration.svg").exists()

    scatter = tmp_path / "scatter.svg"
    assert main(["export", str(out / "td3-sweep.csv"), "--kind", "scatter", "--output", str(scatter), "--quiet"]) == 0


def test_snapshot_slot_writes_the_channel_table(tiny_config, tmp_path) -> None:
    out = tmp_path / "runs"

    assert main(["baseline", "--config", tiny_config, "--mode", "none", "--episodes", "1", "--snapshot-slot", "2",
                 "--output", str(out), "--quiet"]) == 0

    header, rows, origin = read_csv(str(out / "no-ris-snapshot.csv"))
    assert header == ["link", "element", "re", "im"]
    assert [row[0] for row in rows] == ["h_bu", "h_ju"] + ["h_br"] * 4 + ["h_jr"] * 4 + ["h_ru"] * 4
    assert origin["seed"] == "0"


def test_snapshot_slot_outside_the_episode_is_a_usage_error(tiny_config, tmp_path, capsys) -> None:
    code = main(["baseline", "--config", tiny_config, "--mode", "none", "--episodes", "1", "--snapshot-slot", "99",
                 "--output", str(tmp_path), "--quiet"])

    assert code == 2
    assert "snapshot_slot=99" in capsys.readouterr().out


def test_verify_quick_writes_results(tiny_config, tmp_path) -> None:
    report = tmp_path / "verify.csv"

    assert main(["verify", "--config", tiny_config, "--quick", "--output", str(report), "--quiet"]) == 0

    header, rows, _ = read_csv(str(report))
    assert header == ["check", "passed", "value", "threshold", "seconds"]
    assert all(row[1] is True for row in rows)


def test_seed_flag_overrides_file(tiny_config, tmp_path) -> None:
    out = tmp_path / "runs"

    assert main(["baseline", "--config", tiny_config, "--mode", "none", "--episodes", "1", "--seed", "9",
                 "--output", str(out), "--quiet"]) == 0

    _, _, origin = read_csv(str(out / "no-ris-eval.csv"))
    assert origin["seed"] == "9"


def test_missing_config_exits_with_usage_error(tmp_path, capsys) -> None:
    code = main(["verify", "--config", str(tmp_path / "absent.json"), "--quick"])

    assert code == 2
    assert "not found" in capsys.readouterr().out


def test_export_reports_missing_column(tiny_config, tmp_path, capsys) -> None:
    out = tmp_path / "runs"
    main(["train", "--config", tiny_config, "--output", str(out), "--quiet"])

    code = main(["export", str(out / "td3-training.csv"), "--kind", "sweep", "--output", str(tmp_path / "x.svg")])

    assert code == 2
    assert "no 'mission_time' column" in capsys.readouterr().out
