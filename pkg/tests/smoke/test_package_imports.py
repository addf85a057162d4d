"""Smoke tests and structure stubs."""


def test_package_imports() -> None:
    """Ensure core modules can be imported."""
    from ris_uav_planner.baselines.ris_oracle import dinkelbach_optimize
    from ris_uav_planner.core.config import ScenarioBundle
    from ris_uav_planner.env.mdp_env import UavRisEnvironment
    from ris_uav_planner.learning.agents import Td3Agent
    from ris_uav_planner.physics.channel import ChannelModel
    from ris_uav_planner.reporting.export import write_csv
    from ris_uav_planner.services.cli import main

    assert dinkelbach_optimize is not None
    assert ScenarioBundle is not None
    assert UavRisEnvironment is not None
    assert Td3Agent is not None
    assert ChannelModel is not None
    assert write_csv is not None
    assert main is not None


def test_default_bundle_matches_reference_scenario() -> None:
    from ris_uav_planner.core.config import ScenarioBundle

    bundle = ScenarioBundle()

    assert bundle.scenario.n_elements == 20
    assert bundle.scenario.slot_count == 300
    assert bundle.hyper.episodes == 3000


def test_requirements_are_pinned() -> None:
    from shared.helpers import REPO_ROOT

    lines = [line.strip() for line in (REPO_ROOT / "requirements.txt").read_text().splitlines() if line.strip()]

    assert {line.split("==")[0] for line in lines} == {"numpy", "matplotlib"}
    assert all("==" in line for line in lines)


def test_project_dependencies_match_requirements() -> None:
    from shared.helpers import REPO_ROOT

    pinned = set((REPO_ROOT / "requirements.txt").read_text().split())
    manifest = (REPO_ROOT / "pyproject.toml").read_text()

    assert all(f'"{pin}"' in manifest for pin in pinned)
