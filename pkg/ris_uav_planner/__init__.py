"""RIS-assisted anti-jamming UAV trajectory planner."""

__version__ = "0.1.0"

__all__ = [
    "ChannelModel",
    "DdpgAgent",
    "ScenarioBundle",
    "Td3Agent",
    "UavRisEnvironment",
    "__version__",
    "dinkelbach_optimize",
    "load_scenario_file",
]


def __getattr__(name: str):
    """Lazily expose package symbols so importing the package stays cheap."""
    if name in {"ScenarioBundle", "load_scenario_file"}:
        from ris_uav_planner.core.config import ScenarioBundle, load_scenario_file

        return {"ScenarioBundle": ScenarioBundle, "load_scenario_file": load_scenario_file}[name]
    if name == "ChannelModel":
        from ris_uav_planner.physics.channel import ChannelModel

        return ChannelModel
    if name in {"DdpgAgent", "Td3Agent"}:
        from ris_uav_planner.learning.agents import DdpgAgent, Td3Agent

        return {"DdpgAgent": DdpgAgent, "Td3Agent": Td3Agent}[name]
    if name == "dinkelbach_optimize":
        from ris_uav_planner.baselines.ris_oracle import dinkelbach_optimize

        return dinkelbach_optimize
    if name == "UavRisEnvironment":
        from ris_uav_planner.env.mdp_env import UavRisEnvironment

        return UavRisEnvironment
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
