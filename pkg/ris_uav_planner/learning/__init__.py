"""Neural networks and the DDPG / TD3 learners."""

__all__ = ["DdpgAgent", "MlpParameters", "ReplayBuffer", "Td3Agent"]


def __getattr__(name: str):
    """Lazily expose learning components."""
    if name == "MlpParameters":
        from ris_uav_planner.learning.neural import MlpParameters

        return MlpParameters
    if name in {"DdpgAgent", "ReplayBuffer", "Td3Agent"}:
        from ris_uav_planner.learning.agents import DdpgAgent, ReplayBuffer, Td3Agent

        return {"DdpgAgent": DdpgAgent, "ReplayBuffer": ReplayBuffer, "Td3Agent": Td3Agent}[name]
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
