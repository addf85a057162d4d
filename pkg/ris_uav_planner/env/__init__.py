"""Episodic MDP environment."""

__all__ = ["EpisodeState", "UavRisEnvironment"]


def __getattr__(name: str):
    """Lazily expose the environment."""
    if name in {"EpisodeState", "UavRisEnvironment"}:
        from ris_uav_planner.env.mdp_env import EpisodeState, UavRisEnvironment

        return {"EpisodeState": EpisodeState, "UavRisEnvironment": UavRisEnvironment}[name]
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
