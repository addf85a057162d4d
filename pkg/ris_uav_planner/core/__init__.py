"""Core scenario configuration and shared exceptions."""

__all__ = ["ConfigError", "ScenarioBundle", "load_scenario", "rng_stream"]


def __getattr__(name: str):
    """Lazily expose core symbols."""
    if name in {"ScenarioBundle", "load_scenario", "rng_stream"}:
        from ris_uav_planner.core.config import ScenarioBundle, load_scenario, rng_stream

        return {"ScenarioBundle": ScenarioBundle, "load_scenario": load_scenario, "rng_stream": rng_stream}[name]
    if name == "ConfigError":
        from ris_uav_planner.core.errors import ConfigError

        return ConfigError
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
