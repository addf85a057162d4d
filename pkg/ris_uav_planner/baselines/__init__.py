"""Perfect-CSI and no-RIS reference baselines."""

__all__ = ["DinkelbachResult", "dinkelbach_optimize", "grid_verify", "no_ris_metrics"]


def __getattr__(name: str):
    """Lazily expose baseline solvers."""
    if name in __all__:
        from ris_uav_planner.baselines import ris_oracle

        return getattr(ris_oracle, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
