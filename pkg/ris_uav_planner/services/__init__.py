"""Application services."""

__all__ = ["main", "train", "evaluate"]


def __getattr__(name: str):
    """Lazily expose services to avoid runpy pre-import warnings."""
    if name == "main":
        from ris_uav_planner.services.cli import main

        return main
    if name in {"train", "evaluate"}:
        from ris_uav_planner.services import harness

        return getattr(harness, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
