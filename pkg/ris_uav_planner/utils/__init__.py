"""Shared utility modules."""

__all__ = ["format_metrics", "log_status"]


def __getattr__(name: str):
    """Lazily expose utility symbols."""
    if name in {"format_metrics", "log_status"}:
        from ris_uav_planner.utils.logging import format_metrics, log_status

        return {"format_metrics": format_metrics, "log_status": log_status}[name]
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
