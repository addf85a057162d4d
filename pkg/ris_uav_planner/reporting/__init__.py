"""CSV, JSON and SVG artifact export."""

__all__ = ["Provenance", "read_csv", "write_csv", "write_json"]


def __getattr__(name: str):
    """Lazily expose exporters; matplotlib is only imported on demand."""
    if name in __all__:
        from ris_uav_planner.reporting import export

        return getattr(export, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
