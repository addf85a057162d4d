"""Kinematics, channel and link-budget models."""

__all__ = ["ChannelModel", "ChannelSnapshot", "RisPhaseVector", "UavState"]


def __getattr__(name: str):
    """Lazily expose physics models."""
    if name == "UavState":
        from ris_uav_planner.physics.kinematics import UavState

        return UavState
    if name in {"ChannelModel", "ChannelSnapshot"}:
        from ris_uav_planner.physics.channel import ChannelModel, ChannelSnapshot

        return {"ChannelModel": ChannelModel, "ChannelSnapshot": ChannelSnapshot}[name]
    if name == "RisPhaseVector":
        from ris_uav_planner.physics.radio_link import RisPhaseVector

        return RisPhaseVector
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
