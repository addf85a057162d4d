"""Exception types shared across the planner layers."""

from typing import Optional


class ConfigError(ValueError):
    """Invalid scenario document: parse failure, unknown key or violated invariant."""


class DegenerateGeometryError(ValueError):
    """Two link endpoints coincide, so distance or direction is undefined."""


class ShapeMismatchError(ValueError):
    """Array or network shapes do not line up."""


class StaleCacheError(ValueError):
    """A forward cache was used after the network parameters changed."""


class NonFiniteError(FloatingPointError):
    """A loss, gradient or parameter became NaN or infinite."""


class EpisodeDoneError(RuntimeError):
    """step() was called on an episode that already finished."""


class TrainingAbortedError(RuntimeError):
    """Training stopped on a non-finite signal."""

    def __init__(self, message: str, last_checkpoint: Optional[str] = None):
        super().__init__(message)
        self.last_checkpoint = last_checkpoint
