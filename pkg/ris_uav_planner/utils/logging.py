"""Helpers for compact, stable console status lines."""

import math
from typing import Mapping, Union

STATUS_MARKERS = {
    'ok': '✅',
    'warn': '⚠️ ',
    'error': '❌',
    'info': '🔍',
    'progress': '📈',
}

Number = Union[int, float]


def format_number(value: Number, digits: int = 4) -> str:
    """Format a number with a fixed count of significant digits."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return f"{value:.{digits}g}"


def format_metrics(metrics: Mapping[str, Number], digits: int = 4) -> str:
    """Render key=value pairs in insertion order for a console line."""
    return " ".join(f"{key}={format_number(value, digits)}" for key, value in metrics.items())


def log_status(kind: str, message: str, quiet: bool = False) -> None:
    """Print a status line prefixed with its marker unless quiet."""
    if quiet:
        return
    marker = STATUS_MARKERS.get(kind, '')
    print(f"{marker} {message}" if marker else message)
