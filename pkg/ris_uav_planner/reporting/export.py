#!/usr/bin/env python3
"""
Artifact export for training and evaluation runs.
Canonical CSV/JSON writers with provenance headers, a CSV loader, and SVG
figures for reward curves, duration sweeps, CDFs, scatters and trajectories.
"""

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "ris-uav-planner"

from matplotlib.figure import Figure  # noqa: E402

from ris_uav_planner.core.config import ScenarioConfig  # noqa: E402
from ris_uav_planner.physics.channel import ChannelSnapshot  # noqa: E402

PROVENANCE_PREFIX = "# "
_SVG_METADATA = {"Date": None, "Creator": "ris-uav-planner"}


@dataclass(frozen=True)
class Provenance:
    """Where a metrics file came from."""
    config_hash: str
    seed: int
    version: str

    def lines(self) -> List[str]:
        return [f"{PROVENANCE_PREFIX}{key}={value}" for key, value in
                (("config_hash", self.config_hash), ("seed", self.seed), ("version", self.version))]


def format_value(value: Any) -> str:
    """Canonical cell text; floats use repr so they round-trip exactly."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        return format_value(value.item())
    return str(value)


def _parse_value(text: str) -> Any:
    if text in ("true", "false"):
        return text == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], provenance: Optional[Provenance] = None) -> str:
    buffer = io.StringIO()
    if provenance is not None:
        for line in provenance.lines():
            buffer.write(line + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_value(cell) for cell in row])
    return buffer.getvalue()


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]], provenance: Optional[Provenance] = None) -> str:
    """Write a CSV with optional `# key=value` provenance lines; returns the path."""
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(render_csv(header, rows, provenance))
    return path


def read_csv(path: str) -> Tuple[List[str], List[List[Any]], Dict[str, str]]:
    """Load a file written by write_csv: (header, typed rows, provenance)."""
    provenance: Dict[str, str] = {}
    body: List[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.startswith(PROVENANCE_PREFIX):
                key, _, value = line[len(PROVENANCE_PREFIX):].rstrip("\n").partition("=")
                provenance[key] = value
            else:
                body.append(line)
    reader = csv.reader(body)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError(f"CSV file has no header: {path}") from None
    return header, [[_parse_value(cell) for cell in row] for row in reader], provenance


def write_json(path: str, payload: Mapping[str, Any], provenance: Optional[Provenance] = None) -> str:
    """Sorted, indented JSON; provenance goes under a `provenance` key."""
    document = dict(payload)
    if provenance is not None:
        document["provenance"] = {"config_hash": provenance.config_hash, "seed": provenance.seed, "version": provenance.version}
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2, sort_keys=True, default=_json_default)
        handle.write("\n")
    return path


def _json_default(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serialisable")


def _save_svg(fig: Figure, path: str) -> str:
    _ensure_parent(path)
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    return path


def plot_reward_curves(curves: Mapping[str, Sequence[float]], path: str, title: str = "Training reward") -> str:
    """One line per algorithm (gid = algorithm name), episode on x."""
    fig = Figure(figsize=(7, 4.5))
    ax = fig.add_subplot()
    for name, values in curves.items():
        line, = ax.plot(range(1, len(values) + 1), list(values), label=name, linewidth=1.2)
        line.set_gid(f"curve-{name}")
    ax.set_xlabel("Episode")
    ax.set_ylabel("Reward")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save_svg(fig, path)


def plot_duration_sweep(
    series: Mapping[str, Sequence[Tuple[float, float, float]]],
    path: str,
    ylabel: str
) -> str:
    """Metric vs mission duration with sample-stddev error bars; rows are (T, mean, std)."""
    fig = Figure(figsize=(7, 4.5))
    ax = fig.add_subplot()
    for name, rows in series.items():
        durations = [row[0] for row in rows]
        container = ax.errorbar(durations, [row[1] for row in rows], yerr=[row[2] for row in rows],
                                label=name, marker="o", capsize=3)
        container.lines[0].set_gid(f"curve-{name}")
    ax.set_xlabel("Mission duration T (s)")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save_svg(fig, path)


def plot_cdf(tables: Mapping[str, Sequence[Tuple[float, float]]], path: str, xlabel: str = "Finishing distance (m)") -> str:
    """Empirical CDF step plots; each table is the output of harness.cdf."""
    fig = Figure(figsize=(7, 4.5))
    ax = fig.add_subplot()
    for name, table in tables.items():
        if not table:
            continue
        # Leading zero so the first jump is drawn.
        xs = [table[0][0]] + [point[0] for point in table]
        ys = [0.0] + [point[1] for point in table]
        line, = ax.step(xs, ys, where="post", label=name)
        line.set_gid(f"curve-{name}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save_svg(fig, path)


def plot_rate_distance_scatter(points: Mapping[str, Sequence[Tuple[float, float]]], path: str) -> str:
    """Mean rate against finishing distance, one marker series per label."""
    fig = Figure(figsize=(7, 4.5))
    ax = fig.add_subplot()
    for name, pairs in points.items():
        collection = ax.scatter([p[0] for p in pairs], [p[1] for p in pairs], label=name, s=18)
        collection.set_gid(f"curve-{name}")
    ax.set_xlabel("Finishing distance (m)")
    ax.set_ylabel("Cumulative rate (bits/s/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save_svg(fig, path)


def plot_trajectory(positions: Sequence[Sequence[float]], scenario: ScenarioConfig, path: str,
                    goal: Optional[Sequence[float]] = None) -> str:
    """x-y projection with site markers, and altitude over slots."""
    fig = Figure(figsize=(10, 4.5))
    top, side = fig.subplots(1, 2)
    xs = [p[0] for p in positions]
    ys = [p[1] for p in positions]
    zs = [p[2] for p in positions]
    goal = list(goal) if goal is not None else list(scenario.uav_goal)

    path_line, = top.plot(xs, ys, color="tab:blue", label="UAV")
    path_line.set_gid("curve-trajectory")
    for label, point, marker in (("BS", scenario.bs_position, "^"), ("Jammer", scenario.jammer_position, "x"),
                                 ("RIS", scenario.ris_reference, "s"), ("Start", scenario.uav_start, "o"),
                                 ("Goal", goal, "*")):
        top.scatter([point[0]], [point[1]], marker=marker, label=label, s=50)
    top.set_xlabel("x (m)")
    top.set_ylabel("y (m)")
    top.set_aspect("equal", adjustable="datalim")
    top.grid(True, alpha=0.3)
    top.legend(fontsize="small")

    side.plot(range(len(zs)), zs, color="tab:blue")
    side.axhline(goal[2], color="tab:green", linestyle="--", linewidth=0.8)
    side.set_xlabel("Slot")
    side.set_ylabel("Altitude z (m)")
    side.grid(True, alpha=0.3)
    fig.tight_layout()
    return _save_svg(fig, path)


def snapshot_rows(snapshot: ChannelSnapshot) -> Tuple[List[str], List[List[Any]]]:
    """Channel gains as (link, element, re, im) rows; element is -1 for scalar links."""
    rows: List[List[Any]] = []
    for name, value in (("h_bu", snapshot.h_bu), ("h_ju", snapshot.h_ju)):
        rows.append([name, -1, float(value.real), float(value.imag)])
    for name, vector in (("h_br", snapshot.h_br), ("h_jr", snapshot.h_jr), ("h_ru", snapshot.h_ru)):
        for index, value in enumerate(vector):
            rows.append([name, index, float(value.real), float(value.imag)])
    return ["link", "element", "re", "im"], rows


def write_snapshot_csv(snapshot: ChannelSnapshot, path: str, provenance: Optional[Provenance] = None) -> str:
    header, rows = snapshot_rows(snapshot)
    return write_csv(path, header, rows, provenance)
