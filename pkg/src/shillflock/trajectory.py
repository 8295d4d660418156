"""Trajectory and metric persistence.

One CSV row per (tick, agent): columns tick, agent_id, x, y, heading, with
agent_id 0 reserved for the shill.  Angles and coordinates are written with
17 significant digits so read-back is bit-exact.
"""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError
from .model import AgentState, SwarmState

TRAJECTORY_HEADER = ["tick", "agent_id", "x", "y", "heading"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory(path: str | Path, trajectory: Sequence[SwarmState]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_HEADER)
        for state in trajectory:
            if state.shill is not None:
                writer.writerow(
                    [state.t, 0, _fmt(state.shill.x), _fmt(state.shill.y), _fmt(state.shill.heading)]
                )
            for i in range(state.n):
                writer.writerow(
                    [
                        state.t,
                        i + 1,
                        _fmt(state.positions[i, 0]),
                        _fmt(state.positions[i, 1]),
                        _fmt(state.headings[i]),
                    ]
                )


def read_trajectory(path: str | Path) -> list[SwarmState]:
    """Rebuild the state sequence from a trajectory CSV, bit-exactly."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRAJECTORY_HEADER:
            raise ConfigError(f"unexpected trajectory header {header!r} in {path}")
        by_tick: dict[int, dict[int, tuple[float, float, float]]] = {}
        order: list[int] = []
        for row in reader:
            if not row:
                continue
            tick = int(row[0])
            agent_id = int(row[1])
            if tick not in by_tick:
                by_tick[tick] = {}
                order.append(tick)
            by_tick[tick][agent_id] = (float(row[2]), float(row[3]), float(row[4]))

    states: list[SwarmState] = []
    n_expected: Optional[int] = None
    for tick in order:
        rows = by_tick[tick]
        shill = None
        if 0 in rows:
            x, y, heading = rows.pop(0)
            shill = AgentState(x, y, heading)
        if not rows:
            raise ConfigError(f"tick {tick} in {path} has no ordinary agents")
        ids = sorted(rows)
        if ids != list(range(1, len(ids) + 1)):
            raise ConfigError(f"tick {tick} in {path} has non-contiguous agent ids {ids}")
        if n_expected is None:
            n_expected = len(ids)
        elif len(ids) != n_expected:
            raise ConfigError(f"tick {tick} in {path} has {len(ids)} agents, expected {n_expected}")
        positions = np.array([[rows[i][0], rows[i][1]] for i in ids], dtype=np.float64)
        headings = np.array([rows[i][2] for i in ids], dtype=np.float64)
        states.append(SwarmState(t=tick, positions=positions, headings=headings, shill=shill))
    if not states:
        raise ConfigError(f"trajectory {path} is empty")
    return states


def write_delta_series(
    path: str | Path, ticks: Sequence[int], deltas: Sequence[Optional[float]]
) -> None:
    """Per-tick objective-distance series; blank cells where it is undefined."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tick", "delta"])
        for t, d in zip(ticks, deltas):
            writer.writerow([t, "" if d is None else _fmt(d)])
