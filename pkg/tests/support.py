"""Shared helpers for the test suite."""
from __future__ import annotations

import math

import numpy as np

from shillflock import AgentState, SwarmState

TAU = 2.0 * math.pi


def ang_diff(a: float, b: float) -> float:
    """Signed circular difference a - b in (-pi, pi]."""
    d = (a - b) % TAU
    if d > math.pi:
        d -= TAU
    return d


def ang_close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(ang_diff(a, b)) <= tol


def make_state(positions, headings, t=0, shill=None) -> SwarmState:
    return SwarmState(
        t=t,
        positions=np.asarray(positions, dtype=np.float64),
        headings=np.asarray(headings, dtype=np.float64),
        shill=shill,
    )


def shill_at(x: float, y: float, heading: float) -> AgentState:
    return AgentState(x, y, heading)
