"""Shill command generation: the beta pull law, the objective-distance metric,
worst-agent selection, and sanitization of manual steering commands."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InvalidCommand, ScenarioViolation
from .model import ModelParams, ShillConstraint, SwarmState, normalize_angle


class CommandSource(enum.Enum):
    U_BETA = "ubeta"
    MANUAL = "manual"
    NONE = "none"


@dataclass(frozen=True)
class ControlCommand:
    """The shill's commanded position and heading for one tick."""

    x: float
    y: float
    heading: float
    source: CommandSource = CommandSource.NONE

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class UBetaParams:
    """The constant pull angle; must lie strictly inside (0, pi)."""

    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.beta) and 0.0 < self.beta < math.pi):
            raise ContractError(f"beta must lie in (0, pi), got {self.beta!r}")


def _check_section3(state: SwarmState) -> None:
    """All ordinary headings must lie in [0, pi) for the pull law to apply."""
    hdg = state.headings
    bad = np.nonzero(~((hdg >= 0.0) & (hdg < math.pi)))[0]
    if bad.size:
        i = int(bad[0])
        raise ScenarioViolation(i + 1, float(hdg[i]), state.t)


def worst_agent(state: SwarmState) -> int:
    """1-based index of the agent with the minimum heading (lowest index on ties)."""
    _check_section3(state)
    return int(np.argmin(state.headings)) + 1


def delta(state: SwarmState) -> float:
    """Distance pi - min heading between the worst agent and the objective direction."""
    _check_section3(state)
    return math.pi - float(state.headings.min())


def u_beta(state: SwarmState, params: UBetaParams) -> ControlCommand:
    """Place the shill on the worst agent and pull its heading by beta, capped at pi."""
    s = worst_agent(state)
    theta_s = float(state.headings[s - 1])
    if theta_s <= math.pi - params.beta:
        # min() guards the 1-ulp case where theta_s + beta rounds past pi
        heading = min(theta_s + params.beta, math.pi)
    else:
        heading = math.pi
    return ControlCommand(
        x=float(state.positions[s - 1, 0]),
        y=float(state.positions[s - 1, 1]),
        heading=heading,
        source=CommandSource.U_BETA,
    )


def validate_manual(raw: ControlCommand, state: SwarmState, params: ModelParams) -> ControlCommand:
    """Sanitize a manual command: normalize the heading and, under the
    kinematically constrained variant, clamp the position displacement to at
    most v per tick from the shill's previous position."""
    if raw.source is not CommandSource.MANUAL:
        raise ContractError(f"expected a manual command, got source={raw.source}")
    if not (math.isfinite(raw.x) and math.isfinite(raw.y) and math.isfinite(raw.heading)):
        raise InvalidCommand(f"non-finite command {(raw.x, raw.y, raw.heading)}")
    x, y = float(raw.x), float(raw.y)
    heading = normalize_angle(float(raw.heading))
    if (
        params.shill_constraint is ShillConstraint.KINEMATICALLY_CONSTRAINED
        and state.shill is not None
    ):
        dx = x - state.shill.x
        dy = y - state.shill.y
        dist = math.hypot(dx, dy)
        if dist > params.v:
            scale = params.v / dist
            x = state.shill.x + dx * scale
            y = state.shill.y + dy * scale
    return ControlCommand(x=x, y=y, heading=heading, source=CommandSource.MANUAL)
