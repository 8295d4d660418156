"""Seeded scenario generation: random starts confined to the controllable
heading half-plane, the six-agent ring counterexample, and explicit states."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .model import AgentState, SwarmState

# Generator identity recorded in output artifacts so seeds reproduce across
# platforms and reimplementations.
RNG_NAME = "splitmix64"

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood constants).

    Tiny, portable, and fully specified by three published 64-bit constants;
    the float path uses the top 53 bits, uniform on [0, 1).
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        x = self._state
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
        return x ^ (x >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform on [lo, hi) from the 53-bit path."""
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + u * (hi - lo)


class ScenarioKind(enum.Enum):
    RANDOM_SECTION3 = "random_section3"
    HEXAGON = "hexagon"
    EXPLICIT = "explicit"


DEFAULT_POSITION_BOX = ((0.0, 5.0), (0.0, 5.0))
DEFAULT_HEADING_INTERVAL = (0.0, math.pi)


@dataclass(frozen=True)
class ScenarioSpec:
    """Recipe for an initial swarm state.

    ``random_section3`` draws positions uniformly in ``position_box`` and
    headings uniformly in ``heading_interval`` (which must stay inside
    [0, pi), the regime the pull law's guarantee covers).  ``hexagon`` fixes
    six motionless agents on a circle of circumradius r, so adjacent vertices
    sit exactly at distance r, with headings k*pi/3.
    """

    kind: ScenarioKind
    n: int
    position_box: tuple[tuple[float, float], tuple[float, float]] = DEFAULT_POSITION_BOX
    heading_interval: tuple[float, float] = DEFAULT_HEADING_INTERVAL
    r: float = 1.0
    v: float = 0.03
    seed: int = 0
    explicit_states: Optional[tuple[AgentState, ...]] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"scenario needs n >= 1, got {self.n}")
        if self.v < 0.0 or self.r < 0.0:
            raise ConfigError(f"v and r must be >= 0, got v={self.v}, r={self.r}")
        if self.kind is ScenarioKind.RANDOM_SECTION3:
            (xlo, xhi), (ylo, yhi) = self.position_box
            if not (xlo <= xhi and ylo <= yhi):
                raise ConfigError(f"empty position box {self.position_box}")
            hlo, hhi = self.heading_interval
            if not (0.0 <= hlo < hhi <= math.pi):
                raise ConfigError(
                    f"heading interval {self.heading_interval} must lie inside [0, pi)"
                )
        elif self.kind is ScenarioKind.HEXAGON:
            if self.n != 6:
                raise ConfigError(f"the hexagon scenario fixes n = 6, got {self.n}")
            if self.v != 0.0:
                raise ConfigError(f"the hexagon scenario fixes v = 0, got {self.v}")
        elif self.kind is ScenarioKind.EXPLICIT:
            if self.explicit_states is None or len(self.explicit_states) != self.n:
                got = None if self.explicit_states is None else len(self.explicit_states)
                raise ConfigError(f"explicit scenario needs exactly n={self.n} states, got {got}")

    @classmethod
    def hexagon(cls, r: float = 1.0, seed: int = 0) -> "ScenarioSpec":
        return cls(kind=ScenarioKind.HEXAGON, n=6, r=r, v=0.0, seed=seed)


def _hexagon_state(r: float) -> SwarmState:
    # Vertices expressed with exact halves instead of cos/sin(k*pi/3): the
    # values are identical in exact arithmetic, but this form keeps every
    # adjacent-vertex distance <= r after rounding, so each agent's
    # neighborhood is exactly itself plus its two ring neighbors.
    h = math.sqrt(3.0) / 2.0
    corners = [(1.0, 0.0), (0.5, h), (-0.5, h), (-1.0, 0.0), (-0.5, -h), (0.5, -h)]
    positions = np.array(corners, dtype=np.float64) * r
    third = math.pi / 3.0
    headings = np.array([k * third for k in range(6)], dtype=np.float64)
    return SwarmState(t=0, positions=positions, headings=headings)


def generate_scenario(spec: ScenarioSpec) -> SwarmState:
    """Build the initial state; identical specs give bit-identical states."""
    if spec.kind is ScenarioKind.HEXAGON:
        return _hexagon_state(spec.r)
    if spec.kind is ScenarioKind.EXPLICIT:
        return SwarmState.from_agents(0, list(spec.explicit_states))

    rng = SplitMix64(spec.seed)
    (xlo, xhi), (ylo, yhi) = spec.position_box
    hlo, hhi = spec.heading_interval
    positions = np.empty((spec.n, 2), dtype=np.float64)
    headings = np.empty(spec.n, dtype=np.float64)
    # draw order per agent: x, y, heading
    for i in range(spec.n):
        positions[i, 0] = rng.uniform(xlo, xhi)
        positions[i, 1] = rng.uniform(ylo, yhi)
        h = rng.uniform(hlo, hhi)
        if h >= hhi:  # guard the rounding edge of lo + u*(hi - lo)
            h = math.nextafter(hhi, hlo)
        headings[i] = h
    return SwarmState(t=0, positions=positions, headings=headings)
