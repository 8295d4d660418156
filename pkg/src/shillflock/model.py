"""Synchronous discrete-time flock dynamics with an optional injected shill.

Ordinary agents steer toward the angle of the summed velocity vectors of all
in-radius neighbors (self included) and then move one tick at common speed v
along the new heading.  The shill occupies index 0: ordinary agents treat it
as one of their own, but its state is set externally and it has no update
rule of its own (except the optional kinematic drift of the constrained
variant).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ContractError, DegenerateSumError

log = logging.getLogger(__name__)

TAU = 2.0 * math.pi

# Magnitude of the summed velocity vectors below which the sum is treated
# as degenerate and the agent holds its previous heading.
ZERO_SUM_EPSILON = 1e-12


def normalize_angle(angle: float) -> float:
    """Map an angle to [0, 2*pi).  Guards the wrap edge where rounding of a
    tiny negative input would otherwise return exactly 2*pi."""
    a = angle % TAU
    if a >= TAU or a < 0.0:
        a = 0.0
    return a


def normalize_angles(angles: np.ndarray) -> np.ndarray:
    """Vectorized :func:`normalize_angle`."""
    a = np.mod(angles, TAU)
    return np.where((a >= TAU) | (a < 0.0), 0.0, a)


class AveragingRule(enum.Enum):
    VECTOR_SUM = "vector_sum"
    SCALAR_MEAN = "scalar_mean"


class ShillConstraint(enum.Enum):
    UNCONSTRAINED = "unconstrained"
    KINEMATICALLY_CONSTRAINED = "kinematically_constrained"


@dataclass(frozen=True)
class AgentState:
    """Position in the plane plus a heading angle, normalized to [0, 2*pi)."""

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.heading)):
            raise ContractError(f"agent state must be finite, got {(self.x, self.y, self.heading)}")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "heading", normalize_angle(float(self.heading)))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ModelParams:
    """Agent count, common speed, neighborhood radius, and rule variants.

    ``scalar_mean`` averaging exists only to reproduce the raw-angle
    arithmetic-mean model it is contrasted against; the default vector-sum
    rule is the model proper.
    """

    n: int
    v: float = 0.03
    r: float = 1.0
    averaging_rule: AveragingRule = AveragingRule.VECTOR_SUM
    shill_constraint: ShillConstraint = ShillConstraint.UNCONSTRAINED

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ContractError(f"need at least one agent, got n={self.n}")
        if not (math.isfinite(self.v) and self.v >= 0.0):
            raise ContractError(f"speed must be finite and >= 0, got {self.v}")
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise ContractError(f"radius must be finite and >= 0, got {self.r}")


@dataclass(frozen=True, eq=False)
class SwarmState:
    """Immutable snapshot of the whole swarm at one tick.

    Ordinary agents are indexed 1..n (array slot i-1); the optional shill is
    index 0.  ``degenerate_agents`` lists the agents whose neighbor sum was
    degenerate during the step that produced this state; it is diagnostic
    metadata and excluded from equality.
    """

    t: int
    positions: np.ndarray  # (n, 2) float64
    headings: np.ndarray  # (n,) float64 in [0, 2*pi)
    shill: Optional[AgentState] = None
    degenerate_agents: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=np.float64)
        hdg = np.asarray(self.headings, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 2 or hdg.shape != (pos.shape[0],):
            raise ContractError(f"inconsistent state shapes {pos.shape} / {hdg.shape}")
        if pos.shape[0] < 1:
            raise ContractError("state must contain at least one agent")
        if self.t < 0:
            raise ContractError(f"tick must be >= 0, got {self.t}")
        if not np.all(np.isfinite(pos)) or not np.all(np.isfinite(hdg)):
            raise ContractError("positions and headings must be finite")
        hdg = normalize_angles(hdg)
        pos = pos.copy()
        pos.setflags(write=False)
        hdg.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "headings", hdg)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def agents(self) -> tuple[AgentState, ...]:
        return tuple(
            AgentState(self.positions[i, 0], self.positions[i, 1], self.headings[i])
            for i in range(self.n)
        )

    def agent(self, i: int) -> AgentState:
        """Ordinary agent by 1-based index."""
        if not 1 <= i <= self.n:
            raise ContractError(f"agent index {i} out of range 1..{self.n}")
        return AgentState(self.positions[i - 1, 0], self.positions[i - 1, 1], self.headings[i - 1])

    @classmethod
    def from_agents(
        cls,
        t: int,
        agents: Sequence[AgentState],
        shill: Optional[AgentState] = None,
    ) -> "SwarmState":
        if not agents:
            raise ContractError("state must contain at least one agent")
        pos = np.array([[a.x, a.y] for a in agents], dtype=np.float64)
        hdg = np.array([a.heading for a in agents], dtype=np.float64)
        return cls(t=t, positions=pos, headings=hdg, shill=shill)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SwarmState):
            return NotImplemented
        return (
            self.t == other.t
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.headings, other.headings)
            and self.shill == other.shill
        )


def _all_positions_headings(state: SwarmState) -> tuple[np.ndarray, np.ndarray]:
    """Positions/headings of shill (if any) followed by ordinary agents."""
    if state.shill is None:
        return state.positions, state.headings
    pos = np.vstack([[state.shill.x, state.shill.y], state.positions])
    hdg = np.concatenate([[state.shill.heading], state.headings])
    return pos, hdg


def neighbors(state: SwarmState, params: ModelParams, i: int) -> frozenset[int]:
    """Indices within distance r of agent i, self included; 0 is the shill.

    The comparison is inclusive (<= r), so co-located agents are neighbors
    even at r = 0.
    """
    if not 1 <= i <= state.n:
        raise ContractError(f"agent index {i} out of range 1..{state.n}")
    p = state.positions[i - 1]
    r2 = params.r * params.r
    diff = state.positions - p
    d2 = diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1]
    out = set(int(j) + 1 for j in np.nonzero(d2 <= r2)[0])
    if state.shill is not None:
        dx = state.shill.x - p[0]
        dy = state.shill.y - p[1]
        if dx * dx + dy * dy <= r2:
            out.add(0)
    return frozenset(out)


class UniformGrid:
    """Uniform-grid spatial index over one state snapshot.

    Pure performance accelerator for :func:`neighbors`: cell size equals the
    neighborhood radius, candidate cells are the surrounding 5x5 block, and
    candidates are filtered with the same inclusive distance test, so the
    returned sets are identical to the naive path.  The scan is 5x5 rather
    than 3x3 because a float distance can round down to exactly r while the
    true gap exceeds the cell size, putting a neighbor two cells away.
    """

    def __init__(self, state: SwarmState, params: ModelParams):
        self._state = state
        self._r = params.r
        # any cell size >= r keeps the 3x3 scan exhaustive; tiny radii fall
        # back to unit cells so coordinate/cell never overflows
        self._cell = params.r if params.r > 1e-9 else 1.0
        self._cells: dict[tuple[int, int], list[int]] = {}
        for i in range(state.n):
            key = self._key(state.positions[i, 0], state.positions[i, 1])
            self._cells.setdefault(key, []).append(i + 1)
        if state.shill is not None:
            key = self._key(state.shill.x, state.shill.y)
            self._cells.setdefault(key, []).append(0)

    def _key(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self._cell), math.floor(y / self._cell))

    def neighbors(self, i: int) -> frozenset[int]:
        state = self._state
        if not 1 <= i <= state.n:
            raise ContractError(f"agent index {i} out of range 1..{state.n}")
        px = state.positions[i - 1, 0]
        py = state.positions[i - 1, 1]
        cx, cy = self._key(px, py)
        r2 = self._r * self._r
        out = set()
        for dx in (-2, -1, 0, 1, 2):
            for dy in (-2, -1, 0, 1, 2):
                for j in self._cells.get((cx + dx, cy + dy), ()):
                    if j == 0:
                        qx, qy = state.shill.x, state.shill.y
                    else:
                        qx, qy = state.positions[j - 1, 0], state.positions[j - 1, 1]
                    ddx = qx - px
                    ddy = qy - py
                    if ddx * ddx + ddy * ddy <= r2:
                        out.add(j)
        return frozenset(out)


def mean_heading(
    headings: Iterable[float],
    rule: AveragingRule = AveragingRule.VECTOR_SUM,
    *,
    zero_sum_epsilon: float = ZERO_SUM_EPSILON,
) -> float:
    """Average heading of a nonempty list of angles, in [0, 2*pi).

    Under the vector-sum rule this is the two-argument arctangent of the
    summed unit vectors (sum of sines, sum of cosines).  A summed vector of
    magnitude <= ``zero_sum_epsilon`` raises :class:`DegenerateSumError`; the
    caller decides the fallback.  The scalar-mean rule takes the plain
    arithmetic mean of the stored angle values with no wraparound handling.
    """
    values = [float(h) for h in headings]
    if not values:
        raise ContractError("mean_heading of an empty list")
    if any(not math.isfinite(h) for h in values):
        raise ContractError(f"non-finite heading in {values}")
    if rule is AveragingRule.SCALAR_MEAN:
        return normalize_angle(math.fsum(values) / len(values))
    sy = math.fsum(math.sin(h) for h in values)
    sx = math.fsum(math.cos(h) for h in values)
    mag = math.hypot(sx, sy)
    if mag <= zero_sum_epsilon:
        raise DegenerateSumError(mag)
    return normalize_angle(math.atan2(sy, sx))


def step(state: SwarmState, params: ModelParams, command=None) -> SwarmState:
    """Advance the swarm one tick; deterministic in its inputs.

    Tick order: the command (if any) sets the shill's time-t state; every
    ordinary agent averages the time-t headings of its in-radius neighbors
    (shill included) fully synchronously; positions then move by v along the
    *new* headings.  A degenerate neighbor sum leaves that agent's heading
    unchanged and is recorded in the returned state's ``degenerate_agents``.
    Under the kinematically constrained variant a command-less shill drifts
    by v along its own heading, like an ordinary agent would.

    ``command`` is any object with x, y and heading attributes (already
    validated); passing one activates or overwrites the shill slot.
    """
    if state.n != params.n:
        raise ContractError(f"state has {state.n} agents but params expect {params.n}")

    shill = state.shill
    commanded = command is not None
    if commanded:
        shill = AgentState(command.x, command.y, command.heading)

    pre = SwarmState(
        t=state.t,
        positions=state.positions,
        headings=state.headings,
        shill=shill,
    )
    all_pos, all_hdg = _all_positions_headings(pre)

    diff = state.positions[:, None, :] - all_pos[None, :, :]
    d2 = (diff * diff).sum(axis=-1)
    mask = (d2 <= params.r * params.r).astype(np.float64)

    degenerate: tuple[int, ...] = ()
    if params.averaging_rule is AveragingRule.VECTOR_SUM:
        units = np.column_stack([np.cos(all_hdg), np.sin(all_hdg)])
        # fixed-order summation keeps steps bit-reproducible
        sums = np.einsum("ij,jk->ik", mask, units, optimize=False)
        mags = np.hypot(sums[:, 0], sums[:, 1])
        bad = mags <= ZERO_SUM_EPSILON
        new_hdg = np.where(
            bad, state.headings, normalize_angles(np.arctan2(sums[:, 1], sums[:, 0]))
        )
        if bad.any():
            degenerate = tuple(int(j) + 1 for j in np.nonzero(bad)[0])
            log.warning("degenerate neighbor sum at tick %d for agents %s", state.t, degenerate)
    else:
        counts = mask.sum(axis=1)
        sums = np.einsum("ij,j->i", mask, all_hdg, optimize=False)
        new_hdg = normalize_angles(sums / counts)

    new_pos = state.positions + params.v * np.column_stack([np.cos(new_hdg), np.sin(new_hdg)])

    if (
        shill is not None
        and params.shill_constraint is ShillConstraint.KINEMATICALLY_CONSTRAINED
        and not commanded
    ):
        shill = AgentState(
            shill.x + params.v * math.cos(shill.heading),
            shill.y + params.v * math.sin(shill.heading),
            shill.heading,
        )

    return SwarmState(
        t=state.t + 1,
        positions=new_pos,
        headings=new_hdg,
        shill=shill,
        degenerate_agents=degenerate,
    )
