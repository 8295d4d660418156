"""Exception and warning types shared across the package."""
from __future__ import annotations


class ContractError(ValueError):
    """A caller violated an operation's precondition (bad index, empty input, out-of-range parameter)."""


class DegenerateSumError(ArithmeticError):
    """The neighbor velocity vectors summed to (numerically) zero, so the mean heading is undefined."""

    def __init__(self, magnitude: float):
        super().__init__(f"velocity vector sum has magnitude {magnitude!r}; mean heading undefined")
        self.magnitude = magnitude


class ScenarioViolation(RuntimeError):
    """An ordinary heading left [0, pi); the shill law's guarantee does not apply.

    Carries the offending agent index (1-based) and tick for diagnostics.
    """

    def __init__(self, agent: int, heading: float, tick: int):
        super().__init__(
            f"agent {agent} heading {heading!r} outside [0, pi) at tick {tick}"
        )
        self.agent = agent
        self.heading = heading
        self.tick = tick


class InvalidCommand(ValueError):
    """A manual shill command contained non-finite or otherwise unusable values."""


class ConfigError(ValueError):
    """A scenario or run configuration is internally inconsistent."""


class InsufficientWindow(ValueError):
    """A trajectory is too short to evaluate the n-tick decrease windows."""


class IllCaseError(RuntimeError):
    """A degenerate vector sum fired during a certified autopilot run.

    This is provably impossible for the shill law on a valid scenario, so
    hitting it indicates an implementation defect; certified runs treat it
    as fatal rather than silently holding headings.
    """

    def __init__(self, tick: int, agents: tuple[int, ...]):
        super().__init__(f"degenerate sum for agents {agents} at tick {tick} in a certified run")
        self.tick = tick
        self.agents = agents


class BoundAnomalyWarning(UserWarning):
    """The computed n-tick decrease bound was not strictly below epsilon."""
