"""Executable convergence mathematics: the per-window heading-gain recursion,
the guaranteed n-tick decrease bound, and post-hoc certification of runs."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .control import UBetaParams, delta
from .errors import BoundAnomalyWarning, ContractError, InsufficientWindow
from .model import ModelParams, SwarmState

# 1e-12 absorbs pure floating error in the per-tick comparison; 1e-9 absorbs
# arithmetic accumulated across an n-tick window.
MONOTONE_TOLERANCE = 1e-12
LEMMA2_TOLERANCE = 1e-9


def _check_eta_args(k: int, n: int, beta: float, epsilon: float) -> None:
    if n < 2:
        raise ContractError(f"the decrease bound needs n >= 2, got {n}")
    if not 1 <= k <= n:
        raise ContractError(f"k must lie in 1..{n}, got {k}")
    if not (math.isfinite(beta) and 0.0 < beta < math.pi):
        raise ContractError(f"beta must lie in (0, pi), got {beta!r}")
    if not (math.isfinite(epsilon) and 0.0 < epsilon < math.pi):
        raise ContractError(f"epsilon must lie in (0, pi), got {epsilon!r}")


def eta(k: int, n: int, beta: float, epsilon: float) -> float:
    """Worst-case lower bound on the worst agent's heading gain after k ticks.

    Base case: min of arctan(sin b / (n + cos b)) evaluated at b = beta and
    b = epsilon.  Each further tick applies arctan(sin x / (n - 1 + cos x))
    to the previous value.
    """
    _check_eta_args(k, n, beta, epsilon)
    val = min(
        math.atan(math.sin(beta) / (n + math.cos(beta))),
        math.atan(math.sin(epsilon) / (n + math.cos(epsilon))),
    )
    for _ in range(k - 1):
        val = math.atan(math.sin(val) / (n - 1 + math.cos(val)))
    return val


@dataclass(frozen=True)
class EtaTable:
    """The full gain-bound sequence eta(1)..eta(n) for one (n, beta, epsilon).

    The sequence is strictly positive, strictly decreasing, and below pi/2;
    construction enforces that chain.
    """

    n: int
    beta: float
    epsilon: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.n:
            raise ContractError(f"expected {self.n} values, got {len(self.values)}")
        prev = math.pi / 2
        for k, v in enumerate(self.values, start=1):
            if not 0.0 < v < prev:
                raise ContractError(f"gain-bound chain broken at k={k}: {v!r} not in (0, {prev!r})")
            prev = v

    @classmethod
    def compute(cls, n: int, beta: float, epsilon: float) -> "EtaTable":
        _check_eta_args(1, n, beta, epsilon)
        values = [eta(1, n, beta, epsilon)]
        for _ in range(n - 1):
            x = values[-1]
            values.append(math.atan(math.sin(x) / (n - 1 + math.cos(x))))
        return cls(n=n, beta=beta, epsilon=epsilon, values=tuple(values))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "beta": self.beta,
            "epsilon": self.epsilon,
            "values": list(self.values),
            "delta_bound": self.values[-1],
        }


def delta_bound(n: int, beta: float, epsilon: float) -> float:
    """The guaranteed decrease of the objective distance over any n-tick
    window that starts with distance >= epsilon: eta(n).

    Warns with :class:`BoundAnomalyWarning` if the computed bound is not
    strictly below epsilon (certificates then refuse the windowed verdict).
    """
    val = eta(n, n, beta, epsilon)
    if val >= epsilon:
        warnings.warn(
            BoundAnomalyWarning(
                f"decrease bound {val!r} is not below epsilon {epsilon!r} "
                f"for n={n}, beta={beta!r}"
            )
        )
    return val


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Per-run verdicts against the monotone-decrease and windowed-decrease claims.

    ``lemma2_ok`` can only be true when ``monotone_ok`` is.  Tolerances are
    carried so serialized reports are self-describing.
    """

    monotone_ok: bool
    lemma2_ok: bool
    degenerate_events: int
    final_delta: float
    sync_time: Optional[int]
    epsilon_used: float
    delta_bound_used: float
    monotone_tolerance: float = MONOTONE_TOLERANCE
    lemma2_tolerance: float = LEMMA2_TOLERANCE

    def __post_init__(self) -> None:
        if self.lemma2_ok and not self.monotone_ok:
            raise ContractError("windowed verdict cannot hold without per-tick monotonicity")

    def as_dict(self) -> dict:
        return asdict(self)


def certify_run(
    trajectory: Sequence[SwarmState],
    params: ModelParams,
    ubeta: UBetaParams,
    epsilon: Optional[float] = None,
    sync_tolerance: float = 1e-3,
) -> ConvergenceCertificate:
    """Check a full-resolution autopilot trajectory against the convergence claims.

    Windowed decrease is evaluated on every window whose starting distance is
    at least epsilon (default: 10x the sync tolerance), using the n-tick bound
    for the run's (n, beta, epsilon).
    """
    n = params.n
    if len(trajectory) < n + 1:
        raise InsufficientWindow(
            f"trajectory has {len(trajectory)} states; need at least n+1 = {n + 1}"
        )
    for prev, cur in zip(trajectory, trajectory[1:]):
        if cur.t != prev.t + 1:
            raise InsufficientWindow(
                f"trajectory jumps from tick {prev.t} to {cur.t}; windows need "
                "full-resolution recording"
            )
    if epsilon is None:
        epsilon = sync_tolerance * 10.0

    deltas = [delta(s) for s in trajectory]
    monotone_ok = all(
        deltas[i + 1] <= deltas[i] + MONOTONE_TOLERANCE for i in range(len(deltas) - 1)
    )

    bound = delta_bound(n, ubeta.beta, epsilon)
    windows_ok = bound < epsilon
    if windows_ok:
        for i in range(len(deltas) - n):
            if deltas[i] >= epsilon and not (
                deltas[i + n] <= deltas[i] - bound + LEMMA2_TOLERANCE
            ):
                windows_ok = False
                break

    sync_time: Optional[int] = None
    for s, d in zip(trajectory, deltas):
        if d < sync_tolerance:
            sync_time = s.t
            break

    return ConvergenceCertificate(
        monotone_ok=monotone_ok,
        lemma2_ok=monotone_ok and windows_ok,
        degenerate_events=sum(len(s.degenerate_agents) for s in trajectory),
        final_delta=deltas[-1],
        sync_time=sync_time,
        epsilon_used=epsilon,
        delta_bound_used=bound,
    )


def lagging_counts(
    trajectory: Sequence[SwarmState], bound: float, window_start: int = 0
) -> list[int]:
    """Inspection-only view of the window argument behind the n-tick bound:
    for each state from ``window_start`` on, how many ordinary agents still
    have headings below the window-start minimum plus ``bound``.

    No pass/fail semantics; useful for eyeballing how a window empties out.
    """
    if not 0 <= window_start < len(trajectory):
        raise ContractError(f"window_start {window_start} outside trajectory")
    ref = float(trajectory[window_start].headings.min())
    return [
        int((s.headings < ref + bound).sum()) for s in trajectory[window_start:]
    ]
