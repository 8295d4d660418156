"""Reproducible experiment harness: run configuration, single runs, batches,
and artifact writing (trajectory CSV, per-tick metric CSV, summary JSON)."""
from __future__ import annotations

import csv
import enum
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .analysis import ConvergenceCertificate, certify_run
from .control import UBetaParams, delta, u_beta
from .errors import ConfigError, IllCaseError, InsufficientWindow
from .model import (
    AgentState,
    AveragingRule,
    ModelParams,
    ShillConstraint,
    SwarmState,
    step,
)
from .scenarios import (
    DEFAULT_HEADING_INTERVAL,
    DEFAULT_POSITION_BOX,
    RNG_NAME,
    ScenarioKind,
    ScenarioSpec,
    generate_scenario,
)
from .trajectory import write_delta_series, write_trajectory

SUMMARY_SCHEMA = 1


class ControlMode(enum.Enum):
    NONE = "none"
    UBETA = "ubeta"
    MANUAL = "manual"


@dataclass(frozen=True)
class ControlSpec:
    mode: ControlMode
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mode is ControlMode.UBETA:
            if self.beta is None:
                raise ConfigError("ubeta control requires a beta value")
        elif self.beta is not None:
            raise ConfigError(f"beta is only meaningful for ubeta control, got mode={self.mode}")


@dataclass(frozen=True)
class RunConfig:
    """One reproducible run: scenario, model, control, stopping rule, recording."""

    scenario: ScenarioSpec
    model: ModelParams
    control: ControlSpec
    max_ticks: int = 10000
    sync_tolerance: float = 1e-3
    record_every: int = 1

    def __post_init__(self) -> None:
        if self.max_ticks < 1:
            raise ConfigError(f"max_ticks must be >= 1, got {self.max_ticks}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be >= 1, got {self.record_every}")
        if not (math.isfinite(self.sync_tolerance) and self.sync_tolerance > 0.0):
            raise ConfigError(f"sync_tolerance must be positive, got {self.sync_tolerance}")
        for name in ("n", "v", "r"):
            if getattr(self.model, name) != getattr(self.scenario, name):
                raise ConfigError(
                    f"model.{name}={getattr(self.model, name)} disagrees with "
                    f"scenario.{name}={getattr(self.scenario, name)}"
                )


@dataclass
class RunSummary:
    """Outcome of one run; the certificate is present exactly when the run was
    an autopilot run from a valid controllable start (n >= 2, headings in [0, pi))."""

    config: RunConfig
    certificate: Optional[ConvergenceCertificate]
    ticks_executed: int
    wall_time: float
    recorded_ticks: tuple[int, ...]
    delta_series: tuple[Optional[float], ...]
    artifact_paths: Optional[dict[str, str]] = None
    trajectory: Optional[tuple[SwarmState, ...]] = None


def _lenient_delta(state: SwarmState) -> Optional[float]:
    hdg = state.headings
    if bool(np.all((hdg >= 0.0) & (hdg < math.pi))):
        return math.pi - float(hdg.min())
    return None


def _section3_start(state: SwarmState, config: RunConfig) -> bool:
    return (
        config.control.mode is ControlMode.UBETA
        and config.model.n >= 2
        and _lenient_delta(state) is not None
    )


def run_simulation(
    config: RunConfig,
    out_dir: Optional[str | Path] = None,
    *,
    keep_trajectory: bool = False,
) -> RunSummary:
    """Execute one run; in autopilot mode ticks stop once the objective
    distance drops below the sync tolerance, otherwise after max_ticks.

    When certification applies, recording is forced to full resolution and
    the certificate is computed from the full-resolution trajectory.  With
    ``out_dir`` set, writes trajectory.csv, delta.csv and summary.json there;
    identical configs produce byte-identical files.
    """
    state = generate_scenario(config.scenario)
    ubeta = (
        UBetaParams(config.control.beta)
        if config.control.mode is ControlMode.UBETA
        else None
    )
    certifiable = _section3_start(state, config)
    record_every = 1 if certifiable else config.record_every

    start = time.perf_counter()
    trajectory = [state]
    if ubeta is not None:
        while state.t < config.max_ticks:
            if delta(state) < config.sync_tolerance:
                break
            command = u_beta(state, ubeta)
            state = step(state, config.model, command)
            if certifiable and state.degenerate_agents:
                raise IllCaseError(state.t, state.degenerate_agents)
            trajectory.append(state)
    else:
        for _ in range(config.max_ticks):
            state = step(state, config.model, None)
            trajectory.append(state)
    wall_time = time.perf_counter() - start

    certificate = None
    if certifiable:
        try:
            certificate = certify_run(
                trajectory, config.model, ubeta, sync_tolerance=config.sync_tolerance
            )
        except InsufficientWindow:
            certificate = None  # run synced before a single n-tick window existed

    if record_every > 1:
        recorded = [s for s in trajectory if s.t % record_every == 0]
        if recorded[-1].t != trajectory[-1].t:
            recorded.append(trajectory[-1])
    else:
        recorded = trajectory
    recorded_ticks = tuple(s.t for s in recorded)
    delta_series = tuple(_lenient_delta(s) for s in recorded)

    summary = RunSummary(
        config=config,
        certificate=certificate,
        ticks_executed=trajectory[-1].t,
        wall_time=wall_time,
        recorded_ticks=recorded_ticks,
        delta_series=delta_series,
        trajectory=tuple(trajectory) if keep_trajectory else None,
    )
    if out_dir is not None:
        summary.artifact_paths = write_run_artifacts(summary, recorded, out_dir)
    return summary


def write_run_artifacts(
    summary: RunSummary, recorded: Sequence[SwarmState], out_dir: str | Path
) -> dict[str, str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trajectory_csv = out / "trajectory.csv"
    delta_csv = out / "delta.csv"
    summary_json = out / "summary.json"
    write_trajectory(trajectory_csv, recorded)
    write_delta_series(delta_csv, summary.recorded_ticks, summary.delta_series)
    paths = {
        "trajectory": str(trajectory_csv),
        "delta": str(delta_csv),
        "summary": str(summary_json),
    }
    # reference siblings by name: summaries stay byte-identical across out dirs
    refs = {"trajectory": trajectory_csv.name, "delta": delta_csv.name}
    with open(summary_json, "w") as fh:
        json.dump(summary_to_dict(summary, refs), fh, indent=2)
        fh.write("\n")
    return paths


# ---------------------------------------------------------------------------
# JSON (de)serialization of configs and summaries


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    out = {
        "kind": spec.kind.value,
        "n": spec.n,
        "position_box": [list(spec.position_box[0]), list(spec.position_box[1])],
        "heading_interval": list(spec.heading_interval),
        "r": spec.r,
        "v": spec.v,
        "seed": spec.seed,
    }
    if spec.explicit_states is not None:
        out["explicit_states"] = [
            {"x": a.x, "y": a.y, "heading": a.heading} for a in spec.explicit_states
        ]
    return out


def scenario_from_dict(data: dict) -> ScenarioSpec:
    try:
        kind = ScenarioKind(data["kind"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad scenario kind: {exc}") from exc
    n = data.get("n", 6 if kind is ScenarioKind.HEXAGON else None)
    if n is None:
        raise ConfigError("scenario needs an agent count n")
    try:
        explicit = None
        if data.get("explicit_states") is not None:
            explicit = tuple(
                AgentState(s["x"], s["y"], s["heading"]) for s in data["explicit_states"]
            )
        box = data.get("position_box", DEFAULT_POSITION_BOX)
        interval = data.get("heading_interval", DEFAULT_HEADING_INTERVAL)
        return ScenarioSpec(
            kind=kind,
            n=int(n),
            position_box=(
                (float(box[0][0]), float(box[0][1])),
                (float(box[1][0]), float(box[1][1])),
            ),
            heading_interval=(float(interval[0]), float(interval[1])),
            r=float(data.get("r", 1.0)),
            v=float(data.get("v", 0.0 if kind is ScenarioKind.HEXAGON else 0.03)),
            seed=int(data.get("seed", 0)),
            explicit_states=explicit,
        )
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        raise ConfigError(f"malformed scenario section: {exc}") from exc


def config_to_dict(config: RunConfig) -> dict:
    control: dict = {"mode": config.control.mode.value}
    if config.control.beta is not None:
        control["beta"] = config.control.beta
    return {
        "scenario": scenario_to_dict(config.scenario),
        "model": {
            "averaging_rule": config.model.averaging_rule.value,
            "shill_constraint": config.model.shill_constraint.value,
        },
        "control": control,
        "max_ticks": config.max_ticks,
        "sync_tolerance": config.sync_tolerance,
        "record_every": config.record_every,
    }


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict) or "scenario" not in data:
        raise ConfigError("config is missing the scenario section")
    if not isinstance(data["scenario"], dict):
        raise ConfigError("the scenario section must be an object")
    scenario = scenario_from_dict(data["scenario"])
    model_data = data.get("model", {})
    if not isinstance(model_data, dict):
        raise ConfigError("the model section must be an object")
    for name in ("n", "v", "r"):
        if name in model_data and float(model_data[name]) != float(getattr(scenario, name)):
            raise ConfigError(
                f"model.{name}={model_data[name]} disagrees with scenario.{name}"
            )
    try:
        model = ModelParams(
            n=scenario.n,
            v=scenario.v,
            r=scenario.r,
            averaging_rule=AveragingRule(model_data.get("averaging_rule", "vector_sum")),
            shill_constraint=ShillConstraint(
                model_data.get("shill_constraint", "unconstrained")
            ),
        )
    except ValueError as exc:
        raise ConfigError(f"bad model section: {exc}") from exc

    control_data = data.get("control", {"mode": "none"})
    if isinstance(control_data, str):
        control_data = {"mode": control_data}
    try:
        mode = ControlMode(control_data.get("mode", "none"))
    except (AttributeError, ValueError) as exc:
        raise ConfigError(f"bad control mode: {exc}") from exc
    try:
        beta = control_data.get("beta")
        control = ControlSpec(mode=mode, beta=None if beta is None else float(beta))
        return RunConfig(
            scenario=scenario,
            model=model,
            control=control,
            max_ticks=int(data.get("max_ticks", 10000)),
            sync_tolerance=float(data.get("sync_tolerance", 1e-3)),
            record_every=int(data.get("record_every", 1)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed run config: {exc}") from exc


def summary_to_dict(summary: RunSummary, paths: Optional[dict[str, str]] = None) -> dict:
    # wall_time is deliberately omitted: identical configs must serialize to
    # byte-identical artifacts.
    return {
        "schema": SUMMARY_SCHEMA,
        "rng": RNG_NAME,
        "config": config_to_dict(summary.config),
        "certificate": None if summary.certificate is None else summary.certificate.as_dict(),
        "ticks_executed": summary.ticks_executed,
        "trajectory_csv": None if paths is None else paths.get("trajectory"),
        "delta_csv": None if paths is None else paths.get("delta"),
    }


# ---------------------------------------------------------------------------
# Batch execution

AGGREGATE_COLUMNS = [
    "index",
    "status",
    "kind",
    "n",
    "seed",
    "control",
    "beta",
    "ticks_executed",
    "sync_time",
    "final_delta",
    "monotone_ok",
    "lemma2_ok",
    "degenerate_events",
    "error",
]


def _run_one(args: tuple[int, RunConfig, Optional[str]]) -> tuple[int, Optional[RunSummary], str]:
    index, config, out_dir = args
    try:
        return index, run_simulation(config, out_dir), ""
    except Exception as exc:  # single-run failures become table rows
        return index, None, f"{type(exc).__name__}: {exc}"


def _aggregate_row(index: int, config: RunConfig, summary: Optional[RunSummary], error: str) -> dict:
    cert = summary.certificate if summary is not None else None
    return {
        "index": index,
        "status": "ok" if summary is not None else "failed",
        "kind": config.scenario.kind.value,
        "n": config.scenario.n,
        "seed": config.scenario.seed,
        "control": config.control.mode.value,
        "beta": "" if config.control.beta is None else format(config.control.beta, ".17g"),
        "ticks_executed": "" if summary is None else summary.ticks_executed,
        "sync_time": "" if cert is None or cert.sync_time is None else cert.sync_time,
        "final_delta": "" if cert is None else format(cert.final_delta, ".17g"),
        "monotone_ok": "" if cert is None else cert.monotone_ok,
        "lemma2_ok": "" if cert is None else cert.lemma2_ok,
        "degenerate_events": "" if cert is None else cert.degenerate_events,
        "error": error,
    }


def run_batch(
    configs: Sequence[RunConfig],
    parallelism: int = 1,
    out_root: Optional[str | Path] = None,
) -> tuple[list[Optional[RunSummary]], list[dict]]:
    """Run configs independently; results match sequential execution
    regardless of parallelism, and rows keep the input order."""
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
    jobs = []
    for i, config in enumerate(configs):
        out_dir = None if out_root is None else str(Path(out_root) / f"run_{i:04d}")
        jobs.append((i, config, out_dir))

    results: list[tuple[int, Optional[RunSummary], str]]
    if parallelism == 1 or len(jobs) <= 1:
        results = [_run_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_run_one, jobs))

    summaries = [summary for _, summary, _ in results]
    rows = [
        _aggregate_row(i, configs[i], summary, error) for i, summary, error in results
    ]
    return summaries, rows


def write_aggregate_csv(path: str | Path, rows: Sequence[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=AGGREGATE_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
