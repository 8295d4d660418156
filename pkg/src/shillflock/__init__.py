"""Deterministic flock simulator steered by a single shill agent."""
from .analysis import (
    ConvergenceCertificate,
    EtaTable,
    certify_run,
    delta_bound,
    eta,
    lagging_counts,
)
from .control import (
    CommandSource,
    ControlCommand,
    UBetaParams,
    delta,
    u_beta,
    validate_manual,
    worst_agent,
)
from .errors import (
    BoundAnomalyWarning,
    ConfigError,
    ContractError,
    DegenerateSumError,
    IllCaseError,
    InsufficientWindow,
    InvalidCommand,
    ScenarioViolation,
)
from .harness import (
    ControlMode,
    ControlSpec,
    RunConfig,
    RunSummary,
    config_from_dict,
    config_to_dict,
    run_batch,
    run_simulation,
)
from .model import (
    AgentState,
    AveragingRule,
    ModelParams,
    ShillConstraint,
    SwarmState,
    UniformGrid,
    mean_heading,
    neighbors,
    normalize_angle,
    step,
)
from .scenarios import ScenarioKind, ScenarioSpec, SplitMix64, generate_scenario
from .trajectory import read_trajectory, write_trajectory

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "AveragingRule",
    "BoundAnomalyWarning",
    "CommandSource",
    "ConfigError",
    "ContractError",
    "ControlCommand",
    "ControlMode",
    "ControlSpec",
    "ConvergenceCertificate",
    "DegenerateSumError",
    "EtaTable",
    "IllCaseError",
    "InsufficientWindow",
    "InvalidCommand",
    "ModelParams",
    "RunConfig",
    "RunSummary",
    "ScenarioKind",
    "ScenarioSpec",
    "ScenarioViolation",
    "ShillConstraint",
    "SplitMix64",
    "SwarmState",
    "UBetaParams",
    "UniformGrid",
    "certify_run",
    "config_from_dict",
    "config_to_dict",
    "delta",
    "delta_bound",
    "eta",
    "generate_scenario",
    "lagging_counts",
    "mean_heading",
    "neighbors",
    "normalize_angle",
    "read_trajectory",
    "run_batch",
    "run_simulation",
    "step",
    "u_beta",
    "validate_manual",
    "worst_agent",
    "write_trajectory",
]
