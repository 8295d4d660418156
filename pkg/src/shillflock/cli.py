"""Command-line entry point.

Subcommands: run (one config), batch (many configs, optional worker pool),
verify (re-certify a written trajectory), bounds (print the gain-bound table),
serve (live steering service).  Exit codes: 0 success, 2 configuration error,
3 scenario violation, 4 failed certification under --require-certificate.
"""
from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path
from typing import Optional

from .analysis import EtaTable, certify_run
from .control import UBetaParams
from .errors import ConfigError, ContractError, InsufficientWindow, ScenarioViolation
from .harness import (
    config_from_dict,
    run_batch,
    run_simulation,
    summary_to_dict,
    write_aggregate_csv,
)
from .model import ModelParams
from .trajectory import read_trajectory

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SCENARIO = 3
EXIT_CERTIFICATE = 4


def _load_config(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def _certificate_ok(certificate) -> bool:
    return certificate is not None and certificate.monotone_ok and certificate.lemma2_ok


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    out_dir = args.out if args.out is not None else Path(args.config).stem + "_out"
    summary = run_simulation(config, out_dir)
    print(json.dumps(summary_to_dict(summary, summary.artifact_paths), indent=2))
    if args.require_certificate and not _certificate_ok(summary.certificate):
        print("certification failed", file=sys.stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


def _cmd_batch(args: argparse.Namespace) -> int:
    paths: list[str]
    if Path(args.configs).exists():
        paths = [args.configs]
    else:
        paths = sorted(glob.glob(args.configs))
        if not paths:
            raise ConfigError(f"no config files match {args.configs!r}")
    configs = []
    for path in paths:
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if isinstance(data, list):
            configs.extend(config_from_dict(entry) for entry in data)
        else:
            configs.append(config_from_dict(data))

    out_root = Path(args.out) if args.out is not None else None
    summaries, rows = run_batch(configs, parallelism=args.parallel, out_root=out_root)
    if out_root is not None:
        out_root.mkdir(parents=True, exist_ok=True)
        write_aggregate_csv(out_root / "aggregate.csv", rows)
    for row in rows:
        print(json.dumps(row))
    if args.require_certificate and any(
        s is None or not _certificate_ok(s.certificate) for s in summaries
    ):
        print("certification failed for at least one run", file=sys.stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    trajectory = read_trajectory(args.trajectory)
    n = trajectory[0].n
    certificate = certify_run(
        trajectory,
        ModelParams(n=n, v=0.0, r=0.0),  # only n enters certification
        UBetaParams(args.beta),
        epsilon=args.epsilon,
        sync_tolerance=args.sync_tolerance,
    )
    print(json.dumps(certificate.as_dict(), indent=2))
    if args.require_certificate and not _certificate_ok(certificate):
        print("certification failed", file=sys.stderr)
        return EXIT_CERTIFICATE
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    table = EtaTable.compute(args.n, args.beta, args.epsilon)
    print(json.dumps(table.as_dict(), indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shillflock",
        description="Deterministic flock simulator steered by a single shill agent.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one run from a JSON config")
    p_run.add_argument("--config", required=True, help="JSON run configuration")
    p_run.add_argument("--out", default=None, help="output directory (default: <config>_out)")
    p_run.add_argument("--require-certificate", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    p_batch = sub.add_parser("batch", help="execute many runs")
    p_batch.add_argument("--configs", required=True, help="JSON file (object or list) or glob")
    p_batch.add_argument("--parallel", type=int, default=1, help="worker processes")
    p_batch.add_argument("--out", default=None, help="output root for per-run dirs + aggregate.csv")
    p_batch.add_argument("--require-certificate", action="store_true")
    p_batch.set_defaults(func=_cmd_batch)

    p_verify = sub.add_parser("verify", help="re-certify a written trajectory CSV")
    p_verify.add_argument("--trajectory", required=True)
    p_verify.add_argument("--epsilon", type=float, required=True)
    p_verify.add_argument("--beta", type=float, required=True)
    p_verify.add_argument("--sync-tolerance", type=float, default=1e-3)
    p_verify.add_argument("--require-certificate", action="store_true")
    p_verify.set_defaults(func=_cmd_verify)

    p_bounds = sub.add_parser("bounds", help="print the gain-bound table and n-tick decrease")
    p_bounds.add_argument("--n", type=int, required=True)
    p_bounds.add_argument("--beta", type=float, required=True)
    p_bounds.add_argument("--epsilon", type=float, required=True)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_serve = sub.add_parser("serve", help="start the live steering service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, help="directory of built UI assets")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioViolation as exc:
        print(f"scenario violation: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (ConfigError, ContractError, InsufficientWindow) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
