"""Command-line front end.

Subcommands
-----------
run CONFIG        one experiment from an INI config file
sweep CONFIG      cartesian product over semicolon-separated value lists
verify            full acceptance suite (exit 3 if any criterion fails)
report FILES...   summary and complexity tables from stored trace CSVs

Config files are INI key-value text; section names are organizational only,
keys must be ExperimentConfig field names and each key may appear once.
Exit codes: 0 success, 1 config error, 2 solver failure, 3 acceptance
failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import itertools
import json
import os
import sys
from typing import Optional

from . import acceptance
from .bench import (
    ConfigError,
    ExperimentConfig,
    read_trace_csv,
    run_experiment,
    sidecar_path,
)
from .core import LineSearchFailure, OracleFailure, RunawayInnerLoop

__all__ = ["main", "load_config", "load_sweep_configs"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_ACCEPT = 3

_STR_FIELDS = {"problem_label", "method", "output_path"}
_INT_FIELDS = {"max_outer", "max_inner_per_l", "max_linesearch_m", "max_iter", "seed"}
_FLOAT_FIELDS = {
    "epsilon0", "nu", "sigma", "tau", "lam", "theta_k", "beta", "theta", "epsilon_min",
}


def _flatten_ini(path: str) -> dict[str, str]:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"config: cannot read {path!r}")
    flat: dict[str, str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if key in flat:
                raise ConfigError(f"{key}: duplicated across sections")
            flat[key] = value
    return flat


def _coerce_field(key: str, value: str):
    value = value.strip()
    if key in _STR_FIELDS:
        return value
    if key in _INT_FIELDS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if key in _FLOAT_FIELDS:
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    if key == "x0":
        try:
            return tuple(float(t) for t in value.split(",") if t.strip())
        except ValueError:
            raise ConfigError(f"x0: expected comma-separated numbers, got {value!r}") from None
    raise ConfigError(f"{key}: unknown field")


def _build_config(flat: dict[str, str]) -> ExperimentConfig:
    kwargs = {key: _coerce_field(key, value) for key, value in flat.items()}
    for required in ("problem_label", "method"):
        if required not in kwargs:
            raise ConfigError(f"{required}: missing")
    return ExperimentConfig(**kwargs)


def load_config(path: str) -> ExperimentConfig:
    return _build_config(_flatten_ini(path))


def load_sweep_configs(path: str) -> list[ExperimentConfig]:
    """Expand semicolon-separated value lists into the cartesian product."""
    flat = _flatten_ini(path)
    keys = list(flat)
    variants = [[v.strip() for v in flat[k].split(";")] for k in keys]
    configs = []
    for combo in itertools.product(*variants):
        entry = dict(zip(keys, combo))
        template = entry.get("output_path")
        if template is not None and any(len(v) > 1 for v in variants):
            stem, ext = os.path.splitext(template)
            entry["output_path"] = f"{stem}_{len(configs):03d}{ext}"
        configs.append(_build_config(entry))
    return configs


def _summarize(cfg: ExperimentConfig, trace) -> str:
    last = trace.outer_records[-1]
    parts = [
        f"{cfg.method} on {cfg.problem_label}:",
        f"{len([r for r in trace.outer_records if r.l >= 1])} outer records,",
        f"{trace.counters.inner_iterations} inner iterations",
    ]
    if last.delta_wl is not None:
        parts.append(f", final value gap {last.delta_wl:.3e}")
    if last.dist_xstar is not None:
        parts.append(f", final dist to x*_n {last.dist_xstar:.3e}")
    if cfg.output_path is not None:
        parts.append(f", wrote {cfg.output_path}")
    return " ".join(parts)


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.output is not None:
            cfg = dataclasses.replace(cfg, output_path=args.output)
        trace = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RunawayInnerLoop, LineSearchFailure, OracleFailure) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    print(_summarize(cfg, trace))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        configs = load_sweep_configs(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = EXIT_OK
    for cfg in configs:
        try:
            trace = run_experiment(cfg)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (RunawayInnerLoop, LineSearchFailure, OracleFailure) as exc:
            print(f"solver failure: {exc}", file=sys.stderr)
            status = EXIT_SOLVER
            continue
        print(_summarize(cfg, trace))
    return status


def _cmd_verify(_args) -> int:
    results = acceptance.run_all()
    for result in results:
        print(acceptance.format_line(result))
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPT


def _bound_from_sidecar(constants: dict, alpha: float) -> Optional[float]:
    C1, C2 = constants.get("C1"), constants.get("C2")
    nu, sigma = constants.get("nu"), constants.get("sigma")
    if C1 is None or C2 is None or nu is None or sigma is None:
        return None
    if alpha >= C1:
        return 0.0
    s = 1.0 + 2.0 * sigma
    return C2 * ((C1 / alpha) ** s - 1.0) / (nu * (1.0 - nu**s))


def _cmd_report(args) -> int:
    status = EXIT_OK
    for path in args.traces:
        try:
            rows = read_trace_csv(path)
        except (OSError, ValueError) as exc:
            print(f"cannot read {path}: {exc}", file=sys.stderr)
            status = EXIT_CONFIG
            continue
        print(f"== {path} ==")
        sidecar = sidecar_path(path)
        constants: dict = {}
        if os.path.exists(sidecar):
            with open(sidecar) as fh:
                meta = json.load(fh)
            constants = meta.get("constants", {})
            cfg = meta.get("config", {})
            print(f"method {cfg.get('method')} on {cfg.get('problem_label')}")
        last = rows[-1]
        print(
            f"records {len(rows)}, cumulative inner iterations {last['cum_inner']}, "
            f"final value gap {last['delta_wl']}, final dist {last['dist_xstar']}"
        )
        deltas = [r["delta_wl"] for r in rows if r["l"] >= 1]
        cums = [r["cum_inner"] for r in rows if r["l"] >= 1]
        if deltas and all(d is not None for d in deltas):
            print(f"{'alpha':>10} {'N(alpha)':>10} {'bound':>12}")
            for alpha in (0.1, 0.03, 0.01, 0.003, 0.001):
                if deltas[-1] >= alpha:
                    print(f"{alpha:>10g} {'unattained':>10} {'-':>12}")
                    continue
                n = 0
                for d, c in zip(deltas, cums):
                    if d >= alpha:
                        n = c
                bound = _bound_from_sidecar(constants, alpha)
                btxt = f"{bound:.4e}" if bound is not None else "-"
                print(f"{alpha:>10g} {n:>10} {btxt:>12}")
    return status


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tikgrad",
        description="First-order solvers with two-level regularization: run and check experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--output", help="override output_path from the config")
    p_run.set_defaults(fn=_cmd_run)
    p_sweep = sub.add_parser("sweep", help="run the cartesian product of value lists")
    p_sweep.add_argument("config")
    p_sweep.set_defaults(fn=_cmd_sweep)
    p_verify = sub.add_parser("verify", help="run the acceptance suite")
    p_verify.set_defaults(fn=_cmd_verify)
    p_report = sub.add_parser("report", help="summarize stored trace files")
    p_report.add_argument("traces", nargs="+")
    p_report.set_defaults(fn=_cmd_report)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
