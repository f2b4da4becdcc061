"""Command-line entry points: run, dist, summarize."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .allocation import STRATEGIES
from .experiments import (
    DEFAULT_ITERATIONS,
    DEFAULT_THETA0,
    ExperimentConfig,
    energy_distribution,
    run_trials,
    summarize,
    summarize_directory,
    write_distribution,
)
from .simulator import NoiseConfig, ansatz_parameter_count

_CHANNELS = ("gate", "reset", "phase", "measurement")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _noise(args) -> NoiseConfig:
    if args.noise_p == 0.0:
        return NoiseConfig.off()
    names = _CHANNELS if args.noise_channels == "all" else tuple(
        part.strip() for part in args.noise_channels.split(",") if part.strip())
    unknown = [n for n in names if n not in _CHANNELS]
    if unknown:
        raise ValueError(f"unknown noise channels {unknown}; have {_CHANNELS}")
    return NoiseConfig(
        p=args.noise_p,
        gate_error="gate" in names,
        reset_error="reset" in names,
        phase_error="phase" in names,
        measurement_error="measurement" in names)


def _common_flags(parser):
    parser.add_argument("--molecule", choices=("h2", "lih"), default="h2")
    parser.add_argument("--strategy", default="all",
                        help="uniform|vmsa|vpsr|absa|exact|all or a comma list")
    parser.add_argument("--budget", type=int, default=600,
                        help="shots per energy evaluation (N)")
    parser.add_argument("--probe-shots", type=str, default="50",
                        help="variance-probe shots per clique (K); "
                             "dist accepts a comma list to sweep")
    parser.add_argument("--iterations", type=int, default=None,
                        help="max optimizer iterations (T); default 300 for h2, 1600 for lih")
    parser.add_argument("--theta0", type=str, default=None,
                        help="comma-separated initial parameters; "
                             "default -2.0 for h2, zeros for lih")
    parser.add_argument("--noise-p", type=float, default=0.0)
    parser.add_argument("--noise-channels", type=str, default="all",
                        help="comma list from gate,reset,phase,measurement")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--accounting", choices=("objective", "all"), default="objective")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=str, required=True)


def _experiment_config(args, probe_shots: int) -> ExperimentConfig:
    molecule = args.molecule
    strategies = (STRATEGIES if args.strategy == "all"
                  else tuple(s.strip() for s in args.strategy.split(",")))
    theta0 = (_parse_floats(args.theta0) if args.theta0 is not None
              else DEFAULT_THETA0[molecule])
    if len(theta0) != ansatz_parameter_count(molecule):
        raise ValueError(f"{molecule} takes {ansatz_parameter_count(molecule)} parameters")
    return ExperimentConfig(
        molecule=molecule, strategies=strategies, budget=args.budget,
        probe_shots=probe_shots,
        iterations=args.iterations or DEFAULT_ITERATIONS[molecule],
        trials=getattr(args, "trials", 1), theta0=theta0, noise=_noise(args),
        seed_base=args.seed,
        shot_accounting="all_evaluations" if args.accounting == "all" else "objective_only",
        workers=args.workers)


def _cmd_run(args) -> int:
    probe = _parse_ints(args.probe_shots)
    if len(probe) != 1:
        raise ValueError("run takes a single --probe-shots value")
    config = _experiment_config(args, probe[0])
    _, summaries = run_trials(config, out_dir=args.out)
    print(json.dumps(summarize(summaries), indent=2))
    return 0


def _cmd_dist(args) -> int:
    sweep = _parse_ints(args.probe_shots)
    config = _experiment_config(args, sweep[0])
    theta = np.asarray(_parse_floats(args.theta))
    reports = energy_distribution(config, theta, args.reps, probe_sweep=sweep)
    write_distribution(config, theta, reports, args.out)
    for report in reports:
        label = (f"{report.strategy}(k={report.probe_shots})"
                 if report.probe_shots else report.strategy)
        print(f"{label}: mean={report.mean:+.6f} std={report.std:.6f} "
              f"mean_shots={report.mean_shots:.1f}")
    return 0


def _cmd_summarize(args) -> int:
    print(json.dumps(summarize_directory(args.in_dir), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shotvqe",
        description="Shot-allocation experiments for small-molecule VQE")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="repeated optimization trials")
    _common_flags(run_p)
    run_p.add_argument("--trials", type=int, default=1)
    run_p.set_defaults(func=_cmd_run)

    dist_p = sub.add_parser("dist", help="fixed-parameter energy distribution")
    _common_flags(dist_p)
    dist_p.add_argument("--theta", type=str, required=True)
    dist_p.add_argument("--reps", type=int, default=1000)
    dist_p.set_defaults(func=_cmd_dist)

    sum_p = sub.add_parser("summarize", help="recompute aggregates from trace CSVs")
    sum_p.add_argument("--in", dest="in_dir", required=True)
    sum_p.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
