"""Batch experiment harness: repeated trials, distribution studies, summaries.

Emits plot-ready data only: per-strategy trace CSVs plus a JSON summary for
optimization runs, and histogram JSON for fixed-parameter distribution
studies. Convergence is judged on the exact energy of the iterate (via the
diagonalization oracle), never on the noisy estimate, which can cross the
threshold spuriously.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .allocation import STRATEGIES
from .engine import VqeConfig, VqeTrace, run_vqe
from .estimator import MeasurementPlan, measured_energy
from .hamiltonian import builtin, exact_ground_energy
from .simulator import NoiseConfig

#: chemical accuracy: 1.0 kcal/mol in Hartree
CHEMICAL_ACCURACY = 1.6e-3

DEFAULT_ITERATIONS = {"h2": 300, "lih": 1600}
DEFAULT_THETA0 = {"h2": (-2.0,), "lih": (0.0,) * 8}


@dataclass(frozen=True)
class ExperimentConfig:
    """A batch of optimization trials over one or more strategies."""

    molecule: str
    strategies: tuple[str, ...]
    budget: int
    probe_shots: int
    iterations: int
    trials: int
    theta0: tuple[float, ...]
    noise: NoiseConfig = field(default_factory=NoiseConfig.off)
    seed_base: int = 0
    tolerance: float = CHEMICAL_ACCURACY
    shot_accounting: str = "objective_only"
    reference_energy: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        for strategy in self.strategies:
            if strategy not in STRATEGIES + ("exact",):
                raise ValueError(f"unknown strategy {strategy!r}")

    def vqe_config(self, strategy: str, trial: int) -> VqeConfig:
        return VqeConfig(
            molecule=self.molecule, strategy=strategy, budget=self.budget,
            probe_shots=self.probe_shots, iterations=self.iterations,
            theta0=self.theta0, noise=self.noise,
            seed=self.seed_base + trial, shot_accounting=self.shot_accounting)


@dataclass(frozen=True)
class TrialSummary:
    strategy: str
    trial: int
    shots_to_convergence: int | None
    total_shots: int
    final_exact_energy: float


@dataclass(frozen=True)
class DistributionReport:
    """Histogram of repeated single-evaluation estimates at fixed parameters."""

    strategy: str
    probe_shots: int
    bin_edges: tuple[float, ...]
    bin_counts: tuple[int, ...]
    mean: float
    std: float
    mean_shots: float
    reps: int


def convergence_shots(trace: VqeTrace, reference: float, tolerance: float) -> int | None:
    """Cumulative shots at the first iterate within tolerance of reference."""
    for record in trace.records:
        if record.exact_energy <= reference + tolerance:
            return record.shots_cumulative
    return None


def _trial_job(args):
    config, strategy, trial, reference, tolerance = args
    trace = run_vqe(config.vqe_config(strategy, trial))
    summary = TrialSummary(
        strategy=strategy, trial=trial,
        shots_to_convergence=convergence_shots(trace, reference, tolerance),
        total_shots=trace.total_shots,
        final_exact_energy=trace.records[-1].exact_energy)
    return strategy, trial, trace, summary


def run_trials(config: ExperimentConfig, out_dir: str | None = None):
    """Run all (strategy, trial) combinations and optionally write results.

    Returns ``(traces, summaries)`` where traces maps strategy to a
    trial-indexed list. Trial seeds are seed_base + trial so any subset
    reproduces independently; results are keyed by index, so output does
    not depend on completion order.
    """
    h = builtin(config.molecule)
    reference = (config.reference_energy if config.reference_energy is not None
                 else exact_ground_energy(h).value)
    jobs = [(config, strategy, trial, reference, config.tolerance)
            for strategy in config.strategies for trial in range(config.trials)]
    results = {}
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for strategy, trial, trace, summary in pool.map(_trial_job, jobs):
                results[(strategy, trial)] = (trace, summary)
    else:
        for job in jobs:
            strategy, trial, trace, summary = _trial_job(job)
            results[(strategy, trial)] = (trace, summary)

    traces = {s: [results[(s, t)][0] for t in range(config.trials)]
              for s in config.strategies}
    summaries = [results[(s, t)][1]
                 for s in config.strategies for t in range(config.trials)]
    if out_dir is not None:
        write_outputs(config, reference, traces, summaries, out_dir)
    return traces, summaries


def summarize(summaries: list[TrialSummary]) -> dict:
    """Per-strategy five-number summary of shots to convergence.

    Quartiles use linear interpolation between order statistics; values past
    1.5 IQR beyond the quartiles are flagged as outliers. Trials that never
    converged are excluded from the statistics but counted.
    """
    if not summaries:
        raise ValueError("no trial summaries to aggregate")
    by_strategy: dict[str, list[TrialSummary]] = {}
    for summary in summaries:
        by_strategy.setdefault(summary.strategy, []).append(summary)
    out = {}
    for strategy, group in by_strategy.items():
        shots = np.array([s.shots_to_convergence for s in group
                          if s.shots_to_convergence is not None], dtype=float)
        block: dict = {
            "trials": len(group),
            "converged": int(shots.size),
            "mean_final_exact_energy": float(np.mean([s.final_exact_energy for s in group])),
        }
        if shots.size:
            q1, med, q3 = np.percentile(shots, [25, 50, 75])
            iqr = q3 - q1
            outliers = shots[(shots < q1 - 1.5 * iqr) | (shots > q3 + 1.5 * iqr)]
            block.update({
                "min": float(shots.min()), "q1": float(q1), "median": float(med),
                "q3": float(q3), "max": float(shots.max()),
                "mean": float(shots.mean()),
                "std": float(shots.std(ddof=1)) if shots.size >= 2 else 0.0,
                "outliers": [float(v) for v in sorted(outliers)],
            })
        out[strategy] = block
    return out


def energy_distribution(config: ExperimentConfig, theta, reps: int,
                        probe_sweep: tuple[int, ...] | None = None,
                        bins: int = 50) -> list[DistributionReport]:
    """Repeated single evaluations at fixed theta, per strategy (and per k)."""
    if reps < 1:
        raise ValueError("need at least one repetition")
    h = builtin(config.molecule)
    plan = MeasurementPlan(config.molecule, h)
    reports = []
    for strategy in config.strategies:
        sweep = ((probe_sweep or (config.probe_shots,))
                 if strategy in ("vmsa", "vpsr") else (0,))
        for k in sweep:
            rng = np.random.default_rng(config.seed_base)
            values = np.empty(reps)
            shots = np.empty(reps)
            for r in range(reps):
                values[r], per_clique = measured_energy(
                    plan, theta, strategy, config.budget, k, config.noise, rng)
                shots[r] = sum(per_clique)
            counts, edges = np.histogram(values, bins=bins)
            reports.append(DistributionReport(
                strategy=strategy, probe_shots=k,
                bin_edges=tuple(float(e) for e in edges),
                bin_counts=tuple(int(c) for c in counts),
                mean=float(values.mean()),
                std=float(values.std(ddof=1)) if reps >= 2 else 0.0,
                mean_shots=float(shots.mean()), reps=reps))
    return reports


def _config_dict(config: ExperimentConfig) -> dict:
    data = asdict(config)
    data["noise"] = asdict(config.noise)
    return data


def write_outputs(config: ExperimentConfig, reference: float,
                  traces: dict[str, list[VqeTrace]],
                  summaries: list[TrialSummary], out_dir: str) -> None:
    """Write per-strategy trace CSVs plus the aggregate summary JSON."""
    os.makedirs(out_dir, exist_ok=True)
    m = len(builtin(config.molecule).cliques)
    alloc_headers = [f"alloc_clique_{i}" for i in range(m)]
    for strategy, strategy_traces in traces.items():
        path = os.path.join(out_dir, f"trace_{strategy}.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", "iteration", "energy_estimate", "exact_energy",
                             "lr", "shots_iteration", "shots_cumulative", *alloc_headers])
            for trial, trace in enumerate(strategy_traces):
                for rec in trace.records:
                    writer.writerow([
                        trial, rec.t, repr(rec.energy_estimate), repr(rec.exact_energy),
                        repr(rec.lr), rec.shots_iteration, rec.shots_cumulative,
                        *rec.per_clique_shots])
    payload = {
        "config": _config_dict(config),
        "reference_energy": reference,
        "strategies": summarize(summaries),
        "trials": [asdict(s) for s in summaries],
    }
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(payload, fh, indent=2)


def write_distribution(config: ExperimentConfig, theta,
                       reports: list[DistributionReport], out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    payload = {
        "config": _config_dict(config),
        "theta": [float(x) for x in np.atleast_1d(theta)],
        "reports": [asdict(r) for r in reports],
    }
    with open(os.path.join(out_dir, "distribution.json"), "w") as fh:
        json.dump(payload, fh, indent=2)


def summarize_directory(out_dir: str) -> dict:
    """Recompute per-strategy aggregates from the trace CSVs in a directory.

    Uses the convergence reference stored in summary.json so the recomputed
    aggregates are directly comparable to the emitted ones.
    """
    with open(os.path.join(out_dir, "summary.json")) as fh:
        emitted = json.load(fh)
    reference = emitted["reference_energy"]
    tolerance = emitted["config"]["tolerance"]
    summaries = []
    for name in sorted(os.listdir(out_dir)):
        if not (name.startswith("trace_") and name.endswith(".csv")):
            continue
        strategy = name[len("trace_"):-len(".csv")]
        per_trial: dict[int, list[dict]] = {}
        with open(os.path.join(out_dir, name), newline="") as fh:
            for row in csv.DictReader(fh):
                per_trial.setdefault(int(row["trial"]), []).append(row)
        for trial, rows in sorted(per_trial.items()):
            rows.sort(key=lambda r: int(r["iteration"]))
            shots = None
            for row in rows:
                if float(row["exact_energy"]) <= reference + tolerance:
                    shots = int(row["shots_cumulative"])
                    break
            summaries.append(TrialSummary(
                strategy=strategy, trial=trial, shots_to_convergence=shots,
                total_shots=int(rows[-1]["shots_cumulative"]),
                final_exact_energy=float(rows[-1]["exact_energy"])))
    return summarize(summaries)
