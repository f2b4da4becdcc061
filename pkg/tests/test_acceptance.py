"""Acceptance suite: one test per release criterion, printed pass lines.

Run with ``pytest tests/test_acceptance.py -v -s``. The long-running
experiment reproductions (criteria 5 and 6) dominate the wall time; the
whole module stays within its per-criterion runtime budgets on one CPU.
"""
import time

import numpy as np
import pytest

from shotvqe.allocation import (
    AllocationInputs,
    allocate_absa,
    allocate_uniform,
    allocate_vmsa,
    allocate_vpsr,
    reduction_factor,
    vpsr_min_total,
)
from shotvqe.engine import VqeConfig, run_vqe
from shotvqe.estimator import (
    MeasurementPlan,
    estimator_variance,
    exact_clique_stats,
    sample_energy,
)
from shotvqe.experiments import ExperimentConfig, energy_distribution, run_trials
from shotvqe.hamiltonian import builtin, exact_ground_energy
from shotvqe.simulator import NoiseConfig, exact_expectation
from tests.test_allocation import integer_partitions
from tests.test_hamiltonian import E0_H2
from tests.test_pauli import ROTATION_TABLE, TestRotationTable

CHEM_ACC = 1.6e-3


def report(number, budget_s, elapsed, detail):
    assert elapsed < budget_s, f"criterion {number} exceeded its {budget_s}s budget"
    print(f"\ncriterion {number}: PASS ({elapsed:.1f}s) — {detail}")


def test_criterion_1_deterministic_ground_state():
    """Exact-objective optimization reaches the ground state and angle."""
    start = time.time()
    trace = run_vqe(VqeConfig(molecule="h2", strategy="exact", budget=600,
                              probe_shots=50, iterations=300, theta0=(-2.0,), seed=0))
    final = trace.records[-1]
    gap = final.exact_energy - E0_H2
    assert gap < CHEM_ACC
    assert abs(trace.final_theta[0] - 0.91) < 0.05
    report(1, 5, time.time() - start,
           f"gap={gap * 1000:.4f} mHa, theta={trace.final_theta[0]:.4f}")


def test_criterion_2_reduction_factor_and_variance_preservation():
    """eta <= 1 and the fractional reduced allocation never exceeds the
    uniform-allocation variance bound, over 10^3 random std vectors."""
    start = time.time()
    rng = np.random.default_rng(2)
    for _ in range(1000):
        m = int(rng.integers(1, 17))
        stds = rng.uniform(0.0, 4.0, size=m)
        eta = reduction_factor(stds)
        assert eta <= 1.0 + 1e-12
        if stds.sum() == 0.0:
            continue
        budget = int(rng.integers(m, 5000))
        probe = int(rng.integers(0, budget // m + 1))
        fractional = probe + eta * stds / stds.sum() * (budget - m * probe)
        keep = fractional > 0
        reduced_var = float(np.sum(stds[keep] ** 2 / fractional[keep]))
        uniform_bound = float(np.sum(stds ** 2) / (budget / m))
        assert reduced_var <= uniform_bound + 1e-12
    report(2, 1, time.time() - start, "1000 random std vectors, m <= 16")


def min_variance_exhaustive(stds, total):
    """Minimum estimator variance over every composition of ``total`` shots."""
    stds = np.asarray(stds, dtype=float)
    if stds.size == 1:
        return float(stds[0] ** 2 / total)
    if stds.size == 2:
        n1 = np.arange(1, total)
        return float(np.min(stds[0] ** 2 / n1 + stds[1] ** 2 / (total - n1)))
    best = np.inf
    for n1 in range(1, total - 1):
        n2 = np.arange(1, total - n1)
        v = stds[0] ** 2 / n1 + stds[1] ** 2 / n2 + stds[2] ** 2 / (total - n1 - n2)
        best = min(best, float(v.min()))
    return best


def test_criterion_3_allocation_optimality_oracles():
    """Exhaustive integer-partition search confirms each closed form."""
    start = time.time()
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = int(rng.integers(2, 4))
        total = int(rng.integers(m + 2, 31))
        stds = tuple(rng.uniform(0.05, 3.0, size=m))
        amplitudes = tuple(rng.uniform(0.05, 2.0, size=m))
        partitions = list(integer_partitions(total, m))

        # std-proportional allocation minimizes the estimator variance
        vmsa = allocate_vmsa(AllocationInputs(budget=total, num_cliques=m,
                                              probe_shots=0, stds=stds))
        counts = tuple(max(n, 1) for n in vmsa.per_clique)
        fractional = np.array(stds) / sum(stds) * total
        slack = (estimator_variance(stds, counts)
                 - float(np.sum(np.array(stds) ** 2 / fractional)))
        best = min(estimator_variance(stds, p) for p in partitions)
        assert estimator_variance(stds, counts) - best <= slack + 1e-12

        # minimal total for a variance threshold matches (sum sigma)^2 / delta
        for delta in (0.4, 0.9, 1.8):
            continuous = vpsr_min_total(stds, delta)
            ceiling = int(np.ceil(continuous))
            feasible = next(
                t for t in range(m, ceiling + m + 1)
                if min_variance_exhaustive(stds, t) <= delta)
            assert ceiling <= feasible <= ceiling + m

        # amplitude^(2/3) split minimizes sum of amplitude / sqrt(shots)
        absa = allocate_absa(AllocationInputs(budget=total, num_cliques=m,
                                              amplitudes=amplitudes))
        counts = tuple(max(n, 1) for n in absa.per_clique)

        def objective(ns):
            return float(sum(a / np.sqrt(n) for a, n in zip(amplitudes, ns)))

        weights = np.array(amplitudes) ** (2.0 / 3.0)
        slack = objective(counts) - objective(total * weights / weights.sum())
        best = min(objective(p) for p in partitions)
        assert objective(counts) - best <= slack + 1e-12
    report(3, 10, time.time() - start, "exhaustive search, m <= 3, N <= 30")


def test_criterion_4_fixed_parameter_distribution_study():
    """At the optimized angle, the reduced strategy keeps the spread of the
    uniform one with fewer shots; a starved variance probe broadens it."""
    start = time.time()
    config = ExperimentConfig(molecule="h2", strategies=("uniform", "vpsr"),
                              budget=600, probe_shots=50, iterations=1, trials=1,
                              theta0=(0.91,), seed_base=7)
    reports = energy_distribution(config, [0.91], reps=2000, probe_sweep=(10, 50))
    by = {(r.strategy, r.probe_shots): r for r in reports}
    uniform = by[("uniform", 0)]
    k50 = by[("vpsr", 50)]
    k10 = by[("vpsr", 10)]
    assert k50.mean_shots < 600.0
    assert abs(k50.std / uniform.std - 1.0) <= 0.25
    assert k10.std >= 1.1 * k50.std
    report(4, 120, time.time() - start,
           f"std ratio vpsr50/uniform={k50.std / uniform.std:.3f}, "
           f"vpsr10/vpsr50={k10.std / k50.std:.2f}, mean shots={k50.mean_shots:.0f}")


def test_criterion_5_h2_shot_reduction():
    """Two-qubit benchmark: the reduced strategy converges on ~15-20% fewer
    shots than uniform, matching the published totals within 20%.

    Run length 400 gives straggling trials room to converge; shots are
    accounted across every evaluation (objective and gradient), the
    interpretation under which the published totals are iteration-consistent
    across both budgets.
    """
    start = time.time()
    config = ExperimentConfig(
        molecule="h2", strategies=("uniform", "vpsr"), budget=600, probe_shots=50,
        iterations=400, trials=20, theta0=(-2.0,),
        noise=NoiseConfig.all_channels(1e-4), seed_base=0,
        shot_accounting="all_evaluations")
    _, summaries = run_trials(config)

    def mean_shots(strategy):
        values = [s.shots_to_convergence for s in summaries
                  if s.strategy == strategy and s.shots_to_convergence is not None]
        assert len(values) >= 15, f"too few converged {strategy} trials"
        return float(np.mean(values))

    uniform, vpsr = mean_shots("uniform"), mean_shots("vpsr")
    assert vpsr <= 0.90 * uniform
    assert 0.8 * 1.8e5 <= uniform <= 1.2 * 1.8e5
    assert 0.8 * 1.4e5 <= vpsr <= 1.2 * 1.4e5
    report(5, 600, time.time() - start,
           f"uniform={uniform:.3g}, vpsr={vpsr:.3g}, ratio={vpsr / uniform:.3f}")


def test_criterion_6_lih_shot_reduction():
    """Four-qubit benchmark: at least 40% fewer shots to convergence.

    The layered ansatz cannot reach the true ground state from the zero
    start, so convergence is judged against the variational minimum the
    exact-objective optimizer finds, per the documented fallback.
    """
    start = time.time()
    exact_trace = run_vqe(VqeConfig(
        molecule="lih", strategy="exact", budget=18000, probe_shots=100,
        iterations=1600, theta0=(0.0,) * 8, seed=0))
    e0 = exact_ground_energy(builtin("lih")).value
    exact_final = exact_trace.records[-1].exact_energy
    reference = e0 if exact_final <= e0 + CHEM_ACC else exact_final
    # criterion-1-style convergence of the deterministic run against the reference
    assert exact_final <= reference + CHEM_ACC
    assert exact_final <= min(r.exact_energy for r in exact_trace.records) + 1e-9

    config = ExperimentConfig(
        molecule="lih", strategies=("uniform", "vpsr"), budget=18000, probe_shots=100,
        iterations=1600, trials=10, theta0=(0.0,) * 8,
        noise=NoiseConfig.all_channels(1e-4), seed_base=0,
        shot_accounting="all_evaluations", reference_energy=reference)
    _, summaries = run_trials(config)

    for summary in summaries:
        assert summary.shots_to_convergence is not None, (
            f"{summary.strategy} trial {summary.trial} never converged")

    uniform_finals = [s.final_exact_energy for s in summaries if s.strategy == "uniform"]
    vpsr_finals = [s.final_exact_energy for s in summaries if s.strategy == "vpsr"]
    assert np.mean(uniform_finals) <= reference + CHEM_ACC
    assert np.mean(vpsr_finals) <= reference + CHEM_ACC

    uniform = float(np.mean([s.shots_to_convergence for s in summaries
                             if s.strategy == "uniform"]))
    vpsr = float(np.mean([s.shots_to_convergence for s in summaries
                          if s.strategy == "vpsr"]))
    assert vpsr <= 0.6 * uniform
    report(6, 3600, time.time() - start,
           f"uniform={uniform:.3g}, vpsr={vpsr:.3g}, ratio={vpsr / uniform:.3f}")


def test_criterion_7_estimator_unbiasedness():
    """Sampled energies are unbiased: means of 10^4 noise-free estimates sit
    within 4 analytic standard errors of the exact expectation."""
    start = time.time()
    reps = 10 ** 4
    rng_theta = np.random.default_rng(2024)
    for molecule, dim, budget in (("h2", 1, 600), ("lih", 8, 1800)):
        h = builtin(molecule)
        plan = MeasurementPlan(molecule, h)
        allocation = allocate_uniform(budget, len(h.cliques))
        for _ in range(5):
            theta = rng_theta.uniform(-np.pi, np.pi, size=dim)
            exact = exact_expectation(theta, molecule, h).value
            probs = plan.clique_probabilities(theta, NoiseConfig.off(), None)
            stds = [exact_clique_stats(p, e).std
                    for p, e in zip(probs, plan.energies)]
            variance = estimator_variance(stds, allocation.per_clique)
            rng = np.random.default_rng(99)
            values = np.empty(reps)
            for r in range(reps):
                values[r] = sample_energy(plan, probs, allocation,
                                          NoiseConfig.off(), rng).value
            se = np.sqrt(variance / reps)
            assert abs(values.mean() - exact) <= 4.0 * se
    report(7, 120, time.time() - start, "5 random thetas per molecule, 10^4 reps")


def test_criterion_8_rotation_table_identities():
    """Every measurement-transformation row holds as a matrix identity."""
    start = time.time()
    checker = TestRotationTable()
    for term, basis in ROTATION_TABLE:
        checker.test_matrix_identity(term, basis)
    report(8, 1, time.time() - start, f"{len(ROTATION_TABLE)} rows at 1e-12")


def test_criterion_9_amplitude_split_closed_form():
    """The two-qubit amplitude-based proportions match the closed form."""
    start = time.time()
    h = builtin("h2")
    weights = np.array(h.clique_amplitudes()) ** (2.0 / 3.0)
    proportions = weights / weights.sum()
    np.testing.assert_allclose(proportions, (0.5884, 0.2058, 0.2058), atol=1e-4)
    report(9, 1, time.time() - start,
           "proportions (%.4f, %.4f, %.4f)" % tuple(proportions))
