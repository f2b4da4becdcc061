"""Monte-Carlo energy estimation from clique measurements.

Each shot of a clique's rotated circuit yields one sample of the clique
energy: the coefficient-weighted sum of member eigenvalues for the measured
bitstring. Per-clique sample means add up (with the identity offset) to the
total-energy estimator; per-clique variances over shot counts give its
variance. Cliques are sampled independently, so no covariance terms appear.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import allocation as alloc
from .allocation import AllocationInputs, ShotAllocation
from .hamiltonian import QubitHamiltonian
from .pauli import Clique, basis_rotation
from .simulator import (
    Circuit,
    NoiseConfig,
    apply_circuit,
    build_ansatz,
    sample_counts,
    zero_state,
)


@dataclass(frozen=True)
class CliqueStats:
    """Empirical mean and standard deviation of one clique's samples."""

    mean: float
    std: float
    samples_used: int

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be non-negative")


@dataclass(frozen=True)
class EnergyEstimate:
    """Sampled total energy: identity offset plus per-clique sample means."""

    value: float
    per_clique: tuple[tuple[int, float, int], ...]  # (clique index, mean, shots)
    total_shots: int


def outcome_energies(clique: Clique) -> np.ndarray:
    """Clique energy for every outcome index of its rotated measurement.

    Entry b is the weighted sum over members of the eigenvalue of the
    member's Z-pattern at outcome b: (-1)^popcount(b & support).
    """
    dim = 1 << clique.qubits
    indices = np.arange(dim)
    energies = np.zeros(dim)
    for member in clique.members:
        mask = 0
        for q in range(clique.qubits):
            if member.string.factor(q) != "I":
                mask |= 1 << q
        parity = np.bitwise_count(indices & mask) & 1
        energies += member.coefficient * (1.0 - 2.0 * parity)
    return energies


def clique_sample(probs: np.ndarray, clique: Clique, rng: np.random.Generator) -> float:
    """One single-shot clique energy drawn from rotated-basis probabilities."""
    outcome = int(rng.choice(len(probs), p=probs))
    return float(outcome_energies(clique)[outcome])


def empirical_stats(samples: list[float] | np.ndarray) -> CliqueStats:
    """Mean and unbiased (k-1 denominator) standard deviation of samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("need at least one sample")
    std = float(np.std(samples, ddof=1)) if samples.size >= 2 else 0.0
    return CliqueStats(float(samples.mean()), std, int(samples.size))


def stats_from_counts(counts: np.ndarray, energies: np.ndarray) -> CliqueStats:
    """Empirical stats computed from an outcome histogram."""
    n = int(counts.sum())
    if n == 0:
        raise ValueError("need at least one sample")
    mean = float(counts @ energies) / n
    if n >= 2:
        var = (float(counts @ np.square(energies)) - n * mean * mean) / (n - 1)
        std = float(np.sqrt(max(var, 0.0)))
    else:
        std = 0.0
    return CliqueStats(mean, std, n)


def exact_clique_stats(probs: np.ndarray, energies: np.ndarray) -> CliqueStats:
    """Analytic single-shot mean and standard deviation of a clique energy."""
    mean = float(probs @ energies)
    var = float(probs @ np.square(energies)) - mean * mean
    return CliqueStats(mean, float(np.sqrt(max(var, 0.0))), 0)


def estimator_variance(stds: list[float] | np.ndarray, shots: list[int] | np.ndarray) -> float:
    """Variance of the total-energy estimator: sum of sigma_i^2 / N_i."""
    stds = np.asarray(stds, dtype=float)
    shots = np.asarray(shots)
    if np.any(shots < 1):
        raise ValueError("every clique needs at least one shot")
    if np.any(stds < 0):
        raise ValueError("stds must be non-negative")
    return float(np.sum(np.square(stds) / shots))


class MeasurementPlan:
    """Precomputed rotations and outcome energies for one Hamiltonian.

    Holds, per clique, the basis-rotation gate ops and the outcome-energy
    vector, so repeated energy evaluations only rebuild the theta-dependent
    ansatz gates.
    """

    def __init__(self, molecule: str, h: QubitHamiltonian):
        self.molecule = molecule
        self.hamiltonian = h
        self.rotations = [tuple(basis_rotation(c)) for c in h.cliques]
        self.energies = [outcome_energies(c) for c in h.cliques]

    def clique_probabilities(self, theta, noise: NoiseConfig,
                             rng: np.random.Generator | None) -> list[np.ndarray]:
        """Rotated-basis outcome probabilities, one fresh trajectory per clique."""
        base = build_ansatz(self.molecule, theta)
        out = []
        for rotation in self.rotations:
            circuit = Circuit(base.qubits, base.ops + rotation)
            state = apply_circuit(zero_state(base.qubits), circuit, noise, rng)
            probs = np.abs(state) ** 2
            out.append(probs / probs.sum())
        return out


def sample_energy(plan: MeasurementPlan, probs: list[np.ndarray],
                  allocation: ShotAllocation, noise: NoiseConfig,
                  rng: np.random.Generator) -> EnergyEstimate:
    """Draw the allocated shots from fixed per-clique probabilities."""
    h = plan.hamiltonian
    if len(allocation.per_clique) != len(h.cliques):
        raise ValueError("allocation does not cover every clique")
    if any(n < 1 for n in allocation.per_clique):
        raise ValueError("every clique needs at least one shot")
    value = h.identity_offset
    per_clique = []
    for i, n_i in enumerate(allocation.per_clique):
        counts = sample_counts(probs[i], n_i, noise, rng)
        mean = float(counts @ plan.energies[i]) / n_i
        value += mean
        per_clique.append((i, mean, n_i))
    return EnergyEstimate(value, tuple(per_clique), allocation.total)


def estimate_energy(theta, molecule: str, h: QubitHamiltonian,
                    allocation: ShotAllocation, noise: NoiseConfig,
                    rng: np.random.Generator) -> EnergyEstimate:
    """Execute each clique's rotated circuit and average the allocated shots."""
    plan = MeasurementPlan(molecule, h)
    probs = plan.clique_probabilities(theta, noise, rng)
    return sample_energy(plan, probs, allocation, noise, rng)


def measured_energy(plan: MeasurementPlan, theta, strategy: str, budget: int,
                    probe_shots: int, noise: NoiseConfig,
                    rng: np.random.Generator,
                    fixed: ShotAllocation | None = None) -> tuple[float, tuple[int, ...]]:
    """One full evaluation cycle for a strategy; returns (value, shots per clique).

    Amplitude-independent strategies draw a fixed allocation directly. The
    variance strategies first draw ``probe_shots`` samples per clique,
    allocate from the estimated stds, then top every clique up to its
    allocation; the probe samples are pooled into the clique means, not
    discarded.
    """
    h = plan.hamiltonian
    m = len(h.cliques)
    probs = plan.clique_probabilities(theta, noise, rng)
    if strategy in ("uniform", "absa"):
        if fixed is None:
            if strategy == "uniform":
                fixed = alloc.allocate_uniform(budget, m)
            else:
                fixed = alloc.allocate_absa(AllocationInputs(
                    budget=budget, num_cliques=m,
                    amplitudes=tuple(h.clique_amplitudes())))
        estimate = sample_energy(plan, probs, fixed, noise, rng)
        return estimate.value, fixed.per_clique
    if strategy not in ("vmsa", "vpsr"):
        raise ValueError(f"unknown measured strategy {strategy!r}")

    probe_counts = []
    stds = []
    for i in range(m):
        counts = sample_counts(probs[i], probe_shots, noise, rng)
        probe_counts.append(counts)
        stds.append(stats_from_counts(counts, plan.energies[i]).std)
    allocator = alloc.allocate_vmsa if strategy == "vmsa" else alloc.allocate_vpsr
    shot_alloc = allocator(AllocationInputs(
        budget=budget, num_cliques=m, probe_shots=probe_shots, stds=tuple(stds)))
    value = h.identity_offset
    for i, n_i in enumerate(shot_alloc.per_clique):
        counts = probe_counts[i]
        if n_i > probe_shots:
            counts = counts + sample_counts(probs[i], n_i - probe_shots, noise, rng)
        value += float(counts @ plan.energies[i]) / n_i
    return value, shot_alloc.per_clique
