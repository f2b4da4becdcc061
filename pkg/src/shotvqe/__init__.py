"""Shot-budget-optimizing VQE laboratory.

A small dense-statevector simulator with Pauli-clique measurements and
trajectory-style noise, four shot-allocation strategies (uniform, vmsa,
vpsr, absa), a finite-difference Adam optimization loop, and a batch
experiment harness for the two built-in molecules (h2, lih).
"""

from .allocation import (
    AllocationInputs,
    ShotAllocation,
    allocate_absa,
    allocate_uniform,
    allocate_vmsa,
    allocate_vpsr,
    integerize,
    reduction_factor,
    vpsr_min_total,
)
from .engine import AdamState, VqeConfig, VqeTrace, adam_step, cosine_lr, fd_gradient, run_vqe
from .estimator import (
    CliqueStats,
    EnergyEstimate,
    clique_sample,
    empirical_stats,
    estimate_energy,
    estimator_variance,
)
from .experiments import (
    CHEMICAL_ACCURACY,
    DistributionReport,
    ExperimentConfig,
    TrialSummary,
    energy_distribution,
    run_trials,
    summarize,
)
from .hamiltonian import QubitHamiltonian, builtin, exact_ground_energy, load, to_document
from .pauli import (
    Clique,
    PauliString,
    WeightedPauli,
    basis_rotation,
    group_into_cliques,
    pauli_eigenvalue,
    qubitwise_commute,
)
from .simulator import (
    Circuit,
    NoiseConfig,
    ShotCounts,
    apply_circuit,
    build_ansatz,
    exact_expectation,
    outcome_probabilities,
    sample_shots,
)

__all__ = [
    "AdamState", "AllocationInputs", "CHEMICAL_ACCURACY", "Circuit", "Clique",
    "CliqueStats", "DistributionReport", "EnergyEstimate", "ExperimentConfig",
    "NoiseConfig", "PauliString", "QubitHamiltonian", "ShotAllocation",
    "ShotCounts", "TrialSummary", "VqeConfig", "VqeTrace", "WeightedPauli",
    "adam_step", "allocate_absa", "allocate_uniform", "allocate_vmsa",
    "allocate_vpsr", "apply_circuit", "basis_rotation", "build_ansatz",
    "builtin", "clique_sample", "cosine_lr", "empirical_stats",
    "energy_distribution", "estimate_energy", "estimator_variance",
    "exact_expectation", "exact_ground_energy", "fd_gradient",
    "group_into_cliques", "integerize", "load", "outcome_probabilities",
    "pauli_eigenvalue", "qubitwise_commute", "reduction_factor", "run_trials",
    "run_vqe", "sample_shots", "summarize", "to_document", "vpsr_min_total",
]
