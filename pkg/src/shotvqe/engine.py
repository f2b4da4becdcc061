"""The optimization loop: probe, allocate, measure, finite-difference Adam.

One iteration evaluates the measured energy at the current parameters,
estimates the gradient by central differences (each shifted point consumes a
full probe/allocate/measure cycle of its own), and takes one Adam step with
a cosine-decayed learning rate. Shot accounting can cover the main objective
evaluation only, or every evaluation including the gradient's.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import allocation as alloc
from .allocation import AllocationInputs, ShotAllocation
from .estimator import MeasurementPlan, measured_energy
from .hamiltonian import QubitHamiltonian, builtin
from .simulator import NoiseConfig, ansatz_parameter_count, exact_expectation

ACCOUNTING_MODES = ("objective_only", "all_evaluations")


def cosine_lr(t: int, total: int, lr0: float) -> float:
    """Learning rate after t of ``total`` iterations under cosine decay."""
    return lr0 * 0.5 * (math.cos(math.pi * t / total) + 1.0)


def fd_gradient(objective, theta: np.ndarray, step: float) -> np.ndarray:
    """Central-difference gradient; two objective calls per component."""
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for j in range(theta.size):
        shift = np.zeros_like(theta)
        shift[j] = step
        grad[j] = (objective(theta + shift) - objective(theta - shift)) / (2.0 * step)
    return grad


@dataclass(frozen=True)
class AdamState:
    """First and second moment accumulators plus the step counter."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(state: AdamState, grad: np.ndarray, lr: float,
              beta1: float = 0.9, beta2: float = 0.999,
              epsilon: float = 1e-8) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update; returns the new state and theta delta."""
    grad = np.asarray(grad, dtype=float)
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * grad
    v = beta2 * state.v + (1.0 - beta2) * np.square(grad)
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    delta = -lr * m_hat / (np.sqrt(v_hat) + epsilon)
    return AdamState(m, v, t), delta


@dataclass(frozen=True)
class VqeConfig:
    """Everything one optimization run needs."""

    molecule: str
    strategy: str
    budget: int
    probe_shots: int
    iterations: int
    theta0: tuple[float, ...]
    learning_rate: float = 0.1
    fd_step: float = 0.02
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    noise: NoiseConfig = field(default_factory=NoiseConfig.off)
    seed: int = 0
    shot_accounting: str = "objective_only"

    def __post_init__(self):
        if self.strategy not in alloc.STRATEGIES + ("exact",):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.iterations < 1:
            raise ValueError("need at least one iteration")
        if self.fd_step <= 0:
            raise ValueError("finite-difference step must be positive")
        if self.shot_accounting not in ACCOUNTING_MODES:
            raise ValueError(f"accounting mode must be one of {ACCOUNTING_MODES}")
        expected = ansatz_parameter_count(self.molecule)
        if len(self.theta0) != expected:
            raise ValueError(f"{self.molecule} ansatz takes {expected} parameters")


@dataclass(frozen=True)
class IterationRecord:
    t: int
    theta: tuple[float, ...]
    energy_estimate: float
    exact_energy: float
    lr: float
    per_clique_shots: tuple[int, ...]
    shots_iteration: int
    shots_cumulative: int


@dataclass(frozen=True)
class VqeTrace:
    records: tuple[IterationRecord, ...]
    final_theta: tuple[float, ...]

    @property
    def total_shots(self) -> int:
        return self.records[-1].shots_cumulative if self.records else 0


class _Objective:
    """Measured (or exact) energy evaluations with shot bookkeeping."""

    def __init__(self, config: VqeConfig, h: QubitHamiltonian,
                 rng: np.random.Generator):
        self.config = config
        self.h = h
        self.rng = rng
        self.plan = MeasurementPlan(config.molecule, h)
        m = len(h.cliques)
        if config.strategy in ("vmsa", "vpsr"):
            if config.probe_shots < 2:
                raise ValueError("variance probing needs at least 2 shots per clique")
            if config.budget < m * config.probe_shots:
                raise ValueError("budget smaller than the probe consumption m*k")
        self._fixed: ShotAllocation | None = None
        if config.strategy == "uniform":
            self._fixed = alloc.allocate_uniform(config.budget, m)
        elif config.strategy == "absa":
            self._fixed = alloc.allocate_absa(AllocationInputs(
                budget=config.budget, num_cliques=m,
                amplitudes=tuple(h.clique_amplitudes())))

    def __call__(self, theta) -> tuple[float, tuple[int, ...]]:
        """Return (energy value, per-clique shots consumed)."""
        cfg = self.config
        if cfg.strategy == "exact":
            value = exact_expectation(theta, cfg.molecule, self.h).value
            return value, (0,) * len(self.h.cliques)
        return measured_energy(self.plan, theta, cfg.strategy, cfg.budget,
                               cfg.probe_shots, cfg.noise, self.rng,
                               fixed=self._fixed)


def run_vqe(config: VqeConfig, h: QubitHamiltonian | None = None) -> VqeTrace:
    """Optimize the configured molecule and record the full trace."""
    h = h if h is not None else builtin(config.molecule)
    rng = np.random.default_rng(config.seed)
    objective = _Objective(config, h, rng)
    theta = np.asarray(config.theta0, dtype=float)
    adam = AdamState.zeros(theta.size)
    records = []
    cumulative = 0
    for t in range(1, config.iterations + 1):
        value, per_clique = objective(theta)
        exact = exact_expectation(theta, config.molecule, h).value

        gradient_shots = 0

        def measured(point):
            nonlocal gradient_shots
            v, shots = objective(point)
            gradient_shots += sum(shots)
            return v

        grad = fd_gradient(measured, theta, config.fd_step)
        lr = cosine_lr(t, config.iterations, config.learning_rate)
        adam, delta = adam_step(adam, grad, lr, config.adam_beta1,
                                config.adam_beta2, config.adam_epsilon)

        shots_iter = sum(per_clique)
        if config.shot_accounting == "all_evaluations":
            shots_iter += gradient_shots
        cumulative += shots_iter
        records.append(IterationRecord(
            t=t, theta=tuple(float(x) for x in theta),
            energy_estimate=float(value), exact_energy=float(exact), lr=float(lr),
            per_clique_shots=tuple(int(n) for n in per_clique),
            shots_iteration=int(shots_iter), shots_cumulative=int(cumulative)))
        theta = theta + delta
    return VqeTrace(tuple(records), tuple(float(x) for x in theta))
