"""Shot-allocation strategies over measurement cliques.

Four ways to split a per-evaluation budget of N shots over m cliques:

* uniform: N/m each.
* vmsa (variance-minimized shot assignment): k probe shots per clique
  estimate each clique's standard deviation; the remaining N - m*k shots
  are split proportionally to those standard deviations, which minimizes
  the energy-estimator variance at fixed total N.
* vpsr (variance-preserved shot reduction): like vmsa, but the remainder
  is scaled by eta = (sum sigma)^2 / (m * sum sigma^2) <= 1, the smallest
  fraction whose allocation still meets the uniform allocation's variance.
  Total is at most N.
* absa (amplitude-based shot assignment): proportional to the 2/3 power
  of each clique's summed coefficient magnitude; needs no probe shots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: smallest standard deviation used in ratio computations; prevents a clique
#: whose probe happened to return constant samples from being starved.
STD_FLOOR = 1e-9


@dataclass(frozen=True)
class ShotAllocation:
    """Integer shot counts per clique plus probe-shot accounting."""

    per_clique: tuple[int, ...]
    sampling_shots: int = 0
    strategy: str = ""

    def __post_init__(self):
        if any(n < 0 for n in self.per_clique):
            raise ValueError("shot counts must be non-negative")
        if self.sampling_shots < 0:
            raise ValueError("sampling shots must be non-negative")
        if self.sampling_shots and any(n < self.sampling_shots for n in self.per_clique):
            raise ValueError("every clique must keep at least its probe shots")

    @property
    def total(self) -> int:
        return int(sum(self.per_clique))


@dataclass(frozen=True)
class AllocationInputs:
    """Everything an allocation strategy may consume.

    budget: total shots N for one energy evaluation.
    num_cliques: m.
    probe_shots: k samples per clique already spent on variance estimation.
    stds: estimated per-clique standard deviations (variance strategies).
    amplitudes: per-clique summed coefficient magnitudes (absa).
    """

    budget: int
    num_cliques: int
    probe_shots: int = 0
    stds: tuple[float, ...] | None = None
    amplitudes: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.num_cliques < 1:
            raise ValueError("need at least one clique")
        if self.probe_shots < 0:
            raise ValueError("probe shots must be non-negative")
        if self.budget < self.num_cliques * self.probe_shots:
            raise ValueError("budget smaller than the probe consumption m*k")
        for name, seq in (("stds", self.stds), ("amplitudes", self.amplitudes)):
            if seq is not None:
                if len(seq) != self.num_cliques:
                    raise ValueError(f"{name} length must equal the clique count")
                if any(not math.isfinite(v) or v < 0 for v in seq):
                    raise ValueError(f"{name} must be finite and non-negative")


def integerize(fractional: list[float] | np.ndarray, cap: int | None = None) -> list[int]:
    """Largest-remainder rounding of non-negative fractional shot counts.

    With ``cap`` the result sums exactly to it, otherwise to the rounded
    fractional total. Ties break toward the lower index. Any clique with a
    positive fractional share ends up with at least one shot, funded by the
    largest entries.
    """
    frac = np.asarray(fractional, dtype=float)
    if np.any(frac < 0):
        raise ValueError("fractional shares must be non-negative")
    target = int(round(frac.sum())) if cap is None else int(cap)
    base = np.floor(frac).astype(int)
    remainder = int(target - base.sum())
    if remainder > 0:
        # stable sort: equal remainders go to the lower index first
        order = np.argsort(-(frac - base), kind="stable")
        for j in range(remainder):
            base[order[j % len(base)]] += 1
    elif remainder < 0:
        order = np.argsort(frac - base, kind="stable")
        for j in range(-remainder):
            base[order[j % len(base)]] -= 1
    for i in np.nonzero((base == 0) & (frac > 0))[0]:
        donor = int(np.argmax(base))
        if base[donor] > 1:
            base[donor] -= 1
            base[i] += 1
    return [int(v) for v in base]


def allocate_uniform(budget: int, num_cliques: int) -> ShotAllocation:
    """Even split, remainder handed out one per clique from index 0."""
    if budget < num_cliques:
        raise ValueError("budget must cover at least one shot per clique")
    base, extra = divmod(budget, num_cliques)
    counts = tuple(base + (1 if i < extra else 0) for i in range(num_cliques))
    return ShotAllocation(counts, 0, "uniform")


def _floored_stds(inputs: AllocationInputs, std_floor: float) -> np.ndarray:
    if inputs.stds is None:
        raise ValueError("variance-based allocation needs per-clique stds")
    return np.maximum(np.asarray(inputs.stds, dtype=float), std_floor)


def allocate_vmsa(inputs: AllocationInputs, std_floor: float = STD_FLOOR) -> ShotAllocation:
    """Std-proportional split of the post-probe budget; total is exactly N."""
    stds = _floored_stds(inputs, std_floor)
    k, n, m = inputs.probe_shots, inputs.budget, inputs.num_cliques
    frac = k + stds / stds.sum() * (n - m * k)
    counts = integerize(frac, cap=n)
    return ShotAllocation(tuple(counts), k, "vmsa")


def reduction_factor(stds: np.ndarray | list[float]) -> float:
    """eta = (sum sigma)^2 / (m * sum sigma^2); 1 iff all stds equal."""
    stds = np.asarray(stds, dtype=float)
    denom = len(stds) * float(np.square(stds).sum())
    if denom == 0.0:
        return 1.0
    return float(stds.sum()) ** 2 / denom


def allocate_vpsr(inputs: AllocationInputs, std_floor: float = STD_FLOOR) -> ShotAllocation:
    """Variance-preserving reduced split; total never exceeds N."""
    stds = _floored_stds(inputs, std_floor)
    k, n, m = inputs.probe_shots, inputs.budget, inputs.num_cliques
    eta = reduction_factor(stds)
    frac = k + eta * stds / stds.sum() * (n - m * k)
    counts = integerize(frac)
    overflow = sum(counts) - n
    if overflow > 0:
        # rounding may not re-inflate the total past the budget
        counts[int(np.argmax(counts))] -= overflow
    return ShotAllocation(tuple(counts), k, "vpsr")


def allocate_absa(inputs: AllocationInputs) -> ShotAllocation:
    """Split proportional to (summed clique amplitude)^(2/3); no probe."""
    if inputs.amplitudes is None:
        raise ValueError("amplitude-based allocation needs clique amplitudes")
    weights = np.asarray(inputs.amplitudes, dtype=float) ** (2.0 / 3.0)
    if weights.sum() == 0.0:
        raise ValueError("all clique amplitudes are zero")
    frac = inputs.budget * weights / weights.sum()
    counts = integerize(frac, cap=inputs.budget)
    return ShotAllocation(tuple(counts), 0, "absa")


def vpsr_min_total(stds: list[float] | np.ndarray, delta: float) -> float:
    """Smallest total shot count keeping the estimator variance at delta."""
    if delta <= 0.0:
        raise ValueError("variance threshold must be positive")
    return float(np.asarray(stds, dtype=float).sum()) ** 2 / delta


#: strategies selectable by name; "exact" (infinite-shot debug objective)
#: is handled by the engine and takes no allocation.
STRATEGIES = ("uniform", "vmsa", "vpsr", "absa")
