"""Dense statevector simulation with trajectory-style noise injection.

Noise channels are stochastic unitary insertions on a pure state (one
trajectory per circuit execution), not density-matrix channels: at this
scale re-sampling trajectories is cheaper and matches how the errors are
injected. With ``p == 0`` (or a channel disabled) no random numbers are
drawn, so a noisy pipeline reduces bit-for-bit to the noise-free one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates
from .gates import GateOp
from .hamiltonian import EnergyValue, QubitHamiltonian

_PAULI_INSERTIONS = (gates.X, gates.Y, gates.Z)

#: Statevector = normalized complex vector of length 2^K.
Statevector = np.ndarray


@dataclass(frozen=True)
class NoiseConfig:
    """Error-injection probability and channel switches.

    gate_error: after each gate, each touched qubit suffers a uniformly
    random Pauli (X, Y or Z) with probability p.
    reset_error: each qubit suffers X with probability p at state preparation.
    phase_error: after each gate, each touched qubit suffers Z with
    probability p.
    measurement_error: each measured bit flips independently with
    probability p.
    """

    p: float = 0.0
    gate_error: bool = False
    reset_error: bool = False
    phase_error: bool = False
    measurement_error: bool = False

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("noise probability must be in [0, 1]")

    @classmethod
    def off(cls) -> "NoiseConfig":
        return cls()

    @classmethod
    def all_channels(cls, p: float) -> "NoiseConfig":
        return cls(p=p, gate_error=True, reset_error=True, phase_error=True,
                   measurement_error=True)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a fixed qubit count."""

    qubits: int
    ops: tuple[GateOp, ...]

    def __post_init__(self):
        for op in self.ops:
            if any(not 0 <= q < self.qubits for q in op.qubits):
                raise ValueError(f"gate {op} targets a qubit outside [0, {self.qubits})")
            if op.kind == "cnot" and op.qubits[0] == op.qubits[1]:
                raise ValueError("cnot control and target must differ")


@dataclass
class ShotCounts:
    """Measured outcome histogram; counts sum to total."""

    counts: dict[str, int]
    total: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts do not sum to total")


def zero_state(qubits: int) -> Statevector:
    state = np.zeros(1 << qubits, dtype=complex)
    state[0] = 1.0
    return state


def _inject(state, qubit, n, noise, rng):
    if noise.gate_error and rng.random() < noise.p:
        state = gates.apply_single(state, _PAULI_INSERTIONS[rng.integers(3)], qubit, n)
    if noise.phase_error and rng.random() < noise.p:
        state = gates.apply_single(state, gates.Z, qubit, n)
    return state


def apply_circuit(state: Statevector, circuit: Circuit,
                  noise: NoiseConfig = NoiseConfig.off(),
                  rng: np.random.Generator | None = None) -> Statevector:
    """Run the circuit, drawing one noise trajectory when channels are on."""
    n = circuit.qubits
    if state.shape != (1 << n,):
        raise ValueError("state dimension does not match circuit qubit count")
    noisy = noise.p > 0.0 and (noise.gate_error or noise.reset_error or noise.phase_error)
    if noisy and rng is None:
        raise ValueError("noise injection needs an explicit rng")
    if noisy and noise.reset_error:
        for q in range(n):
            if rng.random() < noise.p:
                state = gates.apply_single(state, gates.X, q, n)
    for op in circuit.ops:
        state = gates.apply_op(state, op, n)
        if noisy:
            for q in op.qubits:
                state = _inject(state, q, n, noise, rng)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-10:
        raise AssertionError(f"statevector norm drifted to {norm}")
    return state


def outcome_probabilities(state: Statevector, rotation: list[GateOp]) -> np.ndarray:
    """Probabilities after a (noise-free) measurement-basis rotation."""
    n = int(np.log2(state.shape[0]))
    for op in rotation:
        state = gates.apply_op(state, op, n)
    probs = np.abs(state) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-10:
        raise AssertionError(f"probabilities sum to {total}")
    return probs / total


def flip_measured_bits(counts: np.ndarray, qubits: int, p: float,
                       rng: np.random.Generator) -> np.ndarray:
    """Flip each measured bit independently with probability p.

    Operates on an outcome-count vector, one bit at a time: the number of
    flipped shots is binomial in the total, and the flipped shots are a
    uniform subset, i.e. multivariate-hypergeometric across outcomes. This
    is distribution-identical to flipping each shot's bits independently.
    """
    out = counts.copy()
    total = int(out.sum())
    for q in range(qubits):
        flipped = rng.binomial(total, p)
        if flipped == 0:
            continue
        flips = rng.multivariate_hypergeometric(out, flipped)
        out = out - flips
        for b in np.nonzero(flips)[0]:
            out[b ^ (1 << q)] += flips[b]
    return out


def sample_counts(probs: np.ndarray, n: int, noise: NoiseConfig,
                  rng: np.random.Generator) -> np.ndarray:
    """Outcome-count vector for n shots (the array form of sample_shots)."""
    if n < 0:
        raise ValueError("shot count must be non-negative")
    if n == 0:
        return np.zeros(len(probs), dtype=np.int64)
    counts = rng.multinomial(n, probs)
    if noise.measurement_error and noise.p > 0.0:
        counts = flip_measured_bits(counts, int(np.log2(len(probs))), noise.p, rng)
    return counts


def sample_shots(probs: np.ndarray, n: int, noise: NoiseConfig,
                 rng: np.random.Generator) -> ShotCounts:
    """Draw n shots from an outcome distribution, as a bitstring histogram."""
    counts = sample_counts(np.asarray(probs, dtype=float), n, noise, rng)
    qubits = int(np.log2(len(counts)))
    mapping = {
        format(idx, f"0{qubits}b"): int(c) for idx, c in enumerate(counts) if c > 0
    }
    return ShotCounts(mapping, int(counts.sum()))


def build_ansatz(molecule: str, theta: np.ndarray | list[float] | float) -> Circuit:
    """Parameterized circuit for a built-in molecule, reference prep included.

    h2: X on qubit 0 prepares the occupied-orbital reference, then a
    single-parameter paired-excitation rotation (basis change to Z x Z,
    cnot - Rz(theta) - cnot, basis change back). lih: two layers of one
    Ry per qubit followed by a cnot chain 0->1->2->3, 8 parameters, on the
    all-zeros reference.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    molecule = molecule.lower()
    if molecule == "h2":
        if theta.shape != (1,):
            raise ValueError("h2 ansatz takes exactly 1 parameter")
        t = float(theta[0])
        ops = [
            GateOp("x", (0,)),
            GateOp("h", (1,)),
            GateOp("rx", (0,), np.pi / 2),
            GateOp("cnot", (1, 0)),
            GateOp("rz", (0,), t),
            GateOp("cnot", (1, 0)),
            GateOp("rx", (0,), -np.pi / 2),
            GateOp("h", (1,)),
        ]
        return Circuit(2, tuple(ops))
    if molecule == "lih":
        if theta.shape != (8,):
            raise ValueError("lih ansatz takes exactly 8 parameters")
        ops = []
        param = iter(theta)
        for _layer in range(2):
            for q in range(4):
                ops.append(GateOp("ry", (q,), float(next(param))))
            for q in range(3):
                ops.append(GateOp("cnot", (q, q + 1)))
        return Circuit(4, tuple(ops))
    raise ValueError(f"unknown molecule {molecule!r}")


def ansatz_parameter_count(molecule: str) -> int:
    return {"h2": 1, "lih": 8}[molecule.lower()]


def ansatz_state(molecule: str, theta, noise: NoiseConfig = NoiseConfig.off(),
                 rng: np.random.Generator | None = None) -> Statevector:
    circuit = build_ansatz(molecule, theta)
    return apply_circuit(zero_state(circuit.qubits), circuit, noise, rng)


def exact_expectation(theta, molecule: str, h: QubitHamiltonian) -> EnergyValue:
    """Noise-free, infinite-shot energy <psi(theta)|H|psi(theta)>."""
    psi = ansatz_state(molecule, theta)
    return EnergyValue(float(np.real(psi.conj() @ h.matrix @ psi)))
