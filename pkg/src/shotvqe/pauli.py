"""Pauli strings, qubit-wise commutativity, clique grouping, basis rotations.

Text convention: a Pauli string over K qubits is written with qubit K-1
leftmost, e.g. ``"ZZII"`` puts Z on qubits 3 and 2. The same ordering is
used for measurement-outcome bitstrings, so qubit 0 is the rightmost
character and the least significant bit of an outcome index.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .gates import GateOp

_VALID = frozenset("IXYZ")


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit factors from {I, X, Y, Z}."""

    label: str

    def __post_init__(self):
        if not self.label or not set(self.label) <= _VALID:
            raise ValueError(f"invalid Pauli label {self.label!r}")

    @property
    def qubits(self) -> int:
        return len(self.label)

    def factor(self, qubit: int) -> str:
        """Single-qubit factor acting on ``qubit``."""
        return self.label[len(self.label) - 1 - qubit]

    def z_pattern(self) -> "PauliString":
        """Same support with every X/Y replaced by Z (post-rotation form)."""
        return PauliString(self.label.translate(str.maketrans("XY", "ZZ")))

    def __str__(self) -> str:
        return self.label


def parse(text: str) -> PauliString:
    return PauliString(text.strip().upper())


def render(p: PauliString) -> str:
    return p.label


@dataclass(frozen=True)
class WeightedPauli:
    """Hamiltonian term: coefficient (Hartree) times a Pauli string."""

    string: PauliString
    coefficient: float

    def __post_init__(self):
        import math

        if not math.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")


@dataclass(frozen=True)
class Clique:
    """Qubit-wise-commuting terms measured from one shared shot pool."""

    members: tuple[WeightedPauli, ...]
    measured_basis: PauliString = field(init=False)

    def __post_init__(self):
        if not self.members:
            raise ValueError("clique must be non-empty")
        strings = [m.string for m in self.members]
        k = strings[0].qubits
        basis = ["I"] * k
        for s in strings:
            if s.qubits != k:
                raise ValueError("clique members must act on the same qubit count")
            for pos, ch in enumerate(s.label):
                if ch == "I":
                    continue
                if basis[pos] == "I":
                    basis[pos] = ch
                elif basis[pos] != ch:
                    raise ValueError(
                        f"clique members do not qubit-wise commute: {basis[pos]} vs {ch} "
                        f"on qubit {k - 1 - pos}"
                    )
        object.__setattr__(self, "measured_basis", PauliString("".join(basis)))

    @property
    def qubits(self) -> int:
        return self.measured_basis.qubits

    def amplitude_sum(self) -> float:
        """Sum of |coefficient| over members (the clique's total weight)."""
        return sum(abs(m.coefficient) for m in self.members)


def pauli_eigenvalue(p: PauliString, outcome: str) -> int:
    """Eigenvalue (+1 or -1) of a Z/I string for a measured bitstring.

    The sign is the parity of measured 1 bits on the Z positions. Strings
    containing X or Y are rejected: they need a basis rotation first.
    """
    if len(outcome) != p.qubits:
        raise ValueError("outcome length does not match Pauli string")
    sign = 1
    for pc, bc in zip(p.label, outcome):
        if pc in "XY":
            raise ValueError("pauli_eigenvalue requires a Z/I string; rotate the basis first")
        if pc == "Z" and bc == "1":
            sign = -sign
    return sign


def qubitwise_commute(a: PauliString, b: PauliString) -> bool:
    """True iff at every position the factors are equal or one is identity."""
    if a.qubits != b.qubits:
        raise ValueError("Pauli strings must have equal length")
    return all(ca == cb or ca == "I" or cb == "I" for ca, cb in zip(a.label, b.label))


def group_into_cliques(terms: list[WeightedPauli]) -> list[Clique]:
    """Greedy first-fit grouping in input order.

    Each term joins the first existing group whose members it qubit-wise
    commutes with, else it opens a new group. Identity-only terms are the
    caller's responsibility (they are handled analytically upstream).
    """
    groups: list[list[WeightedPauli]] = []
    for term in terms:
        for group in groups:
            if all(qubitwise_commute(term.string, m.string) for m in group):
                group.append(term)
                break
        else:
            groups.append([term])
    return [Clique(tuple(g)) for g in groups]


def basis_rotation(clique: Clique) -> list[GateOp]:
    """Gate sequence mapping the clique's measured basis onto Z/I.

    Per qubit of the measured basis: X appends H, Y appends S-dagger then H
    (applied unitary H * Sdg), Z and I need nothing. Qubits are visited from
    highest to lowest index.
    """
    ops: list[GateOp] = []
    basis = clique.measured_basis
    for qubit in range(basis.qubits - 1, -1, -1):
        ch = basis.factor(qubit)
        if ch == "X":
            ops.append(GateOp("h", (qubit,)))
        elif ch == "Y":
            ops.append(GateOp("sdg", (qubit,)))
            ops.append(GateOp("h", (qubit,)))
    return ops
