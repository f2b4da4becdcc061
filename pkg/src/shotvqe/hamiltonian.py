"""Qubit Hamiltonians: built-in molecules, JSON round trip, diagonalization oracle.

Built-in coefficients are stored exactly as published for the two benchmark
molecules; their clique partitions are pinned rather than re-derived so that
experiment output stays comparable across grouping-order changes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import pauli
from .gates import I2, X, Y, Z
from .pauli import Clique, PauliString, WeightedPauli

_FACTOR_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}


@dataclass(frozen=True)
class EnergyValue:
    """An energy in Hartree."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("energy must be finite")


@dataclass(frozen=True)
class QubitHamiltonian:
    """Identity offset plus cliques of weighted Pauli strings."""

    name: str
    qubits: int
    identity_offset: float
    cliques: tuple[Clique, ...]

    def __post_init__(self):
        if not math.isfinite(self.identity_offset):
            raise ValueError("identity offset must be finite")
        for clique in self.cliques:
            for member in clique.members:
                if member.string.qubits != self.qubits:
                    raise ValueError("term length does not match qubit count")
                if set(member.string.label) == {"I"}:
                    raise ValueError("identity terms belong in identity_offset")

    @property
    def terms(self) -> list[WeightedPauli]:
        """All non-identity terms, in clique order."""
        return [m for clique in self.cliques for m in clique.members]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense 2^K x 2^K Hermitian matrix, identity offset included."""
        dim = 1 << self.qubits
        mat = self.identity_offset * np.eye(dim, dtype=complex)
        for term in self.terms:
            block = np.array([[1.0 + 0j]])
            for ch in term.string.label:
                block = np.kron(block, _FACTOR_MATRICES[ch])
            mat += term.coefficient * block
        return mat

    def clique_amplitudes(self) -> list[float]:
        """Per-clique summed coefficient magnitudes (amplitude-based weights)."""
        return [clique.amplitude_sum() for clique in self.cliques]


def _ham(name, qubits, offset, groups):
    cliques = tuple(
        Clique(tuple(WeightedPauli(PauliString(lab), g) for lab, g in group))
        for group in groups
    )
    return QubitHamiltonian(name, qubits, offset, cliques)


# Two-qubit hydrogen Hamiltonian; three cliques (Z-type, YY, XX).
_H2 = _ham(
    "h2",
    2,
    -0.5597,
    [
        [("IZ", 0.1615), ("ZI", -0.0166), ("ZZ", 0.4148)],
        [("YY", 0.1226)],
        [("XX", 0.1226)],
    ],
)

# Four-qubit lithium hydride Hamiltonian; nine cliques.
_LIH = _ham(
    "lih",
    4,
    -7.4989469,
    [
        [
            ("IIIZ", -0.0132436),
            ("IIZZ", 0.0847961),
            ("IIZI", -0.0132437),
            ("IZIZ", 0.0541304),
            ("IZZI", 0.0570634),
            ("IZII", 0.1619948),
            ("ZZII", 0.1244477),
            ("ZIZI", 0.0541304),
            ("ZIIZ", 0.0570634),
            ("ZIII", 0.1619948),
        ],
        [("IYIY", -0.0013743), ("IYZY", 0.0129107), ("ZYZY", 0.0115364)],
        [("IXIX", -0.0013743), ("IXZX", 0.0129108), ("ZXZX", 0.0115364)],
        [("YIYI", 0.0115364), ("YZYZ", -0.0013743), ("YZYI", 0.0129108)],
        [("XIXI", 0.0115364), ("XZXZ", -0.0013743), ("XZXI", 0.0129108)],
        [("XXYY", -0.0029329)],
        [("YYXX", -0.0029320)],
        [("YXXY", 0.0029329)],
        [("XYYX", 0.0029329)],
    ],
)

_BUILTINS = {"h2": _H2, "lih": _LIH}


def builtin(name: str) -> QubitHamiltonian:
    """Return a built-in molecule Hamiltonian ('h2' or 'lih')."""
    try:
        return _BUILTINS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown built-in Hamiltonian {name!r}; have {sorted(_BUILTINS)}")


def load(document: dict) -> QubitHamiltonian:
    """Build a Hamiltonian from its JSON document form.

    Schema: ``{"name": str, "qubits": int, "terms": [{"p": str, "g": float}],
    "cliques": [[term_index, ...], ...]}`` with "cliques" optional. Identity
    terms (all-I strings) fold into the identity offset; when "cliques" is
    absent the remaining terms are grouped greedily in input order.
    """
    qubits = int(document["qubits"])
    name = str(document.get("name", "custom"))
    offset = 0.0
    parsed: list[WeightedPauli | None] = []
    for entry in document["terms"]:
        coeff = float(entry["g"])
        if not math.isfinite(coeff):
            raise ValueError("non-finite coefficient")
        string = pauli.parse(entry["p"])
        if string.qubits != qubits:
            raise ValueError(f"term {entry['p']!r} does not act on {qubits} qubits")
        if set(string.label) == {"I"}:
            offset += coeff
            parsed.append(None)
        else:
            parsed.append(WeightedPauli(string, coeff))

    if "cliques" in document and document["cliques"] is not None:
        seen: set[int] = set()
        groups = []
        for index_group in document["cliques"]:
            members = []
            for idx in index_group:
                if idx in seen:
                    raise ValueError(f"term index {idx} listed in more than one clique")
                seen.add(idx)
                if parsed[idx] is None:
                    raise ValueError("identity term cannot be a clique member")
                members.append(parsed[idx])
            groups.append(Clique(tuple(members)))
        missing = [i for i, t in enumerate(parsed) if t is not None and i not in seen]
        if missing:
            raise ValueError(f"terms {missing} are not covered by any clique")
        cliques = tuple(groups)
    else:
        cliques = tuple(pauli.group_into_cliques([t for t in parsed if t is not None]))
    return QubitHamiltonian(name, qubits, offset, cliques)


def to_document(h: QubitHamiltonian) -> dict:
    """Serialize to the JSON document form accepted by :func:`load`."""
    terms = [{"p": "I" * h.qubits, "g": h.identity_offset}]
    cliques = []
    for clique in h.cliques:
        indices = []
        for member in clique.members:
            indices.append(len(terms))
            terms.append({"p": member.string.label, "g": member.coefficient})
        cliques.append(indices)
    return {"name": h.name, "qubits": h.qubits, "terms": terms, "cliques": cliques}


def load_file(path) -> QubitHamiltonian:
    with open(path) as fh:
        return load(json.load(fh))


def exact_ground_energy(h: QubitHamiltonian) -> EnergyValue:
    """Smallest eigenvalue of the dense Hamiltonian matrix (K <= 12)."""
    if h.qubits > 12:
        raise ValueError("dense diagonalization is limited to 12 qubits")
    return EnergyValue(float(np.linalg.eigvalsh(h.matrix)[0]))
