"""Elementary gate operations on dense statevectors.

Qubit ``q`` occupies bit ``q`` of the outcome index (qubit 0 is the least
significant bit), which corresponds to tensor axis ``n - 1 - q`` when the
state is reshaped to ``[2] * n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

H = np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def rx(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(angle: float) -> np.ndarray:
    p = np.exp(-0.5j * angle)
    return np.array([[p, 0], [0, np.conj(p)]], dtype=complex)


_FIXED = {"h": H, "x": X, "sdg": SDG}
_PARAM = {"rx": rx, "ry": ry, "rz": rz}


@dataclass(frozen=True)
class GateOp:
    """One circuit operation: kind in {h, x, sdg, rx, ry, rz, cnot}.

    Single-qubit gates use ``qubits = (target,)``; cnot uses
    ``(control, target)``. ``angle`` is in radians and only set for
    the rotation kinds.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def matrix(self) -> np.ndarray:
        """2x2 matrix of a single-qubit op (cnot has no single-qubit matrix)."""
        if self.kind in _FIXED:
            return _FIXED[self.kind]
        if self.kind in _PARAM:
            return _PARAM[self.kind](self.angle)
        raise ValueError(f"no single-qubit matrix for gate kind {self.kind!r}")


def apply_single(state: np.ndarray, matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a length-2^n state."""
    lower = 1 << qubit
    view = state.reshape(-1, 2, lower)
    zero, one = view[:, 0, :], view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = matrix[0, 0] * zero + matrix[0, 1] * one
    out[:, 1, :] = matrix[1, 0] * zero + matrix[1, 1] * one
    return out.reshape(-1)


_CNOT_PERMS: dict[tuple[int, int, int], np.ndarray] = {}


def _cnot_perm(control: int, target: int, n: int) -> np.ndarray:
    key = (control, target, n)
    perm = _CNOT_PERMS.get(key)
    if perm is None:
        indices = np.arange(1 << n)
        perm = np.where(indices & (1 << control), indices ^ (1 << target), indices)
        _CNOT_PERMS[key] = perm
    return perm


def apply_cnot(state: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    """Flip ``target`` on the control=1 subspace."""
    return state[_cnot_perm(control, target, n)]


def apply_op(state: np.ndarray, op: GateOp, n: int) -> np.ndarray:
    if op.kind == "cnot":
        return apply_cnot(state, op.qubits[0], op.qubits[1], n)
    return apply_single(state, op.matrix(), op.qubits[0], n)


def ops_to_unitary(ops: list[GateOp], n: int) -> np.ndarray:
    """Dense 2^n x 2^n unitary of an op list (applied left to right)."""
    dim = 1 << n
    u = np.eye(dim, dtype=complex)
    for op in ops:
        for col in range(dim):
            u[:, col] = apply_op(np.ascontiguousarray(u[:, col]), op, n)
    return u
