"""Dense reference operators: Hamiltonian matrices, exact evolution, circuit unitaries.

Deliberately naive (Kronecker products, full matrices) so it shares no code
with the statevector kernels it is used to check.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

from .circuit import Circuit, Gate
from .pauli import PauliString, PauliSum
from .simulator import Distribution, bitstring

EXACT_WIDTH_CAP = 12
UNITARY_WIDTH_CAP = 10

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def gate_matrix_1q(gate: Gate) -> np.ndarray:
    kind = gate.kind
    if kind in PAULI_MATRICES:
        return PAULI_MATRICES[kind]
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    if kind == "S":
        return np.diag([1, 1j])
    if kind == "Sdg":
        return np.diag([1, -1j])
    # R_A(theta) = cos(theta/2) I - i sin(theta/2) A
    half = gate.angle / 2
    return np.cos(half) * np.eye(2) - 1j * np.sin(half) * PAULI_MATRICES[gate.axis]


def _kron_all(factors) -> np.ndarray:
    return reduce(np.kron, factors)


def pauli_matrix(p: PauliString | str) -> np.ndarray:
    letters = p.letters if isinstance(p, PauliString) else p
    return _kron_all([PAULI_MATRICES[c] for c in letters])


def embed_gate(gate: Gate, width: int) -> np.ndarray:
    if gate.kind == "CX":
        c, t = gate.qubits
        p0 = np.diag([1, 0]).astype(complex)
        p1 = np.diag([0, 1]).astype(complex)
        off = [PAULI_MATRICES["I"]] * width
        on = [PAULI_MATRICES["I"]] * width
        off[c], on[c], on[t] = p0, p1, PAULI_MATRICES["X"]
        return _kron_all(off) + _kron_all(on)
    factors = [PAULI_MATRICES["I"]] * width
    factors[gate.qubits[0]] = gate_matrix_1q(gate)
    return _kron_all(factors)


def circuit_unitary(c: Circuit, cap: int = UNITARY_WIDTH_CAP) -> np.ndarray:
    """Product of gate matrices in time order (later gates multiply on the left)."""
    if c.width > cap:
        raise ValueError(f"width {c.width} exceeds unitary cap {cap}")
    u = np.eye(2**c.width, dtype=complex)
    for g in c.gates:
        u = embed_gate(g, c.width) @ u
    return u


def hamiltonian_matrix(h: PauliSum, cap: int = EXACT_WIDTH_CAP) -> np.ndarray:
    if h.width > cap:
        raise ValueError(f"width {h.width} exceeds exact cap {cap}")
    dim = 2**h.width
    m = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        m += term.coeff * pauli_matrix(term.string)
    return m


def evolution_operator(h: PauliSum, t: float, cap: int = EXACT_WIDTH_CAP) -> np.ndarray:
    """``exp(-i H t)`` through the Hermitian eigendecomposition of H."""
    evals, evecs = np.linalg.eigh(hamiltonian_matrix(h, cap))
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def exact_evolution_distribution(
    h: PauliSum, t: float, initial_bits: str, cap: int = EXACT_WIDTH_CAP
) -> Distribution:
    if len(initial_bits) != h.width:
        raise ValueError(f"initial bits have width {len(initial_bits)}, Hamiltonian has {h.width}")
    if h.width > cap:
        raise ValueError(f"width {h.width} exceeds exact cap {cap}")
    evals, evecs = np.linalg.eigh(hamiltonian_matrix(h, cap))
    # only the column for the initial basis state is needed
    col = evecs.conj()[int(initial_bits, 2)]
    psi = evecs @ (np.exp(-1j * evals * t) * col)
    p = np.abs(psi) ** 2
    p /= p.sum()
    nz = np.flatnonzero(p)
    return Distribution(h.width, {bitstring(int(i), h.width): float(p[i]) for i in nz})
