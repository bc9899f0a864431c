"""Mirror circuits: simple mirrors and random-Pauli quasi-inverse mirrors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, ROTATION_KINDS, concat, invert
from .pauli import PauliString, conjugate_by_clifford
from .simulator import Distribution

DEFAULT_PAULI_SAMPLES = 10
MIRROR_KINDS = ("simple", "random_pauli", "multi_random_pauli")


@dataclass(frozen=True)
class MirrorVariant:
    kind: str = "simple"
    n_samples: int | None = None

    def __post_init__(self):
        if self.kind not in MIRROR_KINDS:
            raise ValueError(f"unknown mirror variant {self.kind!r}")
        if self.kind == "multi_random_pauli":
            if self.n_samples is None:
                object.__setattr__(self, "n_samples", DEFAULT_PAULI_SAMPLES)
            if self.n_samples < 1:
                raise ValueError("n_samples must be >= 1")
        elif self.n_samples is not None:
            raise ValueError("n_samples only applies to multi_random_pauli")


@dataclass(frozen=True)
class PauliFrame:
    current: PauliString
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("frame sign must be +1 or -1")


def simple_mirror(c: Circuit) -> Circuit:
    return concat(c, invert(c))


def pauli_layer(p: PauliString) -> list[Gate]:
    return [Gate(letter, (q,)) for q, letter in enumerate(p.letters) if letter != "I"]


def quasi_inverse(c: Circuit, p: PauliString) -> tuple[Circuit, PauliFrame]:
    """Inverse of ``c`` with rotation signs adjusted so ``p`` commutes through it.

    Returns the modified inverse and the frame left after propagating ``p``.
    """
    if p.width != c.width:
        raise ValueError(f"Pauli width {p.width} != circuit width {c.width}")
    frame, sign = p, 1
    out = []
    for g in invert(c).gates:
        if g.kind in ROTATION_KINDS:
            (q,) = g.qubits
            local = frame[q]
            if local == "I" or local == g.axis:
                out.append(g)
            else:
                # P R_A(phi) = R_A(-phi) P when P anticommutes with A
                out.append(Gate(g.kind, g.qubits, -g.angle))
        else:
            frame, s = conjugate_by_clifford(frame, g)
            sign *= s
            out.append(g)
    return Circuit(c.width, tuple(out), c.label + "~^-1"), PauliFrame(frame, sign)


def quasi_inverse_mirror(c: Circuit, p: PauliString) -> tuple[Circuit, PauliFrame]:
    qinv, resultant = quasi_inverse(c, p)
    layer = Circuit(c.width, tuple(pauli_layer(p)), "pauli")
    return concat(concat(c, layer), qinv), resultant


def expected_mirror_distribution(initial_bits: str, resultant: PauliFrame) -> Distribution:
    if len(initial_bits) != resultant.current.width:
        raise ValueError("width mismatch between bits and resultant frame")
    flipped = "".join(
        ("1" if b == "0" else "0") if letter in "XY" else b
        for b, letter in zip(initial_bits, resultant.current.letters)
    )
    return Distribution.point_mass(flipped)


def random_pauli_layer(width: int, seed=None) -> PauliString:
    if width < 1:
        raise ValueError("width must be >= 1")
    rng = np.random.default_rng(seed)
    return PauliString("".join("IXYZ"[i] for i in rng.integers(0, 4, size=width)))

