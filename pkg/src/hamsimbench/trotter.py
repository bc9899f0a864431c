"""First-order Trotter circuit synthesis and Neel-state preparation."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, cx, h, rz, s, sdg, x
from .pauli import PauliSum, PauliTerm

log = logging.getLogger(__name__)

DEFAULT_TIME = 1.0
DEFAULT_STEPS = 5


@dataclass(frozen=True)
class TrotterConfig:
    time: float = DEFAULT_TIME
    steps: int = DEFAULT_STEPS
    term_order: str = "as_given"

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")
        if not math.isfinite(self.time):
            raise ValueError("time must be finite")
        if self.term_order != "as_given":
            raise ValueError(f"unsupported term order {self.term_order!r}")


def neel_bits(n: int) -> str:
    return "".join("1" if q % 2 == 0 else "0" for q in range(n))


def neel_prep(n: int) -> Circuit:
    if n < 1:
        raise ValueError("width must be >= 1")
    return Circuit(n, tuple(x(q) for q in range(0, n, 2)), "neel")


def _basis_change(letter: str, q: int) -> list[Gate]:
    # maps the letter's eigenbasis onto Z: H X H = Z, H Sdg Y S H = Z
    if letter == "X":
        return [h(q)]
    if letter == "Y":
        return [sdg(q), h(q)]
    return []


def _basis_unchange(letter: str, q: int) -> list[Gate]:
    if letter == "X":
        return [h(q)]
    if letter == "Y":
        return [h(q), s(q)]
    return []


def pauli_exponential_gates(term: PauliTerm, angle_scale: float) -> list[Gate]:
    """Gates realizing ``exp(-i * coeff * angle_scale * P)``."""
    support = term.string.support()
    if not support:
        raise ValueError("all-identity term only contributes a global phase")
    letters = term.string.letters
    pre = [g for q in support for g in _basis_change(letters[q], q)]
    ladder = [cx(a, b) for a, b in zip(support, support[1:])]
    post = [g for q in support for g in _basis_unchange(letters[q], q)]
    core = rz(2.0 * term.coeff * angle_scale, support[-1])
    return pre + ladder + [core] + ladder[::-1] + post


def pauli_exponential(term: PauliTerm, angle_scale: float) -> Circuit:
    return Circuit(term.string.width, tuple(pauli_exponential_gates(term, angle_scale)))


def trotter_circuit(hamiltonian: PauliSum, cfg: TrotterConfig = TrotterConfig()) -> Circuit:
    terms = hamiltonian.non_identity_terms()
    if not terms:
        raise ValueError("Hamiltonian has no non-identity terms")
    skipped = len(hamiltonian) - len(terms)
    if skipped:
        log.debug("skipping %d identity term(s) (global phase only)", skipped)
    dt = cfg.time / cfg.steps
    step: list[Gate] = []
    for term in terms:
        step += pauli_exponential_gates(term, dt)
    return Circuit(hamiltonian.width, tuple(step) * cfg.steps, f"trotter(t={cfg.time},K={cfg.steps})")
