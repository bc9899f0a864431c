"""Dense statevector simulation with stochastic Pauli noise and shot sampling.

Amplitude index bits are big-endian in qubit order: qubit 0 is the most
significant bit, i.e. the leftmost character of every bitstring.

Noisy execution follows per-shot Pauli-trajectory semantics. Error locations
are sampled for every shot up front; shots that drew the same error pattern
share one statevector and are then sampled independently from it, which is
distributionally identical to replaying each shot on its own.
"""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Gate

DEFAULT_WIDTH_CAP = 26
CHECKPOINT_BUDGET_BYTES = 256 * 2**20

_SQ2 = 1 / math.sqrt(2)
_PAULI_1Q = ("X", "Y", "Z")
# the 15 non-identity 2-qubit Paulis, as (letter on first, letter on second)
_PAULI_2Q = tuple((a, b) for a in "IXYZ" for b in "IXYZ" if (a, b) != ("I", "I"))


class WidthCapError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 3e-4
    p2: float = 3e-3
    p_ro: float = 1e-2

    def __post_init__(self):
        for name in ("p1", "p2", "p_ro"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @classmethod
    def noiseless(cls) -> NoiseModel:
        return cls(0.0, 0.0, 0.0)

    def is_noiseless(self) -> bool:
        return self.p1 == 0 and self.p2 == 0 and self.p_ro == 0


@dataclass(frozen=True)
class Timing:
    elapsed_ns: int
    kernel_ns: int


@dataclass
class Distribution:
    """Bitstring -> probability (``shots == 0``) or bitstring -> count."""

    width: int
    entries: dict[str, float] = field(default_factory=dict)
    shots: int = 0

    def __post_init__(self):
        for b in self.entries:
            if len(b) != self.width:
                raise ValueError(f"bitstring {b!r} does not have width {self.width}")
        if self.shots:
            total = sum(self.entries.values())
            if total != self.shots:
                raise ValueError(f"counts sum to {total}, expected {self.shots}")

    @classmethod
    def point_mass(cls, bits: str) -> Distribution:
        return cls(len(bits), {bits: 1.0})

    def probabilities(self) -> dict[str, float]:
        total = float(self.shots) if self.shots else sum(self.entries.values())
        if total <= 0:
            raise ValueError("empty distribution")
        return {b: v / total for b, v in self.entries.items()}


@dataclass
class Statevector:
    width: int
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, bits: str) -> Statevector:
        n = _check_bits(bits)
        amps = np.zeros(2**n, dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        p = self.amplitudes.real**2 + self.amplitudes.imag**2
        return p


def _check_bits(bits: str) -> int:
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"invalid bitstring {bits!r}")
    return len(bits)


def bitstring(index: int, width: int) -> str:
    return format(index, f"0{width}b")


# -- kernels -----------------------------------------------------------------

def _halves(psi: np.ndarray, n: int, q: int):
    v = psi.reshape(1 << q, 2, 1 << (n - q - 1))
    return v[:, 0, :], v[:, 1, :]


def _rot_matrix(kind: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    raise ValueError(kind)


_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)


def _apply_matrix(psi, n, q, m):
    a0, a1 = _halves(psi, n, q)
    t0 = m[0, 0] * a0 + m[0, 1] * a1
    a1 *= m[1, 1]
    a1 += m[1, 0] * a0
    a0[...] = t0


def apply_pauli(psi: np.ndarray, n: int, q: int, letter: str) -> None:
    if letter == "I":
        return
    a0, a1 = _halves(psi, n, q)
    if letter == "Z":
        a1 *= -1
        return
    tmp = a0.copy()
    a0[...] = a1
    a1[...] = tmp
    if letter == "Y":
        # Y|0> = i|1>, Y|1> = -i|0>
        a0 *= -1j
        a1 *= 1j


def apply_gate(psi: np.ndarray, n: int, gate: Gate) -> None:
    """Apply ``gate`` to the flat state ``psi`` in place."""
    kind = gate.kind
    if kind == "CX":
        c, t = gate.qubits
        if c < t:
            v = psi.reshape(1 << c, 2, 1 << (t - c - 1), 2, 1 << (n - t - 1))
            sub = v[:, 1]
            tmp = sub[:, :, 0].copy()
            sub[:, :, 0] = sub[:, :, 1]
            sub[:, :, 1] = tmp
        else:
            v = psi.reshape(1 << t, 2, 1 << (c - t - 1), 2, 1 << (n - c - 1))
            tmp = v[:, 0, :, 1].copy()
            v[:, 0, :, 1] = v[:, 1, :, 1]
            v[:, 1, :, 1] = tmp
        return
    (q,) = gate.qubits
    if kind in ("X", "Y", "Z"):
        apply_pauli(psi, n, q, kind)
    elif kind == "RZ":
        a0, a1 = _halves(psi, n, q)
        a0 *= complex(math.cos(gate.angle / 2), -math.sin(gate.angle / 2))
        a1 *= complex(math.cos(gate.angle / 2), math.sin(gate.angle / 2))
    elif kind == "S":
        _halves(psi, n, q)[1][...] *= 1j
    elif kind == "Sdg":
        _halves(psi, n, q)[1][...] *= -1j
    elif kind == "H":
        _apply_matrix(psi, n, q, _H)
    else:
        _apply_matrix(psi, n, q, _rot_matrix(kind, gate.angle))


def _check_width(c: Circuit, bits: str, cap: int) -> None:
    n = _check_bits(bits)
    if n != c.width:
        raise ValueError(f"initial bits have width {n}, circuit has {c.width}")
    if n > cap:
        raise WidthCapError(f"width {n} exceeds simulator cap {cap}")


def evolve(c: Circuit, psi: np.ndarray) -> np.ndarray:
    for g in c.gates:
        apply_gate(psi, c.width, g)
    return psi


def run_ideal(c: Circuit, initial_bits: str, cap: int = DEFAULT_WIDTH_CAP) -> tuple[Statevector, Timing]:
    t0 = time.perf_counter_ns()
    _check_width(c, initial_bits, cap)
    state = Statevector.basis(initial_bits)
    k0 = time.perf_counter_ns()
    evolve(c, state.amplitudes)
    k1 = time.perf_counter_ns()
    return state, Timing(time.perf_counter_ns() - t0, k1 - k0)


def measure_analytic(state: Statevector) -> Distribution:
    p = state.probabilities()
    total = p.sum()
    nz = np.flatnonzero(p)
    return Distribution(state.width, {bitstring(int(i), state.width): float(p[i] / total) for i in nz})


def _readout_flips(outcomes: np.ndarray, n: int, p_ro: float, rng: np.random.Generator) -> np.ndarray:
    if p_ro <= 0 or outcomes.size == 0:
        return outcomes
    flips = rng.random((outcomes.size, n)) < p_ro
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    return outcomes ^ (flips.astype(np.int64) @ weights)


def _draw(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs)
    idx = np.searchsorted(cdf, rng.random(shots) * cdf[-1], side="right")
    return np.minimum(idx, probs.size - 1).astype(np.int64)


def _tally(outcomes: np.ndarray, n: int) -> dict[str, int]:
    values, counts = np.unique(outcomes, return_counts=True)
    return {bitstring(int(v), n): int(k) for v, k in zip(values, counts)}


def sample(state: Statevector, shots: int, seed=None, p_ro: float = 0.0) -> Distribution:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    outcomes = _readout_flips(_draw(state.probabilities(), shots, rng), state.width, p_ro, rng)
    return Distribution(state.width, _tally(outcomes, state.width), shots)


def _error_patterns(c: Circuit, noise: NoiseModel, shots: int, rng) -> Counter:
    """Group shots by their sampled tuple of (gate index, Pauli letters) errors."""
    per_shot: list[list[tuple[int, tuple[str, ...]]]] = [[] for _ in range(shots)]
    for i, g in enumerate(c.gates):
        two = g.kind == "CX"
        p = noise.p2 if two else noise.p1
        if p <= 0:
            continue
        k = int(rng.binomial(shots, p))
        if not k:
            continue
        hit = rng.choice(shots, size=k, replace=False)
        choice = rng.integers(0, 15 if two else 3, size=k)
        for s, ch in zip(hit.tolist(), choice.tolist()):
            per_shot[s].append((i, _PAULI_2Q[ch] if two else (_PAULI_1Q[ch],)))
    return Counter(tuple(p) for p in per_shot)


def _checkpoints(c: Circuit, psi0: np.ndarray, stride: int):
    """Ideal states after the first ``j`` gates (``j`` a multiple of ``stride``), plus the final one."""
    cps = {0: psi0.copy()}
    psi = psi0.copy()
    for j, g in enumerate(c.gates, start=1):
        apply_gate(psi, c.width, g)
        if j % stride == 0:
            cps[j] = psi.copy()
    return cps, psi


def run_noisy(
    c: Circuit,
    initial_bits: str,
    noise: NoiseModel,
    shots: int,
    seed=None,
    cap: int = DEFAULT_WIDTH_CAP,
) -> tuple[Distribution, Timing]:
    if shots < 1:
        raise ValueError("shots must be >= 1; use run_ideal + measure_analytic for analytic results")
    t0 = time.perf_counter_ns()
    _check_width(c, initial_bits, cap)
    n = c.width
    rng = np.random.default_rng(seed)
    patterns = _error_patterns(c, noise, shots, rng)

    kernel = 0
    k0 = time.perf_counter_ns()
    psi0 = Statevector.basis(initial_bits).amplitudes
    n_gates = len(c.gates)
    max_cps = max(1, CHECKPOINT_BUDGET_BYTES // psi0.nbytes)
    stride = max(1, math.isqrt(max(n_gates, 1)), -(-n_gates // max_cps))
    cps, final_ideal = _checkpoints(c, psi0, stride)
    kernel += time.perf_counter_ns() - k0

    outcomes = []
    for pattern in sorted(patterns):
        count = patterns[pattern]
        k0 = time.perf_counter_ns()
        if not pattern:
            psi = final_ideal
        else:
            start = (pattern[0][0] // stride) * stride
            psi = cps[start].copy()
            errors: dict[int, list[tuple[str, ...]]] = {}
            for i, letters in pattern:
                errors.setdefault(i, []).append(letters)
            for i in range(start, n_gates):
                g = c.gates[i]
                apply_gate(psi, n, g)
                for letters in errors.get(i, ()):
                    for q, letter in zip(g.qubits, letters):
                        apply_pauli(psi, n, q, letter)
        probs = psi.real**2 + psi.imag**2
        drawn = _readout_flips(_draw(probs, count, rng), n, noise.p_ro, rng)
        outcomes.append(drawn)
        kernel += time.perf_counter_ns() - k0

    k0 = time.perf_counter_ns()
    counts = _tally(np.concatenate(outcomes), n)
    kernel += time.perf_counter_ns() - k0
    dist = Distribution(n, counts, shots)
    return dist, Timing(time.perf_counter_ns() - t0, kernel)
