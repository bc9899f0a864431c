import numpy as np
import pytest
from hypothesis import strategies as st

from hamsimbench.circuit import Circuit, Gate

KINDS_1Q = ["H", "X", "Y", "Z", "S", "Sdg", "RX", "RY", "RZ"]


def random_circuit(rng: np.random.Generator, width: int, n_gates: int) -> Circuit:
    gates = []
    for _ in range(n_gates):
        if width > 1 and rng.random() < 0.3:
            a, b = rng.choice(width, size=2, replace=False)
            gates.append(Gate("CX", (int(a), int(b))))
            continue
        kind = KINDS_1Q[rng.integers(len(KINDS_1Q))]
        q = int(rng.integers(width))
        angle = float(rng.uniform(-np.pi, np.pi)) if kind.startswith("R") else None
        gates.append(Gate(kind, (q,), angle))
    return Circuit(width, tuple(gates))


@st.composite
def circuits(draw, max_width=4, max_gates=30):
    width = draw(st.integers(1, max_width))
    n = draw(st.integers(0, max_gates))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_circuit(np.random.default_rng(seed), width, n)


def pauli_strings(width):
    return st.text(alphabet="IXYZ", min_size=width, max_size=width)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    phase = a[idx] / b[idx]
    return abs(abs(phase) - 1) < atol and np.allclose(a, phase * b, atol=atol)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
