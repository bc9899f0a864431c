import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hamsimbench.circuit import Circuit, depth_metrics, h, invert, rz
from hamsimbench.exact import circuit_unitary, pauli_matrix
from hamsimbench.mirror import (
    MirrorVariant,
    PauliFrame,
    expected_mirror_distribution,
    quasi_inverse,
    quasi_inverse_mirror,
    random_pauli_layer,
    simple_mirror,
)
from hamsimbench.models import heisenberg, tfim
from hamsimbench.pauli import PauliString
from hamsimbench.simulator import Statevector, measure_analytic, run_ideal
from hamsimbench.trotter import TrotterConfig, trotter_circuit

from conftest import circuits, equal_up_to_phase, pauli_strings, random_circuit


def test_simple_mirror_examples():
    m = simple_mirror(Circuit(1, (h(0),)))
    assert m.gates == (h(0), h(0))
    assert np.allclose(circuit_unitary(m), np.eye(2))
    c = trotter_circuit(tfim(3, 1.0), TrotterConfig(1.0, 2))
    m = simple_mirror(c)
    assert np.allclose(circuit_unitary(m), np.eye(8), atol=1e-10)
    assert len(m) == 2 * len(c)


@settings(max_examples=30, deadline=None)
@given(circuits(max_width=4, max_gates=40), st.data())
def test_quasi_inverse_mirror_is_resultant_pauli(c, data):
    p = PauliString(data.draw(pauli_strings(c.width)))
    m, res = quasi_inverse_mirror(c, p)
    assert np.allclose(circuit_unitary(m), res.sign * pauli_matrix(res.current), atol=1e-9)


def test_quasi_inverse_examples():
    m, res = quasi_inverse_mirror(Circuit(1), PauliString("X"))
    assert [g.kind for g in m] == ["X"] and res == PauliFrame(PauliString("X"), 1)

    c = Circuit(1, (rz(0.5, 0),))
    qinv, res = quasi_inverse(c, PauliString("X"))
    assert qinv.gates == (rz(0.5, 0),)
    m, _ = quasi_inverse_mirror(c, PauliString("X"))
    assert np.allclose(circuit_unitary(m), pauli_matrix("X"), atol=1e-10)


def test_quasi_inverse_mirror_on_trotter(rng):
    c = trotter_circuit(heisenberg(3, 1.0), TrotterConfig(1.0, 2))
    for _ in range(6):
        p = random_pauli_layer(3, rng.integers(1 << 30))
        m, res = quasi_inverse_mirror(c, p)
        assert equal_up_to_phase(circuit_unitary(m), pauli_matrix(res.current), 1e-9)


def test_identity_layer_degenerates_to_simple(rng):
    c = random_circuit(rng, 4, 40)
    m, res = quasi_inverse_mirror(c, PauliString("IIII"))
    assert m == simple_mirror(c)
    assert res == PauliFrame(PauliString("IIII"), 1)


@given(circuits(max_width=5, max_gates=40), st.data())
def test_frame_changes_only_rotation_signs(c, data):
    p = PauliString(data.draw(pauli_strings(c.width)))
    qinv, _ = quasi_inverse(c, p)
    ref = invert(c)
    assert len(qinv) == len(ref)
    for a, b in zip(qinv, ref):
        assert a.kind == b.kind and a.qubits == b.qubits
        if a.angle is not None:
            assert a.angle in (b.angle, -b.angle)
    m, _ = quasi_inverse_mirror(c, p)
    assert depth_metrics(m).gate_count == 2 * len(c) + p.weight()


def test_width_mismatch():
    with pytest.raises(ValueError):
        quasi_inverse_mirror(Circuit(2), PauliString("X"))
    with pytest.raises(ValueError):
        expected_mirror_distribution("10", PauliFrame(PauliString("XYZ")))


@pytest.mark.parametrize(
    "bits, letters, expected",
    [("1010", "IIII", "1010"), ("10", "XI", "00"), ("101", "ZYX", "110")],
)
def test_expected_distribution(bits, letters, expected):
    frame = PauliFrame(PauliString(letters), -1)
    assert expected_mirror_distribution(bits, frame).entries == {expected: 1.0}
    # oracle: apply the Pauli matrix to the basis state and read off its support
    psi = pauli_matrix(letters) @ Statevector.basis(bits).amplitudes
    assert measure_analytic(Statevector(len(bits), psi)).entries == {expected: 1.0}


def test_random_pauli_layer():
    assert random_pauli_layer(6, 3) == random_pauli_layer(6, 3)
    counts = {c: 0 for c in "IXYZ"}
    for seed in range(400):
        counts[random_pauli_layer(1, seed).letters] += 1
    assert all(v > 0 for v in counts.values())
    chi2 = sum((v - 100) ** 2 / 100 for v in counts.values())
    assert chi2 < 16.27  # 3 dof, p = 0.001
    with pytest.raises(ValueError):
        random_pauli_layer(0, 1)


@settings(max_examples=20, deadline=None)
@given(circuits(max_width=10, max_gates=60), st.integers(0, 2**10 - 1))
def test_simple_mirror_returns_input(c, idx):
    bits = format(idx % (1 << c.width), f"0{c.width}b")
    state, _ = run_ideal(simple_mirror(c), bits)
    dist = measure_analytic(state)
    assert dist.entries[bits] == pytest.approx(1.0, abs=1e-10)


def test_variant_validation():
    assert MirrorVariant("multi_random_pauli").n_samples == 10
    with pytest.raises(ValueError):
        MirrorVariant("simple", 3)
    with pytest.raises(ValueError):
        MirrorVariant("bogus")
    with pytest.raises(ValueError):
        PauliFrame(PauliString("X"), 2)
