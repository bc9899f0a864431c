"""Benchmarks for Trotterized Hamiltonian simulation on a noisy statevector simulator."""
from .circuit import Circuit, DepthMetrics, Gate, concat, depth_metrics, invert
from .exact import circuit_unitary, exact_evolution_distribution, hamiltonian_matrix
from .metrics import crossover_width, hellinger_fidelity, mirror_rescale, polarization
from .mirror import (
    MirrorVariant,
    PauliFrame,
    expected_mirror_distribution,
    quasi_inverse_mirror,
    random_pauli_layer,
    simple_mirror,
)
from .models import BoundaryCondition, fermi_hubbard_1d_jw, heisenberg, max3sat, tfim
from .pauli import (
    PauliString,
    PauliSum,
    PauliTerm,
    all_terms_commute,
    commutes,
    conjugate_by_clifford,
    parse_pauli_sum,
    serialize_pauli_sum,
)
from .runner import BenchConfig, BenchRecord, MethodId, sweep, timing_study
from .simulator import Distribution, NoiseModel, Statevector, measure_analytic, run_ideal, run_noisy, sample
from .trotter import TrotterConfig, neel_prep, pauli_exponential, trotter_circuit

__version__ = "0.1.0"
