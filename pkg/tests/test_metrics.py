import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hamsimbench.metrics import FidelityValue, crossover_width, hellinger_fidelity, mirror_rescale, polarization
from hamsimbench.simulator import Distribution


def dist(entries, width=None):
    width = width or len(next(iter(entries)))
    return Distribution(width, dict(entries))


def test_hellinger_examples():
    assert hellinger_fidelity(dist({"00": 1.0}), dist({"00": 1.0})) == 1.0
    assert hellinger_fidelity(dist({"0": 1}), dist({"1": 1})) == 0.0
    uniform = dist({format(i, "02b"): 0.25 for i in range(4)})
    assert hellinger_fidelity(uniform, dist({"00": 1.0})) == pytest.approx(0.25)


def test_counts_vs_frequencies():
    counts = Distribution(1, {"0": 30, "1": 70}, shots=100)
    freqs = dist({"0": 0.3, "1": 0.7})
    assert hellinger_fidelity(counts, freqs) == pytest.approx(1.0, abs=1e-12)


def test_hellinger_errors():
    with pytest.raises(ValueError):
        hellinger_fidelity(dist({"0": 1}), dist({"00": 1}))
    with pytest.raises(ValueError):
        hellinger_fidelity(Distribution(1, {}), dist({"0": 1}))


distributions = st.dictionaries(
    st.sampled_from(["000", "001", "010", "011", "100", "101", "110", "111"]),
    st.integers(1, 1000),
    min_size=1,
).map(lambda d: Distribution(3, d, sum(d.values())))


@given(distributions, distributions)
def test_hellinger_symmetric_and_bounded(p, q):
    f = hellinger_fidelity(p, q)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(hellinger_fidelity(q, p), abs=1e-12)
    assert hellinger_fidelity(p, p) == pytest.approx(1.0, abs=1e-12)


@given(distributions, distributions)
def test_hellinger_one_only_for_equal(p, q):
    if hellinger_fidelity(p, q) >= 1 - 1e-12:
        pp, qq = p.probabilities(), q.probabilities()
        assert all(abs(pp.get(k, 0) - qq.get(k, 0)) < 1e-5 for k in set(pp) | set(qq))


def test_polarization_examples():
    assert polarization(1.0, 5) == 1.0
    assert polarization(1 / 8, 3) == 0.0
    assert polarization(0.25, 2) == 0.0
    assert polarization(0.0, 2) == 0.0
    assert FidelityValue.of(1.0, 4) == FidelityValue(1.0, 1.0, 4)


@given(st.floats(0, 1), st.floats(0, 1), st.integers(1, 12))
def test_polarization_monotone(a, b, n):
    lo, hi = sorted((a, b))
    assert polarization(lo, n) <= polarization(hi, n)


def test_mirror_rescale():
    assert mirror_rescale(1.0) == 1.0
    assert mirror_rescale(0.81) == pytest.approx(0.9)
    assert mirror_rescale(0.0) == 0.0
    with pytest.raises(ValueError):
        mirror_rescale(1.2)


@given(st.floats(0, 1))
def test_mirror_rescale_monotone_and_fixed_points(f):
    r = mirror_rescale(f)
    assert r >= f
    if 1e-12 < f < 1 - 1e-12:
        assert mirror_rescale(r) > r


def test_rescale_undoes_doubled_global_depolarizing():
    """Toy channel: each gate keeps the state with prob F, else outputs uniform noise."""
    n_qubits, n_gates, f = 3, 20, 0.99
    d = 2**n_qubits
    target = np.zeros(d)
    target[5] = 1.0

    def run(gates):
        keep = f**gates
        return keep * target + (1 - keep) / d

    def pol(p):
        raw = math.fsum(math.sqrt(x * y) for x, y in zip(p, target)) ** 2
        return polarization(raw, n_qubits)

    half = pol(run(n_gates))
    mirror = pol(run(2 * n_gates))
    assert mirror == pytest.approx(half**2, abs=0.02)
    assert mirror_rescale(mirror) == pytest.approx(half, abs=0.02)


def test_crossover_examples():
    grid = range(4, 33)
    a = {w: 2.0**w * 1e-6 for w in grid}
    b = {w: 2.0 for w in grid}
    assert crossover_width(a, b) == 21
    assert crossover_width({w: 0.0 for w in grid}, b) is None
    assert crossover_width({w: 10.0 for w in grid}, b) == 4
    with pytest.raises(ValueError):
        crossover_width({4: 1.0}, {4: 2.0})
