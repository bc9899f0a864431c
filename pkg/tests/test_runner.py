import dataclasses
import json

import pytest

from hamsimbench.mirror import MirrorVariant
from hamsimbench.models import heisenberg, max3sat, tfim
from hamsimbench.runner import (
    FIELD_NAMES,
    M1_VARIANTS,
    VOLATILE_FIELDS,
    BenchConfig,
    BenchRecord,
    MethodId,
    aggregate,
    build_model,
    derive_seed,
    plan_cells,
    read_records,
    record_key,
    run_cell,
    run_method1,
    run_method1_variant,
    run_method2,
    run_method3,
    sweep,
    timing_study,
)
from hamsimbench.simulator import NoiseModel
from hamsimbench.trotter import TrotterConfig, neel_bits, neel_prep, trotter_circuit

ANALYTIC = BenchConfig(shots=0, noise=NoiseModel.noiseless())


def test_zero_noise_all_methods_exact():
    h = heisenberg(4, 1.0)
    for method in MethodId:
        if method is MethodId.M2 or method is MethodId.M2_noiseless:
            continue
        r = run_cell(h, 4, method, ANALYTIC, seed=3)
        assert r.raw_fidelity == pytest.approx(1.0, abs=1e-12), method
        assert r.rescaled_fidelity == pytest.approx(1.0, abs=1e-12)


def test_method1_default_noise_between_baseline_and_one():
    r = run_method1(tfim(4, 1.0), 4, BenchConfig(seed=1))
    assert 1 / 16 < r.raw_fidelity < 1
    assert r.shots == 1000 and r.layered_depth > 0


def test_method1_monotone_in_p2():
    h = tfim(4, 1.0)
    fids = []
    for p2 in (3e-4, 3e-3, 3e-2):
        cfg = BenchConfig(noise=NoiseModel(p1=3e-4, p2=p2, p_ro=1e-2), shots=4000)
        fids.append(run_method1(h, 4, cfg, seed=7).raw_fidelity)
    assert fids[0] >= fids[1] - 0.01 >= fids[2] - 0.02


@pytest.mark.parametrize("seed", range(3))
def test_method2_noiseless_commuting_is_one(seed):
    h, _ = max3sat(5, 3.0, seed)
    r = run_method2(h, 5, BenchConfig(), noiseless=True)
    assert r.raw_fidelity == pytest.approx(1.0, abs=1e-9)
    assert r.method == "M2_noiseless"


def test_method2_width_cap():
    with pytest.raises(ValueError):
        run_method2(tfim(13, 1.0), 13, ANALYTIC, noiseless=True)


def test_method2_more_steps_not_worse():
    h = heisenberg(4, 1.0)
    k5 = run_method2(h, 4, BenchConfig(trotter=TrotterConfig(1.0, 5)), noiseless=True)
    k10 = run_method2(h, 4, BenchConfig(trotter=TrotterConfig(1.0, 10)), noiseless=True)
    assert k10.raw_fidelity >= k5.raw_fidelity


def test_ordering_invariants():
    cfg = BenchConfig(seed=5, shots=4000)
    h = heisenberg(4, 1.0)
    r = {m: run_cell(h, 4, m, cfg, seed=11) for m in (MethodId.M1, MethodId.M2, MethodId.M2_noiseless, MethodId.M3_simple)}
    raw = {m: v.raw_fidelity for m, v in r.items()}
    assert raw[MethodId.M2] <= raw[MethodId.M1] + 0.02
    assert raw[MethodId.M2_noiseless] >= raw[MethodId.M2] - 0.02
    assert raw[MethodId.M1] >= raw[MethodId.M3_simple] - 0.02


def test_sqrt_fields():
    cfg = BenchConfig(seed=2)
    h = tfim(4, 1.0)
    m3 = run_method3(h, 4, cfg, MirrorVariant("simple"))
    assert m3.rescaled_fidelity == pytest.approx(m3.raw_fidelity**0.5)
    assert m3.rescaled_polarization_fidelity == pytest.approx(m3.polarization_fidelity**0.5)
    assert m3.rescaled_fidelity >= m3.raw_fidelity
    m1 = run_method1(h, 4, cfg)
    assert m1.rescaled_fidelity == m1.polarization_fidelity


def test_method3_variants_and_depth():
    h = tfim(4, 1.0)
    cfg = BenchConfig(seed=4)
    m1 = run_method1(h, 4, cfg)
    block = len(trotter_circuit(h, cfg.trotter))
    prep = len(neel_prep(4))
    simple = run_method3(h, 4, cfg, MirrorVariant("simple"))
    assert simple.gate_count == prep + 2 * block == 2 * m1.gate_count - prep
    assert abs(simple.layered_depth - 2 * m1.layered_depth) <= 2
    rp = run_method3(h, 4, cfg, MirrorVariant("random_pauli"))
    assert 2 * block + prep <= rp.gate_count <= 2 * block + prep + 4
    multi = run_method3(h, 4, cfg, MirrorVariant("multi_random_pauli", 3))
    assert multi.method == "M3_multi_random_pauli" and 0 <= multi.raw_fidelity <= 1


def test_method1_variants():
    h = tfim(4, 1.0)
    cfg = BenchConfig(seed=6)
    base = run_method1(h, 4, cfg)
    inv = run_method1_variant(h, 4, cfg, "inverse")
    assert inv.gate_count == base.gate_count and inv.method == "M1_inverse"
    k10 = run_method1_variant(h, 4, cfg, "K10_sqrt")
    prep = len(neel_prep(4))
    assert k10.gate_count - prep == 2 * (base.gate_count - prep)
    assert k10.rescaled_fidelity == pytest.approx(k10.raw_fidelity**0.5)
    with pytest.raises(ValueError):
        run_method1_variant(h, 4, cfg, "K20")
    assert set(M1_VARIANTS.values()) == {"inverse", "K10_sqrt", "K10_inverse_sqrt", "K10_t1e9_sqrt"}


def test_t1e9_reference_is_neel_point_mass():
    from hamsimbench.simulator import measure_analytic, run_ideal
    from hamsimbench.circuit import concat

    h = heisenberg(6, 1.0)
    c = concat(neel_prep(6), trotter_circuit(h, TrotterConfig(1e-9, 10)))
    state, _ = run_ideal(c, "000000")
    probs = measure_analytic(state).entries
    assert max(p for b, p in probs.items() if b != neel_bits(6)) < 1e-12


def test_analytic_requires_zero_noise():
    with pytest.raises(ValueError):
        run_method1(tfim(3, 1.0), 3, BenchConfig(shots=0))


def test_width_mismatch():
    with pytest.raises(ValueError):
        run_method1(tfim(3, 1.0), 4, ANALYTIC)


def test_build_model(tmp_path):
    assert build_model("tfim", 4, {"h": 0.5, "pbc": True}) == tfim(4, 0.5, "periodic")
    assert build_model("max3sat", 5, {"ratio": 2.0}, 1) == build_model("max3sat", 5, {"ratio": 2.0}, 1)
    assert build_model("fh1d", 4, {}).width == 4
    with pytest.raises(ValueError):
        build_model("fh1d", 5, {})
    with pytest.raises(ValueError):
        build_model("ising", 4, {})
    p = tmp_path / "h4.txt"
    p.write_text("qubits: 4\n1.0 ZZII\n0.5 X2\n")
    assert build_model(f"file:{tmp_path}/h{{width}}.txt", 4, {}).width == 4


def test_seeds_and_keys():
    assert derive_seed(1, "width", 4) == derive_seed(1, "width", 4)
    assert derive_seed(1, "width", 4) != derive_seed(1, "width", 6)
    assert derive_seed(1, "width", 4) != derive_seed(2, "width", 4)
    k = record_key("tfim", {"h": 1.0}, 4, "M1", 9)
    assert len(k) == 16 and k == record_key("tfim", {"h": 1.0}, 4, "M1", 9)
    assert k != record_key("tfim", {"h": 1.0}, 4, "M2", 9)


def test_config_validation():
    cfg = BenchConfig(widths=(6, 2, 4), methods=("M1",))
    assert cfg.widths == (2, 4, 6) and cfg.methods == (MethodId.M1,)
    with pytest.raises(ValueError):
        BenchConfig(shots=-1)
    with pytest.raises(ValueError):
        BenchConfig(methods=("M4",))
    assert len(BenchConfig(model_params={"h": [0.5, 1.0], "pbc": [False, True]}).param_grid()) == 4


SMALL = BenchConfig(model="tfim", model_params={"h": [0.5, 1.0]}, widths=(2, 4, 6), shots=200, seed=3,
                    methods=(MethodId.M1, MethodId.M3_simple))


def test_sweep_counts_and_persistence(tmp_path):
    out = tmp_path / "r.jsonl"
    cfg = BenchConfig(widths=(2, 4, 6, 8, 10), shots=100)
    recs = sweep(cfg, out)
    assert len(recs) == 5 and len(out.read_text().splitlines()) == 5
    for line in out.read_text().splitlines():
        assert list(json.loads(line)) == FIELD_NAMES


def test_sweep_resume_is_idempotent(tmp_path):
    out = tmp_path / "r.jsonl"
    full = sweep(SMALL, out)
    assert len(full) == 12
    lines = out.read_text().splitlines()
    # simulate an interrupted run: keep 5 rows plus a torn partial line
    out.write_text("\n".join(lines[:5]) + "\n" + lines[5][:20])
    seen = []
    resumed = sweep(SMALL, out, progress=seen.append)
    assert len(seen) == 7
    keys = [r.key for r in read_records(out)]
    assert len(keys) == len(set(keys)) == 12
    strip = lambda r: {k: v for k, v in dataclasses.asdict(r).items() if k not in VOLATILE_FIELDS}
    assert [strip(r) for r in resumed] == [strip(r) for r in full]
    seen.clear()
    sweep(SMALL, out, progress=seen.append)
    assert seen == []


def test_sweep_parallel_matches_serial(tmp_path):
    a = sweep(SMALL, tmp_path / "a.jsonl")
    b = sweep(SMALL, tmp_path / "b.jsonl", workers=2)
    strip = lambda r: {k: v for k, v in dataclasses.asdict(r).items() if k not in VOLATILE_FIELDS}
    assert [strip(r) for r in a] == [strip(r) for r in b]


def test_error_rows_do_not_abort(tmp_path):
    cfg = BenchConfig(model="fh1d", widths=(3, 4), shots=100, methods=(MethodId.M1,))
    recs = sweep(cfg, tmp_path / "e.jsonl")
    assert recs[0].error and "even width" in recs[0].error
    assert recs[1].error is None and 0 <= recs[1].raw_fidelity <= 1


def test_common_random_numbers_across_methods():
    cells = plan_cells(SMALL)
    by_width = {}
    for c in cells:
        by_width.setdefault(c.width, set()).add(c.seed)
    assert all(len(s) == 1 for s in by_width.values())
    assert len({next(iter(s)) for s in by_width.values()}) == len(by_width)


def test_aggregate():
    recs = sweep(SMALL)
    agg = aggregate(recs, "raw_fidelity")
    assert set(agg) == {(m.value, w) for m in SMALL.methods for w in SMALL.widths}
    for lo, mean, hi in agg.values():
        assert lo <= mean <= hi
    for r in recs:
        for f in ("raw_fidelity", "polarization_fidelity", "rescaled_fidelity", "rescaled_polarization_fidelity"):
            assert 0 <= getattr(r, f) <= 1


def test_record_json_round_trip():
    r = run_method1(tfim(3, 1.0), 3, BenchConfig(shots=50), model="tfim", params={"h": 1.0})
    assert BenchRecord.from_dict(json.loads(r.to_json())) == r


def test_timing_study_small(tmp_path, caplog):
    rows = timing_study("tfim", (4, 6, 30), shots=100, cap=8, out=tmp_path / "t.csv")
    assert [r.width for r in rows] == [4, 6]
    assert "truncating" in caplog.text
    assert all(0 < r.kernel_ns <= r.elapsed_ns for r in rows)
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "width,elapsed_ns,kernel_ns,gate_count"
    with pytest.raises(ValueError):
        timing_study("tfim", (4,), backend="gpu")
    noisy = timing_study("tfim", (4,), shots=100, backend="noisy")
    assert noisy[0].gate_count == len(neel_prep(4)) + len(trotter_circuit(tfim(4, 1.0), TrotterConfig()))
