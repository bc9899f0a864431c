"""Fidelity methods, parameter sweeps and timing studies.

Method ids:

    M1                     noisy Trotter circuit vs its ideal output
    M2 / M2_noiseless      noisy (or ideal) Trotter circuit vs exact evolution
    M3_simple              circuit followed by its inverse
    M3_random_pauli        one random Pauli layer + quasi-inverse
    M3_multi_random_pauli  mean over several random Pauli layers
    M1_inverse, M1_K10_sqrt, M1_K10_inverse_sqrt, M1_K10_t1e9_sqrt
                           Method-1 variants shaped like the mirror circuits
"""
from __future__ import annotations

import dataclasses
import datetime as _dt
import enum
import hashlib
import itertools
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import models
from .circuit import Circuit, concat, depth_metrics, invert
from .exact import EXACT_WIDTH_CAP, exact_evolution_distribution
from .metrics import hellinger_fidelity, polarization
from .mirror import (
    DEFAULT_PAULI_SAMPLES,
    MirrorVariant,
    expected_mirror_distribution,
    quasi_inverse_mirror,
    random_pauli_layer,
    simple_mirror,
)
from .pauli import PauliSum, load_pauli_sum
from .simulator import (
    DEFAULT_WIDTH_CAP,
    Distribution,
    NoiseModel,
    Timing,
    measure_analytic,
    run_ideal,
    run_noisy,
    sample,
)
from .trotter import TrotterConfig, neel_bits, neel_prep, trotter_circuit

log = logging.getLogger(__name__)


class MethodId(str, enum.Enum):
    M1 = "M1"
    M2 = "M2"
    M2_noiseless = "M2_noiseless"
    M3_simple = "M3_simple"
    M3_random_pauli = "M3_random_pauli"
    M3_multi_random_pauli = "M3_multi_random_pauli"
    M1_inverse = "M1_inverse"
    M1_K10_sqrt = "M1_K10_sqrt"
    M1_K10_inverse_sqrt = "M1_K10_inverse_sqrt"
    M1_K10_t1e9_sqrt = "M1_K10_t1e9_sqrt"


M1_VARIANTS = {
    MethodId.M1_inverse: "inverse",
    MethodId.M1_K10_sqrt: "K10_sqrt",
    MethodId.M1_K10_inverse_sqrt: "K10_inverse_sqrt",
    MethodId.M1_K10_t1e9_sqrt: "K10_t1e9_sqrt",
}
M3_VARIANTS = {
    MethodId.M3_simple: "simple",
    MethodId.M3_random_pauli: "random_pauli",
    MethodId.M3_multi_random_pauli: "multi_random_pauli",
}
SQRT_METHODS = {
    MethodId.M1_K10_sqrt,
    MethodId.M1_K10_inverse_sqrt,
    MethodId.M1_K10_t1e9_sqrt,
    *M3_VARIANTS,
}

# fields that legitimately differ between otherwise identical runs
VOLATILE_FIELDS = ("timestamp", "elapsed_ns", "kernel_ns")


@dataclass(frozen=True)
class BenchConfig:
    model: str = "tfim"
    model_params: dict[str, list] = field(default_factory=dict)
    widths: tuple[int, ...] = (2, 4, 6, 8, 10)
    trotter: TrotterConfig = TrotterConfig()
    shots: int = 1000
    noise: NoiseModel = NoiseModel()
    methods: tuple[MethodId, ...] = (MethodId.M1,)
    seed: int = 0
    n_pauli_samples: int = DEFAULT_PAULI_SAMPLES
    width_cap: int = DEFAULT_WIDTH_CAP

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(sorted(int(w) for w in self.widths)))
        object.__setattr__(self, "methods", tuple(MethodId(m) for m in self.methods))
        if self.shots < 0:
            raise ValueError("shots must be >= 0")
        if self.n_pauli_samples < 1:
            raise ValueError("n_pauli_samples must be >= 1")

    def param_grid(self) -> list[dict[str, Any]]:
        names = sorted(self.model_params)
        values = [
            v if isinstance(v, (list, tuple)) else [v] for v in (self.model_params[k] for k in names)
        ]
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]


@dataclass
class BenchRecord:
    key: str
    model: str
    params: dict[str, Any]
    width: int
    method: str
    seed: int
    raw_fidelity: float | None = None
    polarization_fidelity: float | None = None
    rescaled_fidelity: float | None = None
    rescaled_polarization_fidelity: float | None = None
    layered_depth: int | None = None
    gate_count: int | None = None
    two_qubit_count: int | None = None
    elapsed_ns: int = 0
    kernel_ns: int = 0
    shots: int = 0
    timestamp: str = ""
    error: str | None = None

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> BenchRecord:
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


FIELD_NAMES = [f.name for f in dataclasses.fields(BenchRecord)]


# -- seeds and keys ------------------------------------------------------------

def _stable_int(*parts) -> int:
    blob = json.dumps(parts, sort_keys=True, default=str).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "little")


def derive_seed(base_seed: int, *parts) -> int:
    """Per-task seed that depends only on the task identity, not on scheduling."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(_stable_int(*parts),))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def record_key(model: str, params: dict, width: int, method: str, seed: int) -> str:
    blob = json.dumps([model, params, width, method, seed], sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


# -- model construction --------------------------------------------------------

MODEL_NAMES = ("tfim", "heisenberg", "max3sat", "fh1d")


def build_model(name: str, width: int, params: dict[str, Any], seed: int = 0) -> PauliSum:
    bc = models.BoundaryCondition.PERIODIC if params.get("pbc") else models.BoundaryCondition.OPEN
    if name == "tfim":
        return models.tfim(width, params.get("h", 1.0), bc)
    if name == "heisenberg":
        return models.heisenberg(width, params.get("h", 1.0), bc)
    if name == "max3sat":
        instance_seed = derive_seed(seed, "max3sat", width, params)
        return models.max3sat(width, params.get("ratio", 2.0), instance_seed)[0]
    if name == "fh1d":
        if width % 2:
            raise ValueError("fh1d needs an even width (two qubits per site)")
        return models.fermi_hubbard_1d_jw(width // 2, params.get("t_hop", 1.0), params.get("U", 4.0), bc)
    if name.startswith("file:"):
        h = load_pauli_sum(name[5:].format(width=width))
        if h.width != width:
            raise ValueError(f"file Hamiltonian has width {h.width}, requested {width}")
        return h
    raise ValueError(f"unknown model {name!r}")


# -- execution helpers ---------------------------------------------------------

@dataclass
class _Outcome:
    raw: float
    circuit: Circuit
    elapsed_ns: int
    kernel_ns: int


def _execute(c: Circuit, bits: str, cfg: BenchConfig, seed: int, noiseless: bool = False):
    """Test distribution for ``c``: sampled under noise, or analytic when allowed."""
    if noiseless or cfg.shots == 0:
        if not noiseless and not cfg.noise.is_noiseless():
            raise ValueError("shots=0 (analytic) requires a zero noise model")
        state, timing = run_ideal(c, bits, cfg.width_cap)
        return measure_analytic(state), timing
    return run_noisy(c, bits, cfg.noise, cfg.shots, seed, cfg.width_cap)


def _ideal_reference(c: Circuit, bits: str, cfg: BenchConfig) -> tuple[Distribution, Timing]:
    state, timing = run_ideal(c, bits, cfg.width_cap)
    return measure_analytic(state), timing


def _record(method, h: PauliSum, out: _Outcome, cfg: BenchConfig, seed: int, model: str, params) -> BenchRecord:
    method = MethodId(method)
    width = h.width
    raw = min(1.0, max(0.0, out.raw))
    pol = polarization(raw, width)
    sqrt = method in SQRT_METHODS
    dm = depth_metrics(out.circuit)
    params = dict(params or {})
    return BenchRecord(
        key=record_key(model, params, width, method.value, seed),
        model=model,
        params=params,
        width=width,
        method=method.value,
        seed=seed,
        raw_fidelity=raw,
        polarization_fidelity=pol,
        rescaled_fidelity=math.sqrt(raw) if sqrt else pol,
        rescaled_polarization_fidelity=math.sqrt(pol) if sqrt else pol,
        layered_depth=dm.layered_depth,
        gate_count=dm.gate_count,
        two_qubit_count=dm.two_qubit_count,
        elapsed_ns=out.elapsed_ns,
        kernel_ns=out.kernel_ns,
        shots=cfg.shots,
        timestamp=_now(),
    )


def _check_width(h: PauliSum, width: int) -> None:
    if h.width != width:
        raise ValueError(f"Hamiltonian width {h.width} != requested width {width}")


# -- methods -------------------------------------------------------------------

def _method1_outcome(h: PauliSum, cfg: BenchConfig, trotter: TrotterConfig, inverse: bool, seed: int) -> _Outcome:
    t0 = time.perf_counter_ns()
    block = trotter_circuit(h, trotter)
    if inverse:
        block = invert(block)
    c = concat(neel_prep(h.width), block)
    bits = "0" * h.width
    ref, rt = _ideal_reference(c, bits, cfg)
    test, tt = _execute(c, bits, cfg, seed)
    raw = hellinger_fidelity(test, ref)
    return _Outcome(raw, c, time.perf_counter_ns() - t0, rt.kernel_ns + tt.kernel_ns)


def run_method1(h, width, cfg: BenchConfig, seed=None, model="custom", params=None) -> BenchRecord:
    _check_width(h, width)
    seed = cfg.seed if seed is None else seed
    out = _method1_outcome(h, cfg, cfg.trotter, False, seed)
    return _record(MethodId.M1, h, out, cfg, seed, model, params)


def run_method1_variant(h, width, cfg: BenchConfig, which: str, seed=None, model="custom", params=None) -> BenchRecord:
    _check_width(h, width)
    seed = cfg.seed if seed is None else seed
    by_name = {v: k for k, v in M1_VARIANTS.items()}
    if which not in by_name:
        raise ValueError(f"unknown Method-1 variant {which!r}")
    trotter = cfg.trotter
    if which.startswith("K10"):
        trotter = dataclasses.replace(trotter, steps=2 * trotter.steps)
    if which == "K10_t1e9_sqrt":
        trotter = dataclasses.replace(trotter, time=1e-9)
    out = _method1_outcome(h, cfg, trotter, "inverse" in which, seed)
    return _record(by_name[which], h, out, cfg, seed, model, params)


def run_method2(h, width, cfg: BenchConfig, noiseless=False, seed=None, model="custom", params=None) -> BenchRecord:
    _check_width(h, width)
    if width > EXACT_WIDTH_CAP:
        raise ValueError(f"width {width} exceeds exact-diagonalization cap {EXACT_WIDTH_CAP}")
    seed = cfg.seed if seed is None else seed
    t0 = time.perf_counter_ns()
    c = concat(neel_prep(width), trotter_circuit(h, cfg.trotter))
    ref = exact_evolution_distribution(h, cfg.trotter.time, neel_bits(width))
    test, tt = _execute(c, "0" * width, cfg, seed, noiseless=noiseless)
    out = _Outcome(hellinger_fidelity(test, ref), c, time.perf_counter_ns() - t0, tt.kernel_ns)
    method = MethodId.M2_noiseless if noiseless else MethodId.M2
    return _record(method, h, out, cfg, seed, model, params)


def run_method3(h, width, cfg: BenchConfig, variant: MirrorVariant = MirrorVariant(), seed=None,
                model="custom", params=None) -> BenchRecord:
    _check_width(h, width)
    seed = cfg.seed if seed is None else seed
    t0 = time.perf_counter_ns()
    prep = neel_prep(width)
    block = trotter_circuit(h, cfg.trotter)
    start = neel_bits(width)
    zeros = "0" * width
    kernel = 0
    if variant.kind == "simple":
        c = concat(prep, simple_mirror(block))
        test, tt = _execute(c, zeros, cfg, seed)
        raw = hellinger_fidelity(test, Distribution.point_mass(start))
        kernel = tt.kernel_ns
        method = MethodId.M3_simple
    else:
        n = 1 if variant.kind == "random_pauli" else variant.n_samples
        raws = []
        first = None
        for i in range(n):
            layer = random_pauli_layer(width, derive_seed(seed, "pauli-layer", i))
            mirror_c, resultant = quasi_inverse_mirror(block, layer)
            c = concat(prep, mirror_c)
            if first is None:
                first = c
            run_seed = seed if n == 1 else derive_seed(seed, "pauli-run", i)
            test, tt = _execute(c, zeros, cfg, run_seed)
            raws.append(hellinger_fidelity(test, expected_mirror_distribution(start, resultant)))
            kernel += tt.kernel_ns
        raw = math.fsum(raws) / n
        c = first
        method = MethodId.M3_random_pauli if variant.kind == "random_pauli" else MethodId.M3_multi_random_pauli
    out = _Outcome(raw, c, time.perf_counter_ns() - t0, kernel)
    return _record(method, h, out, cfg, seed, model, params)


def run_cell(h: PauliSum, width: int, method, cfg: BenchConfig, seed: int, model="custom", params=None) -> BenchRecord:
    method = MethodId(method)
    kw = dict(seed=seed, model=model, params=params)
    if method is MethodId.M1:
        return run_method1(h, width, cfg, **kw)
    if method in (MethodId.M2, MethodId.M2_noiseless):
        return run_method2(h, width, cfg, noiseless=method is MethodId.M2_noiseless, **kw)
    if method in M3_VARIANTS:
        kind = M3_VARIANTS[method]
        variant = MirrorVariant(kind, cfg.n_pauli_samples if kind == "multi_random_pauli" else None)
        return run_method3(h, width, cfg, variant, **kw)
    return run_method1_variant(h, width, cfg, M1_VARIANTS[method], **kw)


# -- sweeps --------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    params: dict
    width: int
    method: MethodId
    seed: int

    def key(self, model: str) -> str:
        return record_key(model, self.params, self.width, self.method.value, self.seed)


def plan_cells(cfg: BenchConfig) -> list[Cell]:
    cells = []
    for params in cfg.param_grid():
        for width in cfg.widths:
            # common random numbers: every model, parameter set and method at one
            # width shares a noise stream, so paired comparisons see the same errors
            seed = derive_seed(cfg.seed, "width", width)
            for method in cfg.methods:
                cells.append(Cell(params, width, method, seed))
    return cells


def _run_one(args) -> BenchRecord:
    cfg, cell = args
    try:
        h = build_model(cfg.model, cell.width, cell.params, cfg.seed)
        return run_cell(h, cell.width, cell.method, cfg, cell.seed, cfg.model, cell.params)
    except Exception as exc:  # error rows never abort a sweep
        log.warning("cell %s width=%d %s failed: %s", cell.params, cell.width, cell.method.value, exc)
        return BenchRecord(
            key=cell.key(cfg.model),
            model=cfg.model,
            params=dict(cell.params),
            width=cell.width,
            method=cell.method.value,
            seed=cell.seed,
            shots=cfg.shots,
            timestamp=_now(),
            error=f"{type(exc).__name__}: {exc}",
        )


def read_records(path) -> list[BenchRecord]:
    path = Path(path)
    if not path.exists():
        return []
    out = []
    with path.open(encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            try:
                out.append(BenchRecord.from_dict(json.loads(line)))
            except json.JSONDecodeError:
                # a torn final line from an interrupted writer
                log.warning("skipping unparsable line in %s", path)
    return out


def _trim_torn_tail(path: Path) -> None:
    """Drop a partial last line left by an interrupted writer so appends start clean."""
    if not path.exists():
        return
    data = path.read_bytes()
    if data and not data.endswith(b"\n"):
        cut = data.rfind(b"\n") + 1
        log.warning("dropping %d bytes of torn output at end of %s", len(data) - cut, path)
        with path.open("r+b") as f:
            f.truncate(cut)


def _append(path: Path, rec: BenchRecord) -> None:
    with path.open("a", encoding="utf-8") as f:
        f.write(rec.to_json() + "\n")
        f.flush()
        os.fsync(f.fileno())


def sweep(cfg: BenchConfig, out=None, workers: int = 1, progress=None) -> list[BenchRecord]:
    """Run every (params, width, method) cell; completed rows are appended to ``out``.

    Rows already present in ``out`` (matched by key, errors excluded) are not rerun.
    Returns the records for all planned cells, in plan order.
    """
    cells = plan_cells(cfg)
    done: dict[str, BenchRecord] = {}
    path = Path(out) if out is not None else None
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        _trim_torn_tail(path)
        done = {r.key: r for r in read_records(path) if r.error is None}
    todo = [c for c in cells if c.key(cfg.model) not in done]
    if len(todo) < len(cells):
        log.info("resuming: %d of %d cells already complete", len(cells) - len(todo), len(cells))
    if workers > 1 and len(todo) > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_run_one, [(cfg, c) for c in todo])
    else:
        pool = None
        results = map(_run_one, [(cfg, c) for c in todo])
    try:
        for rec in results:
            if path is not None:
                _append(path, rec)
            done[rec.key] = rec
            if progress is not None:
                progress(rec)
    finally:
        if pool is not None:
            pool.shutdown()
    return [done[c.key(cfg.model)] for c in cells]


def aggregate(records: Iterable[BenchRecord], value: str = "rescaled_fidelity"):
    """(method, width) -> (min, mean, max) of ``value`` over the non-error rows."""
    groups: dict[tuple[str, int], list[float]] = {}
    for r in records:
        v = getattr(r, value)
        if r.error is None and v is not None:
            groups.setdefault((r.method, r.width), []).append(float(v))
    return {
        k: (min(vs), math.fsum(vs) / len(vs), max(vs)) for k, vs in sorted(groups.items())
    }


# -- timing --------------------------------------------------------------------

@dataclass
class TimingRow:
    width: int
    elapsed_ns: int
    kernel_ns: int
    gate_count: int


def timing_study(
    model: str = "tfim",
    widths: Sequence[int] = tuple(range(4, 23, 2)),
    shots: int = 10_000,
    backend: str = "ideal",
    params: dict | None = None,
    trotter: TrotterConfig = TrotterConfig(),
    noise: NoiseModel = NoiseModel(),
    seed: int = 0,
    repeats: int = 1,
    cap: int = DEFAULT_WIDTH_CAP,
    out=None,
) -> list[TimingRow]:
    """Elapsed and kernel time of Method-1-style executions per width.

    With ``repeats > 1`` the fastest repetition is kept.
    """
    if backend not in ("ideal", "noisy"):
        raise ValueError(f"unknown backend {backend!r}")
    kept = [w for w in widths if w <= cap]
    if len(kept) < len(widths):
        log.warning("truncating timing widths above cap %d: %s", cap, [w for w in widths if w > cap])
    rows = []
    for w in kept:
        h = build_model(model, w, params or {}, seed)
        best = None
        for rep in range(repeats):
            t0 = time.perf_counter_ns()
            c = concat(neel_prep(w), trotter_circuit(h, trotter))
            run_seed = derive_seed(seed, "timing", w, rep)
            if backend == "ideal":
                state, timing = run_ideal(c, "0" * w, cap)
                k0 = time.perf_counter_ns()
                sample(state, shots, run_seed, noise.p_ro)
                kernel = timing.kernel_ns + time.perf_counter_ns() - k0
            else:
                _, timing = run_noisy(c, "0" * w, noise, shots, run_seed, cap)
                kernel = timing.kernel_ns
            row = TimingRow(w, time.perf_counter_ns() - t0, kernel, len(c))
            if best is None or row.kernel_ns < best.kernel_ns:
                best = row
        log.info("timing width=%d kernel=%.3fs", w, best.kernel_ns / 1e9)
        rows.append(best)
    if out is not None:
        write_timing(rows, out)
    return rows


def write_timing(rows: Sequence[TimingRow], path) -> None:
    import csv

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["width", "elapsed_ns", "kernel_ns", "gate_count"])
        for r in rows:
            w.writerow([r.width, r.elapsed_ns, r.kernel_ns, r.gate_count])
