"""Command-line interface: ``run``, ``report``, ``timing``, ``crossover``.

Exit codes: 0 success, 1 usage error, 2 runtime failure (partial results kept).
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import report as rep
from .runner import BenchConfig, MethodId, sweep, timing_study
from .simulator import DEFAULT_WIDTH_CAP, NoiseModel
from .trotter import TrotterConfig

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def parse_widths(text: str) -> list[int]:
    """``a:b:step`` (inclusive), ``a:b`` or a comma list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            a, b = parts[:2]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise ValueError
            widths = list(range(a, b + 1, step))
        else:
            widths = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"bad width spec {text!r}; use a:b:step or a comma list") from None
    if not widths or min(widths) < 1:
        raise UsageError(f"bad width spec {text!r}")
    return widths


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _methods(text: str) -> list[MethodId]:
    try:
        return [MethodId(m.strip()) for m in text.split(",") if m.strip()]
    except ValueError as exc:
        raise UsageError(f"{exc}; choose from {', '.join(m.value for m in MethodId)}") from None


def _model_params(args) -> dict[str, list]:
    params: dict[str, list] = {"pbc": [True] if args.pbc else [False]}
    if args.model in ("tfim", "heisenberg"):
        params["h"] = _floats(args.h)
    elif args.model == "max3sat":
        params["ratio"] = _floats(args.ratio)
    elif args.model == "fh1d":
        params["t_hop"] = _floats(args.t_hop)
        params["U"] = _floats(args.U)
    elif args.model.startswith("file:"):
        params = {}
    else:
        raise UsageError(f"unknown model {args.model!r}")
    return params


def _run_config(args) -> BenchConfig:
    return BenchConfig(
        model=args.model,
        model_params=_model_params(args),
        widths=tuple(parse_widths(args.widths)),
        trotter=TrotterConfig(args.time, args.steps),
        shots=args.shots,
        noise=NoiseModel(args.noise_p1, args.noise_p2, args.noise_ro),
        methods=tuple(_methods(args.methods)),
        seed=args.seed,
        n_pauli_samples=args.pauli_samples,
        width_cap=args.width_cap,
    )


def _print_record(r) -> None:
    if r.error:
        print(f"width={r.width:3d} {r.method:22s} ERROR {r.error}", file=sys.stderr)
    else:
        print(f"width={r.width:3d} {r.method:22s} raw={r.raw_fidelity:.4f} "
              f"pol={r.polarization_fidelity:.4f} rescaled={r.rescaled_fidelity:.4f} "
              f"depth={r.layered_depth}")


def cmd_run(args) -> int:
    try:
        cfg = _run_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = sweep(cfg, args.out, workers=args.workers, progress=None if args.quiet else _print_record)
    return EXIT_RUNTIME if any(r.error for r in records) else EXIT_OK


def cmd_report(args) -> int:
    if args.csv is None and args.svg is None:
        raise UsageError("report needs --csv and/or --svg")
    for p in rep.report(args.input, args.csv, args.svg, args.value):
        print(p)
    return EXIT_OK


def cmd_timing(args) -> int:
    params = {"pbc": True} if args.pbc else {}
    rows = timing_study(
        args.model, parse_widths(args.widths), args.shots, args.backend, params=params,
        trotter=TrotterConfig(args.time, args.steps), seed=args.seed, repeats=args.repeats,
        cap=args.width_cap, out=args.out,
    )
    for r in rows:
        print(f"width={r.width:3d} elapsed={r.elapsed_ns / 1e9:.4f}s kernel={r.kernel_ns / 1e9:.4f}s")
    if args.svg:
        series = {"elapsed": {r.width: r.elapsed_ns / 1e9 for r in rows},
                  "kernel": {r.width: r.kernel_ns / 1e9 for r in rows}}
        with open(args.svg, "w", encoding="utf-8") as f:
            f.write(rep.timing_chart(series))
    return EXIT_OK


def cmd_crossover(args) -> int:
    a = rep.read_series(args.a, args.field)
    b = rep.read_series(args.b, args.field)
    w, svg = rep.crossover_report(a, b, (args.a, args.b))
    print("none" if w is None else w)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as f:
            f.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamsim-bench", description="Trotterized Hamiltonian simulation benchmarks")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a fidelity sweep")
    run.add_argument("--model", default="tfim", help="tfim|heisenberg|max3sat|fh1d|file:<path>")
    run.add_argument("--h", default="1.0", help="field strength(s), comma list")
    run.add_argument("--pbc", action="store_true", help="periodic boundary conditions")
    run.add_argument("--ratio", default="2.0", help="max3sat clause ratio(s), comma list")
    run.add_argument("--t-hop", default="1.0", help="fh1d hopping, comma list")
    run.add_argument("--U", default="4.0", help="fh1d on-site interaction, comma list")
    run.add_argument("--widths", default="2:10:2")
    run.add_argument("--methods", default="M1,M2,M2_noiseless,M3_simple")
    run.add_argument("--steps", type=int, default=5)
    run.add_argument("--time", type=float, default=1.0)
    run.add_argument("--shots", type=int, default=1000)
    run.add_argument("--noise-p1", type=float, default=NoiseModel.p1)
    run.add_argument("--noise-p2", type=float, default=NoiseModel.p2)
    run.add_argument("--noise-ro", type=float, default=NoiseModel.p_ro)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--pauli-samples", type=int, default=10)
    run.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--out", default="results.jsonl")
    run.add_argument("--quiet", action="store_true")
    run.set_defaults(func=cmd_run)

    rp = sub.add_parser("report", help="CSV and SVG charts from a records file")
    rp.add_argument("--in", dest="input", required=True)
    rp.add_argument("--csv")
    rp.add_argument("--svg", help="output prefix; writes <prefix>_fidelity.svg and <prefix>_depth.svg")
    rp.add_argument("--value", default="rescaled_fidelity",
                    choices=["raw_fidelity", "polarization_fidelity", "rescaled_fidelity",
                             "rescaled_polarization_fidelity"])
    rp.set_defaults(func=cmd_report)

    tm = sub.add_parser("timing", help="elapsed/kernel time vs width")
    tm.add_argument("--model", default="tfim")
    tm.add_argument("--pbc", action="store_true")
    tm.add_argument("--widths", default="4:22:2")
    tm.add_argument("--shots", type=int, default=10_000)
    tm.add_argument("--backend", choices=["ideal", "noisy"], default="ideal")
    tm.add_argument("--steps", type=int, default=5)
    tm.add_argument("--time", type=float, default=1.0)
    tm.add_argument("--seed", type=int, default=0)
    tm.add_argument("--repeats", type=int, default=1)
    tm.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    tm.add_argument("--out", default="timing.csv")
    tm.add_argument("--svg")
    tm.set_defaults(func=cmd_timing)

    co = sub.add_parser("crossover", help="first width where series A exceeds series B")
    co.add_argument("--a", required=True, help="timing CSV or width,seconds CSV")
    co.add_argument("--b", required=True)
    co.add_argument("--field", default="kernel_ns", choices=["kernel_ns", "elapsed_ns"])
    co.add_argument("--svg")
    co.set_defaults(func=cmd_crossover)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hamsim-bench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"hamsim-bench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
