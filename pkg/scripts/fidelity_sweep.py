"""Fidelity vs width for TFIM and Heisenberg, open and periodic, across all base methods.

Writes results/<model>.jsonl plus CSV and SVG reports next to it.
"""
import argparse
import logging
from pathlib import Path

from hamsimbench.report import report
from hamsimbench.runner import BenchConfig, MethodId, aggregate, sweep
from hamsimbench.trotter import TrotterConfig

METHODS = (MethodId.M1, MethodId.M2, MethodId.M2_noiseless, MethodId.M3_simple,
           MethodId.M3_random_pauli)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--widths", type=int, nargs="+", default=[2, 4, 6, 8, 10])
    ap.add_argument("--shots", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    out = Path(args.out)
    for model in ("tfim", "heisenberg"):
        cfg = BenchConfig(
            model=model,
            model_params={"h": [0.5, 1.0, 2.0], "pbc": [False, True]},
            widths=tuple(args.widths),
            trotter=TrotterConfig(1.0, 5),
            shots=args.shots,
            methods=METHODS,
            seed=args.seed,
        )
        path = out / f"{model}.jsonl"
        recs = sweep(cfg, path, workers=args.workers)
        print(f"\n{model}: mean rescaled fidelity (min..max over h and boundary)")
        for (method, width), (lo, mean, hi) in aggregate(recs).items():
            print(f"  {method:18s} w={width:2d} {mean:.3f} ({lo:.3f}..{hi:.3f})")
        for p in report(path, out / f"{model}.csv", out / model):
            print("wrote", p)


if __name__ == "__main__":
    main()
