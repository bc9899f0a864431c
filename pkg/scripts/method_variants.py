"""Compare Method 1, its inverse and K=10 square-root variants, and the three mirror variants.

Shows how closely each square-root normalized estimate tracks plain Method 1 under
the default noise model. All methods at a width share one seed.
"""
import argparse

from hamsimbench.runner import BenchConfig, MethodId, sweep

METHODS = (
    MethodId.M1, MethodId.M1_inverse, MethodId.M1_K10_sqrt, MethodId.M1_K10_inverse_sqrt,
    MethodId.M1_K10_t1e9_sqrt, MethodId.M3_simple, MethodId.M3_random_pauli,
    MethodId.M3_multi_random_pauli,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="tfim")
    ap.add_argument("--widths", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--shots", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="results/variants.jsonl")
    args = ap.parse_args()
    cfg = BenchConfig(model=args.model, model_params={"h": [1.0]}, widths=tuple(args.widths),
                      shots=args.shots, methods=METHODS, seed=args.seed)
    recs = sweep(cfg, args.out)
    table = {(r.method, r.width): r for r in recs}
    print(f"{'method':22s}" + "".join(f"   w={w:<2d} raw / resc" for w in cfg.widths))
    for m in METHODS:
        cells = [table[(m.value, w)] for w in cfg.widths]
        print(f"{m.value:22s}" + "".join(f"   {r.raw_fidelity:.3f} / {r.rescaled_fidelity:.3f}" for r in cells))
    print("\nsqrt-rescaled minus M1 raw:")
    for m in METHODS[2:]:
        gaps = [table[(m.value, w)].rescaled_fidelity - table[("M1", w)].raw_fidelity for w in cfg.widths]
        print(f"  {m.value:22s}" + " ".join(f"{g:+.3f}" for g in gaps))


if __name__ == "__main__":
    main()
