"""Kernel and elapsed time vs width for TFIM, with the crossover against a fixed device time.

The constant series stands in for a hardware backend whose per-job time does not
grow with width; the crossover is where simulation becomes the slower option.
"""
import argparse
import math
from pathlib import Path

import numpy as np

from hamsimbench.metrics import crossover_width
from hamsimbench.report import timing_chart
from hamsimbench.runner import timing_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-width", type=int, default=22)
    ap.add_argument("--shots", type=int, default=10_000)
    ap.add_argument("--device-seconds", type=float, default=2.0)
    ap.add_argument("--backend", choices=["ideal", "noisy"], default="ideal")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = timing_study("tfim", tuple(range(4, args.max_width + 1, 2)), args.shots, args.backend,
                        repeats=2, out=out / "timing.csv")
    kernel = {r.width: r.kernel_ns / 1e9 for r in rows}
    elapsed = {r.width: r.elapsed_ns / 1e9 for r in rows}
    device = {w: args.device_seconds for w in kernel}
    for r in rows:
        print(f"w={r.width:2d} gates={r.gate_count:5d} kernel={kernel[r.width]:9.4f}s elapsed={elapsed[r.width]:9.4f}s")
    top = rows[-6:]
    slope = np.polyfit([r.width for r in top], [math.log2(r.kernel_ns) for r in top], 1)[0]
    cross = crossover_width(kernel, device)
    print(f"log2(kernel) slope over top widths: {slope:.2f} per qubit")
    print(f"crossover against constant {args.device_seconds}s: {cross}")
    svg = timing_chart({"kernel": kernel, "elapsed": elapsed, "device": device}, crossover=cross)
    (out / "timing.svg").write_text(svg, encoding="utf-8")


if __name__ == "__main__":
    main()
