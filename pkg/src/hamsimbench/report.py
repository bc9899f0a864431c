"""CSV export and hand-written SVG charts for benchmark records and timing series."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Mapping, Sequence

from .metrics import crossover_width
from .runner import FIELD_NAMES, BenchRecord, aggregate, read_records

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=80, right=170, top=50, bottom=60)
PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


# -- CSV -----------------------------------------------------------------------

def write_csv(records: Sequence[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=FIELD_NAMES)
        w.writeheader()
        for r in records:
            row = r.__dict__.copy()
            row["params"] = json.dumps(r.params, sort_keys=True)
            w.writerow({k: "" if v is None else v for k, v in row.items()})


_INT_FIELDS = {"width", "seed", "layered_depth", "gate_count", "two_qubit_count", "elapsed_ns", "kernel_ns", "shots"}
_FLOAT_FIELDS = {"raw_fidelity", "polarization_fidelity", "rescaled_fidelity", "rescaled_polarization_fidelity"}


def read_csv(path) -> list[BenchRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            d: dict = {}
            for k, v in row.items():
                if v == "":
                    d[k] = None
                elif k in _INT_FIELDS:
                    d[k] = int(v)
                elif k in _FLOAT_FIELDS:
                    d[k] = float(v)
                elif k == "params":
                    d[k] = json.loads(v)
                else:
                    d[k] = v
            out.append(BenchRecord.from_dict(d))
    return out


def read_series(path, field: str = "kernel_ns") -> dict[int, float]:
    """Width -> seconds from a timing CSV (``*_ns`` columns) or a ``width,seconds`` CSV."""
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"{path}: empty series")
    if "seconds" in rows[0]:
        return {int(r["width"]): float(r["seconds"]) for r in rows}
    return {int(r["width"]): float(r[field]) / 1e9 for r in rows}


# -- SVG primitives --------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Axes:
    def __init__(self, xs, ys, log_y=False):
        self.log_y = log_y
        self.x0, self.x1 = min(xs), max(xs)
        if self.x0 == self.x1:
            self.x0, self.x1 = self.x0 - 1, self.x1 + 1
        ys = [math.log10(y) for y in ys] if log_y else list(ys)
        lo, hi = min(ys), max(ys)
        if log_y:
            lo, hi = math.floor(lo), math.ceil(hi)
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        self.y0, self.y1 = lo, hi
        self.left, self.top = MARGIN["left"], MARGIN["top"]
        self.w = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        return self.left + (x - self.x0) / (self.x1 - self.x0) * self.w

    def py(self, y):
        if self.log_y:
            y = math.log10(y)
        return self.top + (1 - (y - self.y0) / (self.y1 - self.y0)) * self.h

    def frame(self, title, xlabel, ylabel, xticks) -> list[str]:
        out = [
            f'<rect x="{self.left}" y="{self.top}" width="{self.w}" height="{self.h}" '
            'fill="none" stroke="#333"/>',
            f'<text x="{WIDTH / 2 - MARGIN["right"] / 2}" y="28" text-anchor="middle" '
            f'font-size="18">{_esc(title)}</text>',
            f'<text x="{self.left + self.w / 2}" y="{HEIGHT - 15}" text-anchor="middle" '
            f'font-size="14">{_esc(xlabel)}</text>',
            f'<text x="20" y="{self.top + self.h / 2}" text-anchor="middle" font-size="14" '
            f'transform="rotate(-90 20 {self.top + self.h / 2})">{_esc(ylabel)}</text>',
        ]
        for x in xticks:
            out.append(
                f'<text x="{_fmt(self.px(x))}" y="{self.top + self.h + 20}" '
                f'text-anchor="middle" font-size="12">{x}</text>'
            )
        if self.log_y:
            yt = [(10.0**e, f"1e{e}") for e in range(int(self.y0), int(self.y1) + 1)]
        else:
            step = (self.y1 - self.y0) / 5
            yt = [(self.y0 + i * step, f"{self.y0 + i * step:.3g}") for i in range(6)]
        for y, label in yt:
            out.append(
                f'<line x1="{self.left}" x2="{self.left + self.w}" y1="{_fmt(self.py(y))}" '
                f'y2="{_fmt(self.py(y))}" stroke="#ddd"/>'
            )
            out.append(
                f'<text x="{self.left - 8}" y="{_fmt(self.py(y) + 4)}" text-anchor="end" '
                f'font-size="12">{label}</text>'
            )
        return out


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def _legend(names: Sequence[str]) -> list[str]:
    out = []
    x = WIDTH - MARGIN["right"] + 15
    for i, name in enumerate(names):
        y = MARGIN["top"] + 10 + 20 * i
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<line x1="{x}" x2="{x + 20}" y1="{y}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{x + 26}" y="{y + 4}" font-size="12">{_esc(name)}</text>')
    return out


def band_chart(
    series: Mapping[str, Sequence[tuple[int, float, float, float]]],
    title: str,
    ylabel: str,
    xlabel: str = "circuit width (qubits)",
    y_range: tuple[float, float] | None = None,
) -> str:
    """Mean lines with a shaded min..max band; ``series`` maps name -> [(x, lo, mean, hi)]."""
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [v for pts in series.values() for p in pts for v in p[1:]]
    if not xs:
        raise ValueError("nothing to plot")
    if y_range is not None:
        ys = [*ys, *y_range]
    ax = _Axes(xs, ys)
    body = ax.frame(title, xlabel, ylabel, sorted(set(xs)))
    for i, (name, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = sorted(pts)
        upper = [f"{_fmt(ax.px(x))},{_fmt(ax.py(hi))}" for x, _, _, hi in pts]
        lower = [f"{_fmt(ax.px(x))},{_fmt(ax.py(lo))}" for x, lo, _, _ in reversed(pts)]
        if any(lo != hi for _, lo, _, hi in pts):
            body.append(
                f'<polygon points="{" ".join(upper + lower)}" fill="{color}" '
                'fill-opacity="0.2" stroke="none"/>'
            )
        line = " ".join(f"{_fmt(ax.px(x))},{_fmt(ax.py(m))}" for x, _, m, _ in pts)
        body.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, _, m, _ in pts:
            body.append(f'<circle cx="{_fmt(ax.px(x))}" cy="{_fmt(ax.py(m))}" r="3" fill="{color}"/>')
    body += _legend(list(series))
    return _document(body)


def timing_chart(series: Mapping[str, Mapping[int, float]], title: str = "execution time vs width",
                 crossover: int | None = None) -> str:
    """Log-scale time axis; ``crossover`` draws a marked vertical line."""
    xs = [w for s in series.values() for w in s]
    ys = [v for s in series.values() for v in s.values() if v > 0]
    ax = _Axes(xs, ys, log_y=True)
    body = ax.frame(title, "circuit width (qubits)", "time (s)", sorted(set(xs)))
    for i, (name, s) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = [(w, v) for w, v in sorted(s.items()) if v > 0]
        line = " ".join(f"{_fmt(ax.px(w))},{_fmt(ax.py(v))}" for w, v in pts)
        body.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="2"/>')
    if crossover is not None:
        x = _fmt(ax.px(crossover))
        body.append(
            f'<line x1="{x}" x2="{x}" y1="{ax.top}" y2="{ax.top + ax.h}" stroke="red" '
            'stroke-dasharray="6,4" stroke-width="2"/>'
        )
        body.append(f'<text x="{x}" y="{ax.top - 6}" text-anchor="middle" fill="red" '
                    f'font-size="12">crossover {crossover}</text>')
    body += _legend(list(series))
    return _document(body)


# -- record reports ----------------------------------------------------------------

def _series(records, value):
    agg = aggregate(records, value)
    series: dict[str, list] = {}
    for (method, width), (lo, mean, hi) in agg.items():
        series.setdefault(method, []).append((width, lo, mean, hi))
    return series


def fidelity_svg(records, value: str = "rescaled_fidelity") -> str:
    return band_chart(_series(records, value), f"{value.replace('_', ' ')} vs width",
                      "fidelity", y_range=(0.0, 1.0))


def depth_svg(records) -> str:
    return band_chart(_series(records, "layered_depth"), "layered depth vs width", "layered depth")


def report(records_path, csv_path=None, svg_prefix=None, value: str = "rescaled_fidelity") -> list[Path]:
    records = [r for r in read_records(records_path) if r.error is None]
    if not records:
        raise ValueError(f"{records_path}: no successful records")
    written = []
    if csv_path is not None:
        write_csv(records, csv_path)
        written.append(Path(csv_path))
    if svg_prefix is not None:
        prefix = Path(svg_prefix)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        for suffix, text in (("fidelity", fidelity_svg(records, value)), ("depth", depth_svg(records))):
            p = prefix.with_name(f"{prefix.name}_{suffix}.svg")
            p.write_text(text, encoding="utf-8")
            written.append(p)
    return written


def crossover_report(a: Mapping[int, float], b: Mapping[int, float], names=("a", "b")) -> tuple[int | None, str]:
    w = crossover_width(a, b)
    return w, timing_chart({names[0]: a, names[1]: b}, crossover=w)
