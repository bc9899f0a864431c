"""Distribution fidelities, polarization normalization and timing crossovers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .simulator import Distribution


@dataclass(frozen=True)
class FidelityValue:
    raw: float
    polarization: float
    width: int

    @classmethod
    def of(cls, raw: float, width: int) -> FidelityValue:
        return cls(raw, polarization(raw, width), width)


def hellinger_fidelity(p: Distribution, q: Distribution) -> float:
    """``(sum_x sqrt(p(x) q(x)))**2`` over normalized frequencies; missing keys count as 0."""
    if p.width != q.width:
        raise ValueError(f"width mismatch: {p.width} vs {q.width}")
    if not p.entries or not q.entries:
        raise ValueError("empty distribution")
    pp, qq = p.probabilities(), q.probabilities()
    if len(qq) < len(pp):
        pp, qq = qq, pp
    bc = math.fsum(math.sqrt(v * qq[b]) for b, v in pp.items() if b in qq)
    return min(1.0, bc * bc)


def polarization(raw: float, width: int) -> float:
    """Rescale so the uniform-distribution baseline ``1/2**width`` maps to 0."""
    baseline = 2.0**-width
    return max(0.0, (raw - baseline) / (1.0 - baseline))


def mirror_rescale(f: float) -> float:
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity {f} outside [0, 1]")
    return math.sqrt(f)


def crossover_width(a: Mapping[int, float], b: Mapping[int, float]) -> int | None:
    """Smallest width where series ``a`` rises above ``b``.

    If ``a`` is already above ``b`` at the first shared width, that width is returned.
    """
    grid = sorted(set(a) & set(b))
    if len(grid) < 2:
        raise ValueError("need at least 2 shared widths")
    prev_above = False
    for w in grid:
        above = a[w] > b[w]
        if above and not prev_above:
            return w
        prev_above = above
    return None
