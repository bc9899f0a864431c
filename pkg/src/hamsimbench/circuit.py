"""Gate-level circuit IR over a fixed gate set, inversion and depth metrics.

Rotations follow R_A(theta) = exp(-i theta A / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

ONE_QUBIT_KINDS = frozenset({"H", "X", "Y", "Z", "S", "Sdg", "RX", "RY", "RZ"})
ROTATION_KINDS = frozenset({"RX", "RY", "RZ"})
GATE_KINDS = ONE_QUBIT_KINDS | {"CX"}

_INVERSE_KIND = {"S": "Sdg", "Sdg": "S"}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind == "CX" else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError("CX needs two distinct qubits")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        if self.kind in ROTATION_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def axis(self) -> str | None:
        return self.kind[1] if self.kind in ROTATION_KINDS else None

    def inverse(self) -> Gate:
        if self.kind in ROTATION_KINDS:
            return Gate(self.kind, self.qubits, -self.angle)
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.qubits)

    def to_text(self) -> str:
        qs = ",".join(str(q) for q in self.qubits)
        return f"{self.kind} {qs}" if self.angle is None else f"{self.kind} {qs} {self.angle!r}"

    @classmethod
    def from_text(cls, line: str) -> Gate:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"bad gate line {line!r}")
        qubits = tuple(int(q) for q in parts[1].split(","))
        angle = float(parts[2]) if len(parts) == 3 else None
        return cls(parts[0], qubits, angle)


# convenience constructors
def h(q): return Gate("H", (q,))
def x(q): return Gate("X", (q,))
def y(q): return Gate("Y", (q,))
def z(q): return Gate("Z", (q,))
def s(q): return Gate("S", (q,))
def sdg(q): return Gate("Sdg", (q,))
def rx(theta, q): return Gate("RX", (q,), theta)
def ry(theta, q): return Gate("RY", (q,), theta)
def rz(theta, q): return Gate("RZ", (q,), theta)
def cx(c, t): return Gate("CX", (c, t))


@dataclass(frozen=True)
class DepthMetrics:
    layered_depth: int
    gate_count: int
    two_qubit_count: int


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("circuit width must be >= 1")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.width for q in g.qubits):
                raise ValueError(f"gate {g.to_text()} exceeds width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def to_text(self) -> str:
        return "\n".join(g.to_text() for g in self.gates)

    @classmethod
    def from_text(cls, width: int, text: str, label: str = "") -> Circuit:
        gates = [Gate.from_text(ln) for ln in text.splitlines() if ln.strip()]
        return cls(width, tuple(gates), label)


def invert(c: Circuit) -> Circuit:
    return Circuit(c.width, tuple(g.inverse() for g in reversed(c.gates)), c.label + "^-1")


def concat(a: Circuit, b: Circuit) -> Circuit:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    label = "+".join(lb for lb in (a.label, b.label) if lb)
    return Circuit(a.width, a.gates + b.gates, label)


def depth_metrics(c: Circuit) -> DepthMetrics:
    """Greedy left-aligned layering: each gate lands one layer after its busiest qubit."""
    frontier = [0] * c.width
    for g in c.gates:
        layer = max(frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            frontier[q] = layer
    return DepthMetrics(
        layered_depth=max(frontier, default=0),
        gate_count=len(c.gates),
        two_qubit_count=sum(1 for g in c.gates if g.kind == "CX"),
    )
