"""Pauli strings, real-weighted Pauli sums and the plain-text Hamiltonian format.

Qubit 0 is always the leftmost letter of a Pauli string.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

LETTERS = "IXYZ"

_SPARSE_FACTOR = re.compile(r"^([XYZ])(\d+)$")
_HEADER = re.compile(r"^qubits:\s*(\d+)\s*$")


class PauliFormatError(ValueError):
    """Raised for malformed Hamiltonian text, with the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class PauliString:
    letters: str

    def __post_init__(self):
        if not self.letters or any(c not in LETTERS for c in self.letters):
            raise ValueError(f"invalid Pauli string {self.letters!r}")

    @property
    def width(self) -> int:
        return len(self.letters)

    @classmethod
    def identity(cls, width: int) -> PauliString:
        return cls("I" * width)

    @classmethod
    def from_sparse(cls, width: int, factors: dict[int, str]) -> PauliString:
        letters = ["I"] * width
        for q, letter in factors.items():
            if not 0 <= q < width:
                raise ValueError(f"qubit index {q} out of range for width {width}")
            letters[q] = letter
        return cls("".join(letters))

    def is_identity(self) -> bool:
        return all(c == "I" for c in self.letters)

    def support(self) -> list[int]:
        return [q for q, c in enumerate(self.letters) if c != "I"]

    def weight(self) -> int:
        return len(self.support())

    def __getitem__(self, q: int) -> str:
        return self.letters[q]

    def __str__(self) -> str:
        return self.letters


@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    string: PauliString

    def __post_init__(self):
        if isinstance(self.coeff, complex):
            raise TypeError("Pauli coefficients must be real")
        if not math.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff!r}")


@dataclass(frozen=True)
class PauliSum:
    width: int
    terms: tuple[PauliTerm, ...] = ()

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be >= 1")
        seen = set()
        for term in self.terms:
            if term.string.width != self.width:
                raise ValueError(
                    f"term {term.string} has width {term.string.width}, expected {self.width}"
                )
            if term.string in seen:
                raise ValueError(f"duplicate Pauli string {term.string}")
            seen.add(term.string)

    @classmethod
    def from_terms(cls, width: int, terms: Iterable[tuple[float, PauliString | str]]) -> PauliSum:
        """Build a canonical sum: duplicates merged in first-seen order, zeros dropped."""
        merged: dict[PauliString, float] = {}
        for coeff, string in terms:
            if isinstance(string, str):
                string = PauliString(string)
            if string.width != width:
                raise ValueError(f"term {string} has width {string.width}, expected {width}")
            merged[string] = merged.get(string, 0.0) + float(coeff)
        return cls(width, tuple(PauliTerm(c, s) for s, c in merged.items() if c != 0.0))

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def non_identity_terms(self) -> list[PauliTerm]:
        return [t for t in self.terms if not t.string.is_identity()]

    def constant(self) -> float:
        return sum(t.coeff for t in self.terms if t.string.is_identity())


def commutes(a: PauliString, b: PauliString) -> bool:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    clashes = sum(1 for x, y in zip(a.letters, b.letters) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


def all_terms_commute(h: PauliSum) -> bool:
    strings = [t.string for t in h.terms]
    return all(
        commutes(strings[i], strings[j])
        for i in range(len(strings))
        for j in range(i + 1, len(strings))
    )


# Heisenberg-picture images g P g^dagger for the 1-qubit Cliffords, with sign.
_CLIFFORD_1Q: dict[str, dict[str, tuple[str, int]]] = {
    "H": {"X": ("Z", 1), "Y": ("Y", -1), "Z": ("X", 1)},
    "S": {"X": ("Y", 1), "Y": ("X", -1), "Z": ("Z", 1)},
    "Sdg": {"X": ("Y", -1), "Y": ("X", 1), "Z": ("Z", 1)},
    "X": {"X": ("X", 1), "Y": ("Y", -1), "Z": ("Z", -1)},
    "Y": {"X": ("X", -1), "Y": ("Y", 1), "Z": ("Z", -1)},
    "Z": {"X": ("X", -1), "Y": ("Y", -1), "Z": ("Z", 1)},
}

CLIFFORD_KINDS = frozenset(_CLIFFORD_1Q) | {"CX"}

_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_FROM_XZ = {v: k for k, v in _TO_XZ.items()}


def conjugate_by_clifford(p: PauliString, gate) -> tuple[PauliString, int]:
    """Return ``(P', s)`` with ``gate . p . gate^dagger == s * P'``."""
    if gate.kind not in CLIFFORD_KINDS:
        raise ValueError(f"{gate.kind} is not a Clifford gate")
    if any(q >= p.width for q in gate.qubits):
        raise ValueError(f"gate {gate} acts outside width {p.width}")
    letters = list(p.letters)
    if gate.kind == "CX":
        c, t = gate.qubits
        xc, zc = _TO_XZ[letters[c]]
        xt, zt = _TO_XZ[letters[t]]
        # Aaronson-Gottesman phase rule for CNOT.
        flip = xc & zt & (xt ^ zc ^ 1)
        letters[c] = _FROM_XZ[(xc, zc ^ zt)]
        letters[t] = _FROM_XZ[(xt ^ xc, zt)]
        return PauliString("".join(letters)), -1 if flip else 1
    (q,) = gate.qubits
    if letters[q] == "I":
        return p, 1
    letters[q], sign = _CLIFFORD_1Q[gate.kind][letters[q]]
    return PauliString("".join(letters)), sign


def _parse_term(fields: list[str], width: int, lineno: int) -> PauliString:
    if len(fields) == 1 and len(fields[0]) == width and all(c in LETTERS for c in fields[0]):
        return PauliString(fields[0])
    factors: dict[int, str] = {}
    for f in fields:
        m = _SPARSE_FACTOR.match(f)
        if m is None:
            if all(c in LETTERS for c in f):
                if len(fields) > 1:
                    raise PauliFormatError("cannot mix dense and sparse factors", lineno)
                raise PauliFormatError(
                    f"dense term {f!r} has length {len(f)}, expected {width}", lineno
                )
            raise PauliFormatError(f"bad Pauli factor {f!r}", lineno)
        letter, q = m.group(1), int(m.group(2))
        if q >= width:
            raise PauliFormatError(f"qubit index {q} >= width {width}", lineno)
        if q in factors:
            raise PauliFormatError(f"qubit {q} listed twice", lineno)
        factors[q] = letter
    return PauliString.from_sparse(width, factors)


def parse_pauli_sum(text: str | TextIO) -> PauliSum:
    if not isinstance(text, str):
        text = text.read()
    width = None
    terms: list[tuple[float, PauliString]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if width is None:
            m = _HEADER.match(line)
            if m is None or int(m.group(1)) < 1:
                raise PauliFormatError("expected header 'qubits: <N>' with N >= 1", lineno)
            width = int(m.group(1))
            continue
        fields = line.split()
        if len(fields) < 2:
            raise PauliFormatError("expected '<coeff> <term>'", lineno)
        try:
            coeff = float(fields[0])
        except ValueError:
            if "j" in fields[0]:
                raise PauliFormatError("complex coefficients are not supported", lineno) from None
            raise PauliFormatError(f"bad coefficient {fields[0]!r}", lineno) from None
        if not math.isfinite(coeff):
            raise PauliFormatError(f"non-finite coefficient {fields[0]!r}", lineno)
        terms.append((coeff, _parse_term(fields[1:], width, lineno)))
    if width is None:
        raise PauliFormatError("missing 'qubits: <N>' header")
    return PauliSum.from_terms(width, terms)


def serialize_pauli_sum(h: PauliSum) -> str:
    lines = [f"qubits: {h.width}"]
    lines += [f"{t.coeff!r} {t.string.letters}" for t in h.terms]
    return "\n".join(lines) + "\n"


def load_pauli_sum(path) -> PauliSum:
    with open(path, encoding="utf-8") as f:
        return parse_pauli_sum(f)
