"""Generators for the benchmark Hamiltonian families."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .pauli import PauliString, PauliSum


class BoundaryCondition(str, enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"


def _bc(bc) -> BoundaryCondition:
    return BoundaryCondition(bc.value if isinstance(bc, BoundaryCondition) else bc)


def chain_edges(n: int, bc) -> list[tuple[int, int]]:
    edges = [(i, i + 1) for i in range(n - 1)]
    if _bc(bc) is BoundaryCondition.PERIODIC:
        edges.append((n - 1, 0))
    return edges


def tfim(n: int, h: float, bc=BoundaryCondition.OPEN) -> PauliSum:
    """Transverse-field Ising chain: ``sum_i h X_i + sum_<ij> Z_i Z_j``."""
    if n < 2:
        raise ValueError("tfim needs n >= 2")
    terms = [(h, PauliString.from_sparse(n, {i: "X"})) for i in range(n)]
    terms += [(1.0, PauliString.from_sparse(n, {i: "Z", j: "Z"})) for i, j in chain_edges(n, bc)]
    return PauliSum.from_terms(n, terms)


def heisenberg(n: int, h: float, bc=BoundaryCondition.OPEN) -> PauliSum:
    """Antiferromagnetic XXX chain with a longitudinal field ``h Z_i``."""
    if n < 2:
        raise ValueError("heisenberg needs n >= 2")
    terms = []
    for i, j in chain_edges(n, bc):
        for a in "XYZ":
            terms.append((1.0, PauliString.from_sparse(n, {i: a, j: a})))
    terms += [(h, PauliString.from_sparse(n, {i: "Z"})) for i in range(n)]
    return PauliSum.from_terms(n, terms)


@dataclass(frozen=True)
class Max3SatInstance:
    n_vars: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]
    seed: int | None

    def __post_init__(self):
        for clause in self.clauses:
            vs = [v for v, _ in clause]
            if len(clause) != 3 or len(set(vs)) != 3 or any(not 0 <= v < self.n_vars for v in vs):
                raise ValueError(f"invalid clause {clause}")


def clause_terms(n: int, clause) -> list[tuple[float, PauliString]]:
    """Expand ``I - 1/8 prod_k (I +/- Z_k)`` into all-Z Pauli terms."""
    terms = [(1.0, PauliString.identity(n))]
    for size in range(4):
        for subset in combinations(clause, size):
            sign = 1.0
            for _, negated in subset:
                if negated:
                    sign = -sign
            string = PauliString.from_sparse(n, {v: "Z" for v, _ in subset})
            terms.append((-sign / 8.0, string))
    return terms


def max3sat_hamiltonian(instance: Max3SatInstance) -> PauliSum:
    n = instance.n_vars
    terms = []
    for clause in instance.clauses:
        terms += clause_terms(n, clause)
    return PauliSum.from_terms(n, terms)


def max3sat(n: int, clause_ratio: float, seed=None) -> tuple[PauliSum, Max3SatInstance]:
    """Random 3-SAT with ``round(r * n)`` clauses; clauses may repeat, variables within one may not."""
    if n < 3:
        raise ValueError("max3sat needs n >= 3")
    if not clause_ratio > 0:
        raise ValueError("clause ratio must be > 0")
    rng = np.random.default_rng(seed)
    m = int(round(clause_ratio * n))
    clauses = []
    for _ in range(m):
        vs = rng.choice(n, size=3, replace=False)
        neg = rng.integers(0, 2, size=3)
        clauses.append(tuple((int(v), bool(b)) for v, b in zip(vs, neg)))
    instance = Max3SatInstance(n, tuple(clauses), seed)
    return max3sat_hamiltonian(instance), instance


def _jw_hopping(width: int, p: int, q: int) -> list[tuple[float, PauliString]]:
    # c_p^dag c_q + h.c. = 1/2 (X_p Z..Z X_q + Y_p Z..Z Y_q) for p < q
    p, q = min(p, q), max(p, q)
    between = {k: "Z" for k in range(p + 1, q)}
    return [
        (0.5, PauliString.from_sparse(width, {p: a, **between, q: a}))
        for a in "XY"
    ]


def fermi_hubbard_1d_jw(n_sites: int, t: float, U: float, bc=BoundaryCondition.OPEN) -> PauliSum:
    """1D Fermi-Hubbard chain under Jordan-Wigner.

    Qubit ``2i`` holds (site i, up) and ``2i + 1`` holds (site i, down).
    """
    if n_sites < 2:
        raise ValueError("fermi_hubbard_1d_jw needs n_sites >= 2")
    width = 2 * n_sites
    terms = []
    for i, j in chain_edges(n_sites, bc):
        for spin in (0, 1):
            terms += [(-t * c, s) for c, s in _jw_hopping(width, 2 * i + spin, 2 * j + spin)]
    for i in range(n_sites):
        up, dn = 2 * i, 2 * i + 1
        terms += [
            (U / 4, PauliString.identity(width)),
            (-U / 4, PauliString.from_sparse(width, {up: "Z"})),
            (-U / 4, PauliString.from_sparse(width, {dn: "Z"})),
            (U / 4, PauliString.from_sparse(width, {up: "Z", dn: "Z"})),
        ]
    return PauliSum.from_terms(width, terms)
