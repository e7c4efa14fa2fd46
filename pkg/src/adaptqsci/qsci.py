"""Quantum-selected configuration interaction.

One QSCI step turns a frequency table over measured configurations into
a variational energy: keep the most frequent configurations in the
target symmetry sector, project the Hamiltonian onto their span, and
take the lowest eigenpair of that small Hermitian matrix.

Selection is deterministic: candidates are ranked by descending
frequency and ties are broken by ascending configuration integer, so a
rerun on the same table reproduces the same subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .chemistry import symmetry_of
from .pauli import PauliSum, SparseStateVec, apply_term_to_basis

SUBSPACE_DIM_LIMIT = 10_000
SECTOR_DIM_LIMIT = 100_000


@dataclass(frozen=True)
class SelectionPolicy:
    """How to pick the subspace from a frequency table."""

    r_max: int
    n_electrons: int
    sz_doubled: int
    freq_floor: float = 1e-10

    def __post_init__(self) -> None:
        if self.r_max < 1:
            raise ValueError("r_max must be positive")
        if self.r_max > SUBSPACE_DIM_LIMIT:
            raise ValueError(f"r_max exceeds the dense-diagonalization cap {SUBSPACE_DIM_LIMIT}")
        if self.freq_floor < 0:
            raise ValueError("freq_floor must be non-negative")


@dataclass(frozen=True)
class SubspaceSolution:
    """Lowest eigenpair of the Hamiltonian projected on selected configurations."""

    n_qubits: int
    configs: tuple[int, ...]
    projected_h: np.ndarray
    energy: float
    eigvec: np.ndarray
    shots: int = 0

    @property
    def dimension(self) -> int:
        return len(self.configs)

    def as_sparse_state(self) -> SparseStateVec:
        return SparseStateVec(
            self.n_qubits, {cfg: complex(a) for cfg, a in zip(self.configs, self.eigvec)}
        )


def select_subspace(
    frequencies: Mapping[int, float], policy: SelectionPolicy, n_qubits: int
) -> tuple[int, ...]:
    """Most frequent in-sector configurations, at most ``r_max`` of them.

    Entries below ``freq_floor`` (in particular any negative mitigated
    frequencies) are discarded before ranking.
    """
    kept = []
    for cfg, f in frequencies.items():
        if f < policy.freq_floor:
            continue
        if symmetry_of(cfg, n_qubits) != (policy.n_electrons, policy.sz_doubled):
            continue
        kept.append((-f, cfg))
    if not kept:
        raise RuntimeError("selection produced an empty subspace")
    kept.sort()
    return tuple(cfg for _, cfg in kept[: policy.r_max])


def project_hamiltonian(h: PauliSum, configs: Sequence[int]) -> np.ndarray:
    """Dense matrix of ``h`` restricted to the span of ``configs``."""
    if len(set(configs)) != len(configs):
        raise ValueError("duplicate configurations in subspace")
    index = {cfg: i for i, cfg in enumerate(configs)}
    dim = len(configs)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for col, cfg in enumerate(configs):
        for c, t in h.terms:
            cfg2, scal = apply_term_to_basis(t, cfg)
            row = index.get(cfg2)
            if row is not None:
                mat[row, col] += c * scal
    if float(np.max(np.abs(mat - mat.conj().T))) > 1e-8:
        raise ValueError("projected Hamiltonian failed the Hermiticity check")
    return mat


def lowest_eigenpair(mat: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and its eigenvector, with a fixed gauge.

    The gauge makes the largest-magnitude component real positive so the
    eigenvector is reproducible across BLAS builds.
    """
    dim = mat.shape[0]
    if mat.shape != (dim, dim):
        raise ValueError("matrix is not square")
    if dim > SUBSPACE_DIM_LIMIT:
        raise ValueError(f"dimension {dim} exceeds the dense cap {SUBSPACE_DIM_LIMIT}")
    if float(np.max(np.abs(mat - np.conj(mat).T))) > 1e-8:
        raise ValueError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(mat)
    vec = vecs[:, 0]
    pivot = int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    return float(vals[0]), vec * np.conj(phase)


def solve_subspace(
    h: PauliSum, configs: Sequence[int], shots: int = 0
) -> SubspaceSolution:
    mat = project_hamiltonian(h, configs)
    energy, vec = lowest_eigenpair(mat)
    return SubspaceSolution(h.n_qubits, tuple(configs), mat, energy, vec, shots)


def qsci_from_frequencies(
    h: PauliSum,
    frequencies: Mapping[int, float],
    policy: SelectionPolicy,
    shots: int = 0,
) -> SubspaceSolution:
    configs = select_subspace(frequencies, policy, h.n_qubits)
    return solve_subspace(h, configs, shots)


def run_qsci(state, h: PauliSum, policy: SelectionPolicy, n_shots: int, rng) -> SubspaceSolution:
    """Sample a statevector and run one QSCI step on the histogram."""
    from .simulator import sample

    table = sample(state, n_shots, rng)
    return qsci_from_frequencies(h, table.frequencies(), policy, shots=n_shots)


def sector_configurations(n_qubits: int, n_electrons: int, sz_doubled: int) -> tuple[int, ...]:
    """All configurations with the given particle number and spin projection,
    ascending.  Guarded against sectors too large to diagonalize densely."""
    if n_qubits % 2:
        raise ValueError("spin-orbital registers have even size")
    if (n_electrons + sz_doubled) % 2:
        raise ValueError("n_electrons and sz_doubled have mismatched parity")
    n_orb = n_qubits // 2
    n_up = (n_electrons + sz_doubled) // 2
    n_dn = (n_electrons - sz_doubled) // 2
    if min(n_up, n_dn) < 0 or max(n_up, n_dn) > n_orb:
        raise ValueError("sector is empty for this register")
    dim = math.comb(n_orb, n_up) * math.comb(n_orb, n_dn)
    if dim > SECTOR_DIM_LIMIT:
        raise ValueError(f"sector dimension {dim} exceeds the cap {SECTOR_DIM_LIMIT}")
    ups = [sum(1 << (2 * i) for i in c) for c in combinations(range(n_orb), n_up)]
    dns = [sum(1 << (2 * i + 1) for i in c) for c in combinations(range(n_orb), n_dn)]
    return tuple(sorted(u | d for u in ups for d in dns))


def sector_ground_state(
    h: PauliSum, n_electrons: int, sz_doubled: int
) -> tuple[float, SparseStateVec]:
    """Full diagonalization within one symmetry sector.

    This is the oracle the sampled pipeline is judged against; it never
    touches the samplers.
    """
    configs = sector_configurations(h.n_qubits, n_electrons, sz_doubled)
    sol = solve_subspace(h, configs)
    entries = {cfg: complex(a) for cfg, a in zip(sol.configs, sol.eigvec)}
    return sol.energy, SparseStateVec(h.n_qubits, entries)


def exact_ground_state(system) -> tuple[float, SparseStateVec]:
    """Sector oracle for a molecular system (its own electron count and S_z)."""
    return sector_ground_state(system.hamiltonian, system.n_electrons, system.sz_doubled)


def amplitude_spectrum(state: SparseStateVec) -> tuple[tuple[float, int], ...]:
    """Squared amplitudes in descending order, ties by ascending configuration."""
    items = sorted(((abs(a) ** 2, cfg) for cfg, a in state.entries.items()),
                   key=lambda wc: (-wc[0], wc[1]))
    return tuple(items)


def r_delta(state: SparseStateVec, delta: float) -> int:
    """Smallest number of dominant configurations whose weight reaches 1 - delta."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    nrm = state.norm()
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"state norm {nrm} is not 1")
    acc = 0.0
    for r, (w, _) in enumerate(amplitude_spectrum(state), start=1):
        acc += w
        if acc >= 1.0 - delta:
            return r
    return len(state.entries)
