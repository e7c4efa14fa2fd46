"""Statevector and density-matrix backends for Pauli-rotation circuits.

The circuit model is deliberately small: a computational basis reference
state followed by rotations ``exp(i * theta * P)`` for Pauli strings
``P``.  The noisy backend applies a single-qubit depolarizing channel to
every support qubit after each rotation, with an error probability that
depends on the weight of the rotation's generator, and bit-flip readout
errors at sampling time.

Amplitude indexing matches the configuration-integer convention: entry
``k`` of a statevector is the amplitude of the basis state whose
occupation bits are the binary digits of ``k`` (LSB = qubit 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .pauli import PHASES, PauliSum, PauliTerm, _phase_index

DENSITY_MATRIX_MAX_QUBITS = 12


@dataclass(frozen=True)
class AnsatzProgram:
    """Reference configuration plus an ordered list of Pauli rotations.

    Each gate is a pair ``(P, theta)`` meaning ``exp(i * theta * P)``;
    generators must carry unit phase so the gate is unitary with a
    Hermitian generator.
    """

    n_qubits: int
    reference: int
    gates: tuple[tuple[PauliTerm, float], ...] = ()

    def __post_init__(self) -> None:
        if self.reference < 0 or self.reference >> self.n_qubits:
            raise ValueError("reference configuration outside register")
        for p, theta in self.gates:
            if p.n_qubits != self.n_qubits:
                raise ValueError("gate register size differs from program")
            if p.phase != 1 + 0j:
                raise ValueError("rotation generators must have phase +1")
            if p.is_identity:
                raise ValueError("identity is not a valid rotation generator")
            if not math.isfinite(theta):
                raise ValueError("rotation angle must be finite")

    def extended(self, p: PauliTerm, theta: float) -> "AnsatzProgram":
        return AnsatzProgram(self.n_qubits, self.reference, self.gates + ((p, theta),))

    def __len__(self) -> int:
        return len(self.gates)


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude array has wrong length")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError(f"state norm {nrm} is not 1")
        self.amplitudes = amps

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.matrix, dtype=np.complex128)
        dim = 1 << self.n_qubits
        if rho.shape != (dim, dim):
            raise ValueError("density matrix has wrong shape")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"trace {tr} is not 1")
        if float(np.max(np.abs(rho - rho.conj().T))) > 1e-9:
            raise ValueError("density matrix is not Hermitian")
        self.matrix = rho

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))


@dataclass(frozen=True)
class SampleTable:
    """Histogram of measured configurations."""

    n_qubits: int
    counts: Mapping[int, int]
    total_shots: int

    def __post_init__(self) -> None:
        if self.total_shots <= 0:
            raise ValueError("total_shots must be positive")
        if sum(self.counts.values()) != self.total_shots:
            raise ValueError("counts do not sum to total_shots")

    def frequencies(self) -> dict[int, float]:
        return {cfg: n / self.total_shots for cfg, n in self.counts.items()}


def _term_action(p: PauliTerm, n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and per-index scalars of a Pauli string.

    ``P|k> = scal[k] |perm[k]>`` with ``perm[k] = k ^ x_mask`` and
    ``scal[k] = i**(|x&z|) * phase * (-1)**(|z & k|)``.
    """
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(p.z_mask)) & 1)
    c0 = PHASES[(_phase_index(p.phase) + (p.x_mask & p.z_mask).bit_count()) % 4]
    return (idx ^ np.uint64(p.x_mask)).astype(np.int64), c0 * signs


def apply_pauli_term(p: PauliTerm, amps: np.ndarray) -> np.ndarray:
    """Dense ``P @ amps`` in one gather pass."""
    n = int(round(math.log2(amps.shape[0])))
    perm, scal = _term_action(p, n)
    out = np.empty_like(amps)
    out[perm] = scal * amps
    return out


def apply_sum_dense(h: PauliSum, amps: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    for c, t in h.terms:
        out += c * apply_pauli_term(t, amps)
    return out


def basis_statevector(n_qubits: int, cfg: int) -> StateVector:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[cfg] = 1.0
    return StateVector(n_qubits, amps)


def apply_pauli_rotation(state: StateVector, p: PauliTerm, theta: float) -> StateVector:
    """``exp(i theta P)|psi> = cos(theta)|psi> + i sin(theta) P|psi>``."""
    if p.n_qubits != state.n_qubits:
        raise ValueError("register sizes differ")
    if p.phase != 1 + 0j:
        raise ValueError("rotation generators must have phase +1")
    rotated = math.cos(theta) * state.amplitudes + 1j * math.sin(theta) * apply_pauli_term(
        p, state.amplitudes
    )
    return StateVector(state.n_qubits, rotated)


def prepare_statevector(program: AnsatzProgram) -> StateVector:
    state = basis_statevector(program.n_qubits, program.reference)
    for p, theta in program.gates:
        state = apply_pauli_rotation(state, p, theta)
    return state


def exact_expectation(state: StateVector, h: PauliSum) -> float:
    if h.n_qubits != state.n_qubits:
        raise ValueError("register sizes differ")
    if not h.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    val = complex(np.vdot(state.amplitudes, apply_sum_dense(h, state.amplitudes)))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary residue {val.imag}")
    return val.real


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_distribution(
    probs: np.ndarray,
    n_qubits: int,
    n_shots: int,
    rng,
    readout_flip_prob: float = 0.0,
) -> SampleTable:
    """Draw configurations from a probability vector, then flip each
    readout bit independently with the given probability."""
    if n_shots <= 0:
        raise ValueError("n_shots must be positive")
    gen = _as_generator(rng)
    p = np.asarray(probs, dtype=np.float64)
    if p.shape != (1 << n_qubits,):
        raise ValueError("probability vector has wrong length")
    if float(p.min()) < -1e-9:
        raise RuntimeError(f"negative probability {p.min()} in sampler input")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    draws = gen.choice(1 << n_qubits, size=n_shots, p=p)
    if readout_flip_prob > 0.0:
        flips = gen.random((n_shots, n_qubits)) < readout_flip_prob
        weights = (1 << np.arange(n_qubits)).astype(np.int64)
        draws = draws ^ (flips @ weights)
    values, counts = np.unique(draws, return_counts=True)
    table = {int(v): int(c) for v, c in zip(values, counts)}
    return SampleTable(n_qubits, table, n_shots)


def sample(state: StateVector, n_shots: int, rng) -> SampleTable:
    """Ideal projective measurement of every qubit, ``n_shots`` times."""
    return sample_distribution(state.probabilities(), state.n_qubits, n_shots, rng)


def gate_noise_probability(p_2q: float, weight: int) -> float:
    """Depolarizing probability attached to one rotation's support qubits.

    Weight-1 rotations are treated as error-free; a weight-2 rotation
    costs one two-qubit-gate error, a weight-4 rotation compounds three
    two-qubit gates per qubit into ``1 - (1 - p)**1.5``.
    """
    if not 0.0 <= p_2q <= 1.0:
        raise ValueError("p_2q must be in [0, 1]")
    if weight == 1:
        return 0.0
    if weight == 2:
        return p_2q
    if weight == 4:
        return 1.0 - (1.0 - p_2q) ** 1.5
    raise ValueError(f"no noise rule for generator weight {weight}")


def _conjugate_rho(p: PauliTerm, rho: np.ndarray, n_qubits: int) -> np.ndarray:
    perm, scal = _term_action(p, n_qubits)
    left = np.empty_like(rho)
    left[perm, :] = scal[:, None] * rho
    out = np.empty_like(left)
    out[:, perm] = left * scal.conj()[None, :]
    return out


def depolarize(rho: np.ndarray, qubit: int, prob: float, n_qubits: int) -> np.ndarray:
    """Single-qubit depolarizing channel on ``qubit`` with probability ``prob``."""
    if prob == 0.0:
        return rho
    mix = np.zeros_like(rho)
    for letter in ("X", "Y", "Z"):
        p = PauliTerm.from_label(f"{letter}{qubit}", n_qubits)
        mix += _conjugate_rho(p, rho, n_qubits)
    return (1.0 - prob) * rho + (prob / 3.0) * mix


def _rotate_rho(rho: np.ndarray, p: PauliTerm, theta: float, n_qubits: int) -> np.ndarray:
    perm, scal = _term_action(p, n_qubits)
    prho = np.empty_like(rho)
    prho[perm, :] = scal[:, None] * rho
    rhop = np.empty_like(rho)
    rhop[:, perm] = rho * scal.conj()[None, :]
    prhop = np.empty_like(rho)
    prhop[:, perm] = prho * scal.conj()[None, :]
    c, s = math.cos(theta), math.sin(theta)
    return c * c * rho + 1j * c * s * (prho - rhop) + s * s * prhop


@dataclass(frozen=True)
class NoiseModel:
    """Two-qubit-gate depolarizing probability and readout flip probability."""

    p_2q: float = 0.0
    p_meas: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_2q <= 1.0:
            raise ValueError("p_2q must be in [0, 1]")
        if not 0.0 <= self.p_meas <= 1.0:
            raise ValueError("p_meas must be in [0, 1]")


def folded_gates(
    program: AnsatzProgram, fold_factor: int
) -> Iterable[tuple[PauliTerm, float]]:
    """Gate sequence of the global fold ``U (U^dag U)^((f-1)/2)``.

    The inverse block runs the gates in reverse order with negated
    angles; noise is applied to those gates exactly as to the originals.
    """
    if fold_factor < 1 or fold_factor % 2 == 0:
        raise ValueError("fold factor must be an odd positive integer")
    yield from program.gates
    for _ in range((fold_factor - 1) // 2):
        for p, theta in reversed(program.gates):
            yield p, -theta
        yield from program.gates


def run_noisy(
    program: AnsatzProgram,
    noise: NoiseModel,
    fold_factor: int = 1,
    max_qubits: int = DENSITY_MATRIX_MAX_QUBITS,
) -> DensityMatrix:
    """Evolve the reference through the (possibly folded) circuit with a
    depolarizing channel on each support qubit after every rotation."""
    n = program.n_qubits
    if n > max_qubits:
        raise ValueError(f"density-matrix backend capped at {max_qubits} qubits")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[program.reference, program.reference] = 1.0
    for p, theta in folded_gates(program, fold_factor):
        rho = _rotate_rho(rho, p, theta, n)
        if noise.p_2q > 0.0:
            prob = gate_noise_probability(noise.p_2q, p.weight)
            if prob > 0.0:
                support = p.x_mask | p.z_mask
                for q in range(n):
                    if (support >> q) & 1:
                        rho = depolarize(rho, q, prob, n)
    return DensityMatrix(n, rho)


def sample_noisy(rho: DensityMatrix, noise: NoiseModel, n_shots: int, rng) -> SampleTable:
    """Measure all qubits of a mixed state with readout bit-flip errors."""
    pops = rho.populations()
    if float(pops.min()) < -1e-9:
        raise RuntimeError("density matrix populations went negative")
    return sample_distribution(pops, rho.n_qubits, n_shots, rng, noise.p_meas)
