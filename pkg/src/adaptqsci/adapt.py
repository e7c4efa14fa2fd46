"""Adaptive ansatz growth driven by subspace eigenvectors.

Each outer iteration takes the current QSCI eigenvector ``c_k``, scores
every pool operator ``P_j`` by the commutator gradient

    h_j = <c_k| i [H, P_j] |c_k>,

appends the best operator with the angle that exactly minimizes the
one-parameter energy

    f(theta) = <c_k| exp(-i theta P) H exp(i theta P) |c_k>
             = (a+b)/2 + (a-b)/2 cos(2 theta) + (g/2) sin(2 theta),

and hands the grown circuit back to the sampling step.  Both the score
and the angle are evaluated on the sparse subspace vector, so the cost
per pool operator is linear in the subspace dimension.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .pauli import (
    PauliSum,
    PauliTerm,
    SparseStateVec,
    apply_sum_to_sparse,
    apply_term_to_basis,
    sparse_expectation,
)
from .qsci import SelectionPolicy, SubspaceSolution, qsci_from_frequencies
from .resources import cnot_cost
from .simulator import (
    AnsatzProgram,
    StateVector,
    apply_pauli_rotation,
    basis_statevector,
    exact_expectation,
)

logger = logging.getLogger(__name__)

# A qsci step maps (program, ideal statevector, iteration index) to a
# subspace solution and the number of shots it consumed.
QsciStep = Callable[[AnsatzProgram, StateVector, int], tuple[SubspaceSolution, int]]


@dataclass(frozen=True)
class OperatorPool:
    n_qubits: int
    operators: tuple[PauliTerm, ...]

    def __len__(self) -> int:
        return len(self.operators)


def build_pool(n_qubits: int) -> OperatorPool:
    """Anti-Hermitian-generator pool of odd-Y Pauli strings.

    Weight-2 block: X_{2i} Y_{2j} and X_{2i+1} Y_{2j+1} for spatial
    orbitals i < j (same-spin pair excitations).  Weight-4 block: for
    every qubit quadruple p < q < r < s with even index sum, the four
    strings with a single Y placed on s, r, q, p in turn.  The order is
    fixed so operator indices are stable across runs.
    """
    if n_qubits < 4 or n_qubits % 2:
        raise ValueError("pool needs an even register of at least 4 qubits")
    ops: list[PauliTerm] = []
    n_orb = n_qubits // 2
    for i in range(n_orb):
        for j in range(i + 1, n_orb):
            for spin in (0, 1):
                a, b = 2 * i + spin, 2 * j + spin
                ops.append(PauliTerm(n_qubits, (1 << a) | (1 << b), 1 << b))
    for p in range(n_qubits):
        for q in range(p + 1, n_qubits):
            for r in range(q + 1, n_qubits):
                for s in range(r + 1, n_qubits):
                    if (p + q + r + s) % 2:
                        continue
                    x_all = (1 << p) | (1 << q) | (1 << r) | (1 << s)
                    for y_pos in (s, r, q, p):
                        ops.append(PauliTerm(n_qubits, x_all, 1 << y_pos))
    return OperatorPool(n_qubits, tuple(ops))


def _paired_gradient(u: SparseStateVec, p: PauliTerm, c: SparseStateVec) -> float:
    """``-2 Im <u| P |c>`` with ``u = H|c>`` precomputed."""
    total = 0j
    for cfg, amp in c.entries.items():
        cfg2, scal = apply_term_to_basis(p, cfg)
        partner = u.entries.get(cfg2)
        if partner is not None:
            total += partner.conjugate() * scal * amp
    return -2.0 * total.imag


def subspace_gradient(h: PauliSum, p: PauliTerm, c: SparseStateVec) -> float:
    """``<c| i[H, P] |c>`` evaluated on a sparse normalized state."""
    return _paired_gradient(apply_sum_to_sparse(h, c), p, c)


def rank_and_select(
    h: PauliSum, pool: OperatorPool, c: SparseStateVec
) -> tuple[int, float]:
    """Index and (signed) gradient of the pool operator with the largest
    ``|h_j|``; ties go to the smallest index."""
    u = apply_sum_to_sparse(h, c)
    best_idx = 0
    best_val = 0.0
    for j, p in enumerate(pool.operators):
        val = _paired_gradient(u, p, c)
        if abs(val) > abs(best_val):
            best_idx, best_val = j, val
    return best_idx, best_val


def optimal_angle(h: PauliSum, p: PauliTerm, c: SparseStateVec) -> tuple[float, float]:
    """Closed-form minimizer of the one-parameter rotation energy.

    Returns ``(theta_star, f_min)`` with ``theta_star`` in
    ``(-pi/2, pi/2]``; at a stationary point (both harmonic coefficients
    zero) the angle is 0 and the energy is unchanged.
    """
    a = sparse_expectation(h, c)
    pc = _apply_term_to_sparse(p, c)
    b = sparse_expectation(h, pc)
    g = subspace_gradient(h, p, c)
    big_a = 0.5 * (a - b)
    big_b = 0.5 * g
    if big_a == 0.0 and big_b == 0.0:
        return 0.0, a
    theta = 0.5 * math.atan2(-g, -(a - b))
    # atan2 lands on -pi for signed-zero g; fold by the pi period of f
    if theta <= -0.5 * math.pi:
        theta += math.pi
    theta += 0.0
    f_min = 0.5 * (a + b) - math.hypot(big_a, big_b)
    return theta, f_min


def _apply_term_to_sparse(p: PauliTerm, v: SparseStateVec) -> SparseStateVec:
    out: dict[int, complex] = {}
    for cfg, amp in v.entries.items():
        cfg2, scal = apply_term_to_basis(p, cfg)
        out[cfg2] = out.get(cfg2, 0j) + scal * amp
    return SparseStateVec(v.n_qubits, out)


@dataclass(frozen=True)
class AdaptIterationRecord:
    """Everything observable about one outer iteration."""

    iteration: int
    energy: float
    subspace_dim: int
    shots_used: int
    shots_cumulative: int
    cnots_circuit: int
    op_index: Optional[int] = None
    gradient: Optional[float] = None
    theta: Optional[float] = None
    state_energy: Optional[float] = None


@dataclass(frozen=True)
class AdaptResult:
    program: AnsatzProgram
    solution: SubspaceSolution
    records: tuple[AdaptIterationRecord, ...]
    stop_reason: str

    @property
    def converged(self) -> bool:
        return self.stop_reason == "energy_converged"

    @property
    def energy(self) -> float:
        return self.solution.energy

    @property
    def total_shots(self) -> int:
        return self.records[-1].shots_cumulative

    @property
    def iterations(self) -> int:
        return len(self.records)


def make_sampling_step(h: PauliSum, policy: SelectionPolicy, n_shots: int, seed: int) -> QsciStep:
    """Finite-shot ideal sampling of the current circuit state."""
    from .rng import iteration_stream
    from .simulator import sample

    def step(program: AnsatzProgram, psi: StateVector, k: int):
        table = sample(psi, n_shots, iteration_stream(seed, k, 0))
        return qsci_from_frequencies(h, table.frequencies(), policy, shots=n_shots), n_shots

    return step


def make_state_probability_step(h: PauliSum, policy: SelectionPolicy) -> QsciStep:
    """Infinite-shot limit: the exact Born probabilities are the table."""

    def step(program: AnsatzProgram, psi: StateVector, k: int):
        probs = psi.probabilities()
        freqs = {int(cfg): float(p) for cfg, p in enumerate(probs) if p > 0.0}
        return qsci_from_frequencies(h, freqs, policy, shots=0), 0

    return step


def run_adapt_qsci(
    h: PauliSum,
    reference: int,
    pool: OperatorPool,
    qsci_step: QsciStep,
    max_iterations: int = 50,
    conv_tol: float = 1e-5,
    conv_window: int = 1,
    stagnation_tol: float = 1e-8,
    track_state_energy: bool = True,
    initial_shots: int = 0,
    progress: Optional[Callable[[AdaptIterationRecord], None]] = None,
) -> AdaptResult:
    """Outer loop: QSCI step, convergence test, operator growth.

    The driver always maintains the ideal (noiseless) circuit state; the
    step callable may sample it directly or rebuild a noisy density
    matrix from the program.  ``initial_shots`` seeds the cumulative
    shot ledger (e.g. with a calibration cost) without affecting the
    physics.
    """
    if pool.n_qubits != h.n_qubits:
        raise ValueError("pool register size differs from Hamiltonian")
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    if conv_window < 1:
        raise ValueError("conv_window must be positive")

    program = AnsatzProgram(h.n_qubits, reference)
    psi = basis_statevector(h.n_qubits, reference)
    records: list[AdaptIterationRecord] = []
    energies: list[float] = []
    shots_cum = initial_shots
    solution: Optional[SubspaceSolution] = None
    stop_reason = "max_iterations"

    for k in range(max_iterations):
        solution, shots_used = qsci_step(program, psi, k)
        shots_cum += shots_used
        energies.append(solution.energy)
        if k > 0 and solution.energy > energies[-2] + conv_tol:
            logger.warning(
                "energy rose at iteration %d: %.8f -> %.8f", k, energies[-2], solution.energy
            )

        base = dict(
            iteration=k,
            energy=solution.energy,
            subspace_dim=solution.dimension,
            shots_used=shots_used,
            shots_cumulative=shots_cum,
            cnots_circuit=cnot_cost(program).cnot_count,
        )

        if k >= conv_window and all(
            abs(energies[-1 - j] - energies[-2 - j]) < conv_tol
            for j in range(conv_window)
        ):
            records.append(AdaptIterationRecord(**base))
            stop_reason = "energy_converged"
            if progress:
                progress(records[-1])
            break

        c = solution.as_sparse_state()
        op_index, grad = rank_and_select(h, pool, c)
        if abs(grad) < stagnation_tol:
            records.append(AdaptIterationRecord(**base))
            stop_reason = "gradient_stagnated"
            if progress:
                progress(records[-1])
            break

        op = pool.operators[op_index]
        theta, _ = optimal_angle(h, op, c)
        program = program.extended(op, theta)
        psi = apply_pauli_rotation(psi, op, theta)
        state_energy = exact_expectation(psi, h) if track_state_energy else None
        records.append(
            AdaptIterationRecord(
                **base,
                op_index=op_index,
                gradient=grad,
                theta=theta,
                state_energy=state_energy,
            )
        )
        if progress:
            progress(records[-1])

    assert solution is not None
    return AdaptResult(program, solution, tuple(records), stop_reason)


def exact_pool_gradient(h: PauliSum, p: PauliTerm, state: StateVector) -> float:
    """Dense-statevector version of the commutator gradient, for checks."""
    from .simulator import apply_pauli_term, apply_sum_dense

    import numpy as np

    u = apply_sum_dense(h, state.amplitudes)
    val = complex(np.vdot(u, apply_pauli_term(p, state.amplitudes)))
    return -2.0 * val.imag
