"""Circuit and measurement cost accounting.

CNOT counts follow the standard ladder decomposition of a Pauli-string
rotation: a weight-2 generator costs 2 CNOTs and 5 single-qubit
rotations, a weight-4 generator 6 CNOTs and 9 single-qubit rotations.
The reference state is a bit-flip layer and costs nothing here.

Measurement estimates for the variational baseline group the
Hamiltonian by SortedInsertion (largest coefficients first, inserted
into the first fully commuting group) and use the standard shot
allocation: with exact per-group variances ``V_g`` on a given state,
one energy evaluation to precision ``eps`` needs

     N = (sum_g sqrt(V_g))**2 / eps**2 .
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum, PauliTerm, commutes
from .simulator import AnsatzProgram, StateVector, apply_sum_dense

_GATE_COSTS = {2: (2, 5), 4: (6, 9)}


@dataclass(frozen=True)
class ResourceLedger:
    cnot_count: int = 0
    single_rotation_count: int = 0
    shot_total: int = 0

    def __add__(self, other: "ResourceLedger") -> "ResourceLedger":
        return ResourceLedger(
            self.cnot_count + other.cnot_count,
            self.single_rotation_count + other.single_rotation_count,
            self.shot_total + other.shot_total,
        )


def cnot_cost(program: AnsatzProgram) -> ResourceLedger:
    """Gate counts of one circuit; only weight-2/4 generators are costed."""
    cnots = 0
    singles = 0
    for p, _ in program.gates:
        try:
            c, s = _GATE_COSTS[p.weight]
        except KeyError:
            raise ValueError(f"no decomposition rule for generator weight {p.weight}") from None
        cnots += c
        singles += s
    return ResourceLedger(cnots, singles, 0)


@dataclass(frozen=True)
class MeasurementGrouping:
    """Partition of a Hamiltonian into mutually commuting groups."""

    n_qubits: int
    groups: tuple[tuple[tuple[float, PauliTerm], ...], ...]

    @property
    def n_groups(self) -> int:
        return len(self.groups)


def sorted_insertion(h: PauliSum) -> MeasurementGrouping:
    """Greedy commuting-group partition, largest |coefficient| first.

    The identity term carries no measurement cost and is excluded.  Ties
    in |coefficient| break by ascending ``(x_mask, z_mask)`` so the
    grouping is deterministic.
    """
    if not h.is_hermitian():
        raise ValueError("measurement grouping expects a Hermitian operator")
    items = [
        (c.real, t) for c, t in h.terms if not t.is_identity
    ]
    items.sort(key=lambda ct: (-abs(ct[0]), ct[1].key()))
    groups: list[list[tuple[float, PauliTerm]]] = []
    for coeff, term in items:
        for group in groups:
            if all(commutes(term, other) for _, other in group):
                group.append((coeff, term))
                break
        else:
            groups.append([(coeff, term)])
    return MeasurementGrouping(h.n_qubits, tuple(tuple(g) for g in groups))


def group_variance(group: tuple[tuple[float, PauliTerm], ...], state: StateVector) -> float:
    """Exact variance of one commuting group's joint estimator on a state."""
    op = PauliSum(state.n_qubits, [(c, t) for c, t in group])
    w = apply_sum_dense(op, state.amplitudes)
    mean = float(np.real(np.vdot(state.amplitudes, w)))
    second = float(np.real(np.vdot(w, w)))
    var = second - mean * mean
    if var < -1e-10:
        raise RuntimeError(f"group variance {var} went negative")
    return max(var, 0.0)


def vqe_shot_estimate(h: PauliSum, state: StateVector, epsilon: float) -> float:
    """Shots for one energy evaluation at target precision ``epsilon``."""
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    grouping = sorted_insertion(h)
    sigma = sum(group_variance(g, state) ** 0.5 for g in grouping.groups)
    return (sigma / epsilon) ** 2


def vqe_total_estimate(shots_per_evaluation: float, energy_evaluations: int) -> float:
    """Lower bound for a full variational optimization: evaluations times
    per-evaluation cost, with no gradient overhead counted."""
    if shots_per_evaluation <= 0 or energy_evaluations < 1:
        raise ValueError("counts must be positive")
    return shots_per_evaluation * energy_evaluations


def comparison_report(
    vqe_once: float,
    energy_evaluations: int,
    adapt_shots=None,
    adapt_cnots=None,
) -> dict:
    """Side-by-side resource summary used by the CLI and the demos."""
    return {
        "adapt_qsci_shots": adapt_shots,
        "adapt_qsci_cnots": adapt_cnots,
        "vqe_once": vqe_once,
        "vqe_lower_bound": vqe_total_estimate(vqe_once, energy_evaluations),
    }
