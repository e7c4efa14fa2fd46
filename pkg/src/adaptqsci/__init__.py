"""Adaptive quantum-selected configuration interaction, simulated classically.

The package covers the full loop: molecular integrals to qubit
Hamiltonians, subspace selection and diagonalization from sampled
configurations, adaptive ansatz growth, a depolarizing + readout noise
model with zero-noise extrapolation, readout-error mitigation and
post-selection, and resource ledgers for comparing against a
variational baseline.
"""

from .adapt import (
    AdaptIterationRecord,
    AdaptResult,
    OperatorPool,
    build_pool,
    exact_pool_gradient,
    make_sampling_step,
    make_state_probability_step,
    optimal_angle,
    rank_and_select,
    run_adapt_qsci,
    subspace_gradient,
)
from .chemistry import (
    FcidumpData,
    FermionOp,
    MolecularSystem,
    build_molecular_hamiltonian,
    hartree_fock_configuration,
    jordan_wigner,
    load_fcidump_system,
    number_operator,
    parse_fcidump,
    parse_qubit_hamiltonian,
    symmetry_of,
    sz_doubled_operator,
    write_qubit_hamiltonian,
)
from .mitigation import (
    CalibrationSet,
    apply_rem,
    estimate_calibration,
    make_mitigated_step,
    make_unmitigated_step,
    post_select,
    run_mitigated_adapt,
    zne_frequencies,
)
from .pauli import (
    PauliSum,
    PauliTerm,
    SparseStateVec,
    apply_sum_to_sparse,
    apply_term_to_basis,
    commutator_i,
    commutes,
    conjugate_sum,
    matrix_element,
    multiply,
    sparse_expectation,
)
from .qsci import (
    SelectionPolicy,
    SubspaceSolution,
    amplitude_spectrum,
    exact_ground_state,
    lowest_eigenpair,
    project_hamiltonian,
    qsci_from_frequencies,
    r_delta,
    run_qsci,
    sector_configurations,
    sector_ground_state,
    select_subspace,
    solve_subspace,
)
from .resources import (
    MeasurementGrouping,
    ResourceLedger,
    cnot_cost,
    comparison_report,
    sorted_insertion,
    vqe_shot_estimate,
    vqe_total_estimate,
)
from .simulator import (
    AnsatzProgram,
    DensityMatrix,
    NoiseModel,
    SampleTable,
    StateVector,
    apply_pauli_rotation,
    basis_statevector,
    exact_expectation,
    gate_noise_probability,
    prepare_statevector,
    run_noisy,
    sample,
    sample_noisy,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
