"""
The full adaptive loop, noiseless
=================================

Grows the ansatz one Pauli rotation at a time. Each iteration samples
the current state, runs QSCI on the R = 14 most frequent in-sector
configurations, then picks the pool operator with the largest energy
gradient against the QSCI eigenvector and appends it with the angle
that minimizes the subspace energy along that direction. The loop
stops when the QSCI energy repeats to within 1e-5 Ha.
"""

from pathlib import Path

from adaptqsci import (
    SelectionPolicy,
    build_pool,
    cnot_cost,
    load_fcidump_system,
    make_sampling_step,
    run_adapt_qsci,
    sector_ground_state,
)

ROOT = Path(__file__).resolve().parents[1]
system = load_fcidump_system(ROOT / "fixtures" / "h4_sto3g_1.0A.fcidump")
h = system.hamiltonian
e_exact, _ = sector_ground_state(h, system.n_electrons, system.sz_doubled)

pool = build_pool(system.n_qubits)
print(f"operator pool: {len(pool.operators)} anti-Hermitian generators")

policy = SelectionPolicy(r_max=14, n_electrons=system.n_electrons,
                         sz_doubled=system.sz_doubled)
step = make_sampling_step(h, policy, n_shots=100_000, seed=0)

print(f"\n{'k':>3} {'E_k (Ha)':>15} {'error':>11} {'R':>3}  chosen op")


def show(rec):
    op = pool.operators[rec.op_index].label() if rec.op_index is not None else "-"
    print(f"{rec.iteration:>3} {rec.energy:>15.9f} {rec.energy - e_exact:>11.3e} "
          f"{rec.subspace_dim:>3}  {op}")


result = run_adapt_qsci(h, system.reference, pool, step,
                        max_iterations=50, conv_tol=1e-5, progress=show)

print(f"\nstopped: {result.stop_reason} after {result.iterations} iterations")
print(f"final energy {result.energy:.9f} Ha "
      f"(error {abs(result.energy - e_exact):.2e} Ha)")
print(f"shots used   {result.total_shots:,}")
print(f"circuit      {cnot_cost(result.program).cnot_count} CNOTs, "
      f"{len(result.program.gates)} Pauli rotations")
