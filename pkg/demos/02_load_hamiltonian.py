"""
From molecular integrals to a qubit Hamiltonian
===============================================

Reads an FCIDUMP file (H4, STO-3G, 1.0 A spacing), maps it to qubits
with the interleaved Jordan-Wigner convention (qubit 2i is the spin-up
half of orbital i, qubit 2i+1 the spin-down half), and inspects the
resulting operator.
"""

from pathlib import Path

from adaptqsci import (
    amplitude_spectrum,
    exact_expectation,
    basis_statevector,
    hartree_fock_configuration,
    load_fcidump_system,
    sector_ground_state,
    symmetry_of,
)

ROOT = Path(__file__).resolve().parents[1]

system = load_fcidump_system(ROOT / "fixtures" / "h4_sto3g_1.0A.fcidump")
h = system.hamiltonian
print(f"{system.n_qubits} qubits, {len(list(h.terms))} Pauli terms")
print(f"sector: {system.n_electrons} electrons, 2*Sz = {system.sz_doubled}")

# The Hartree-Fock determinant fills the lowest spin-orbitals. With the
# interleaved convention that is simply the lowest n_electrons qubits.
hf = hartree_fock_configuration(system.n_qubits // 2, system.n_electrons,
                                system.sz_doubled)
assert hf == system.reference
ne, sz2 = symmetry_of(hf, system.n_qubits)
print(f"\nHF configuration {hf:#06b} carries N = {ne}, 2*Sz = {sz2}")

e_hf = exact_expectation(basis_statevector(system.n_qubits, hf), h)
print(f"HF energy          {e_hf:.9f} Ha")

# Exact diagonalization restricted to the particle-number / spin sector
# gives the reference answer every later demo compares against.
e_exact, gs = sector_ground_state(h, system.n_electrons, system.sz_doubled)
print(f"exact ground state {e_exact:.9f} Ha")
print(f"correlation energy {e_exact - e_hf:.9f} Ha")

# The ground state is dominated by a handful of configurations; the
# sorted weight spectrum is what makes subspace selection work at all.
print("\ntop configurations by weight:")
for weight, cfg in amplitude_spectrum(gs)[:6]:
    print(f"  {cfg:08b}  {weight:.6f}")
