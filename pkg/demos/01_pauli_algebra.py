"""
Pauli-string algebra on bitmasks
================================

Pauli strings are stored as a pair of bitmasks (x_mask, z_mask) plus a
power-of-i phase, so products and commutators are a handful of integer
operations regardless of how many qubits the string acts on.
"""

import numpy as np

from adaptqsci import PauliSum, PauliTerm, commutator_i, commutes, multiply

# Build terms either from masks or from labels. Bit q of x_mask flips
# qubit q, bit q of z_mask adds a sign on qubit q; both set means Y.
a = PauliTerm.from_label("X0 Y1 Z3", n_qubits=4)
b = PauliTerm(4, x_mask=0b0011, z_mask=0b0100)
print("a =", a.label())
print("b =", b.label())

# Products fold the accumulated power of i into the phase field.
ab = multiply(a, b)
print("a*b =", ab.label(), "phase", ab.phase)

ba = multiply(b, a)
print("b*a =", ba.label(), "phase", ba.phase)
print("commute?", commutes(a, b))

# i[H, P] is the workhorse for gradient evaluation: it is again a sum
# of Pauli strings, empty when the operators commute.
h = PauliSum(4, [(0.5, PauliTerm.from_label("Z0 Z1", n_qubits=4)),
                 (-0.25, PauliTerm.from_label("X1 X2", n_qubits=4))])
p = PauliTerm.from_label("Y1", n_qubits=4)
comm = commutator_i(h, p)
print("\ni[H, P] with P =", p.label())
for coeff, term in comm.terms:
    print(f"  {coeff.real:+.3f} * {term.label()}")

# Sanity check against dense matrices, small enough to do in full.
PAULI = {
    "I": np.eye(2), "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1.0, -1.0]).astype(complex),
}


def dense(term):
    m = np.array([[term.phase]])
    for q in range(term.n_qubits - 1, -1, -1):
        m = np.kron(m, PAULI[term.letter(q)])
    return m


assert np.allclose(dense(ab), dense(a) @ dense(b))
assert np.allclose(dense(ba), dense(b) @ dense(a))
print("\ndense matrix product agrees with the bitmask product")
