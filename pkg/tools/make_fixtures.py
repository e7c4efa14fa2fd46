"""Generate the bundled molecular fixtures.

Linear hydrogen chains with 1.0 angstrom spacing in the minimal STO-3G
basis: s-type Gaussian integrals in closed form, restricted
Hartree-Fock via symmetric orthogonalization, MO-basis integral
transformation, and FCIDUMP export.  Everything is derived from the
standard closed-form expressions for contracted s Gaussians, so no
external chemistry package is involved.

Run from the repository root:

    python3 tools/make_fixtures.py

Writes fixtures/h4_sto3g_1.0A.fcidump, fixtures/h6_sto3g_1.0A.fcidump
and fixtures/h4_sto3g_1.0A.json, then cross-checks each file through
the package's own FCIDUMP -> Jordan-Wigner pipeline (the SCF energy
must match the qubit Hamiltonian's reference expectation exactly).
"""

from __future__ import annotations

import math
import sys
from itertools import product
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from adaptqsci.chemistry import load_fcidump_system, write_qubit_hamiltonian
from adaptqsci.pauli import SparseStateVec, sparse_expectation
from adaptqsci.qsci import exact_ground_state, r_delta

BOHR_PER_ANGSTROM = 1.8897259886

# STO-3G hydrogen s shell: exponents and contraction coefficients for
# normalized primitives.
STO3G_H_EXPONENTS = (3.42525091, 0.62391373, 0.16885540)
STO3G_H_COEFFS = (0.15432897, 0.53532814, 0.44463454)


def _f0(t: float) -> float:
    """Boys function of order zero."""
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


def _prim_norm(alpha: float) -> float:
    return (2.0 * alpha / math.pi) ** 0.75


class ContractedS:
    """Contracted s-type Gaussian centered at a 3-vector."""

    def __init__(self, center: np.ndarray):
        self.center = np.asarray(center, dtype=float)
        self.alphas = STO3G_H_EXPONENTS
        self.coeffs = tuple(
            d * _prim_norm(a) for d, a in zip(STO3G_H_COEFFS, STO3G_H_EXPONENTS)
        )


def _overlap_prim(a, ra, b, rb):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    return (math.pi / p) ** 1.5 * math.exp(-a * b / p * ab2)


def _kinetic_prim(a, ra, b, rb):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    mu = a * b / p
    return mu * (3.0 - 2.0 * mu * ab2) * (math.pi / p) ** 1.5 * math.exp(-mu * ab2)


def _nuclear_prim(a, ra, b, rb, rc, z):
    p = a + b
    ab2 = float(np.dot(ra - rb, ra - rb))
    rp = (a * ra + b * rb) / p
    pc2 = float(np.dot(rp - rc, rp - rc))
    return -2.0 * math.pi / p * z * math.exp(-a * b / p * ab2) * _f0(p * pc2)


def _eri_prim(a, ra, b, rb, c, rc, d, rd):
    p = a + b
    q = c + d
    ab2 = float(np.dot(ra - rb, ra - rb))
    cd2 = float(np.dot(rc - rd, rc - rd))
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pq2 = float(np.dot(rp - rq, rp - rq))
    pref = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    expo = math.exp(-a * b / p * ab2 - c * d / q * cd2)
    return pref * expo * _f0(p * q / (p + q) * pq2)


def integrals(basis: list[ContractedS], charges, centers):
    n = len(basis)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            for (ci, ai), (cj, aj) in product(
                zip(bi.coeffs, bi.alphas), zip(bj.coeffs, bj.alphas)
            ):
                w = ci * cj
                s[i, j] += w * _overlap_prim(ai, bi.center, aj, bj.center)
                t[i, j] += w * _kinetic_prim(ai, bi.center, aj, bj.center)
                for z, rc in zip(charges, centers):
                    v[i, j] += w * _nuclear_prim(ai, bi.center, aj, bj.center, rc, z)
    eri = np.zeros((n, n, n, n))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            for k, bk in enumerate(basis):
                for l, bl in enumerate(basis):
                    if (i, j, k, l) > (j, i, k, l) or (i, j, k, l) > (i, j, l, k):
                        continue
                    if (i, j) > (k, l):
                        continue
                    acc = 0.0
                    for (ci, ai), (cj, aj), (ck, ak), (cl, al) in product(
                        zip(bi.coeffs, bi.alphas),
                        zip(bj.coeffs, bj.alphas),
                        zip(bk.coeffs, bk.alphas),
                        zip(bl.coeffs, bl.alphas),
                    ):
                        acc += ci * cj * ck * cl * _eri_prim(
                            ai, bi.center, aj, bj.center, ak, bk.center, al, bl.center
                        )
                    for idx in {
                        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                    }:
                        eri[idx] = acc
    return s, t + v, eri


def rhf(s, hcore, eri, n_electrons, max_cycles=200, tol=1e-12):
    """Closed-shell SCF with symmetric orthogonalization and damping."""
    n = s.shape[0]
    n_occ = n_electrons // 2
    evals, evecs = np.linalg.eigh(s)
    if float(evals.min()) < 1e-8:
        raise RuntimeError("overlap matrix is near-singular")
    x = evecs @ np.diag(evals ** -0.5) @ evecs.T
    f = hcore
    dm = np.zeros((n, n))
    energy = 0.0
    for cycle in range(max_cycles):
        fp = x.T @ f @ x
        _, cp = np.linalg.eigh(fp)
        c = x @ cp
        occ = c[:, :n_occ]
        dm_new = 2.0 * occ @ occ.T
        if cycle > 0:
            dm_new = 0.7 * dm_new + 0.3 * dm
        j = np.einsum("pqrs,rs->pq", eri, dm_new)
        k = np.einsum("prqs,rs->pq", eri, dm_new)
        f = hcore + j - 0.5 * k
        energy_new = 0.5 * float(np.sum(dm_new * (hcore + f)))
        if cycle > 0 and abs(energy_new - energy) < tol and np.max(np.abs(dm_new - dm)) < 1e-10:
            return energy_new, x @ np.linalg.eigh(x.T @ f @ x)[1]
        dm, energy = dm_new, energy_new
    raise RuntimeError("SCF failed to converge")


def mo_transform(hcore, eri, c):
    h_mo = c.T @ hcore @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, c, c, c, c, optimize=True)
    return h_mo, eri_mo


def nuclear_repulsion(charges, centers):
    e = 0.0
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            e += charges[i] * charges[j] / float(np.linalg.norm(centers[i] - centers[j]))
    return e


def write_fcidump(path, h_mo, eri_mo, core, n_electrons, ms2=0, threshold=1e-12):
    n = h_mo.shape[0]
    lines = [
        f"&FCI NORB={n},NELEC={n_electrons},MS2={ms2},",
        " ORBSYM=" + ",".join(["1"] * n) + ",",
        " ISYM=1,",
        "&END",
    ]
    seen = set()
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s_ in range(r + 1):
                    if (p, q) < (r, s_):
                        continue
                    key = (p, q, r, s_)
                    if key in seen:
                        continue
                    seen.add(key)
                    val = eri_mo[p, q, r, s_]
                    if abs(val) > threshold:
                        lines.append(
                            f"{val:23.16E} {p + 1:3d} {q + 1:3d} {r + 1:3d} {s_ + 1:3d}"
                        )
    for p in range(n):
        for q in range(p + 1):
            if abs(h_mo[p, q]) > threshold:
                lines.append(f"{h_mo[p, q]:23.16E} {p + 1:3d} {q + 1:3d}   0   0")
    lines.append(f"{core:23.16E}   0   0   0   0")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def build_chain(n_atoms: int, spacing_angstrom: float = 1.0):
    centers = [
        np.array([0.0, 0.0, i * spacing_angstrom * BOHR_PER_ANGSTROM])
        for i in range(n_atoms)
    ]
    charges = [1.0] * n_atoms
    basis = [ContractedS(c) for c in centers]
    s, hcore, eri = integrals(basis, charges, centers)
    e_elec, c = rhf(s, hcore, eri, n_atoms)
    e_nuc = nuclear_repulsion(charges, centers)
    h_mo, eri_mo = mo_transform(hcore, eri, c)
    return e_elec + e_nuc, h_mo, eri_mo, e_nuc


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "fixtures"
    out_dir.mkdir(exist_ok=True)
    for n_atoms, name in ((4, "h4_sto3g_1.0A"), (6, "h6_sto3g_1.0A")):
        e_hf, h_mo, eri_mo, e_nuc = build_chain(n_atoms)
        path = out_dir / f"{name}.fcidump"
        write_fcidump(path, h_mo, eri_mo, e_nuc, n_atoms)
        system = load_fcidump_system(path)
        ref_state = SparseStateVec(system.n_qubits, {system.reference: 1.0 + 0j})
        e_ref = sparse_expectation(system.hamiltonian, ref_state)
        if abs(e_ref - e_hf) > 1e-8:
            raise RuntimeError(
                f"{name}: SCF energy {e_hf} and qubit reference energy {e_ref} disagree"
            )
        e_exact, gs = exact_ground_state(system)
        print(f"{name}: E_HF = {e_hf:.10f}  E_exact = {e_exact:.10f}  "
              f"terms = {len(system.hamiltonian)}  r_delta(1e-4) = {r_delta(gs, 1e-4)}")
        if n_atoms == 4:
            write_qubit_hamiltonian(system, out_dir / f"{name}.json")
            print(f"{name}: qubit-Hamiltonian JSON written")


if __name__ == "__main__":
    main()
