"""Molecular Hamiltonian ingestion.

Reads FCIDUMP integral files (chemist notation, 8-fold permutation
symmetry), maps spin-orbitals to qubits with the interleaved convention
(spatial orbital ``i`` spin-up on qubit ``2i``, spin-down on ``2i+1``),
and produces qubit Hamiltonians through the Jordan-Wigner transform:

    a_q       ->  Z_{q-1} ... Z_0 (X_q + i Y_q) / 2
    a_q^dag   ->  Z_{q-1} ... Z_0 (X_q - i Y_q) / 2

The second-quantized Hamiltonian uses chemist-notation two-electron
integrals ``(pq|rs)``:

    H = sum_{pq,s} h_pq a+_{ps} a_{qs}
      + 1/2 sum_{pqrs,st} (pq|rs) a+_{ps} a+_{rt} a_{st'} a_{qs'}   (t'=t, s'=s)
      + E_core
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliSum, PauliTerm

_NAMELIST = re.compile(r"&FCI(.*?)(?:&END|/)", re.IGNORECASE | re.DOTALL)


@dataclass(frozen=True)
class FermionOp:
    """Linear combination of ladder-operator products.

    ``terms`` holds ``(coefficient, ladder_string)`` pairs where each
    ladder string is a tuple of ``(spin_orbital_index, is_creation)``
    applied left to right as written (leftmost acts last on a ket).
    """

    terms: tuple[tuple[complex, tuple[tuple[int, bool], ...]], ...]

    def __post_init__(self) -> None:
        for _, ladder in self.terms:
            for q, dag in ladder:
                if q < 0:
                    raise ValueError("negative spin-orbital index")
                if not isinstance(dag, bool):
                    raise ValueError("ladder flag must be a bool")


def _ladder_sum(q: int, creation: bool, n_qubits: int) -> PauliSum:
    z_string = (1 << q) - 1
    y_coeff = -0.5j if creation else 0.5j
    return PauliSum(
        n_qubits,
        [
            (0.5, PauliTerm(n_qubits, 1 << q, z_string)),
            (y_coeff, PauliTerm(n_qubits, 1 << q, z_string | (1 << q))),
        ],
    )


def jordan_wigner(op: FermionOp, n_qubits: int) -> PauliSum:
    """Qubit image of a fermionic operator under the Jordan-Wigner map."""
    pairs: list[tuple[complex, PauliTerm]] = []
    for coeff, ladder in op.terms:
        if any(q >= n_qubits for q, _ in ladder):
            raise ValueError("spin-orbital index outside the register")
        prod = PauliSum.identity(n_qubits)
        for q, dag in ladder:
            prod = prod * _ladder_sum(q, dag, n_qubits)
        pairs.extend((coeff * c, t) for c, t in prod.terms)
    return PauliSum(n_qubits, pairs)


@dataclass(frozen=True)
class FcidumpData:
    """Raw integrals: ``h1[p, q]`` one-electron, ``eri[p, q, r, s]`` is the
    chemist-notation ``(pq|rs)``, plus the scalar core energy."""

    n_orbitals: int
    n_electrons: int
    sz_doubled: int
    core_energy: float
    h1: np.ndarray
    eri: np.ndarray


def _read_header_int(header: str, key: str, required: bool = True, default: int = 0) -> int:
    m = re.search(rf"\b{key}\s*=\s*(-?\d+)", header, re.IGNORECASE)
    if m is None:
        if required:
            raise ValueError(f"FCIDUMP header is missing {key}")
        return default
    return int(m.group(1))


def parse_fcidump(path) -> FcidumpData:
    """Parse an FCIDUMP file into dense integral tensors.

    Records ``value i j k l`` are interpreted as usual: all-zero indices
    give the core energy, ``k = l = 0`` gives ``h1[i, j]``, and full
    records give ``(ij|kl)`` expanded over the 8-fold real-orbital
    permutation symmetry.  Conflicting duplicate values (disagreement
    beyond 1e-8) raise ``ValueError``.
    """
    text = open(path, "r", encoding="ascii").read()
    m = _NAMELIST.search(text)
    if m is None:
        raise ValueError("no &FCI namelist header found")
    header = m.group(1)
    n_orb = _read_header_int(header, "NORB")
    n_elec = _read_header_int(header, "NELEC")
    ms2 = _read_header_int(header, "MS2", required=False)
    if n_orb < 1:
        raise ValueError("NORB must be positive")
    if not 0 < n_elec <= 2 * n_orb:
        raise ValueError(f"NELEC={n_elec} incompatible with NORB={n_orb}")
    if abs(ms2) > n_elec or (n_elec + ms2) % 2:
        raise ValueError(f"MS2={ms2} incompatible with NELEC={n_elec}")

    core = 0.0
    h1 = np.zeros((n_orb, n_orb))
    eri = np.zeros((n_orb, n_orb, n_orb, n_orb))
    h1_set = np.zeros((n_orb, n_orb), dtype=bool)
    eri_set = np.zeros((n_orb, n_orb, n_orb, n_orb), dtype=bool)
    core_set = False

    for raw in text[m.end() :].splitlines():
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 5:
            raise ValueError(f"malformed FCIDUMP record: {line!r}")
        value = float(tokens[0].replace("D", "E").replace("d", "e"))
        i, j, k, l = (int(t) for t in tokens[1:])
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise ValueError(f"orbital index {idx} outside 1..{n_orb}")
        if i == j == k == l == 0:
            if core_set and abs(core - value) > 1e-8:
                raise ValueError("conflicting core-energy records")
            core, core_set = value, True
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise ValueError(f"malformed index pattern in record: {line!r}")
            for a, b in ((i - 1, j - 1), (j - 1, i - 1)):
                if h1_set[a, b] and abs(h1[a, b] - value) > 1e-8:
                    raise ValueError(f"conflicting h1[{a},{b}] records")
                h1[a, b], h1_set[a, b] = value, True
        elif min(i, j, k, l) >= 1:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            images = {
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            }
            for idx in images:
                if eri_set[idx] and abs(eri[idx] - value) > 1e-8:
                    raise ValueError(f"conflicting two-electron records at {idx}")
                eri[idx], eri_set[idx] = value, True
        else:
            raise ValueError(f"malformed index pattern in record: {line!r}")

    return FcidumpData(n_orb, n_elec, ms2, core, h1, eri)


EVEN_QUBIT_SPIN = 0  # spin-up lives on even qubits


def spin_orbital_qubit(spatial: int, spin: int) -> int:
    """Interleaved mapping: spatial orbital i -> qubits 2i (up) and 2i+1 (down)."""
    return 2 * spatial + spin


def even_odd_masks(n_qubits: int) -> tuple[int, int]:
    even = sum(1 << q for q in range(0, n_qubits, 2))
    odd = sum(1 << q for q in range(1, n_qubits, 2))
    return even, odd


def symmetry_of(cfg: int, n_qubits: int) -> tuple[int, int]:
    """Particle number and doubled spin projection of a configuration."""
    even, odd = even_odd_masks(n_qubits)
    n_up = (cfg & even).bit_count()
    n_dn = (cfg & odd).bit_count()
    return n_up + n_dn, n_up - n_dn


def hartree_fock_configuration(n_orbitals: int, n_electrons: int, sz_doubled: int) -> int:
    """Aufbau filling of the interleaved register."""
    if (n_electrons + sz_doubled) % 2:
        raise ValueError("n_electrons and sz_doubled have mismatched parity")
    n_up = (n_electrons + sz_doubled) // 2
    n_dn = (n_electrons - sz_doubled) // 2
    if n_up < 0 or n_dn < 0 or n_up > n_orbitals or n_dn > n_orbitals:
        raise ValueError("electron counts do not fit the orbital space")
    cfg = 0
    for i in range(n_up):
        cfg |= 1 << (2 * i)
    for i in range(n_dn):
        cfg |= 1 << (2 * i + 1)
    return cfg


@dataclass(frozen=True)
class MolecularSystem:
    """Qubit Hamiltonian together with its particle-number sector."""

    n_qubits: int
    hamiltonian: PauliSum
    n_electrons: int
    sz_doubled: int
    reference: int

    def __post_init__(self) -> None:
        if self.n_qubits % 2:
            raise ValueError("spin-orbital registers have even size")
        if self.hamiltonian.n_qubits != self.n_qubits:
            raise ValueError("hamiltonian register size differs")
        if not self.hamiltonian.is_hermitian():
            raise ValueError("hamiltonian is not Hermitian")
        ne, sz = symmetry_of(self.reference, self.n_qubits)
        if (ne, sz) != (self.n_electrons, self.sz_doubled):
            raise ValueError("reference configuration is outside the target sector")


def build_molecular_hamiltonian(data: FcidumpData, cutoff: float = 1e-12) -> MolecularSystem:
    """Second quantization + Jordan-Wigner for FCIDUMP integrals."""
    n_orb = data.n_orbitals
    n_q = 2 * n_orb
    pairs: list[tuple[complex, PauliTerm]] = [(data.core_energy, PauliTerm(n_q))]

    for p in range(n_orb):
        for q in range(n_orb):
            if abs(data.h1[p, q]) < cutoff:
                continue
            for spin in (0, 1):
                op = FermionOp(
                    (
                        (
                            1.0,
                            (
                                (spin_orbital_qubit(p, spin), True),
                                (spin_orbital_qubit(q, spin), False),
                            ),
                        ),
                    )
                )
                pairs.extend(
                    (data.h1[p, q] * c, t) for c, t in jordan_wigner(op, n_q).terms
                )

    for p in range(n_orb):
        for q in range(n_orb):
            for r in range(n_orb):
                for s in range(n_orb):
                    v = data.eri[p, q, r, s]
                    if abs(v) < cutoff:
                        continue
                    for sig in (0, 1):
                        for tau in (0, 1):
                            op = FermionOp(
                                (
                                    (
                                        1.0,
                                        (
                                            (spin_orbital_qubit(p, sig), True),
                                            (spin_orbital_qubit(r, tau), True),
                                            (spin_orbital_qubit(s, tau), False),
                                            (spin_orbital_qubit(q, sig), False),
                                        ),
                                    ),
                                )
                            )
                            pairs.extend(
                                (0.5 * v * c, t) for c, t in jordan_wigner(op, n_q).terms
                            )

    h = PauliSum(n_q, pairs)
    if not h.is_hermitian():
        raise ValueError("assembled Hamiltonian failed the Hermiticity check")
    ref = hartree_fock_configuration(n_orb, data.n_electrons, data.sz_doubled)
    return MolecularSystem(n_q, h, data.n_electrons, data.sz_doubled, ref)


def load_fcidump_system(path) -> MolecularSystem:
    return build_molecular_hamiltonian(parse_fcidump(path))


def number_operator(n_qubits: int) -> PauliSum:
    pairs = [(0.5 * n_qubits, PauliTerm(n_qubits))]
    pairs += [(-0.5, PauliTerm(n_qubits, 0, 1 << q)) for q in range(n_qubits)]
    return PauliSum(n_qubits, pairs)


def sz_doubled_operator(n_qubits: int) -> PauliSum:
    pairs = []
    for q in range(n_qubits):
        sign = -0.5 if q % 2 == 0 else 0.5
        pairs.append((sign, PauliTerm(n_qubits, 0, 1 << q)))
    return PauliSum(n_qubits, pairs)


def write_qubit_hamiltonian(system: MolecularSystem, path) -> None:
    """Serialize to the JSON interchange format (real coefficients only)."""
    terms = []
    for c, t in system.hamiltonian.terms:
        if abs(c.imag) > 1e-10:
            raise ValueError("refusing to serialize a non-Hermitian Hamiltonian")
        terms.append({"coefficient": c.real, "pauli": t.label()})
    doc = {
        "metadata": {
            "n_qubits": system.n_qubits,
            "n_electrons": system.n_electrons,
            "sz_doubled": system.sz_doubled,
            "reference_cfg": system.reference,
        },
        "terms": terms,
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def parse_qubit_hamiltonian(path) -> MolecularSystem:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    try:
        meta = doc["metadata"]
        n_q = int(meta["n_qubits"])
        n_e = int(meta["n_electrons"])
        sz = int(meta["sz_doubled"])
        ref = int(meta.get("reference_cfg", hartree_fock_configuration(n_q // 2, n_e, sz)))
        raw_terms: Sequence[dict] = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"qubit-Hamiltonian JSON missing field: {exc}") from None
    pairs = []
    for entry in raw_terms:
        coeff = float(entry["coefficient"])
        pairs.append((coeff, PauliTerm.from_label(entry["pauli"], n_q)))
    h = PauliSum(n_q, pairs)
    if not h.is_hermitian():
        raise ValueError("qubit Hamiltonian is not Hermitian after folding")
    return MolecularSystem(n_q, h, n_e, sz, ref)
