"""Exact Pauli-string algebra on symplectic bitmasks.

Conventions used throughout the package:

* Qubit ``q`` lives on bit ``q`` of a configuration integer, so the
  least significant bit is qubit 0 and ``|0...01>`` is the integer 1.
* ``Z|0> = +|0>`` and ``Z|1> = -|1>``; a set bit is an occupied
  spin-orbital.
* A term with X-bit ``x_q`` and Z-bit ``z_q`` on qubit ``q`` stands for
  ``i**(x_q & z_q) * X**x_q * Z**z_q``, which makes the double-bit case
  exactly ``Y`` (no hidden phase).
* Global phases are restricted to the fourth roots of unity and are
  tracked as integer powers of ``i``, so phase bookkeeping never
  accumulates floating-point error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

PHASES: tuple[complex, ...] = (1 + 0j, 1j, -1 + 0j, -1j)
_PHASE_INDEX: dict[complex, int] = {p: k for k, p in enumerate(PHASES)}

COEFF_CUTOFF = 1e-12

_LABEL_TOKEN = re.compile(r"^([XYZ])(\d+)$")


def _phase_index(phase: complex) -> int:
    try:
        return _PHASE_INDEX[complex(phase)]
    except KeyError:
        raise ValueError(f"phase must be one of 1, i, -1, -i, got {phase!r}") from None


@dataclass(frozen=True)
class PauliTerm:
    """A single Pauli string with an exact fourth-root-of-unity phase.

    Attributes
    ----------
    n_qubits:
        Width of the register the term acts on.
    x_mask, z_mask:
        Bitmasks of the X and Z parts in the symplectic representation.
    phase:
        One of ``1, 1j, -1, -1j``.
    """

    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0
    phase: complex = 1 + 0j

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits outside the register")
        if self.x_mask < 0 or self.z_mask < 0:
            raise ValueError("masks must be non-negative")
        object.__setattr__(self, "phase", PHASES[_phase_index(self.phase)])

    @property
    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def key(self) -> tuple[int, int]:
        """Phase-free identity of the string, used for deduplication."""
        return (self.x_mask, self.z_mask)

    def letter(self, q: int) -> str:
        x = (self.x_mask >> q) & 1
        z = (self.z_mask >> q) & 1
        return "IXZY"[x + 2 * z]

    def label(self) -> str:
        """Render as ``"X0 Y3 Z5"`` (``"I"`` for identity), phase ignored."""
        parts = []
        for q in range(self.n_qubits):
            x = (self.x_mask >> q) & 1
            z = (self.z_mask >> q) & 1
            if x or z:
                parts.append(("X" if not z else "Y" if x else "Z") + str(q))
        return " ".join(parts) if parts else "I"

    @classmethod
    def from_label(cls, label: str, n_qubits: int, phase: complex = 1 + 0j) -> "PauliTerm":
        """Parse ``"X0 Y3 Z5"`` (or ``"I"`` / ``""``) into a term."""
        x_mask = 0
        z_mask = 0
        seen: set[int] = set()
        stripped = label.strip()
        if stripped not in ("", "I"):
            for token in stripped.split():
                m = _LABEL_TOKEN.match(token)
                if m is None:
                    raise ValueError(f"bad Pauli token {token!r}")
                letter, q = m.group(1), int(m.group(2))
                if q >= n_qubits:
                    raise ValueError(f"qubit {q} outside register of {n_qubits}")
                if q in seen:
                    raise ValueError(f"qubit {q} repeated in label {label!r}")
                seen.add(q)
                if letter in ("X", "Y"):
                    x_mask |= 1 << q
                if letter in ("Z", "Y"):
                    z_mask |= 1 << q
        return cls(n_qubits, x_mask, z_mask, phase)

    def __str__(self) -> str:
        idx = _phase_index(self.phase)
        prefix = ("", "i ", "- ", "-i ")[idx]
        return prefix + self.label()

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return multiply(self, other)


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact product ``a @ b`` with the phase carried as a power of i."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("cannot multiply terms on different register sizes")
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # Powers of i from the Y-normalisation of each factor, the Z-past-X
    # reordering, and the Y-normalisation of the result.
    k = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (x & z).bit_count()
    )
    idx = (_phase_index(a.phase) + _phase_index(b.phase) + k) % 4
    return PauliTerm(a.n_qubits, x, z, PHASES[idx])


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    """True when the two strings commute (symplectic product is even)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("terms act on different register sizes")
    anti = (a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()
    return anti % 2 == 0


def apply_term_to_basis(p: PauliTerm, cfg: int) -> tuple[int, complex]:
    """Action of a term on a computational basis state.

    Returns ``(cfg', scalar)`` with ``P|cfg> = scalar |cfg'>``; the scalar
    is an exact fourth root of unity times the term's phase.
    """
    if cfg < 0 or cfg >> p.n_qubits:
        raise ValueError(f"configuration {cfg} outside register of {p.n_qubits} qubits")
    k = _phase_index(p.phase) + (p.x_mask & p.z_mask).bit_count()
    k += 2 * ((p.z_mask & cfg).bit_count() & 1)
    return cfg ^ p.x_mask, PHASES[k % 4]


class PauliSum:
    """Immutable weighted sum of Pauli strings, deduplicated on construction.

    Terms are stored with unit phase (any input phase is folded into the
    coefficient), merged by ``(x_mask, z_mask)``, sorted by that key, and
    coefficients below ``COEFF_CUTOFF`` in magnitude are dropped.
    """

    __slots__ = ("n_qubits", "_terms", "_by_x", "_hermitian")

    def __init__(self, n_qubits: int, terms: Iterable[tuple[complex, PauliTerm]] = ()):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        acc: dict[tuple[int, int], complex] = {}
        for coeff, term in terms:
            if term.n_qubits != n_qubits:
                raise ValueError("term register size does not match the sum")
            key = term.key()
            acc[key] = acc.get(key, 0j) + complex(coeff) * term.phase
        folded = []
        for key in sorted(acc):
            c = acc[key]
            if abs(c) >= COEFF_CUTOFF:
                folded.append((c, PauliTerm(n_qubits, key[0], key[1])))
        self.n_qubits = n_qubits
        self._terms: tuple[tuple[complex, PauliTerm], ...] = tuple(folded)
        self._by_x: dict[int, tuple[tuple[complex, PauliTerm], ...]] | None = None
        self._hermitian: bool | None = None

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, [(coeff, PauliTerm(n_qubits))])

    @property
    def terms(self) -> tuple[tuple[complex, PauliTerm], ...]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[complex, PauliTerm]]:
        return iter(self._terms)

    def coefficient(self, term: PauliTerm) -> complex:
        """Coefficient of the string matching ``term``'s masks (its own phase folded in)."""
        for c, t in self._terms:
            if t.key() == term.key():
                return c * term.phase.conjugate()
        return 0j

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        if self._hermitian is None:
            self._hermitian = all(abs(c.imag) <= tol for c, _ in self._terms)
        return self._hermitian

    def terms_by_x_mask(self) -> Mapping[int, tuple[tuple[complex, PauliTerm], ...]]:
        """Terms grouped by x_mask; used for matrix elements between basis states."""
        if self._by_x is None:
            groups: dict[int, list[tuple[complex, PauliTerm]]] = {}
            for c, t in self._terms:
                groups.setdefault(t.x_mask, []).append((c, t))
            self._by_x = {x: tuple(g) for x, g in groups.items()}
        return self._by_x

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ValueError("sums act on different register sizes")
        return PauliSum(self.n_qubits, list(self._terms) + list(other._terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __neg__(self) -> "PauliSum":
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if other.n_qubits != self.n_qubits:
                raise ValueError("sums act on different register sizes")
            prods = []
            for ca, ta in self._terms:
                for cb, tb in other._terms:
                    prods.append((ca * cb, multiply(ta, tb)))
            return PauliSum(self.n_qubits, prods)
        if isinstance(other, PauliTerm):
            return self * PauliSum(self.n_qubits, [(1.0, other)])
        if isinstance(other, (int, float, complex)):
            return PauliSum(self.n_qubits, [(c * other, t) for c, t in self._terms])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        if isinstance(other, PauliTerm):
            return PauliSum(self.n_qubits, [(1.0, other)]) * self
        return NotImplemented

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        lines = []
        for c, t in self._terms:
            coeff = f"{c.real:+.12g}" if abs(c.imag) < 1e-14 else f"({c:.12g})"
            lines.append(f"{coeff} * {t.label()}")
        return "\n".join(lines)


def commutator_i(h: PauliSum, p: PauliTerm) -> PauliSum:
    """``i [h, p]`` computed termwise; commuting strings drop out exactly.

    For an anticommuting pair ``i[T, p] = 2i T p``, so the result keeps
    only the strings of ``h`` that anticommute with ``p``.
    """
    if p.n_qubits != h.n_qubits:
        raise ValueError("operator register sizes differ")
    if not h.is_hermitian():
        raise ValueError("commutator expects a Hermitian sum")
    out = []
    for c, t in h.terms:
        if commutes(t, p):
            continue
        out.append((2j * c, multiply(t, p)))
    return PauliSum(h.n_qubits, out)


def conjugate_sum(h: PauliSum, p: PauliTerm) -> PauliSum:
    """``p h p`` for a Hermitian unit-phase string: flip the sign of the
    anticommuting part of ``h``, leave the commuting part untouched."""
    if p.n_qubits != h.n_qubits:
        raise ValueError("operator register sizes differ")
    if p.phase not in (1 + 0j, -1 + 0j):
        raise ValueError("conjugation requires a Hermitian string (phase +-1)")
    out = [(c if commutes(t, p) else -c, t) for c, t in h.terms]
    return PauliSum(h.n_qubits, out)


@dataclass(frozen=True)
class SparseStateVec:
    """Sparse state over basis configurations: ``{cfg: amplitude}``."""

    n_qubits: int
    entries: Mapping[int, complex]

    def __post_init__(self) -> None:
        for cfg in self.entries:
            if cfg < 0 or cfg >> self.n_qubits:
                raise ValueError(f"configuration {cfg} outside register")

    def norm(self) -> float:
        return sum(abs(a) ** 2 for a in self.entries.values()) ** 0.5

    def get(self, cfg: int) -> complex:
        return self.entries.get(cfg, 0j)


def apply_term_to_sparse(p: PauliTerm, v: SparseStateVec) -> SparseStateVec:
    if p.n_qubits != v.n_qubits:
        raise ValueError("register sizes differ")
    out: dict[int, complex] = {}
    for cfg, amp in v.entries.items():
        cfg2, scal = apply_term_to_basis(p, cfg)
        out[cfg2] = out.get(cfg2, 0j) + scal * amp
    return SparseStateVec(v.n_qubits, out)


def apply_sum_to_sparse(h: PauliSum, v: SparseStateVec) -> SparseStateVec:
    """``h|v>`` as a sparse state; support grows by at most a factor of len(h)."""
    if h.n_qubits != v.n_qubits:
        raise ValueError("register sizes differ")
    out: dict[int, complex] = {}
    for c, t in h.terms:
        for cfg, amp in v.entries.items():
            cfg2, scal = apply_term_to_basis(t, cfg)
            out[cfg2] = out.get(cfg2, 0j) + c * scal * amp
    return SparseStateVec(v.n_qubits, out)


def matrix_element(h: PauliSum, bra_cfg: int, ket_cfg: int) -> complex:
    """``<bra| h |ket>`` between basis states.

    Only strings whose x_mask equals ``bra ^ ket`` can contribute, so the
    grouped index makes this O(matching terms).
    """
    diff = bra_cfg ^ ket_cfg
    total = 0j
    for c, t in h.terms_by_x_mask().get(diff, ()):
        cfg2, scal = apply_term_to_basis(t, ket_cfg)
        assert cfg2 == bra_cfg
        total += c * scal
    return total


def sparse_expectation(h: PauliSum, v: SparseStateVec, norm_tol: float = 1e-10) -> float:
    """``<v| h |v>`` for a normalized sparse state and Hermitian ``h``."""
    if not h.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    nrm = v.norm()
    if abs(nrm - 1.0) > norm_tol:
        raise ValueError(f"state norm {nrm} is not 1 within {norm_tol}")
    total = 0j
    for c, t in h.terms:
        for cfg, amp in v.entries.items():
            cfg2, scal = apply_term_to_basis(t, cfg)
            partner = v.entries.get(cfg2)
            if partner is not None:
                total += partner.conjugate() * c * scal * amp
    if abs(total.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary residue {total.imag}")
    return total.real
