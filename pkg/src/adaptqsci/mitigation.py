"""Error mitigation for sampled configuration frequencies.

The mitigated pipeline runs, per outer iteration:

1. zero-noise extrapolation over global circuit folding, combining the
   fold-1 and fold-3 frequency tables as ``(3 f1 - f3) / 2``;
2. readout error mitigation, applying the tensor product of per-qubit
   inverse calibration matrices to the extrapolated table;
3. post-selection on the particle-number and spin sector.

Mitigated frequencies may come out negative; they are kept until the
selection floor discards them, so the subspace ranking sees exactly the
mitigated table.  Calibration circuits are measured once, before the
first iteration, and their shots are charged to the run's ledger.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from .adapt import QsciStep
from .chemistry import symmetry_of
from .pauli import PauliSum
from .qsci import SelectionPolicy, qsci_from_frequencies
from .rng import calibration_stream, iteration_stream
from .simulator import (
    AnsatzProgram,
    NoiseModel,
    StateVector,
    run_noisy,
    sample_distribution,
    sample_noisy,
)

REM_MAX_QUBITS = 24

Diagnostics = Callable[[int, dict[str, dict[int, float]]], None]


@dataclass(frozen=True)
class CalibrationSet:
    """Per-qubit 2x2 readout confusion matrices and their inverses.

    ``matrices[q][i, j]`` is the probability of reading ``i`` on qubit
    ``q`` when the prepared value is ``j``.
    """

    n_qubits: int
    matrices: tuple[np.ndarray, ...]
    shots_spent: int

    def __post_init__(self) -> None:
        if len(self.matrices) != self.n_qubits:
            raise ValueError("need one confusion matrix per qubit")
        for m in self.matrices:
            if m.shape != (2, 2):
                raise ValueError("confusion matrices are 2x2")
            if float(np.min(m)) < 0.0 or float(np.max(np.abs(m.sum(axis=0) - 1.0))) > 1e-9:
                raise ValueError("confusion matrix columns must be probability vectors")

    def inverses(self) -> tuple[np.ndarray, ...]:
        out = []
        for q, m in enumerate(self.matrices):
            det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
            if abs(det) < 1e-6:
                raise RuntimeError(
                    f"confusion matrix of qubit {q} is singular (readout error near 0.5)"
                )
            out.append(np.linalg.inv(m))
        return tuple(out)


def estimate_calibration(
    noise: NoiseModel,
    n_qubits: int,
    n_shots: int,
    rng,
    analytic: bool = False,
) -> CalibrationSet:
    """Measure the readout confusion matrix of every qubit.

    Each qubit gets two preparation circuits (bit 0 and bit 1), measured
    ``n_shots`` times through the readout-noise channel only, for a
    total of ``2 * n_qubits * n_shots`` shots.  ``analytic=True`` skips
    the sampling and returns the infinite-shot matrices at zero ledger
    cost.
    """
    if analytic:
        m = np.array(
            [[1.0 - noise.p_meas, noise.p_meas], [noise.p_meas, 1.0 - noise.p_meas]]
        )
        return CalibrationSet(n_qubits, tuple(m.copy() for _ in range(n_qubits)), 0)
    if n_shots < 1:
        raise ValueError("n_shots must be positive")
    matrices = []
    for _q in range(n_qubits):
        cols = []
        for prepared in (0, 1):
            probs = np.zeros(2)
            probs[prepared] = 1.0
            table = sample_distribution(probs, 1, n_shots, rng, noise.p_meas)
            ones = table.counts.get(1, 0)
            cols.append([(n_shots - ones) / n_shots, ones / n_shots])
        matrices.append(np.array(cols).T)
    return CalibrationSet(n_qubits, tuple(matrices), 2 * n_qubits * n_shots)


def zne_frequencies(
    fold1: Mapping[int, float], fold3: Mapping[int, float]
) -> dict[int, float]:
    """Richardson extrapolation to zero noise: ``(3 f1 - f3) / 2`` per key."""
    out = {}
    for cfg in fold1.keys() | fold3.keys():
        out[cfg] = 0.5 * (3.0 * fold1.get(cfg, 0.0) - fold3.get(cfg, 0.0))
    return out


def apply_rem(
    frequencies: Mapping[int, float], cal: CalibrationSet
) -> dict[int, float]:
    """Invert the readout channel on a frequency table.

    The tensor-product inverse densifies the table, so the register is
    capped at ``REM_MAX_QUBITS``; exact zeros after inversion are
    dropped from the returned dict.
    """
    n = cal.n_qubits
    if n > REM_MAX_QUBITS:
        raise ValueError(f"readout mitigation capped at {REM_MAX_QUBITS} qubits")
    vec = np.zeros(1 << n)
    for cfg, f in frequencies.items():
        vec[cfg] = f
    tensor = vec.reshape([2] * n)
    for q, inv in enumerate(cal.inverses()):
        axis = n - 1 - q
        tensor = np.moveaxis(np.tensordot(inv, tensor, axes=([1], [axis])), 0, axis)
    flat = tensor.reshape(-1)
    return {int(cfg): float(v) for cfg, v in enumerate(flat) if v != 0.0}


def post_select(
    frequencies: Mapping[int, float], n_electrons: int, sz_doubled: int, n_qubits: int
) -> dict[int, float]:
    """Drop every configuration outside the target symmetry sector."""
    return {
        cfg: f
        for cfg, f in frequencies.items()
        if symmetry_of(cfg, n_qubits) == (n_electrons, sz_doubled)
    }


def _top(frequencies: Mapping[int, float], k: int = 20) -> dict[int, float]:
    ranked = sorted(frequencies.items(), key=lambda cf: (-cf[1], cf[0]))
    return dict(ranked[:k])


def make_mitigated_step(
    h: PauliSum,
    noise: NoiseModel,
    cal: CalibrationSet,
    policy: SelectionPolicy,
    n_shots: int,
    seed: int,
    diagnostics: Optional[Diagnostics] = None,
) -> QsciStep:
    """Noisy sampling with the full mitigation chain, 2 * n_shots per step."""

    def step(program: AnsatzProgram, psi: StateVector, k: int):
        rho1 = run_noisy(program, noise, fold_factor=1)
        rho3 = run_noisy(program, noise, fold_factor=3)
        t1 = sample_noisy(rho1, noise, n_shots, iteration_stream(seed, k, 1))
        t3 = sample_noisy(rho3, noise, n_shots, iteration_stream(seed, k, 3))
        extrapolated = zne_frequencies(t1.frequencies(), t3.frequencies())
        corrected = apply_rem(extrapolated, cal)
        selected = post_select(corrected, policy.n_electrons, policy.sz_doubled, h.n_qubits)
        if diagnostics is not None:
            diagnostics(
                k,
                {
                    "raw_fold1": _top(t1.frequencies()),
                    "raw_fold3": _top(t3.frequencies()),
                    "zne": _top(extrapolated),
                    "rem": _top(corrected),
                    "post_selected": _top(selected),
                },
            )
        return qsci_from_frequencies(h, selected, policy, shots=2 * n_shots), 2 * n_shots

    return step


def make_unmitigated_step(
    h: PauliSum,
    noise: NoiseModel,
    policy: SelectionPolicy,
    n_shots: int,
    seed: int,
    fold_factor: int = 1,
) -> QsciStep:
    """Noisy sampling with no mitigation at all (sector filtering still
    happens inside subspace selection, as it would on hardware)."""

    def step(program: AnsatzProgram, psi: StateVector, k: int):
        rho = run_noisy(program, noise, fold_factor=fold_factor)
        table = sample_noisy(rho, noise, n_shots, iteration_stream(seed, k, fold_factor))
        return qsci_from_frequencies(h, table.frequencies(), policy, shots=n_shots), n_shots

    return step


def run_mitigated_adapt(
    h: PauliSum,
    reference: int,
    pool,
    policy: SelectionPolicy,
    n_shots: int,
    seed: int,
    noise: NoiseModel,
    analytic_calibration: bool = False,
    diagnostics: Optional[Diagnostics] = None,
    **adapt_kwargs,
):
    """Calibrate once, then run the adaptive loop on mitigated tables.

    Returns ``(AdaptResult, CalibrationSet)``; the calibration shots are
    pre-charged to the result's cumulative ledger.
    """
    from .adapt import run_adapt_qsci

    cal = estimate_calibration(
        noise, h.n_qubits, n_shots, calibration_stream(seed), analytic=analytic_calibration
    )
    step = make_mitigated_step(h, noise, cal, policy, n_shots, seed, diagnostics)
    result = run_adapt_qsci(
        h, reference, pool, step, initial_shots=cal.shots_spent, **adapt_kwargs
    )
    return result, cal
