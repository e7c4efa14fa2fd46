import math

import numpy as np
import pytest

from adaptqsci.pauli import PauliSum, PauliTerm
from adaptqsci.rng import substream
from adaptqsci.simulator import (
    AnsatzProgram,
    DensityMatrix,
    NoiseModel,
    SampleTable,
    StateVector,
    apply_pauli_rotation,
    apply_pauli_term,
    basis_statevector,
    depolarize,
    exact_expectation,
    folded_gates,
    gate_noise_probability,
    prepare_statevector,
    run_noisy,
    sample,
    sample_distribution,
    sample_noisy,
)

from oracles import dense_sum, dense_term, random_hermitian_sum, random_state


def rotation_matrix(term, theta):
    n = term.n_qubits
    eye = np.eye(1 << n)
    return math.cos(theta) * eye + 1j * math.sin(theta) * dense_term(term)


def random_program(rng, n, n_gates):
    gates = []
    for _ in range(n_gates):
        while True:
            x = int(rng.integers(1 << n))
            z = int(rng.integers(1 << n))
            if x | z:
                break
        gates.append((PauliTerm(n, x, z), float(rng.uniform(-np.pi, np.pi))))
    return AnsatzProgram(n, int(rng.integers(1 << n)), tuple(gates))


class TestStatevectorRotation:
    def test_zero_angle_is_identity(self):
        psi = basis_statevector(3, 0b101)
        out = apply_pauli_rotation(psi, PauliTerm.from_label("X0 Y2", 3), 0.0)
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_quarter_turn_about_y(self):
        # exp(i (pi/2) Y0)|0> = i Y0|0> = i * i|1> = -|1>
        psi = basis_statevector(1, 0)
        out = apply_pauli_rotation(psi, PauliTerm.from_label("Y0", 1), math.pi / 2)
        assert np.allclose(out.amplitudes, [0.0, -1.0])

    def test_angle_additivity(self):
        rng = substream(11, 0)
        psi = StateVector(3, random_state(rng, 3))
        term = PauliTerm.from_label("X0 Y1 Z2", 3)
        once = apply_pauli_rotation(apply_pauli_rotation(psi, term, 0.3), term, 0.45)
        combined = apply_pauli_rotation(psi, term, 0.75)
        assert np.allclose(once.amplitudes, combined.amplitudes, atol=1e-12)

    def test_matches_dense_exponential(self):
        rng = substream(12, 0)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            x = int(rng.integers(1 << n))
            z = int(rng.integers(1 << n))
            if not (x | z):
                continue
            term = PauliTerm(n, x, z)
            theta = float(rng.uniform(-np.pi, np.pi))
            amps = random_state(rng, n)
            got = apply_pauli_rotation(StateVector(n, amps), term, theta)
            want = rotation_matrix(term, theta) @ amps
            assert np.allclose(got.amplitudes, want, atol=1e-12)

    def test_norm_preserved_over_long_run(self):
        rng = substream(13, 0)
        psi = StateVector(4, random_state(rng, 4))
        for _ in range(1000):
            x = int(rng.integers(1, 16))
            psi = apply_pauli_rotation(
                psi, PauliTerm(4, x, int(rng.integers(16))), float(rng.uniform(-3, 3))
            )
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)

    def test_prepare_statevector_matches_matrix_product(self):
        rng = substream(14, 0)
        program = random_program(rng, 3, 5)
        psi = basis_statevector(3, program.reference).amplitudes
        for term, theta in program.gates:
            psi = rotation_matrix(term, theta) @ psi
        got = prepare_statevector(program)
        assert np.allclose(got.amplitudes, psi, atol=1e-12)


class TestExpectation:
    def test_basis_state_diagonal(self):
        h = PauliSum(
            4, [(0.5, PauliTerm(4)), (-1.25, PauliTerm.from_label("Z0 Z1", 4))]
        )
        psi = basis_statevector(4, 0b0011)
        assert exact_expectation(psi, h) == pytest.approx(0.5 - 1.25)

    def test_off_diagonal_term_on_plus_state(self):
        h = PauliSum(1, [(2.0, PauliTerm.from_label("X0", 1))])
        psi = StateVector(1, np.array([1.0, 1.0]) / math.sqrt(2))
        assert exact_expectation(psi, h) == pytest.approx(2.0)

    def test_against_dense_oracle(self):
        rng = substream(15, 0)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            h = random_hermitian_sum(rng, n, 8)
            amps = random_state(rng, n)
            want = float(np.real(np.conj(amps) @ dense_sum(h) @ amps))
            assert exact_expectation(StateVector(n, amps), h) == pytest.approx(
                want, abs=1e-10
            )

    def test_invariant_under_commuting_rotation(self):
        # rotating an eigenstate by a commuting generator changes nothing
        h = PauliSum(2, [(1.0, PauliTerm.from_label("Z0 Z1", 2))])
        psi = basis_statevector(2, 0b00)
        rotated = apply_pauli_rotation(psi, PauliTerm.from_label("Z0", 2), 0.7)
        assert exact_expectation(rotated, h) == pytest.approx(
            exact_expectation(psi, h), abs=1e-12
        )

    def test_apply_pauli_term_action(self):
        psi = basis_statevector(2, 0b00)
        out = apply_pauli_term(PauliTerm.from_label("Y0", 2), psi.amplitudes)
        assert out[0b01] == pytest.approx(1j)


class TestSampling:
    def test_basis_state_single_outcome(self):
        psi = basis_statevector(3, 5)
        table = sample(psi, 1000, substream(0, 0))
        assert table.counts == {5: 1000}
        assert table.total_shots == 1000

    def test_counts_sum_to_shots(self):
        rng = substream(16, 0)
        psi = StateVector(3, random_state(rng, 3))
        table = sample(psi, 4096, rng)
        assert sum(table.counts.values()) == 4096

    def test_two_outcome_frequencies(self):
        probs = np.array([0.49, 0.51])
        table = sample_distribution(probs, 1, 100_000, substream(17, 0))
        freqs = table.frequencies()
        assert freqs[0] == pytest.approx(0.49, abs=0.01)
        assert freqs[1] == pytest.approx(0.51, abs=0.01)

    def test_deterministic_per_stream(self):
        probs = np.array([0.25, 0.25, 0.25, 0.25])
        a = sample_distribution(probs, 2, 500, substream(9, 1, 2))
        b = sample_distribution(probs, 2, 500, substream(9, 1, 2))
        assert a.counts == b.counts

    def test_negative_probability_rejected(self):
        probs = np.array([1.1, -0.1])
        with pytest.raises(RuntimeError):
            sample_distribution(probs, 1, 10, substream(0, 0))

    def test_tiny_negative_clipped(self):
        probs = np.array([1.0, -1e-12])
        table = sample_distribution(probs, 1, 50, substream(0, 0))
        assert table.counts == {0: 50}

    def test_readout_flip_certain(self):
        probs = np.array([1.0, 0.0])
        table = sample_distribution(probs, 1, 200, substream(0, 0), readout_flip_prob=1.0)
        assert table.counts == {1: 200}

    def test_readout_flip_rate(self):
        # all-zeros survival probability is (1-p)^n per shot
        probs = np.zeros(16)
        probs[0] = 1.0
        table = sample_distribution(probs, 4, 100_000, substream(18, 0), readout_flip_prob=0.01)
        survival = table.counts[0] / 100_000
        assert survival == pytest.approx(0.99**4, abs=0.01)

    def test_sample_table_validation(self):
        with pytest.raises(ValueError):
            SampleTable(2, {0: 3}, 4)


class TestNoiseChannels:
    def test_gate_noise_probability_by_weight(self):
        assert gate_noise_probability(0.01, 1) == 0.0
        assert gate_noise_probability(0.01, 2) == 0.01
        assert gate_noise_probability(0.01, 4) == pytest.approx(0.0149628, abs=1e-6)
        with pytest.raises(ValueError):
            gate_noise_probability(0.01, 3)

    def test_depolarize_single_qubit(self):
        rho = np.zeros((2, 2), dtype=complex)
        rho[0, 0] = 1.0
        out = depolarize(rho, 0, 0.3, 1)
        assert out[0, 0] == pytest.approx(1 - 0.2)
        assert out[1, 1] == pytest.approx(0.2)

    def test_depolarize_full_strength_mixes(self):
        rho = np.zeros((2, 2), dtype=complex)
        rho[0, 0] = 1.0
        out = depolarize(rho, 0, 1.0, 1)
        # p=1 leaves (1-2p/3, 2p/3) = (1/3, 2/3), not maximally mixed
        assert out[0, 0] == pytest.approx(1 / 3)
        assert out[1, 1] == pytest.approx(2 / 3)

    def test_depolarize_preserves_trace(self):
        rng = substream(19, 0)
        amps = random_state(rng, 2)
        rho = np.outer(amps, np.conj(amps))
        out = depolarize(rho, 1, 0.17, 2)
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)

    def test_noise_model_validation(self):
        NoiseModel(0.0, 0.0)
        NoiseModel(1.0, 1.0)
        with pytest.raises(ValueError):
            NoiseModel(-0.1, 0.0)
        with pytest.raises(ValueError):
            NoiseModel(0.0, 1.5)


class TestNoisyExecution:
    def test_zero_noise_matches_pure_state(self):
        rng = substream(20, 0)
        program = random_program(rng, 3, 4)
        rho = run_noisy(program, NoiseModel(0.0, 0.0)).matrix
        psi = prepare_statevector(program).amplitudes
        assert np.max(np.abs(rho - np.outer(psi, np.conj(psi)))) < 1e-9

    def test_trace_preserved_under_noise(self):
        rng = substream(21, 0)
        program = random_program(rng, 3, 4)
        rho = run_noisy(program, NoiseModel(0.02, 0.0)).matrix
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-9)

    def test_weight_one_gate_stays_noiseless(self):
        program = AnsatzProgram(1, 0, ((PauliTerm.from_label("Y0", 1), 0.4),))
        rho = run_noisy(program, NoiseModel(0.5, 0.0)).matrix
        psi = prepare_statevector(program).amplitudes
        assert np.max(np.abs(rho - np.outer(psi, np.conj(psi)))) < 1e-12

    def test_unsupported_weight_errors_only_with_noise(self):
        term = PauliTerm.from_label("X0 Y1 Z2", 3)
        program = AnsatzProgram(3, 0, ((term, 0.2),))
        run_noisy(program, NoiseModel(0.0, 0.0))
        with pytest.raises(ValueError):
            run_noisy(program, NoiseModel(0.01, 0.0))

    def test_two_qubit_gate_noise_depends_on_support(self):
        term = PauliTerm.from_label("X0 Y1", 2)
        program = AnsatzProgram(2, 0, ((term, 0.3),))
        rho = run_noisy(program, NoiseModel(0.1, 0.0)).matrix
        psi = prepare_statevector(program).amplitudes
        pure = np.outer(psi, np.conj(psi))
        assert np.max(np.abs(rho - pure)) > 1e-3

    def test_qubit_cap(self):
        program = AnsatzProgram(13, 0, ())
        with pytest.raises(ValueError):
            run_noisy(program, NoiseModel(0.0, 0.0), max_qubits=12)


class TestFolding:
    def test_fold_one_is_original(self):
        rng = substream(22, 0)
        program = random_program(rng, 3, 4)
        assert list(folded_gates(program, 1)) == list(program.gates)

    def test_fold_three_gate_count(self):
        rng = substream(23, 0)
        program = random_program(rng, 3, 4)
        assert len(list(folded_gates(program, 3))) == 12

    def test_fold_three_inverts_pairwise(self):
        rng = substream(24, 0)
        program = random_program(rng, 2, 3)
        folded = list(folded_gates(program, 3))
        # segment 2 is the reversed, negated copy of segment 1
        for (t1, a1), (t2, a2) in zip(reversed(folded[:3]), folded[3:6]):
            assert t1 == t2 and a2 == -a1

    def test_even_fold_rejected(self):
        program = AnsatzProgram(2, 0, ())
        with pytest.raises(ValueError):
            list(folded_gates(program, 2))

    def test_fold_three_zero_noise_identical_state(self):
        rng = substream(25, 0)
        program = random_program(rng, 3, 5)
        noiseless = NoiseModel(0.0, 0.0)
        rho1 = run_noisy(program, noiseless, fold_factor=1).matrix
        rho3 = run_noisy(program, noiseless, fold_factor=3).matrix
        assert np.max(np.abs(rho1 - rho3)) < 1e-12

    def test_fold_three_amplifies_error(self):
        term = PauliTerm.from_label("X0 Y1", 2)
        program = AnsatzProgram(2, 0, ((term, 0.3),))
        noise = NoiseModel(0.02, 0.0)
        psi = prepare_statevector(program).amplitudes
        pure = np.outer(psi, np.conj(psi))
        err1 = np.max(np.abs(run_noisy(program, noise, 1).matrix - pure))
        err3 = np.max(np.abs(run_noisy(program, noise, 3).matrix - pure))
        assert err3 > 2 * err1


class TestDensityMatrixSampling:
    def test_populations_of_pure_reference(self):
        program = AnsatzProgram(2, 0b01, ())
        rho = run_noisy(program, NoiseModel(0.0, 0.0))
        pops = rho.populations()
        assert pops[0b01] == pytest.approx(1.0)

    def test_sample_noisy_no_readout_error(self):
        program = AnsatzProgram(2, 0b10, ())
        rho = run_noisy(program, NoiseModel(0.0, 0.0))
        table = sample_noisy(rho, NoiseModel(0.0, 0.0), 300, substream(1, 0))
        assert table.counts == {0b10: 300}

    def test_sample_noisy_certain_flip(self):
        program = AnsatzProgram(1, 0, ())
        rho = run_noisy(program, NoiseModel(0.0, 1.0))
        table = sample_noisy(rho, NoiseModel(0.0, 1.0), 100, substream(2, 0))
        assert table.counts == {1: 100}

    def test_density_matrix_validation(self):
        bad = np.array([[0.6, 0.0], [0.0, 0.6]], dtype=complex)
        with pytest.raises(ValueError):
            DensityMatrix(1, bad)
