import numpy as np
import pytest

from adaptqsci.chemistry import FcidumpData, FermionOp, build_molecular_hamiltonian, jordan_wigner
from adaptqsci.pauli import PauliSum, PauliTerm, SparseStateVec, sparse_expectation
from adaptqsci.qsci import (
    SECTOR_DIM_LIMIT,
    SelectionPolicy,
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
from adaptqsci.rng import substream
from adaptqsci.simulator import StateVector, basis_statevector

from oracles import dense_sum

# Exact sector ground-state energies of the bundled fixtures, pinned from
# dense diagonalization at build time.
H4_E_EXACT = -2.166387464984
H6_E_EXACT = -3.236066297648


class TestSelectSubspace:
    def test_top_r_by_frequency(self):
        freqs = {3: 0.5, 12: 0.3, 6: 0.2}
        policy = SelectionPolicy(r_max=2, n_electrons=2, sz_doubled=0)
        assert select_subspace(freqs, policy, 4) == (3, 12)

    def test_out_of_sector_keys_dropped(self):
        freqs = {3: 0.5, 12: 0.3, 5: 0.2}
        policy = SelectionPolicy(r_max=3, n_electrons=2, sz_doubled=0)
        # 0b0101 has both electrons spin-up, wrong s_z
        assert select_subspace(freqs, policy, 4) == (3, 12)

    def test_all_out_of_sector_raises(self):
        policy = SelectionPolicy(r_max=4, n_electrons=2, sz_doubled=0)
        with pytest.raises(RuntimeError, match="empty"):
            select_subspace({5: 1.0}, policy, 4)

    def test_frequency_tie_broken_by_config_value(self):
        policy = SelectionPolicy(r_max=1, n_electrons=2, sz_doubled=0)
        assert select_subspace({9: 0.5, 3: 0.5}, policy, 4) == (3,)

    def test_floor_drops_small_and_negative(self):
        policy = SelectionPolicy(r_max=8, n_electrons=2, sz_doubled=0, freq_floor=1e-3)
        freqs = {3: 0.9, 12: 1e-4, 6: -0.05}
        assert select_subspace(freqs, policy, 4) == (3,)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            SelectionPolicy(r_max=0, n_electrons=2, sz_doubled=0)
        with pytest.raises(ValueError):
            SelectionPolicy(r_max=20_000, n_electrons=2, sz_doubled=0)
        with pytest.raises(ValueError):
            SelectionPolicy(r_max=2, n_electrons=2, sz_doubled=0, freq_floor=-1.0)


class TestProjection:
    def test_diagonal_operator(self):
        h = PauliSum(2, [(1.0, PauliTerm.from_label("Z0", 2))])
        mat = project_hamiltonian(h, [0b00, 0b01])
        assert np.allclose(mat, np.diag([1.0, -1.0]))

    def test_off_diagonal_coupling(self):
        h = PauliSum(1, [(0.7, PauliTerm.from_label("X0", 1))])
        mat = project_hamiltonian(h, [0, 1])
        assert np.allclose(mat, [[0.0, 0.7], [0.7, 0.0]])

    def test_full_space_recovers_dense_matrix(self):
        rng = substream(30, 0)
        n = 4
        terms = [(0.3, PauliTerm(n))]
        while len(terms) < 10:
            x = int(rng.integers(1 << n))
            z = int(rng.integers(1 << n))
            t = PauliTerm(n, x, z)
            if t.phase in (1, -1):
                terms.append((float(rng.normal()), t))
        h = PauliSum(n, terms)
        mat = project_hamiltonian(h, list(range(16)))
        assert np.allclose(mat, dense_sum(h), atol=1e-12)

    def test_coupling_to_outside_configs_ignored(self):
        # X0 maps |0> out of the single-config span, so the projection is 0
        h = PauliSum(1, [(0.7, PauliTerm.from_label("X0", 1))])
        mat = project_hamiltonian(h, [0])
        assert mat.shape == (1, 1) and mat[0, 0] == 0.0


class TestLowestEigenpair:
    def test_two_by_two(self):
        energy, vec = lowest_eigenpair(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert energy == pytest.approx(-1.0)
        assert np.allclose(vec, [1 / np.sqrt(2), -1 / np.sqrt(2)])

    def test_gauge_largest_component_positive(self):
        energy, vec = lowest_eigenpair(np.diag([2.0, -3.0]))
        assert energy == -3.0
        assert vec[1] == pytest.approx(1.0)

    def test_three_by_three_against_characteristic_roots(self):
        rng = substream(31, 0)
        a = rng.normal(size=(3, 3))
        mat = a + a.T
        # independent route: lowest root of det(M - x I)
        coeffs = np.poly(mat)
        want = min(np.roots(coeffs).real)
        energy, vec = lowest_eigenpair(mat)
        assert energy == pytest.approx(want, abs=1e-9)
        assert np.linalg.norm(mat @ vec - energy * vec) < 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            lowest_eigenpair(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestRunQsci:
    def test_exact_state_full_sector_recovers_exact_energy(self):
        # every sector config has weight >= 5e-3, so 1e5 shots see all four
        h1 = np.array([[-1.2, -0.1], [-0.1, -0.3]])
        eri = np.zeros((2, 2, 2, 2))
        eri[0, 0, 0, 0] = 0.6
        eri[1, 1, 1, 1] = 0.5
        eri[0, 0, 1, 1] = eri[1, 1, 0, 0] = 0.4
        eri[0, 1, 1, 0] = eri[1, 0, 0, 1] = 0.15
        eri[0, 1, 0, 1] = eri[1, 0, 1, 0] = 0.15
        data = FcidumpData(2, 2, 0, 0.7, h1, eri)
        h = build_molecular_hamiltonian(data).hamiltonian
        energy, gs = sector_ground_state(h, 2, 0)
        amps = np.zeros(1 << h.n_qubits, dtype=complex)
        for cfg, a in gs.entries.items():
            amps[cfg] = a
        policy = SelectionPolicy(r_max=4, n_electrons=2, sz_doubled=0)
        sol = run_qsci(StateVector(h.n_qubits, amps), h, policy, 100_000, substream(40, 0))
        assert sol.dimension == 4
        assert sol.energy == pytest.approx(energy, abs=1e-12)

    def test_exact_probabilities_full_sector_h4(self, h4_system):
        h = h4_system.hamiltonian
        energy, gs = sector_ground_state(h, 4, 0)
        freqs = {cfg: abs(a) ** 2 for cfg, a in gs.entries.items()}
        policy = SelectionPolicy(r_max=36, n_electrons=4, sz_doubled=0, freq_floor=0.0)
        sol = qsci_from_frequencies(h, freqs, policy)
        assert sol.energy == pytest.approx(energy, abs=1e-10)

    def test_sampled_exact_state_at_r_delta(self, h4_system):
        h = h4_system.hamiltonian
        energy, gs = sector_ground_state(h, 4, 0)
        amps = np.zeros(1 << h.n_qubits, dtype=complex)
        for cfg, a in gs.entries.items():
            amps[cfg] = a
        r = r_delta(gs, 1e-4)
        policy = SelectionPolicy(r_max=r, n_electrons=4, sz_doubled=0)
        sol = run_qsci(StateVector(h.n_qubits, amps), h, policy, 100_000, substream(43, 0))
        assert abs(sol.energy - energy) < 1e-3

    def test_reference_only_subspace_gives_hf_energy(self, h4_system):
        h = h4_system.hamiltonian
        sol = solve_subspace(h, [h4_system.reference])
        ref = SparseStateVec(h.n_qubits, {h4_system.reference: 1.0 + 0j})
        assert sol.dimension == 1
        assert sol.energy == pytest.approx(sparse_expectation(h, ref), abs=1e-12)

    def test_energy_is_variational_upper_bound(self, h4_system):
        h = h4_system.hamiltonian
        rng = substream(41, 0)
        configs = sector_configurations(8, 4, 0)
        for _ in range(5):
            k = int(rng.integers(1, 10))
            picked = sorted(rng.choice(configs, size=k, replace=False).tolist())
            sol = solve_subspace(h, picked)
            assert sol.energy >= H4_E_EXACT - 1e-10

    def test_nested_subspaces_monotone(self, h4_system):
        h = h4_system.hamiltonian
        energy, gs = sector_ground_state(h, 4, 0)
        ordered = [cfg for _, cfg in amplitude_spectrum(gs)]
        prev = np.inf
        for r in range(1, len(ordered) + 1):
            e = solve_subspace(h, ordered[:r]).energy
            assert e <= prev + 1e-12
            prev = e
        assert prev == pytest.approx(energy, abs=1e-10)

    def test_frequencies_route_matches_direct_solve(self, h4_system):
        h = h4_system.hamiltonian
        policy = SelectionPolicy(r_max=2, n_electrons=4, sz_doubled=0)
        freqs = {h4_system.reference: 0.9, 0b11000011: 0.1}
        sol = qsci_from_frequencies(h, freqs, policy)
        direct = solve_subspace(h, select_subspace(freqs, policy, 8))
        assert sol.energy == direct.energy
        assert sol.configs == direct.configs

    def test_sampled_state_energy_close_to_state_expectation(self):
        # sampling cannot lower the energy below the exact ground state
        h = PauliSum(
            2,
            [
                (1.0, PauliTerm.from_label("Z0 Z1", 2)),
                (0.5, PauliTerm.from_label("X0 X1", 2)),
            ],
        )
        gs_energy, _ = sector_ground_state(h, 1, 1)
        psi = basis_statevector(2, 0b01)
        policy = SelectionPolicy(r_max=2, n_electrons=1, sz_doubled=1)
        sol = run_qsci(psi, h, policy, 10_000, substream(42, 0))
        assert sol.energy >= gs_energy - 1e-12


class TestSectorConfigurations:
    def test_small_sector_listing(self):
        assert sector_configurations(4, 2, 0) == (0b0011, 0b0110, 0b1001, 0b1100)

    def test_ascending_and_in_sector(self):
        configs = sector_configurations(8, 4, 0)
        assert len(configs) == 36
        assert list(configs) == sorted(configs)
        from adaptqsci.chemistry import symmetry_of

        assert all(symmetry_of(c, 8) == (4, 0) for c in configs)

    def test_parity_mismatch_rejected(self):
        with pytest.raises(ValueError):
            sector_configurations(4, 2, 1)
        with pytest.raises(ValueError):
            sector_configurations(4, 1, 3)

    def test_size_guard(self):
        # C(12,6)^2 = 853776 exceeds the enumeration cap
        assert SECTOR_DIM_LIMIT == 100_000
        with pytest.raises(ValueError):
            sector_configurations(24, 12, 0)


class TestExactGroundState:
    def test_pinned_fixture_energies(self, h4_system, h6_system):
        e4, gs4 = exact_ground_state(h4_system)
        e6, gs6 = exact_ground_state(h6_system)
        assert e4 == pytest.approx(H4_E_EXACT, abs=1e-9)
        assert e6 == pytest.approx(H6_E_EXACT, abs=1e-9)
        assert gs4.norm() == pytest.approx(1.0, abs=1e-10)
        assert gs6.norm() == pytest.approx(1.0, abs=1e-10)

    def test_ground_state_satisfies_eigen_equation(self, h4_system):
        h = h4_system.hamiltonian
        energy, gs = sector_ground_state(h, 4, 0)
        assert sparse_expectation(h, gs) == pytest.approx(energy, abs=1e-10)

    def test_two_site_hopping_analytic(self):
        # one spin-up electron hopping between two sites: E = -|t|
        op = FermionOp(
            (
                (-1.0, ((0, True), (2, False))),
                (-1.0, ((2, True), (0, False))),
            )
        )
        h = jordan_wigner(op, 4)
        energy, state = sector_ground_state(h, 1, 1)
        assert energy == pytest.approx(-1.0, abs=1e-12)
        assert set(state.entries) == {0b0001, 0b0100}


class TestAmplitudeSpectrum:
    def test_sorted_by_weight_then_config(self):
        state = SparseStateVec(2, {0b01: 0.6 + 0j, 0b10: -0.8 + 0j})
        spec = amplitude_spectrum(state)
        assert spec == ((0.64, 2), (0.36, 1)) or (
            spec[0][1] == 2 and spec[0][0] == pytest.approx(0.64)
        )

    def test_weight_tie_ascending_config(self):
        s = 1 / np.sqrt(2)
        spec = amplitude_spectrum(SparseStateVec(2, {2: s, 1: -s}))
        assert [cfg for _, cfg in spec] == [1, 2]

    def test_fixture_spectrum_sums_to_one(self, h4_system):
        _, gs = exact_ground_state(h4_system)
        spec = amplitude_spectrum(gs)
        assert sum(w for w, _ in spec) == pytest.approx(1.0, abs=1e-10)
        weights = [w for w, _ in spec]
        assert weights == sorted(weights, reverse=True)


class TestRDelta:
    def test_counts_until_tail_below_delta(self):
        state = SparseStateVec(
            4, {1: np.sqrt(0.9), 2: np.sqrt(0.09), 4: np.sqrt(0.009), 8: np.sqrt(0.001)}
        )
        assert r_delta(state, 1e-4) == 4
        assert r_delta(state, 0.002) == 3
        assert r_delta(state, 0.05) == 2
        assert r_delta(state, 0.5) == 1

    def test_single_config_state(self):
        state = SparseStateVec(2, {3: 1.0 + 0j})
        assert r_delta(state, 1e-6) == 1

    def test_delta_one_keeps_one(self, h4_system):
        _, gs = exact_ground_state(h4_system)
        assert r_delta(gs, 1.0) == 1

    def test_monotone_in_delta(self, h4_system):
        _, gs = exact_ground_state(h4_system)
        values = [r_delta(gs, d) for d in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert values == sorted(values)

    def test_pinned_fixture_values(self, h4_system, h6_system):
        _, gs4 = exact_ground_state(h4_system)
        _, gs6 = exact_ground_state(h6_system)
        assert r_delta(gs4, 1e-4) == 14
        assert r_delta(gs6, 1e-4) == 119

    def test_validation(self, h4_system):
        _, gs = exact_ground_state(h4_system)
        with pytest.raises(ValueError):
            r_delta(gs, 0.0)
        with pytest.raises(ValueError):
            r_delta(gs, 1.5)
