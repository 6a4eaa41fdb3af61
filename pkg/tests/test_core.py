import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgatearray import core
from qgatearray.core import TOL_ALG, TOL_NORM, DimensionError
from qgatearray.gates import gate

from oracles import expand_by_loops, partial_trace_by_loops

X, Y, Z, H = (gate(g) for g in "xyzh")
ZERO = np.array([1, 0], dtype=complex)
ONE = np.array([0, 1], dtype=complex)
PHI_PLUS = np.array([1, 0, 0, 1]) / np.sqrt(2)


class TestTensorProduct:
    def test_basis_composition(self):
        out = core.tensor_product(ZERO, ONE)
        np.testing.assert_array_equal(out, [0, 1, 0, 0])

    def test_identity(self):
        np.testing.assert_array_equal(core.tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_x_kron_z_entries(self):
        out = core.tensor_product(X, Z)
        expected = np.zeros((4, 4))
        expected[0, 2], expected[1, 3], expected[2, 0], expected[3, 1] = 1, -1, 1, -1
        np.testing.assert_array_equal(out, expected)

    def test_kind_mismatch(self):
        with pytest.raises(DimensionError):
            core.tensor_product(ZERO, X)

    def test_associative(self):
        a, b, c = (core.random_haar_unitary(1, s) for s in (1, 2, 3))
        lhs = core.tensor_product(core.tensor_product(a, b), c)
        rhs = core.tensor_product(a, core.tensor_product(b, c))
        np.testing.assert_allclose(lhs, rhs, atol=TOL_ALG)


class TestApply:
    def test_bit_flip(self):
        out = core.apply(X, core.basis_state(0, 2), [1])
        np.testing.assert_array_equal(out, [0, 1, 0, 0])

    def test_hadamard(self):
        np.testing.assert_allclose(core.apply(H, ZERO, [0]), [2**-0.5, 2**-0.5], atol=TOL_ALG)

    def test_cnot_makes_phi_plus(self):
        psi = np.array([1, 0, 1, 0]) / np.sqrt(2)
        np.testing.assert_allclose(core.apply(gate("cnot"), psi, [0, 1]), PHI_PLUS, atol=TOL_ALG)

    def test_target_order_matters(self):
        # CNOT with control on qubit 1: |01> -> |11>
        out = core.apply(gate("cnot"), core.basis_state(1, 2), [1, 0])
        np.testing.assert_array_equal(out, core.basis_state(3, 2))

    @pytest.mark.parametrize("targets", [[2], [0, 0], [-1]])
    def test_bad_targets(self, targets):
        with pytest.raises(DimensionError):
            core.apply(X if len(targets) == 1 else gate("cnot"), core.basis_state(0, 2), targets)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            core.apply(gate("cnot"), core.basis_state(0, 2), [0])

    @settings(max_examples=60, deadline=None)
    @given(data=st.data(), n=st.integers(1, 4), seed=st.integers(0, 2**32))
    def test_matches_loop_expansion(self, data, n, seed):
        k = data.draw(st.integers(1, n))
        targets = data.draw(st.permutations(range(n)))[:k]
        op = core.random_haar_unitary(k, seed)
        psi = core.random_state(n, seed + 1)
        expected = expand_by_loops(op, targets, n) @ psi
        out = core.apply(op, psi, targets)
        np.testing.assert_allclose(out, expected, atol=TOL_ALG)
        assert abs(np.linalg.norm(out) - 1) <= TOL_NORM

    def test_expand_matches_loops(self):
        op = core.random_haar_unitary(2, 11)
        np.testing.assert_allclose(core.expand(op, [2, 0], 3), expand_by_loops(op, [2, 0], 3),
                                   atol=TOL_ALG)


class TestInnerProduct:
    def test_basis(self):
        assert core.inner_product(ZERO, ZERO) == 1
        assert core.inner_product(ZERO, ONE) == 0

    def test_phi_plus_against_z(self):
        assert abs(core.inner_product(PHI_PLUS, core.apply(Z, PHI_PLUS, [1]))) < TOL_ALG

    def test_conjugates_first_argument(self):
        a = np.array([1j, 0])
        assert core.inner_product(a, a) == 1
        assert core.inner_product(a, ZERO) == -1j

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            core.inner_product(ZERO, PHI_PLUS)


class TestUnitarity:
    def test_examples(self):
        assert core.is_unitary(np.eye(2))
        assert core.is_unitary(H)
        assert not core.is_unitary(np.array([[1, 1], [0, 1]]))

    def test_phase_equivalence(self):
        assert core.equal_up_to_global_phase(ZERO, np.exp(1j * np.pi / 3) * ZERO)
        assert not core.equal_up_to_global_phase(X, Z)
        assert core.equal_up_to_global_phase(Y, 1j * Y)
        assert not core.equal_up_to_global_phase(ZERO, ONE)

    def test_phase_equivalence_errors(self):
        with pytest.raises(DimensionError):
            core.equal_up_to_global_phase(X, np.eye(4))
        with pytest.raises(ValueError):
            core.equal_up_to_global_phase(np.zeros(2), ZERO)


class TestHaar:
    def test_deterministic(self):
        a = core.random_haar_unitary(1, 42)
        b = core.random_haar_unitary(1, 42)
        assert a.tobytes() == b.tobytes()

    def test_unitary(self):
        assert core.is_unitary(core.random_haar_unitary(2, 7), 1e-10)

    @pytest.mark.parametrize("seed", range(10))
    def test_unit_determinant(self, seed):
        assert abs(abs(np.linalg.det(core.random_haar_unitary(1, seed))) - 1) < 1e-10

    def test_diagonal_phase_correction_spreads_phases(self):
        # without the correction, QR conventions pin diag(R) real-positive and bias Q
        phases = [np.angle(core.random_haar_unitary(1, s)[0, 0]) for s in range(2000)]
        hist, _ = np.histogram(phases, bins=4, range=(-np.pi, np.pi))
        assert hist.min() > 400

    def test_rejects_zero_qubits(self):
        with pytest.raises(ValueError):
            core.random_haar_unitary(0, 1)


class TestChannels:
    def test_identity_channel(self):
        rho = core.density(core.random_state(1, 3))
        np.testing.assert_allclose(core.apply_channel(core.identity_channel(), rho, [0]), rho,
                                   atol=TOL_ALG)

    def test_full_damping(self):
        ch = core.KrausChannel((np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]])))
        out = core.apply_channel(ch, core.density(ONE), [0])
        np.testing.assert_allclose(out, core.density(ZERO), atol=TOL_ALG)

    def test_amplitude_damping_hand_value(self):
        out = core.apply_channel(core.amplitude_damping(0.3), core.density(ONE), [0])
        np.testing.assert_allclose(out, np.diag([0.3, 0.7]), atol=TOL_ALG)

    def test_single_unitary_kraus_is_conjugation(self):
        u = core.random_haar_unitary(1, 5)
        rho = core.density(core.random_state(2, 6))
        out = core.apply_channel(core.unitary_channel(u), rho, [1])
        full = np.kron(np.eye(2), u)
        np.testing.assert_allclose(out, full @ rho @ full.conj().T, atol=TOL_ALG)

    def test_output_is_density(self):
        rho = core.density(core.random_state(2, 8))
        out = core.apply_channel(core.dephasing(0.4), rho, [0])
        assert core.is_density_matrix(out)

    def test_completeness_checked(self):
        with pytest.raises(core.InvalidChannelError):
            core.KrausChannel((np.diag([1.0, 0.5]),))

    def test_arity_checked(self):
        with pytest.raises(DimensionError):
            core.apply_channel(core.identity_channel(), core.density(PHI_PLUS), [0, 1])


class TestPartialTrace:
    def test_product_state(self):
        out = core.partial_trace(core.density(core.basis_state(0, 2)), [0])
        np.testing.assert_allclose(out, core.density(ZERO), atol=TOL_ALG)

    @pytest.mark.parametrize("keep", [[0], [1]])
    def test_phi_plus(self, keep):
        np.testing.assert_allclose(core.partial_trace(core.density(PHI_PLUS), keep),
                                   np.eye(2) / 2, atol=TOL_ALG)

    def test_psi_plus(self):
        psi = np.array([0, 1, 1, 0]) / np.sqrt(2)
        np.testing.assert_allclose(core.partial_trace(core.density(psi), [1]), np.eye(2) / 2,
                                   atol=TOL_ALG)

    def test_product_of_densities(self):
        ra = core.density(core.random_state(2, 1))
        rb = core.density(core.random_state(1, 2))
        np.testing.assert_allclose(core.partial_trace(np.kron(ra, rb), [0, 1]), ra, atol=TOL_ALG)

    @pytest.mark.parametrize("keep", [[0], [2], [1, 0], [0, 2], [2, 1, 0]])
    def test_matches_loops(self, keep):
        rho = core.density(core.random_state(3, 9))
        out = core.partial_trace(rho, keep)
        np.testing.assert_allclose(out, partial_trace_by_loops(rho, keep, 3), atol=TOL_ALG)
        assert abs(np.trace(out) - 1) < TOL_ALG

    def test_bad_keep(self):
        with pytest.raises(DimensionError):
            core.partial_trace(core.density(PHI_PLUS), [2])
        with pytest.raises(DimensionError):
            core.partial_trace(core.density(PHI_PLUS), [])


def test_as_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        core.as_state([1, 1])
    with pytest.raises(DimensionError):
        core.as_state([1, 0, 0])
