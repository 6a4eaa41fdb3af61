import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgatearray import bell, core, progarray
from qgatearray.bell import CANONICAL_ORDER, BellOutcome, ZeroProbabilityBranch
from qgatearray.core import TOL_ALG

from oracles import BELL

S = 1 / np.sqrt(2)


def test_phi_plus_amplitudes():
    np.testing.assert_allclose(bell.bell_state(BellOutcome.PHI_PLUS), [S, 0, 0, S], atol=TOL_ALG)


def test_psi_minus_amplitudes():
    np.testing.assert_allclose(bell.bell_state(BellOutcome.PSI_MINUS), [0, S, -S, 0], atol=TOL_ALG)


def test_matches_definitions():
    for kind in CANONICAL_ORDER:
        np.testing.assert_allclose(bell.bell_state(kind), BELL[kind.value], atol=TOL_ALG)


def test_orthonormal():
    for a, b in itertools.product(CANONICAL_ORDER, repeat=2):
        ip = core.inner_product(bell.bell_state(a), bell.bell_state(b))
        assert abs(ip - (a is b)) < TOL_ALG


def test_projectors_complete():
    total = sum(bell.bell_projector(k) for k in CANONICAL_ORDER)
    np.testing.assert_allclose(total, np.eye(4), atol=TOL_ALG)


def test_canonical_order_and_labels():
    assert [k.value for k in CANONICAL_ORDER] == ["phi+", "phi-", "psi+", "psi-"]


class TestMeasure:
    @pytest.mark.parametrize("rand", [0.0, 0.3, 0.999])
    def test_eigenstate(self, rand):
        rec = bell.measure_bell(bell.bell_state(BellOutcome.PHI_PLUS), 0, 1, rand)
        assert rec.outcome is BellOutcome.PHI_PLUS
        assert abs(rec.probability - 1) < TOL_ALG

    def test_cumulative_rule_on_00(self):
        # |00> = (phi+ + phi-)/sqrt2: probabilities (1/2, 1/2, 0, 0); 0.3 < 0.5
        rec = bell.measure_bell(core.basis_state(0, 2), 0, 1, 0.3)
        assert rec.outcome is BellOutcome.PHI_PLUS
        np.testing.assert_allclose(rec.post_state, [S, 0, 0, S], atol=TOL_ALG)
        rec = bell.measure_bell(core.basis_state(0, 2), 0, 1, 0.7)
        assert rec.outcome is BellOutcome.PHI_MINUS

    def test_program_input_uniform(self):
        for s in range(10):
            u = core.random_haar_unitary(1, s)
            d = core.random_state(1, 50 + s)
            psi = progarray.assemble_input(d, progarray.encode_program(u))
            probs = bell.branch_probabilities(psi, 1, 0)
            np.testing.assert_allclose(probs, 0.25, atol=TOL_ALG)

    @pytest.mark.parametrize("rand", [-0.1, 1.0])
    def test_rand_range(self, rand):
        with pytest.raises(ValueError):
            bell.measure_bell(core.basis_state(0, 2), 0, 1, rand)

    def test_index_errors(self):
        with pytest.raises(core.DimensionError):
            bell.measure_bell(core.basis_state(0, 2), 0, 0, 0.1)
        with pytest.raises(core.DimensionError):
            bell.measure_bell(core.basis_state(0, 2), 0, 2, 0.1)

    def test_grid_frequencies_match_probabilities(self):
        psi = core.random_state(3, 4)
        probs = bell.branch_probabilities(psi, 2, 0)
        grid = np.arange(4000) / 4000
        counts = np.zeros(4)
        for r in grid:
            counts[bell.measure_bell(psi, 2, 0, r).outcome.index] += 1
        np.testing.assert_allclose(counts / len(grid), probs, atol=1 / len(grid) + 1e-12)

    def test_probability_field_is_projection_norm(self):
        psi = core.random_state(3, 5)
        rec = bell.measure_bell(psi, 1, 2, 0.6)
        p, _ = bell.branch_bell(psi, 1, 2, rec.outcome)
        assert abs(rec.probability - p) < TOL_ALG
        assert abs(np.linalg.norm(rec.post_state) - 1) < TOL_ALG


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 5), seed=st.integers(0, 2**32), data=st.data())
def test_branch_probabilities_sum_to_one(n, seed, data):
    qa, qb = data.draw(st.permutations(range(n)))[:2]
    probs = bell.branch_probabilities(core.random_state(n, seed), qa, qb)
    assert abs(probs.sum() - 1) < TOL_ALG
    assert probs.min() >= -TOL_ALG


class TestBranch:
    def test_certain_branch(self):
        phi = bell.bell_state(BellOutcome.PHI_PLUS)
        p, post = bell.branch_bell(phi, 0, 1, BellOutcome.PHI_PLUS)
        assert abs(p - 1) < TOL_ALG
        np.testing.assert_allclose(post, phi, atol=TOL_ALG)

    def test_zero_branch_signalled(self):
        phi = bell.bell_state(BellOutcome.PHI_PLUS)
        with pytest.raises(ZeroProbabilityBranch) as info:
            bell.branch_bell(phi, 0, 1, BellOutcome.PSI_MINUS)
        assert info.value.probability < TOL_ALG
        assert info.value.kind is BellOutcome.PSI_MINUS

    def test_teleports_u_d_onto_lower_program_qubit(self):
        u = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        d = core.random_state(1, 12)
        psi = progarray.assemble_input(d, progarray.encode_program(u))
        p, post = bell.branch_bell(psi, 0, 1, BellOutcome.PHI_PLUS)
        assert abs(p - 0.25) < TOL_ALG
        lower = core.contract(post, [0, 1], bell.bell_state(BellOutcome.PHI_PLUS))
        np.testing.assert_allclose(lower, u @ d, atol=TOL_ALG)
