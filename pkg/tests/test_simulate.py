"""
Unit tests for circuit simulation, Haar sampling and Monte Carlo variance estimation
"""
import numpy as np
import pytest

from lie_plateau.core.exceptions import DimensionMismatchError, InvalidParameterError
from lie_plateau.core.pauli import HermitianOp, single_qubit_generators, tfim_generators
from lie_plateau.core.purity import QuantumState, apply_global_depolarizing
from lie_plateau.core.simulate import (
    CircuitSpec,
    CoherentError,
    CompiledCircuit,
    ConvergenceSpec,
    McEstimate,
    SpamNoise,
    apply_brickwork,
    apply_circuit,
    batch_stderr,
    brickwork_pairs,
    brickwork_state,
    brickwork_variance_mc,
    estimate_variance_mc,
    loss,
    sample_generators,
    sample_haar_su4,
    sample_haar_unitary,
)

MC_KWARGS = {"max_workers": 1, "show_progress": False}


@pytest.fixture
def tfim3_spec():
    return CircuitSpec(n=3, layer_generators=tuple(tfim_generators(3)), num_layers=2)


class TestCircuit:
    """Tests for layered Pauli-rotation circuits"""

    def test_compiled_matches_gate_list(self, tfim3_spec, rng):
        """Test that the batched kernel agrees with QuantumState.evolve"""
        spec = CircuitSpec(
            n=3,
            layer_generators=tfim3_spec.layer_generators,
            num_layers=2,
            coherent_errors=(CoherentError(1, "YII", 0.05),),
        )
        theta = spec.sample_parameters(rng)
        expected = apply_circuit(QuantumState.zeros(3), spec, theta).statevector
        kernel = CompiledCircuit(spec)
        psi = kernel.run(QuantumState.zeros(3).statevector[None, :], theta[None, :], spec.num_layers)
        np.testing.assert_allclose(psi[0], expected, atol=1e-12)

    def test_loss_matches_kernel(self, tfim3_spec, rng):
        """Test that both paths give the same loss"""
        O = HermitianOp.from_terms([(1.0, "ZII"), (0.5, "XXI")])
        theta = tfim3_spec.sample_parameters(rng)
        kernel = CompiledCircuit(tfim3_spec)
        psi = kernel.run(QuantumState.zeros(3).statevector[None, :], theta[None, :], 2)
        assert loss(QuantumState.zeros(3), O, tfim3_spec, theta) == pytest.approx(kernel.expectations(psi, O)[0])

    def test_spam_rescales_loss(self, rng):
        """Test loss -> (1 - p) loss + p Tr[O] / 2^n"""
        generators = tuple(tfim_generators(2))
        clean = CircuitSpec(n=2, layer_generators=generators)
        noisy = CircuitSpec(n=2, layer_generators=generators, spam=SpamNoise(p_before=0.1, p_after=0.2))
        O = HermitianOp.from_terms([(1.0, "ZI"), (0.5, "II")])
        theta = clean.sample_parameters(rng)
        keep = 0.9 * 0.8
        expected = keep * loss(QuantumState.zeros(2), O, clean, theta) + (1 - keep) * 0.5
        assert loss(QuantumState.zeros(2), O, noisy, theta) == pytest.approx(expected)

    def test_parameter_count(self, tfim3_spec):
        """Test that parameters are layer-major, one per gate"""
        assert tfim3_spec.num_parameters == 10
        with pytest.raises(DimensionMismatchError):
            apply_circuit(QuantumState.zeros(3), tfim3_spec, np.zeros(3))

    def test_deeper_draw_extends_shallower(self, tfim3_spec):
        """Test that a deeper parameter draw has the shallower one as prefix"""
        short = tfim3_spec.sample_parameters(np.random.default_rng(5), 2)
        long = tfim3_spec.sample_parameters(np.random.default_rng(5), 4)
        np.testing.assert_allclose(long[:short.size], short)

    def test_unknown_distribution(self):
        """Test that only uniform and normal draws exist"""
        with pytest.raises(InvalidParameterError):
            CircuitSpec(n=1, layer_generators=("X",), parameter_distribution="cauchy")

    def test_error_gate_index(self):
        """Test that a coherent error must follow an existing gate"""
        with pytest.raises(InvalidParameterError):
            CircuitSpec(n=1, layer_generators=("X", "Y"), coherent_errors=(CoherentError(2, "Z", 0.1),))

    def test_spam_range(self):
        """Test that SPAM probabilities stay in [0, 1]"""
        with pytest.raises(InvalidParameterError):
            SpamNoise(p_before=-0.1)


class TestHaar:
    """Tests for Haar unitaries"""

    def test_unitary(self, rng):
        """Test U^dagger U = 1 for a batch"""
        batch = sample_haar_unitary(8, rng, size=5)
        for u in batch:
            np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-12)

    def test_special(self, rng):
        """Test that SU(4) samples have unit determinant"""
        for u in sample_haar_su4(rng, size=10):
            assert np.linalg.det(u) == pytest.approx(1.0)

    def test_first_moment(self, rng):
        """Test E|U_00|^2 = 1/d"""
        batch = sample_haar_unitary(4, rng, size=4000)
        assert np.mean(np.abs(batch[:, 0, 0]) ** 2) == pytest.approx(0.25, abs=0.02)

    def test_invalid_dimension(self, rng):
        """Test that dim 0 is refused"""
        with pytest.raises(InvalidParameterError):
            sample_haar_unitary(0, rng)


class TestBrickwork:
    """Tests for Haar brickwork circuits"""

    def test_pairs(self):
        """Test even sublayer first, then odd"""
        assert brickwork_pairs(4) == [(0, 1), (2, 3), (1, 2)]
        assert brickwork_pairs(5) == [(0, 1), (2, 3), (1, 2), (3, 4)]

    def test_identity_gates(self, rng):
        """Test that identity gates leave the state unchanged"""
        psi = sample_haar_unitary(16, rng)[:, 0][None, :]
        gates = np.broadcast_to(np.eye(4), (1, 2, 3, 4, 4)).astype(complex)
        np.testing.assert_allclose(apply_brickwork(psi, gates, 4), psi, atol=1e-12)

    def test_state_normalized(self, rng):
        """Test that a random brickwork state has unit norm"""
        state = brickwork_state(5, 3, rng)
        assert np.linalg.norm(state.statevector) == pytest.approx(1.0)

    def test_too_small(self, rng):
        """Test that one qubit has no brickwork"""
        with pytest.raises(InvalidParameterError):
            brickwork_state(1, 1, rng)

    def test_two_qubit_variance(self, seed):
        """Test that one Haar SU(4) gate reproduces the 2-design value 1/5"""
        estimate = brickwork_variance_mc(2, 1, QuantumState.zeros(2), HermitianOp.from_pauli("ZI"),
                                         num_samples=3000, seed=seed, **MC_KWARGS)
        assert estimate.variance_hat == pytest.approx(0.2, abs=0.03)


class TestMonteCarlo:
    """Tests for the Monte Carlo estimator"""

    def test_sample_streams_reproducible(self):
        """Test that the same seed gives the same per-sample streams"""
        a = [g.random() for g in sample_generators(11, 5)]
        b = [g.random() for g in sample_generators(11, 5)]
        assert a == b
        assert len(set(a)) == 5

    def test_batch_stderr_small_input(self):
        """Test that too few samples for two batches give nan"""
        assert np.isnan(batch_stderr(np.array([0.1, 0.2, 0.3]), batches=20))

    def test_chunking_does_not_change_result(self, tfim3_spec, seed):
        """Test that chunk size does not change the estimate"""
        O = HermitianOp.from_pauli("ZII")
        a = estimate_variance_mc(QuantumState.zeros(3), O, tfim3_spec, 300, seed, chunk_size=7, **MC_KWARGS)
        b = estimate_variance_mc(QuantumState.zeros(3), O, tfim3_spec, 300, seed, chunk_size=128, **MC_KWARGS)
        assert a.variance_hat == pytest.approx(b.variance_hat, rel=1e-12)
        assert a.mean_hat == pytest.approx(b.mean_hat, abs=1e-12)

    def test_single_qubit_variance(self, seed):
        """Test Var = 1/3 for su(2) on one qubit"""
        spec = CircuitSpec(n=1, layer_generators=tuple(single_qubit_generators(1)), num_layers=10)
        estimate = estimate_variance_mc(QuantumState.zeros(1), HermitianOp.from_pauli("Z"), spec, 3000, seed, **MC_KWARGS)
        assert estimate.variance_hat == pytest.approx(1 / 3, abs=0.03)

    def test_tfim_variance(self, seed):
        """Test Var = 1/5 for the 3-qubit Ising chain"""
        spec = CircuitSpec(n=3, layer_generators=tuple(tfim_generators(3)), num_layers=20)
        estimate = estimate_variance_mc(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), spec, 2000, seed, **MC_KWARGS)
        assert estimate.variance_hat == pytest.approx(0.2, abs=0.03)
        assert estimate.converged
        assert estimate.history == [(20, estimate.variance_hat)]

    def test_white_noise_lowers_variance(self, seed):
        """Test that depolarized inputs scale the estimate by (1 - p)^2"""
        spec = CircuitSpec(n=3, layer_generators=tuple(tfim_generators(3)), num_layers=4)
        O = HermitianOp.from_pauli("ZII")
        clean = estimate_variance_mc(QuantumState.zeros(3), O, spec, 500, seed, **MC_KWARGS)
        noisy = estimate_variance_mc(apply_global_depolarizing(QuantumState.zeros(3), 0.5), O, spec, 500, seed, **MC_KWARGS)
        assert noisy.variance_hat == pytest.approx(0.25 * clean.variance_hat)

    def test_layer_doubling_converges(self, tfim3_spec, seed):
        """Test that a loose tolerance stops after the first doubling"""
        convergence = ConvergenceSpec(rel_tol=10.0, max_layers=8, initial_layers=2)
        estimate = estimate_variance_mc(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), tfim3_spec,
                                        200, seed, convergence=convergence, **MC_KWARGS)
        assert estimate.converged
        assert estimate.layers_used == 4
        assert [layers for layers, _ in estimate.history] == [2, 4]

    def test_layer_doubling_exhausted(self, tfim3_spec, seed):
        """Test that hitting max_layers without a doubling reports non-convergence"""
        convergence = ConvergenceSpec(max_layers=4, initial_layers=4)
        estimate = estimate_variance_mc(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), tfim3_spec,
                                        200, seed, convergence=convergence, **MC_KWARGS)
        assert not estimate.converged
        assert estimate.layers_used == 4

    def test_too_few_samples(self, tfim3_spec):
        """Test that fewer than 100 samples are refused"""
        with pytest.raises(InvalidParameterError):
            estimate_variance_mc(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), tfim3_spec, 10, 0, **MC_KWARGS)

    def test_z_score(self):
        """Test the standardized distance to the exact value"""
        estimate = McEstimate(num_samples=100, mean_hat=0.0, variance_hat=0.25, stderr_of_variance=0.05,
                              seed=0, layers_used=1, converged=True)
        assert estimate.z_score(0.2) == pytest.approx(1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
