"""
Unit tests for quantum states, DLA projections and g-purities
"""
import numpy as np
import pytest

from lie_plateau.config.settings import reset_settings
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NonUnitaryGateError,
)
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.purity import (
    DenseGate,
    PauliRotation,
    QuantumState,
    apply_global_depolarizing,
    apply_state_prep_unitary,
    g_purity,
    local_rotation_matrix,
    membership,
    membership_residual,
    project,
    purity_report,
)
from lie_plateau.core.simulate import CircuitSpec


class TestQuantumState:
    """Tests for state construction and evolution"""

    def test_from_bits(self):
        """Test that bits[0] is qubit 0"""
        state = QuantumState.from_bits("100")
        assert state.expectation("ZII") == pytest.approx(-1.0)
        assert state.expectation("IZI") == pytest.approx(1.0)
        assert state.expectation("XII") == pytest.approx(0.0)

    def test_invalid_bits(self):
        """Test that non-binary text is rejected"""
        with pytest.raises(InvalidParameterError):
            QuantumState.from_bits("012")

    def test_statevector_normalization(self):
        """Test that an unnormalized vector is refused"""
        with pytest.raises(InvalidParameterError):
            QuantumState.from_statevector([1.0, 1.0])

    def test_statevector_length(self):
        """Test that a length that is not a power of two is refused"""
        with pytest.raises(DimensionMismatchError):
            QuantumState.from_statevector([1.0, 0.0, 0.0])

    def test_entangling_rotation(self):
        """Test that exp(i pi/4 XX)|00> = (|00> + i|11>)/sqrt(2)"""
        state = QuantumState.zeros(2).evolve([PauliRotation("XX", -np.pi / 4)])
        expected = np.array([1.0, 0.0, 0.0, 1j]) / np.sqrt(2)
        np.testing.assert_allclose(state.statevector, expected, atol=1e-12)

    def test_density_and_vector_agree(self):
        """Test that rotations act the same on both representations"""
        gates = [PauliRotation("XY", 0.37), PauliRotation("ZX", -1.1), DenseGate(local_rotation_matrix(0.2, -0.4, 0.9), (1,))]
        pure = QuantumState.zeros(2).evolve(gates)
        mixed = QuantumState.from_density(QuantumState.zeros(2).to_density()).evolve(gates)
        np.testing.assert_allclose(pure.to_density(), mixed.to_density(), atol=1e-12)

    def test_local_rotation_is_unitary(self):
        """Test the closed-form single-qubit rotation"""
        u = local_rotation_matrix(0.3, -0.7, 1.2)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)

    def test_non_unitary_gate(self):
        """Test that a non-unitary dense gate is refused"""
        with pytest.raises(NonUnitaryGateError):
            DenseGate(np.array([[1.0, 1.0], [0.0, 1.0]]), (0,))

    def test_standard_purity_with_noise(self):
        """Test Tr[rho^2] for a partly depolarized pure state"""
        state = apply_global_depolarizing(QuantumState.zeros(3), 0.5)
        assert state.standard_purity() == pytest.approx(0.34375)
        assert np.real(np.trace(state.to_density() @ state.to_density())) == pytest.approx(0.34375)

    def test_maximally_mixed(self):
        """Test that the maximally mixed state has no Pauli weight"""
        state = QuantumState.maximally_mixed(2)
        assert state.expectation("ZZ") == 0.0
        assert state.standard_purity() == pytest.approx(0.25)

    def test_statevector_limit_from_settings(self, monkeypatch):
        """Test that MAX_STATEVECTOR_QUBITS from the environment caps dense states"""
        monkeypatch.setenv("MAX_STATEVECTOR_QUBITS", "4")
        reset_settings()
        try:
            assert QuantumState.zeros(4).n == 4
            with pytest.raises(InvalidParameterError):
                QuantumState.zeros(5)
            with pytest.raises(InvalidParameterError):
                QuantumState.from_statevector(np.eye(1, 32).reshape(-1))
            with pytest.raises(InvalidParameterError):
                CircuitSpec(n=5, layer_generators=("ZIIII",))
        finally:
            reset_settings()


class TestProjection:
    """Tests for projections and g-purities"""

    def test_zero_state_purity(self, tfim3_decomposition):
        """Test that |000> has purity n / 2^n in so(6)"""
        assert g_purity(QuantumState.zeros(3), tfim3_decomposition.full) == pytest.approx(3 / 8)

    def test_observable_purity(self, tfim3_decomposition):
        """Test that a member observable keeps all of Tr[O^2]"""
        O = HermitianOp.from_pauli("ZII")
        assert g_purity(O, tfim3_decomposition.full) == pytest.approx(8.0)
        assert membership(O, tfim3_decomposition.full)
        assert membership_residual(O, tfim3_decomposition.full) == pytest.approx(0.0, abs=1e-10)
        assert project(O, tfim3_decomposition.full).allclose(O)

    def test_non_member_observable(self, tfim3_decomposition):
        """Test that X on one qubit lies outside so(6)"""
        O = HermitianOp.from_pauli("XII")
        assert not membership(O, tfim3_decomposition.full)
        assert membership_residual(O, tfim3_decomposition.full) == pytest.approx(np.sqrt(8.0))
        assert g_purity(O, tfim3_decomposition.full) == pytest.approx(0.0, abs=1e-12)

    def test_state_membership(self, tfim3_decomposition):
        """Test that a pure product state is not in i*g"""
        assert not membership(QuantumState.zeros(3), tfim3_decomposition.full)

    def test_purity_report_per_ideal(self, tfim2_decomposition):
        """Test purities split over the two su(2) ideals of so(4)"""
        report = purity_report(QuantumState.zeros(2), tfim2_decomposition, keep_projections=True)
        assert report.total == pytest.approx(2 / 4)
        assert report.purity_of("center") == 0.0
        assert report.purity_of("ideal_0") + report.purity_of("ideal_1") == pytest.approx(0.5)
        assert report.hs_norm_sq == pytest.approx(1.0)
        assert set(report.projections) == {"center", "ideal_0", "ideal_1"}
        with pytest.raises(KeyError):
            report.purity_of("ideal_7")

    def test_depolarizing_scales_purity(self, tfim3_decomposition):
        """Test that white noise scales the g-purity by (1 - p)^2"""
        noisy = apply_global_depolarizing(QuantumState.zeros(3), 0.5)
        assert g_purity(noisy, tfim3_decomposition.full) == pytest.approx(0.25 * 3 / 8)

    def test_depolarizing_range(self):
        """Test that p outside [0, 1] is refused"""
        with pytest.raises(InvalidParameterError):
            apply_global_depolarizing(QuantumState.zeros(1), 1.5)

    def test_group_unitary_preserves_purity(self, tfim3_decomposition):
        """Test that preparing with a DLA rotation leaves the purity unchanged"""
        state = apply_state_prep_unitary(QuantumState.zeros(3), [PauliRotation("XXI", 0.3), PauliRotation("IZI", 1.0)])
        assert g_purity(state, tfim3_decomposition.full) == pytest.approx(3 / 8)

    def test_outside_unitary_lowers_purity(self, tfim3_decomposition):
        """Test that a Y rotation on one qubit moves weight out of so(6)"""
        state = apply_state_prep_unitary(QuantumState.zeros(3), [PauliRotation("YII", 0.3)])
        expected = (np.cos(0.6) ** 2 + 2.0) / 8
        assert g_purity(state, tfim3_decomposition.full) == pytest.approx(expected)

    def test_mismatched_sizes(self, tfim3_decomposition):
        """Test that a 2-qubit state cannot be projected on a 3-qubit algebra"""
        with pytest.raises(DimensionMismatchError):
            g_purity(QuantumState.zeros(2), tfim3_decomposition.full)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
