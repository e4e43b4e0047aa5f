"""
Unit tests for brickwork second-moment operators and 2-design depth estimates
"""
import numpy as np
import pytest

from lie_plateau.core.exceptions import InvalidParameterError
from lie_plateau.core.moments import (
    SU4_BLOCK,
    DeviationOperator,
    build_group_moment,
    build_layer_moment,
    depth_for_epsilon,
    expressiveness_report,
    group_weights,
    lambda_max,
    swap_counts,
    variance_gap_bound,
)
from lie_plateau.core.pauli import HermitianOp


class TestMomentOperators:
    """Tests for the reduced moment operators"""

    def test_block_trace(self):
        """Test that the Haar SU(4) block keeps exactly II and SS"""
        assert np.trace(SU4_BLOCK) == pytest.approx(2.0)

    def test_swap_counts(self):
        """Test swap counts for n = 3"""
        assert list(swap_counts(3)) == [0, 1, 1, 2, 1, 2, 2, 3]

    def test_group_weights_two_qubits(self):
        """Test that the n = 2 Haar projector rows equal the SU(4) block"""
        a, c = group_weights(2)
        np.testing.assert_allclose(a, SU4_BLOCK[0])
        np.testing.assert_allclose(c, SU4_BLOCK[3])

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_group_moment_idempotent(self, n):
        """Test M_G^2 = M_G"""
        group = build_group_moment(n).to_dense()
        np.testing.assert_allclose(group @ group, group, atol=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_matrix_free_matches_sparse(self, n, rng):
        """Test that apply() and the explicit matrix agree"""
        layer = build_layer_moment(n)
        v = rng.standard_normal((1 << n, 3))
        np.testing.assert_allclose(layer.apply(v), layer.to_dense() @ v, atol=1e-12)
        np.testing.assert_allclose(layer.apply(v[:, 0]), layer.to_dense() @ v[:, 0], atol=1e-12)

    @pytest.mark.parametrize("n", [3, 4])
    def test_fixed_directions(self, n):
        """Test that all-I and all-S are fixed by a layer"""
        layer = build_layer_moment(n)
        for index in (0, (1 << n) - 1):
            e = np.zeros(1 << n)
            e[index] = 1.0
            np.testing.assert_allclose(layer.apply(e), e, atol=1e-12)

    def test_layer_power_absorbs_group(self):
        """Test M_G M_layer^L = M_G"""
        layer = build_layer_moment(4)
        group = build_group_moment(4).to_dense()
        np.testing.assert_allclose(group @ layer.power(3), group, atol=1e-10)

    def test_deviation_dense(self):
        """Test A = M_layer - M_G in dense form"""
        operator = DeviationOperator(3)
        expected = build_layer_moment(3).to_dense() - build_group_moment(3).to_dense()
        np.testing.assert_allclose(operator.to_dense(), expected)

    def test_too_small(self):
        """Test that one qubit has no moment operator"""
        with pytest.raises(InvalidParameterError):
            build_layer_moment(1)

    def test_negative_power(self):
        """Test that a negative layer count is refused"""
        with pytest.raises(InvalidParameterError):
            build_layer_moment(2).power(-1)


class TestLambdaMax:
    """Tests for the leading eigenvalue of the deviation operator"""

    @pytest.mark.parametrize("method", ["dense", "power", "arnoldi"])
    def test_two_qubits(self, method):
        """Test that one SU(4) gate is already Haar on two qubits"""
        assert lambda_max(2, method=method) == 0.0

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_inside_unit_interval(self, n):
        """Test 0 < lambda < 1 for n >= 3"""
        value = lambda_max(n)
        assert 0.0 < value < 1.0

    def test_dense_and_arnoldi_agree(self):
        """Test that the sparse eigensolver finds the dense value"""
        assert lambda_max(5, method="arnoldi") == pytest.approx(lambda_max(5, method="dense"), abs=1e-6)

    def test_unknown_method(self):
        """Test that an unknown eigensolver is refused"""
        with pytest.raises(InvalidParameterError):
            lambda_max(3, method="lanczos")

    @pytest.mark.slow
    def test_larger_system(self):
        """Test the matrix-free path above the dense limit"""
        assert 0.0 < lambda_max(12) < 1.0

    @pytest.mark.slow
    def test_twenty_qubits(self):
        """Test lambda_max = 0.639 for a 20-qubit brickwork, and its 1e-9 depth"""
        value = lambda_max(20)
        assert value == pytest.approx(0.639, abs=0.005)
        assert depth_for_epsilon(0.639, 1e-9) == 47


class TestDepth:
    """Tests for depth and variance-gap estimates"""

    def test_depth_values(self):
        """Test ceil(log(1/eps) / log(1/lambda))"""
        assert depth_for_epsilon(0.639, 1e-9) == 47
        assert depth_for_epsilon(0.5, 2.0 ** -10) == 10

    def test_depth_edges(self):
        """Test that eps >= 1 or lambda = 0 need a single layer"""
        assert depth_for_epsilon(0.5, 1.0) == 1
        assert depth_for_epsilon(0.0, 1e-12) == 1

    def test_depth_invalid(self):
        """Test that lambda >= 1 and eps <= 0 are refused"""
        with pytest.raises(InvalidParameterError):
            depth_for_epsilon(1.0, 0.1)
        with pytest.raises(InvalidParameterError):
            depth_for_epsilon(0.5, 0.0)

    def test_gap_bound(self):
        """Test 3 lambda^L ||O||_1^2 with ||Z||_1 = 2^n"""
        O = HermitianOp.from_pauli("ZII")
        assert variance_gap_bound(0.5, 2, O) == pytest.approx(48.0)
        assert variance_gap_bound(0.5, 0, O) == pytest.approx(192.0)

    def test_report(self):
        """Test a full report for two qubits"""
        report = expressiveness_report(2, [1e-3, 1e-6], observable=HermitianOp.from_pauli("ZI"), layers=[1, 2])
        assert report.lambda_max == 0.0
        assert report.epsilon_targets == [(1e-3, 1), (1e-6, 1)]
        assert report.gap_bounds == [(1, 0.0), (2, 0.0)]
        assert report.to_dict()["epsilon_targets"][0] == {"epsilon": 1e-3, "L": 1}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
