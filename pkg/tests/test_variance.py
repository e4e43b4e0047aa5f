"""
Unit tests for exact loss statistics, weight states, spin representations and BP diagnosis
"""
import numpy as np
import pytest

from lie_plateau.cli.setups import setup_problem
from lie_plateau.core.constants import (
    CAUSE_EXPRESSIVENESS,
    CAUSE_MIXED,
    CAUSE_OBSERVABLE,
    CAUSE_STATE,
    VERDICT_BP,
    VERDICT_NO_BP,
)
from lie_plateau.core.dla import cartan_subalgebra, decompose, lie_closure
from lie_plateau.core.exceptions import (
    DecompositionError,
    InvalidParameterError,
    NotAWeightStateError,
    OutsideTheoryError,
)
from lie_plateau.core.pauli import HermitianOp, hardware_efficient_generators, tfim_generators
from lie_plateau.core.purity import QuantumState, apply_global_depolarizing
from lie_plateau.core.variance import (
    FamilyPoint,
    bp_diagnose,
    evaluate_family,
    fit_trend,
    loss_mean,
    loss_variance,
    numerical_spin_variance,
    spin_matrices,
    spin_variance,
    two_design_variance,
    weight_state_variance,
    weight_variance_upper_bound,
    weight_vector,
)


class TestExactVariance:
    """Tests for the per-ideal variance formula"""

    def test_single_qubit_su2(self):
        """Test Var = 1/3 for |0> and Z under su(2)"""
        decomposition = decompose(lie_closure(["X", "Y"]), seed=0)
        prediction = loss_variance(QuantumState.zeros(1), HermitianOp.from_pauli("Z"), decomposition)
        assert prediction.variance == pytest.approx(1 / 3)
        assert prediction.mean == 0.0

    def test_su4_matches_two_design(self, su4_decomposition):
        """Test Var = 1/5 for su(4), equal to the 2-design closed form"""
        rho, O = QuantumState.zeros(2), HermitianOp.from_pauli("ZI")
        prediction = loss_variance(rho, O, su4_decomposition)
        assert prediction.variance == pytest.approx(0.2)
        assert two_design_variance(rho, O) == pytest.approx(0.2)

    def test_tfim_local_z(self, tfim3_decomposition):
        """Test Var = 1/(2n - 1) for |000> and Z on the first qubit"""
        prediction = loss_variance(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), tfim3_decomposition)
        assert prediction.variance == pytest.approx(0.2)
        assert prediction.hypothesis == {"rho_in_g": False, "O_in_g": True}
        (entry,) = prediction.per_ideal
        assert entry.dim == 15
        assert entry.purity_rho == pytest.approx(3 / 8)
        assert entry.purity_O == pytest.approx(8.0)

    def test_two_ideals_add(self, tfim2_decomposition):
        """Test that contributions from both su(2) ideals are summed"""
        prediction = loss_variance(QuantumState.zeros(2), HermitianOp.from_pauli("ZI"), tfim2_decomposition)
        assert len(prediction.per_ideal) == 2
        assert prediction.variance == pytest.approx(sum(e.contribution for e in prediction.per_ideal))
        assert prediction.variance > 0

    def test_center_mean(self):
        """Test that an observable in the center gives a constant loss"""
        decomposition = decompose(lie_closure(["XI", "YI", "IZ"]), seed=0)
        rho, O = QuantumState.zeros(2), HermitianOp.from_pauli("IZ")
        assert loss_mean(rho, O, decomposition) == pytest.approx(1.0)
        assert loss_variance(rho, O, decomposition).variance == pytest.approx(0.0, abs=1e-12)

    def test_outside_theory(self, tfim2_decomposition):
        """Test that neither rho nor O in i*g is refused"""
        with pytest.raises(OutsideTheoryError):
            loss_variance(QuantumState.zeros(2), HermitianOp.from_pauli("XZ"), tfim2_decomposition)

    def test_white_noise_scales_variance(self, tfim3_decomposition):
        """Test that depolarizing the input by p scales Var by (1 - p)^2"""
        noisy = apply_global_depolarizing(QuantumState.zeros(3), 0.2)
        prediction = loss_variance(noisy, HermitianOp.from_pauli("ZII"), tfim3_decomposition)
        assert prediction.variance == pytest.approx(0.64 * 0.2)

    def test_to_dict(self, tfim3_decomposition):
        """Test the report payload"""
        payload = loss_variance(QuantumState.zeros(3), HermitianOp.from_pauli("ZII"), tfim3_decomposition).to_dict()
        assert payload["variance"] == pytest.approx(0.2)
        assert payload["ideals"][0]["dim"] == 15


class TestWeightStates:
    """Tests for the weight-state closed form"""

    def test_highest_weight_matches_exact(self, tfim3_decomposition):
        """Test that |000> is a weight state of so(6) with ||lambda||^2 = n / 2^n"""
        cartan = cartan_subalgebra(tfim3_decomposition.full, seed=0)
        rho, O = QuantumState.zeros(3), HermitianOp.from_pauli("ZII")
        assert weight_vector(rho, cartan).norm_sq == pytest.approx(3 / 8)
        assert weight_state_variance(rho, O, tfim3_decomposition, cartan) == pytest.approx(0.2)
        assert weight_variance_upper_bound(O, tfim3_decomposition, rho, cartan) == pytest.approx(0.2)

    def test_not_a_weight_state(self, tfim3_decomposition):
        """Test that |+00> does not commute with the diagonal Cartan subalgebra"""
        cartan = cartan_subalgebra(tfim3_decomposition.full, seed=0)
        plus = np.kron(np.array([1.0, 1.0]) / np.sqrt(2), np.array([1.0, 0.0, 0.0, 0.0]))
        with pytest.raises(NotAWeightStateError):
            weight_vector(QuantumState.from_statevector(plus), cartan)

    def test_requires_simple_algebra(self, tfim2_decomposition):
        """Test that so(4) is refused by the simple-DLA formula"""
        cartan = cartan_subalgebra(tfim2_decomposition.full, seed=0)
        with pytest.raises(DecompositionError):
            weight_state_variance(QuantumState.zeros(2), HermitianOp.from_pauli("ZI"), tfim2_decomposition, cartan)


class TestSpin:
    """Tests for spin-S weight-state variances"""

    def test_spin_matrices_commutator(self):
        """Test [S_x, S_y] = i S_z"""
        sx, sy, sz = spin_matrices(1.5)
        np.testing.assert_allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-12)

    @pytest.mark.parametrize("S", [0.5, 1, 1.5, 2, 3])
    def test_highest_weight_normalized(self, S):
        """Test Var = 1/3 for |S, S> and O = S_z / S at every spin"""
        _, _, sz = spin_matrices(S)
        assert spin_variance(S, S, sz / S) == pytest.approx(1 / 3)

    def test_spin_one(self):
        """Test Var = 1/3 for S = 1, m = 1, O = S_z"""
        _, _, sz = spin_matrices(1)
        assert spin_variance(1, 1, sz) == pytest.approx(1 / 3)

    def test_spin_three_halves_lower_weight(self):
        """Test Var = 1/27 for S = 3/2, m = 1/2, O = S_z / S"""
        _, _, sz = spin_matrices(1.5)
        assert spin_variance(1.5, 0.5, sz / 1.5) == pytest.approx(1 / 27)

    @pytest.mark.parametrize("S,index", [(1, 0), (1.5, 1), (2, 2)])
    def test_quadrature_agrees(self, S, index):
        """Test the Haar quadrature against the closed form"""
        _, _, sz = spin_matrices(S)
        psi = np.zeros(int(2 * S) + 1)
        psi[index] = 1.0
        m = S - index
        assert numerical_spin_variance(S, psi, sz) == pytest.approx(spin_variance(S, m, sz), abs=1e-8)

    def test_invalid_weight(self):
        """Test that m outside -S..S or off the half-integer grid is refused"""
        _, _, sz = spin_matrices(1)
        with pytest.raises(InvalidParameterError):
            spin_variance(1, 2, sz)
        with pytest.raises(InvalidParameterError):
            spin_variance(1, 0.5, sz)

    def test_observable_outside_span(self):
        """Test that S_z^2 is not in span{S_x, S_y, S_z}"""
        _, _, sz = spin_matrices(1)
        with pytest.raises(OutsideTheoryError):
            spin_variance(1, 1, sz @ sz)


def _points(n_values, dim, purity_rho, purity_O, hs_norm):
    points = []
    for n in n_values:
        d, pr, po, hs = dim(n), purity_rho(n), purity_O(n), hs_norm(n)
        points.append(FamilyPoint(n=n, dim=d, purity_rho=pr, purity_O=po, hs_norm_O=hs, variance=pr * po / d))
    return points


class TestDiagnosis:
    """Tests for the BP verdict and its cause"""

    def test_fit_trend_line(self):
        """Test an exact line"""
        fit = fit_trend(np.array([1.0, 2.0, 3.0]), np.array([3.0, 5.0, 7.0]))
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.r2 == pytest.approx(1.0)

    def test_fit_trend_constant(self):
        """Test that a flat series is a perfect fit with zero slope"""
        fit = fit_trend(np.array([1.0, 2.0, 3.0]), np.array([4.0, 4.0, 4.0]))
        assert fit.slope == 0.0
        assert fit.r2 == 1.0

    def test_polynomial_family(self):
        """Test that so(2n) with a local observable has no BP"""
        points = _points(range(3, 9), lambda n: n * (2 * n - 1), lambda n: n / 2 ** n,
                         lambda n: 2.0 ** n, lambda n: 2.0 ** n)
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_NO_BP
        assert diagnosis.cause is None

    def test_expressiveness_cause(self):
        """Test that su(2^n) decays through the DLA dimension"""
        points = _points(range(3, 9), lambda n: 4 ** n - 1, lambda n: 1 - 2.0 ** -n,
                         lambda n: 2.0 ** n, lambda n: 2.0 ** n)
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_BP
        assert diagnosis.cause == CAUSE_EXPRESSIVENESS
        assert diagnosis.decay_base == pytest.approx(2.0, rel=0.1)

    def test_state_cause(self):
        """Test that a vanishing state purity is named as the cause"""
        points = _points(range(3, 9), lambda n: 10, lambda n: 4.0 ** -n, lambda n: 1.0, lambda n: 1.0)
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_BP
        assert diagnosis.cause == CAUSE_STATE

    def test_steepest_factor_without_threshold(self):
        """Test that a BP with no single exponential factor names the steepest one"""
        points = _points(range(3, 9), lambda n: 10, lambda n: 2.0 ** (-1.3 * n),
                         lambda n: 2.0 ** (-0.35 * n), lambda n: 1.0)
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_BP
        assert diagnosis.cause == CAUSE_OBSERVABLE

    def test_mixed_cause(self):
        """Test that two exponentially decaying factors are reported as mixed"""
        points = _points(range(3, 9), lambda n: 4 ** n - 1, lambda n: 4.0 ** -n,
                         lambda n: 2.0 ** n, lambda n: 2.0 ** n)
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_BP
        assert diagnosis.cause == CAUSE_MIXED

    def test_hardware_efficient_family(self):
        """Test that the controllable family decays as 1/(2^n + 1) through dim g"""
        def build(n):
            O = HermitianOp.from_pauli("Z" + "I" * (n - 1))
            return hardware_efficient_generators(n), QuantumState.zeros(n), O

        points = evaluate_family(build, [1, 2, 3, 4], seed=0)
        assert [p.dim for p in points] == [3, 15, 63, 255]
        assert [p.variance for p in points] == pytest.approx([1 / 3, 1 / 5, 1 / 9, 1 / 17])
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_BP
        assert diagnosis.cause == CAUSE_EXPRESSIVENESS

    def test_ising_setup_family(self):
        """Test that the Ising setup with X X + Z has Var = 2/(2n - 1) and no BP"""
        points = evaluate_family(lambda n: setup_problem(0, n, seed=0, prep_draws=1), [3, 4, 5, 6], seed=0)
        assert [p.dim for p in points] == [15, 28, 45, 66]
        assert [p.variance for p in points] == pytest.approx([2 / (2 * n - 1) for n in range(3, 7)])
        diagnosis = bp_diagnose(points)
        assert diagnosis.verdict == VERDICT_NO_BP
        assert diagnosis.cause is None

    def test_too_few_sizes(self):
        """Test that three sizes are not enough for a fit"""
        points = _points(range(3, 6), lambda n: 10, lambda n: 1.0, lambda n: 1.0, lambda n: 1.0)
        with pytest.raises(InvalidParameterError):
            bp_diagnose(points)

    def test_evaluate_family(self):
        """Test exact predictions for the Ising family at two sizes"""
        def build(n):
            O = HermitianOp.from_pauli("Z" + "I" * (n - 1))
            return tfim_generators(n), QuantumState.zeros(n), O

        points = evaluate_family(build, [3, 4], seed=0)
        assert [p.dim for p in points] == [15, 28]
        assert [p.variance for p in points] == pytest.approx([1 / 5, 1 / 7])

    def test_to_dict(self):
        """Test the diagnosis payload"""
        points = _points(range(3, 9), lambda n: 10, lambda n: 4.0 ** -n, lambda n: 1.0, lambda n: 1.0)
        payload = bp_diagnose(points).to_dict()
        assert payload["verdict"] == VERDICT_BP
        assert len(payload["points"]) == 6
        assert set(payload["factors"]) == {"state", "observable", "expressiveness"}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
