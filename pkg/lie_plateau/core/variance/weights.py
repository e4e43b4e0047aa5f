"""
Weight-state closed forms for simple DLAs.

A state commuting with a Cartan subalgebra h = span{H_j} has weight vector
lambda_j = Tr[H_j rho], and for O in i*g the variance is Tr[O^2] ||lambda||^2 / dim(g).
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from lie_plateau.core.constants import PHYSICS_TOL, ERROR_OUTSIDE_THEORY
from lie_plateau.core.exceptions import (
    DecompositionError,
    DimensionMismatchError,
    NotAWeightStateError,
    OutsideTheoryError,
)
from lie_plateau.core.pauli import HermitianOp, pauli_action
from lie_plateau.core.dla import CartanBasis, DlaDecomposition, operator_from_vector
from lie_plateau.core.purity import QuantumState, component_coefficients, membership


@dataclass
class WeightVector:
    components: List[float]

    @property
    def norm_sq(self) -> float:
        return float(np.dot(self.components, self.components))


def _apply_terms(op: HermitianOp, psi: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(psi)
    for (x, z), coeff in op.coefficients().items():
        perm, phase = pauli_action(n, x, z)
        out += coeff * phase * psi[perm]
    return out


def _commutation_residual(rho: QuantumState, op: HermitianOp) -> float:
    if rho.is_pure_vector:
        psi = rho.statevector
        h_psi = _apply_terms(op, psi, rho.n)
        expectation = np.vdot(psi, h_psi)
        return float(np.linalg.norm(h_psi - expectation * psi))
    h = op.to_dense()
    return float(np.linalg.norm(h @ rho.density - rho.density @ h))


def weight_vector(rho: QuantumState, cartan: CartanBasis) -> WeightVector:
    """
    Components Tr[H_j rho] over the Cartan basis.

    Raises:
        NotAWeightStateError: rho fails to commute with some H_j
    """
    elements = cartan.elements
    if rho.n != elements.n:
        raise DimensionMismatchError(f"State on n={rho.n}, Cartan basis on n={elements.n}")
    for vec in elements.vectors:
        residual = _commutation_residual(rho, operator_from_vector(vec, elements.n))
        if residual > PHYSICS_TOL:
            raise NotAWeightStateError(
                f"State does not commute with the Cartan subalgebra of {cartan.parent} (residual {residual:.2e})",
                residual=residual,
            )
    return WeightVector(list(component_coefficients(rho, elements)))


def _check_simple_member(O: HermitianOp, decomposition: DlaDecomposition):
    if not decomposition.is_simple:
        raise DecompositionError(
            f"Weight-state formula needs a simple DLA, got center dim {decomposition.center.dim} "
            f"and ideals {decomposition.dims}"
        )
    if not membership(O, decomposition.full):
        raise OutsideTheoryError(ERROR_OUTSIDE_THEORY, hypothesis={"rho_in_g": False, "O_in_g": False})


def weight_state_variance(rho: QuantumState, O: HermitianOp, decomposition: DlaDecomposition,
                          cartan: CartanBasis) -> float:
    """Tr[O^2] ||lambda_rho||^2 / dim(g) for a weight state rho and O in i*g"""
    _check_simple_member(O, decomposition)
    weights = weight_vector(rho, cartan)
    return O.hs_norm_sq() * weights.norm_sq / decomposition.full.dim


def weight_variance_upper_bound(O: HermitianOp, decomposition: DlaDecomposition,
                                hw_state: QuantumState, cartan: CartanBasis) -> float:
    """Largest weight-state variance for fixed O, reached at the highest-weight state"""
    return weight_state_variance(hw_state, O, decomposition, cartan)
