"""
Projections onto DLA components and g-purities.

For an orthonormal component basis B_j = sum_k b_jk P_k / sqrt(2^n), the coefficient of a
Hermitian H along B_j is a_j = sum_k b_jk Tr[P_k H] / sqrt(2^n). Only the Pauli traces on the
component's support are needed, so pure states never have to be densified.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from lie_plateau.core.constants import (
    MEMBERSHIP_REL_TOL,
    STATE_MEMBERSHIP_REL_TOL_SQ,
    ERROR_MISMATCHED_N,
    ERROR_PROBABILITY_RANGE,
)
from lie_plateau.core.exceptions import DimensionMismatchError, InvalidParameterError
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.dla import DlaBasis, DlaDecomposition
from lie_plateau.core.dla.basis import hs_scale, operator_from_vector
from lie_plateau.core.purity.states import Gate, QuantumState
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

Projectable = Union[HermitianOp, QuantumState]


def _check_n(H: Projectable, component: DlaBasis):
    if H.n != component.n:
        raise DimensionMismatchError(ERROR_MISMATCHED_N.format(a=H.n, b=component.n))


def component_coefficients(H: Projectable, component: DlaBasis) -> np.ndarray:
    """<B_j, H> for every element of the component"""
    _check_n(H, component)
    if component.dim == 0:
        return np.zeros(0)
    traces = {key: H.pauli_trace(*key) for key in component.keys()}
    return component.coordinates(traces) / hs_scale(component.n)


def project(H: Projectable, component: DlaBasis) -> HermitianOp:
    """Orthogonal projection H_g = sum_j <B_j, H> B_j, in Pauli-term form"""
    coefficients = component_coefficients(H, component)
    return operator_from_vector(component.combine(coefficients), component.n)


def g_purity(H: Projectable, component: DlaBasis) -> float:
    """Tr[H_g^2] = sum_j <B_j, H>^2"""
    coefficients = component_coefficients(H, component)
    return float(np.dot(coefficients, coefficients))


def _hs_norm_sq(H: Projectable) -> float:
    if isinstance(H, QuantumState):
        return H.standard_purity()
    return H.hs_norm_sq()


def membership_residual(H: Projectable, basis: DlaBasis) -> float:
    """||H - H_g||_2"""
    if isinstance(H, QuantumState):
        # states only expose traces, Pythagoras gives the residual
        return float(np.sqrt(max(H.standard_purity() - g_purity(H, basis), 0.0)))
    residual = H - project(H, basis)
    return float(np.sqrt(max(residual.hs_norm_sq(), 0.0)))


def membership(H: Projectable, basis: DlaBasis) -> bool:
    """True iff H lies in i*g (relative residual below the membership tolerance)"""
    total = _hs_norm_sq(H)
    if isinstance(H, QuantumState):
        return total - g_purity(H, basis) <= STATE_MEMBERSHIP_REL_TOL_SQ * total
    return membership_residual(H, basis) <= MEMBERSHIP_REL_TOL * np.sqrt(total)


@dataclass
class ComponentPurity:
    component: str
    dim: int
    purity: float


@dataclass
class PurityReport:
    """g_j-purities of one operator or state over every component of a decomposition"""

    per_component: List[ComponentPurity]
    total: float
    hs_norm_sq: float
    projections: Dict[str, HermitianOp] = field(default_factory=dict)

    def purity_of(self, component: str) -> float:
        for entry in self.per_component:
            if entry.component == component:
                return entry.purity
        raise KeyError(component)

    def to_dict(self) -> dict:
        return {
            "components": [
                {"component": c.component, "dim": c.dim, "purity": c.purity} for c in self.per_component
            ],
            "total": self.total,
            "hs_norm_sq": self.hs_norm_sq,
        }


def purity_report(H: Projectable, decomposition: DlaDecomposition,
                  keep_projections: bool = False) -> PurityReport:
    entries = []
    projections = {}
    for label, component in decomposition.components().items():
        coefficients = component_coefficients(H, component)
        entries.append(ComponentPurity(label, component.dim, float(np.dot(coefficients, coefficients))))
        if keep_projections:
            projections[label] = operator_from_vector(component.combine(coefficients), component.n)
    total = float(sum(entry.purity for entry in entries))
    return PurityReport(entries, total, _hs_norm_sq(H), projections)


def apply_global_depolarizing(state: QuantumState, p: float) -> QuantumState:
    """(1 - p) rho + p I / 2^n"""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(ERROR_PROBABILITY_RANGE.format(p=p))
    out = state.copy()
    out.white_noise = 1.0 - (1.0 - p) * (1.0 - state.white_noise)
    return out


def apply_state_prep_unitary(state: QuantumState, gates: List[Gate]) -> QuantumState:
    """V rho V^dagger for V given as a gate list (first gate applied first)"""
    out = state.evolve(gates)
    logger.debug(f"Applied {len(gates)} state-prep gates on n={state.n}")
    return out
