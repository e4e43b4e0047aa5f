"""
Exact loss mean and variance over a reductive DLA.

    mean     = Tr[rho_center O_center]
    variance = sum_j P_{g_j}(rho) P_{g_j}(O) / dim(g_j)   over the simple ideals

Both hold when rho or O lies in i*g; outside that the functions refuse.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Union

import numpy as np

from lie_plateau.core.constants import ERROR_OUTSIDE_THEORY, ERROR_TRUNCATED
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    OutsideTheoryError,
    TruncatedDlaError,
)
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.dla import DlaDecomposition
from lie_plateau.core.purity import QuantumState, component_coefficients, membership
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)

StateLike = Union[QuantumState, HermitianOp]


@dataclass
class IdealContribution:
    ideal: str
    dim: int
    purity_rho: float
    purity_O: float

    @property
    def contribution(self) -> float:
        return self.purity_rho * self.purity_O / self.dim

    def to_dict(self) -> dict:
        return {
            "ideal": self.ideal,
            "dim": self.dim,
            "purity_rho": self.purity_rho,
            "purity_O": self.purity_O,
            "contribution": self.contribution,
        }


@dataclass
class VariancePrediction:
    """Mean, variance and the per-ideal pieces they are assembled from"""

    mean: float
    per_ideal: List[IdealContribution]
    hypothesis: Dict[str, bool] = field(default_factory=dict)

    @property
    def variance(self) -> float:
        return float(sum(entry.contribution for entry in self.per_ideal))

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "variance": self.variance,
            "ideals": [entry.to_dict() for entry in self.per_ideal],
            "hypothesis": dict(self.hypothesis),
        }


def _check_inputs(rho: StateLike, O: HermitianOp, decomposition: DlaDecomposition) -> Dict[str, bool]:
    full = decomposition.full
    if full.truncated:
        raise TruncatedDlaError(ERROR_TRUNCATED.format(cap=full.dim_cap))
    if rho.n != full.n or O.n != full.n:
        raise DimensionMismatchError(f"rho (n={rho.n}) and O (n={O.n}) must act on n={full.n}")
    hypothesis = {"rho_in_g": membership(rho, full), "O_in_g": membership(O, full)}
    if not (hypothesis["rho_in_g"] or hypothesis["O_in_g"]):
        logger.error(ERROR_OUTSIDE_THEORY)
        raise OutsideTheoryError(ERROR_OUTSIDE_THEORY, hypothesis=hypothesis)
    return hypothesis


def _center_mean(rho: StateLike, O: HermitianOp, decomposition: DlaDecomposition) -> float:
    center = decomposition.center
    if center.dim == 0:
        return 0.0
    a = component_coefficients(rho, center)
    b = component_coefficients(O, center)
    return float(np.dot(a, b))


def loss_mean(rho: StateLike, O: HermitianOp, decomposition: DlaDecomposition) -> float:
    """E_theta[Tr[U rho U^dagger O]]; zero for a centerless DLA"""
    _check_inputs(rho, O, decomposition)
    return _center_mean(rho, O, decomposition)


def loss_variance(rho: StateLike, O: HermitianOp, decomposition: DlaDecomposition) -> VariancePrediction:
    """Var_theta of the loss, one contribution per simple ideal"""
    hypothesis = _check_inputs(rho, O, decomposition)
    per_ideal = []
    for j, ideal in enumerate(decomposition.ideals):
        a = component_coefficients(rho, ideal)
        b = component_coefficients(O, ideal)
        per_ideal.append(IdealContribution(f"ideal_{j}", ideal.dim, float(np.dot(a, a)), float(np.dot(b, b))))
    prediction = VariancePrediction(
        mean=_center_mean(rho, O, decomposition),
        per_ideal=per_ideal,
        hypothesis=hypothesis,
    )
    logger.debug(f"Exact prediction n={decomposition.full.n}: mean={prediction.mean:.6g}, var={prediction.variance:.6g}")
    return prediction


def _purity(rho: StateLike) -> float:
    return rho.standard_purity() if isinstance(rho, QuantumState) else rho.hs_norm_sq()


def two_design_variance(rho: StateLike, O: HermitianOp) -> float:
    """
    Closed form when the circuit forms a 2-design over SU(2^n):
    (Tr[O^2] - Tr[O]^2 / 2^n)(Tr[rho^2] - 2^-n) / (4^n - 1)
    """
    if rho.n != O.n:
        raise DimensionMismatchError(f"rho on n={rho.n}, O on n={O.n}")
    d = float(1 << O.n)
    return (O.hs_norm_sq() - O.trace() ** 2 / d) * (_purity(rho) - 1.0 / d) / (d * d - 1.0)
