"""
Leading eigenvalue of A = M_layer - M_G, depth to reach an epsilon-approximate 2-design,
and the variance-gap bound 3 lambda^L ||O||_1^2.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, eigs

from lie_plateau.core.constants import (
    ARNOLDI_NCV,
    DEFAULT_LAMBDA_TOL,
    DENSE_EIGEN_MAX_QUBITS,
    DEPTH_ROUNDING_SLACK,
    LAMBDA_METHODS,
    POWER_ITERATION_MAX_ITER,
    POWER_ITERATION_RESTARTS,
)
from lie_plateau.core.exceptions import InvalidParameterError, NonConvergenceError
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.moments.operators import DeviationOperator
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import track_eigensolve

logger = get_logger(__name__)

# arnoldi needs k + 1 < ncv < size; smaller operators go through the dense path
_ARNOLDI_MIN_QUBITS = 4


def _dense_lambda(operator: DeviationOperator) -> float:
    eigenvalues = np.linalg.eigvals(operator.to_dense())
    return float(np.max(np.abs(eigenvalues)))


def _power_lambda(operator: DeviationOperator, tol: float, seed: int,
                  max_iter: int = POWER_ITERATION_MAX_ITER) -> float:
    """
    Restarted power iteration on A, started from nonnegative vectors with the fixed
    directions projected out; |lambda| estimated as sqrt(||A^2 v|| / ||v||) so that
    pairs of equal-magnitude eigenvalues do not make the estimate oscillate.
    """
    rng = np.random.default_rng(seed)
    best = 0.0
    for restart in range(POWER_ITERATION_RESTARTS):
        v = operator.project_out_fixed(rng.random(operator.size))
        size = np.linalg.norm(v)
        if size == 0.0:
            continue
        v /= size
        estimate = 0.0
        converged = False
        for iteration in range(max_iter):
            w = operator.apply(operator.apply(v))
            w_norm = np.linalg.norm(w)
            if w_norm <= 1e-300:
                estimate, converged = 0.0, True
                break
            new_estimate = math.sqrt(w_norm)
            residual = abs(new_estimate - estimate)
            v = operator.project_out_fixed(w / w_norm)
            v /= max(np.linalg.norm(v), 1e-300)
            estimate = new_estimate
            if residual < tol:
                converged = True
                break
        if not converged:
            raise NonConvergenceError(
                f"Power iteration for n={operator.n} did not converge in {max_iter} iterations",
                residual=residual,
                iterations=max_iter,
            )
        logger.debug(f"Power iteration restart {restart}: |lambda|={estimate:.10f} after {iteration + 1} steps")
        best = max(best, estimate)
    return best


def _arnoldi_lambda(operator: DeviationOperator, tol: float, seed: int) -> float:
    rng = np.random.default_rng(seed)
    start = operator.project_out_fixed(rng.random(operator.size))
    ncv = min(ARNOLDI_NCV, operator.size - 1)
    try:
        values = eigs(operator.as_linear_operator(), k=1, which="LM", ncv=ncv, tol=tol,
                      v0=start, maxiter=POWER_ITERATION_MAX_ITER, return_eigenvectors=False)
    except ArpackNoConvergence as e:
        raise NonConvergenceError(f"Arnoldi for n={operator.n} did not converge: {e}", iterations=POWER_ITERATION_MAX_ITER)
    return float(np.max(np.abs(values)))


def lambda_max(n: int, tol: float = DEFAULT_LAMBDA_TOL, method: str = "auto", seed: int = 0) -> float:
    """
    Largest |eigenvalue| of M_layer - M_G for n-qubit Haar SU(4) brickwork.

    Methods: 'dense', 'power', 'arnoldi'; 'auto' is dense up to DENSE_EIGEN_MAX_QUBITS.
    Values below tol are reported as 0.
    """
    if method not in LAMBDA_METHODS:
        raise InvalidParameterError(f"Unknown eigensolver {method!r}, expected one of {LAMBDA_METHODS}")
    operator = DeviationOperator(n)
    chosen = method
    if method == "auto":
        chosen = "dense" if n <= DENSE_EIGEN_MAX_QUBITS else "arnoldi"
    if chosen == "arnoldi" and n < _ARNOLDI_MIN_QUBITS:
        chosen = "dense"

    with track_eigensolve(chosen):
        if chosen == "dense":
            value = _dense_lambda(operator)
        elif chosen == "power":
            value = _power_lambda(operator, tol, seed)
        else:
            value = _arnoldi_lambda(operator, tol, seed)

    value = 0.0 if value < tol else value
    logger.info(f"lambda_max(n={n}) = {value:.8f} ({chosen})")
    return value


def depth_for_epsilon(lam: float, epsilon: float) -> int:
    """Smallest L with lam^L <= epsilon, i.e. ceil(log(1/epsilon) / log(1/lam))"""
    if lam < 0:
        raise InvalidParameterError(f"lambda must be non-negative, got {lam}")
    if lam >= 1:
        raise InvalidParameterError(f"lambda={lam} >= 1 gives no convergence guarantee")
    if epsilon <= 0:
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= 1 or lam == 0:
        return 1
    depth = math.ceil(math.log(1.0 / epsilon) / math.log(1.0 / lam) - DEPTH_ROUNDING_SLACK)
    return max(1, depth)


def variance_gap_bound(lam: float, layers: int, observable: HermitianOp) -> float:
    """3 lam^L ||O||_1^2"""
    if layers < 0:
        raise InvalidParameterError(f"layers must be >= 0, got {layers}")
    return 3.0 * lam ** layers * observable.trace_norm() ** 2


@dataclass
class ExpressivenessReport:
    n: int
    lambda_max: float
    epsilon_targets: List[Tuple[float, int]] = field(default_factory=list)
    gap_bounds: List[Tuple[int, float]] = field(default_factory=list)
    method: str = "auto"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda_max": self.lambda_max,
            "method": self.method,
            "epsilon_targets": [{"epsilon": eps, "L": depth} for eps, depth in self.epsilon_targets],
            "gap_bounds": [{"L": depth, "bound": bound} for depth, bound in self.gap_bounds],
        }


def expressiveness_report(n: int, epsilons: Sequence[float], observable: Optional[HermitianOp] = None,
                          layers: Optional[Sequence[int]] = None, method: str = "auto",
                          tol: float = DEFAULT_LAMBDA_TOL) -> ExpressivenessReport:
    lam = lambda_max(n, tol=tol, method=method)
    report = ExpressivenessReport(n=n, lambda_max=lam, method=method)
    if lam < 1:
        report.epsilon_targets = [(float(eps), depth_for_epsilon(lam, eps)) for eps in epsilons]
    if observable is not None and layers:
        report.gap_bounds = [(int(L), variance_gap_bound(lam, int(L), observable)) for L in layers]
    return report
