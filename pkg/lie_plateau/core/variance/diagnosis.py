"""
Barren plateau classification over a family of system sizes.

log2(Var) is fitted against n (exponential decay) and against log2(n) (polynomial decay).
The same two fits applied to the three factors of the variance formula name the cause:
    state          log2(2^n P_g(rho))
    observable     log2(P_g(O) / Tr[O^2])
    expressiveness -log2(dim g)
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from lie_plateau.core.constants import (
    BP_R2_THRESHOLD,
    BP_SLOPE_THRESHOLD,
    CAUSE_EXPRESSIVENESS,
    CAUSE_MIXED,
    CAUSE_OBSERVABLE,
    CAUSE_STATE,
    MIN_FAMILY_SIZES,
    VERDICT_BP,
    VERDICT_INCONCLUSIVE,
    VERDICT_NO_BP,
)
from lie_plateau.core.exceptions import InvalidParameterError
from lie_plateau.core.pauli import HermitianOp
from lie_plateau.core.dla import decompose, lie_closure
from lie_plateau.core.purity import g_purity
from lie_plateau.core.variance.exact import StateLike, loss_variance
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class FamilyPoint:
    """Exact prediction at one system size"""

    n: int
    dim: int
    purity_rho: float
    purity_O: float
    hs_norm_O: float
    variance: float
    mean: float = 0.0

    def factors(self) -> Dict[str, float]:
        return {
            CAUSE_STATE: float(np.log2(max(2.0 ** self.n * self.purity_rho, 1e-300))),
            CAUSE_OBSERVABLE: float(np.log2(max(self.purity_O / self.hs_norm_O, 1e-300))),
            CAUSE_EXPRESSIVENESS: float(-np.log2(self.dim)),
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n, "dim": self.dim, "purity_rho": self.purity_rho, "purity_O": self.purity_O,
            "hs_norm_O": self.hs_norm_O, "variance": self.variance, "mean": self.mean,
        }


@dataclass
class TrendFit:
    slope: float
    intercept: float
    r2: float


@dataclass
class BpDiagnosis:
    points: List[FamilyPoint]
    exponential: TrendFit
    polynomial: TrendFit
    verdict: str
    cause: Optional[str]
    factor_fits: Dict[str, Tuple[TrendFit, TrendFit]] = field(default_factory=dict)

    @property
    def decay_base(self) -> float:
        """b in Var ~ b^-n from the exponential fit"""
        return float(2.0 ** (-self.exponential.slope))

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "cause": self.cause,
            "decay_base": self.decay_base,
            "exponential": vars(self.exponential),
            "polynomial": vars(self.polynomial),
            "factors": {
                name: {"exponential": vars(exp_fit), "polynomial": vars(poly_fit)}
                for name, (exp_fit, poly_fit) in self.factor_fits.items()
            },
            "points": [point.to_dict() for point in self.points],
        }


def fit_trend(x: np.ndarray, y: np.ndarray) -> TrendFit:
    """Least-squares line with R^2; a constant series counts as a perfect flat fit"""
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot <= 1e-24:
        return TrendFit(0.0, float(np.mean(y)), 1.0)
    r2 = 1.0 - float(np.sum(residual ** 2)) / ss_tot
    return TrendFit(float(slope), float(intercept), r2)


def _is_exponential(exp_fit: TrendFit, poly_fit: TrendFit) -> bool:
    return exp_fit.slope <= BP_SLOPE_THRESHOLD and exp_fit.r2 >= poly_fit.r2


def bp_diagnose(points: Sequence[FamilyPoint]) -> BpDiagnosis:
    """
    Classify a size family as BP / no-BP / inconclusive and name the dominant cause.

    Raises:
        InvalidParameterError: fewer than MIN_FAMILY_SIZES sizes with a positive variance
    """
    usable = sorted((p for p in points if p.variance > 0), key=lambda p: p.n)
    if len(usable) < len(points):
        logger.warning(f"Dropping {len(points) - len(usable)} sizes with zero variance from the fit")
    if len({p.n for p in usable}) < MIN_FAMILY_SIZES:
        raise InvalidParameterError(
            f"BP diagnosis needs at least {MIN_FAMILY_SIZES} system sizes, got {len(usable)}"
        )

    n_values = np.array([p.n for p in usable], dtype=float)
    log_variance = np.log2([p.variance for p in usable])
    exponential = fit_trend(n_values, log_variance)
    polynomial = fit_trend(np.log2(n_values), log_variance)

    if exponential.slope <= BP_SLOPE_THRESHOLD and exponential.r2 >= BP_R2_THRESHOLD:
        verdict = VERDICT_BP
    elif polynomial.r2 >= BP_R2_THRESHOLD:
        verdict = VERDICT_NO_BP
    else:
        verdict = VERDICT_INCONCLUSIVE

    factor_fits = {}
    exponential_factors = []
    for name in (CAUSE_STATE, CAUSE_OBSERVABLE, CAUSE_EXPRESSIVENESS):
        values = np.array([p.factors()[name] for p in usable])
        fits = (fit_trend(n_values, values), fit_trend(np.log2(n_values), values))
        factor_fits[name] = fits
        if _is_exponential(*fits):
            exponential_factors.append(name)

    cause = None
    if verdict == VERDICT_BP:
        if len(exponential_factors) > 1:
            cause = CAUSE_MIXED
        elif exponential_factors:
            cause = exponential_factors[0]
        else:
            # no single factor crosses the threshold; blame the steepest one
            cause = min(factor_fits, key=lambda name: factor_fits[name][0].slope)

    logger.info(
        f"BP diagnosis over n={int(n_values[0])}..{int(n_values[-1])}: {verdict}"
        f" (slope {exponential.slope:.3f}, R2 {exponential.r2:.4f}), cause={cause}"
    )
    return BpDiagnosis(usable, exponential, polynomial, verdict, cause, factor_fits)


ProblemBuilder = Callable[[int], Tuple[list, Union[StateLike, Sequence[StateLike]], HermitianOp]]


def evaluate_family(build_problem: ProblemBuilder, n_values: Sequence[int],
                    dim_cap: Optional[int] = None, seed: Optional[int] = None) -> List[FamilyPoint]:
    """
    Exact predictions for each n.

    build_problem(n) returns (generators, rho, O); rho may be a list of states, in which
    case purities and variances are averaged over them.
    """
    points = []
    for n in n_values:
        generators, rho, O = build_problem(n)
        decomposition = decompose(lie_closure(generators, dim_cap), seed=seed)
        states = list(rho) if isinstance(rho, (list, tuple)) else [rho]
        predictions = [loss_variance(state, O, decomposition) for state in states]
        full = decomposition.full
        points.append(FamilyPoint(
            n=n,
            dim=full.dim,
            purity_rho=float(np.mean([g_purity(state, full) for state in states])),
            purity_O=g_purity(O, full),
            hs_norm_O=O.hs_norm_sq(),
            variance=float(np.mean([p.variance for p in predictions])),
            mean=float(np.mean([p.mean for p in predictions])),
        ))
        logger.debug(f"Family point n={n}: dim={full.dim}, var={points[-1].variance:.6g}")
    return points
