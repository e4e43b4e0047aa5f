"""
Reductive decomposition g = g_1 + ... + g_{k-1} + center.

The center is the joint kernel of the generators' adjoint maps (commuting with a
generating set means commuting with all of g). The semisimple part is its HS-orthogonal
complement, which is again an ideal because the HS form is ad-invariant.

Two ways to split the semisimple part into simple ideals:
  commutant - null space of the stacked intertwiner equations T A = A T; a random
              commutant element is a combination of ideal projectors, so its eigenspaces
              are the ideals.
  peeling   - sum_k ad_{x_k}^T ad_{x_k} over random x_k is block diagonal over the ideals;
              an eigenvector of an isolated eigenvalue sits in one ideal and generates it.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.linalg import null_space

from lie_plateau.core.constants import (
    CLOSURE_RESIDUAL_TOL,
    COMMUTANT_MAX_DIM,
    DECOMPOSE_MAX_DIM,
    DECOMPOSE_METHODS,
    EIGEN_CLUSTER_REL_GAP,
    LINALG_TOL,
    NULL_SPACE_RCOND,
    PEELING_MAX_REDRAWS,
    PEELING_PROBES,
    ERROR_TRUNCATED,
)
from lie_plateau.core.exceptions import (
    DecompositionError,
    InvalidParameterError,
    TruncatedDlaError,
)
from lie_plateau.core.dla.basis import DlaBasis, bracket, mgs_columns, norm
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import track_decomposition

logger = get_logger(__name__)


@dataclass
class DlaDecomposition:
    """Center plus simple ideals of a DLA, each an orthonormal sub-basis"""

    full: DlaBasis
    center: DlaBasis
    ideals: List[DlaBasis]
    method: str = "auto"
    notes: List[str] = field(default_factory=list)

    @property
    def dims(self) -> List[int]:
        return [ideal.dim for ideal in self.ideals]

    @property
    def is_simple(self) -> bool:
        return len(self.ideals) == 1 and self.center.dim == 0

    def components(self) -> Dict[str, DlaBasis]:
        """Components keyed by id: 'center', 'ideal_0', 'ideal_1', ..."""
        out = {"center": self.center}
        for j, ideal in enumerate(self.ideals):
            out[f"ideal_{j}"] = ideal
        return out


def _require_complete(basis: DlaBasis):
    if basis.truncated:
        raise TruncatedDlaError(ERROR_TRUNCATED.format(cap=basis.dim_cap))


def _identity_coords(basis: DlaBasis) -> np.ndarray:
    return basis.coordinates({(0, 0): 1.0})


def _full_algebra(basis: DlaBasis) -> Optional[str]:
    """'su' or 'u' when the basis already spans every (non-identity) Pauli string"""
    total = 4 ** basis.n
    has_identity = np.linalg.norm(_identity_coords(basis)) > 1 - LINALG_TOL
    if basis.dim == total - 1 and not has_identity:
        return "su"
    if basis.dim == total:
        return "u"
    return None


def _empty(basis: DlaBasis, label: str) -> DlaBasis:
    return DlaBasis(n=basis.n, vectors=[], generators=basis.generators, label=label)


def _center_coords(basis: DlaBasis, adjoints: List[np.ndarray]) -> np.ndarray:
    stacked = np.vstack(adjoints) if adjoints else np.zeros((1, basis.dim))
    if not np.any(stacked):
        return np.eye(basis.dim)
    return null_space(stacked, rcond=NULL_SPACE_RCOND)


def center_of(basis: DlaBasis) -> DlaBasis:
    """Orthonormal basis of the center of g"""
    _require_complete(basis)
    kind = _full_algebra(basis)
    if kind == "su":
        return _empty(basis, "center")
    if kind == "u":
        return basis.sub_basis(_identity_coords(basis).reshape(-1, 1), "center")
    coords = _center_coords(basis, basis.generator_adjoints())
    logger.debug(f"Center of dim {coords.shape[1]} inside dim {basis.dim}")
    return basis.sub_basis(coords, "center")


def _commutant(restricted: List[np.ndarray]) -> np.ndarray:
    """Null space of T -> A T - T A over all A, as columns of vec(T) (column-major)"""
    size = restricted[0].shape[0]
    identity = np.eye(size)
    equations = np.vstack([np.kron(identity, a) - np.kron(a.T, identity) for a in restricted])
    return null_space(equations, rcond=NULL_SPACE_RCOND)


def _cluster(eigenvalues: np.ndarray) -> List[List[int]]:
    spread = max(1.0, float(np.max(np.abs(eigenvalues))))
    clusters = [[0]]
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[i - 1] > EIGEN_CLUSTER_REL_GAP * spread:
            clusters.append([i])
        else:
            clusters[-1].append(i)
    return clusters


def _split_commutant(restricted: List[np.ndarray], rng: np.random.Generator) -> List[np.ndarray]:
    size = restricted[0].shape[0]
    kernel = _commutant(restricted)
    expected = kernel.shape[1]
    gaps: List[float] = []
    for attempt in range(PEELING_MAX_REDRAWS):
        t = (kernel @ rng.standard_normal(expected)).reshape(size, size, order="F")
        eigenvalues, eigenvectors = np.linalg.eigh((t + t.T) / 2)
        clusters = _cluster(eigenvalues)
        if len(clusters) == expected:
            return [mgs_columns(eigenvectors[:, idx], LINALG_TOL) for idx in clusters]
        gaps = list(np.diff(eigenvalues))
        logger.debug(f"Commutant draw {attempt} gave {len(clusters)} clusters, expected {expected}")
    raise DecompositionError(
        f"Could not separate {expected} ideals from commutant eigenvalues", gaps=gaps
    )


def _invariant_span(seed: np.ndarray, maps: List[np.ndarray]) -> np.ndarray:
    """Smallest subspace containing seed and invariant under every map (Krylov closure)"""
    columns = [seed / np.linalg.norm(seed)]
    position = 0
    while position < len(columns):
        current = columns[position]
        for a in maps:
            w = a @ current
            size = np.linalg.norm(w)
            if size <= LINALG_TOL:
                continue
            for _ in range(2):
                for q in columns:
                    w = w - np.dot(q, w) * q
            residual = np.linalg.norm(w)
            if residual > 1e-7 * size:
                columns.append(w / residual)
        position += 1
    return np.column_stack(columns)


def _split_peeling(basis: DlaBasis, semisimple: np.ndarray, restricted: List[np.ndarray],
                   rng: np.random.Generator) -> List[np.ndarray]:
    remaining = np.eye(semisimple.shape[1])
    ideals = []
    while remaining.shape[1] > 0:
        maps = [remaining.T @ a @ remaining for a in restricted]
        if remaining.shape[1] <= 3:
            # nothing left to split: a simple ideal has dim >= 3
            ideals.append(remaining)
            break
        best_gap, best_vector, gaps = -1.0, None, []
        for _ in range(PEELING_MAX_REDRAWS):
            probe = np.zeros((remaining.shape[1], remaining.shape[1]))
            for _ in range(PEELING_PROBES):
                x = basis.combine(semisimple @ remaining @ rng.standard_normal(remaining.shape[1]))
                h = remaining.T @ semisimple.T @ basis.adjoint_matrix(x) @ semisimple @ remaining
                probe += h.T @ h
            eigenvalues, eigenvectors = np.linalg.eigh(probe)
            spread = max(float(np.max(np.abs(eigenvalues))), 1e-300)
            gaps = np.diff(eigenvalues) / spread
            isolation = np.minimum(np.append(gaps, np.inf), np.insert(gaps, 0, np.inf))
            i = int(np.argmax(isolation))
            if isolation[i] > best_gap:
                best_gap, best_vector = float(isolation[i]), eigenvectors[:, i]
            if best_gap >= EIGEN_CLUSTER_REL_GAP:
                break
        if best_gap < EIGEN_CLUSTER_REL_GAP:
            raise DecompositionError("No isolated eigenvalue to peel an ideal from", gaps=list(gaps))
        ideal = _invariant_span(best_vector, maps)
        ideals.append(remaining @ ideal)
        complement = null_space(ideal.T, rcond=NULL_SPACE_RCOND) if ideal.shape[1] < remaining.shape[1] else None
        remaining = remaining @ complement if complement is not None else np.zeros((remaining.shape[1], 0))
        logger.debug(f"Peeled ideal of dim {ideal.shape[1]}, {remaining.shape[1]} dims left")
    return [mgs_columns(ideal, LINALG_TOL) for ideal in ideals]


def _is_simple(restricted_to_ideal: List[np.ndarray]) -> bool:
    return _commutant(restricted_to_ideal).shape[1] == 1


def _check_invariance(coords: np.ndarray, adjoints: List[np.ndarray]) -> float:
    projector = coords @ coords.T
    worst = 0.0
    for a in adjoints:
        leak = (np.eye(projector.shape[0]) - projector) @ a @ coords
        worst = max(worst, float(np.max(np.abs(leak))) if leak.size else 0.0)
    return worst


def decompose(basis: DlaBasis, method: str = "auto", seed: Optional[int] = None) -> DlaDecomposition:
    """
    Split a complete DLA basis into center and simple ideals.

    Args:
        basis: output of lie_closure (must not be truncated)
        method: 'auto', 'commutant' or 'peeling'
        seed: seed for the random commutant element / peeling probes
    """
    if method not in DECOMPOSE_METHODS:
        raise InvalidParameterError(f"Unknown decomposition method {method!r}")
    _require_complete(basis)

    kind = _full_algebra(basis)
    if kind is not None:
        center = center_of(basis)
        if kind == "su":
            ideal = DlaBasis(n=basis.n, vectors=list(basis.vectors), generators=basis.generators, label="ideal_0")
        else:
            complement = null_space(_identity_coords(basis).reshape(1, -1), rcond=NULL_SPACE_RCOND)
            ideal = basis.sub_basis(complement, "ideal_0")
        logger.info(f"DLA is {kind}(2^{basis.n}); one simple ideal of dim {ideal.dim}")
        return DlaDecomposition(full=basis, center=center, ideals=[ideal], method="full-algebra")

    if basis.dim > DECOMPOSE_MAX_DIM:
        raise DecompositionError(f"dim={basis.dim} exceeds the decomposition limit {DECOMPOSE_MAX_DIM}")

    rng = np.random.default_rng(seed)
    with track_decomposition(method):
        adjoints = basis.generator_adjoints()
        center_coords = _center_coords(basis, adjoints)
        if center_coords.shape[1] == basis.dim:
            semisimple = np.zeros((basis.dim, 0))
        elif center_coords.shape[1] == 0:
            semisimple = np.eye(basis.dim)
        else:
            semisimple = null_space(center_coords.T, rcond=NULL_SPACE_RCOND)

        size = semisimple.shape[1]
        chosen = method
        if method == "auto":
            chosen = "commutant" if size <= COMMUTANT_MAX_DIM else "peeling"

        ideal_coords: List[np.ndarray] = []
        if size > 0:
            restricted = [semisimple.T @ a @ semisimple for a in adjoints]
            if chosen == "commutant":
                local = _split_commutant(restricted, rng)
            else:
                local = _split_peeling(basis, semisimple, restricted, rng)
            # largest ideals first, ties keep discovery order
            local.sort(key=lambda block: -block.shape[1])
            for block in local:
                if block.shape[1] <= COMMUTANT_MAX_DIM:
                    restricted_block = [block.T @ a @ block for a in restricted]
                    if not _is_simple(restricted_block):
                        raise DecompositionError(f"Ideal of dim {block.shape[1]} failed the simplicity test")
                ideal_coords.append(semisimple @ block)

        for coords in ideal_coords:
            leak = _check_invariance(coords, adjoints)
            if leak > CLOSURE_RESIDUAL_TOL * 10:
                raise DecompositionError(f"Ideal of dim {coords.shape[1]} is not invariant (leak {leak:.2e})")

    center = basis.sub_basis(center_coords, "center")
    ideals = [basis.sub_basis(coords, f"ideal_{j}") for j, coords in enumerate(ideal_coords)]
    total = center.dim + sum(ideal.dim for ideal in ideals)
    if total != basis.dim:
        raise DecompositionError(f"Component dims sum to {total}, expected {basis.dim}")

    logger.info(
        f"Decomposed dim {basis.dim} ({chosen}): center {center.dim}, ideals {[i.dim for i in ideals]}"
    )
    return DlaDecomposition(full=basis, center=center, ideals=ideals, method=chosen)


def verify_decomposition(decomposition: DlaDecomposition, max_pairs: int = 4000,
                         seed: int = 0) -> Dict[str, float]:
    """
    Measured residuals of the structural invariants.

    Pair checks are exhaustive up to max_pairs pairs per check and sampled beyond that.
    """
    rng = np.random.default_rng(seed)
    full = decomposition.full
    n = full.n

    def pairs(a_dim, b_dim):
        total = a_dim * b_dim
        if total <= max_pairs:
            return [(i, j) for i in range(a_dim) for j in range(b_dim)]
        return list(zip(rng.integers(0, a_dim, max_pairs), rng.integers(0, b_dim, max_pairs)))

    report = {
        "dim_mismatch": float(full.dim - decomposition.center.dim - sum(decomposition.dims)),
        "closure": 0.0,
        "cross_ideal": 0.0,
        "center_commutation": 0.0,
        "orthonormality": 0.0,
    }

    for component in [decomposition.center] + decomposition.ideals:
        if component.dim:
            gram = component.gram_matrix()
            report["orthonormality"] = max(report["orthonormality"], float(np.max(np.abs(gram - np.eye(component.dim)))))

    for ideal in decomposition.ideals:
        for i, j in pairs(ideal.dim, ideal.dim):
            image = bracket(ideal.vectors[i], ideal.vectors[j], n)
            if image:
                report["closure"] = max(report["closure"], ideal.projection_residual(image))

    for a in range(len(decomposition.ideals)):
        for b in range(a + 1, len(decomposition.ideals)):
            first, second = decomposition.ideals[a], decomposition.ideals[b]
            for i, j in pairs(first.dim, second.dim):
                image = bracket(first.vectors[i], second.vectors[j], n)
                report["cross_ideal"] = max(report["cross_ideal"], norm(image))

    for i, j in pairs(decomposition.center.dim, full.dim):
        image = bracket(decomposition.center.vectors[i], full.vectors[j], n)
        report["center_commutation"] = max(report["center_commutation"], norm(image))

    return report


def spans_equal(a: DlaBasis, b: DlaBasis, tol: float = CLOSURE_RESIDUAL_TOL) -> bool:
    """Mutual projection residuals below tol"""
    if a.dim != b.dim:
        return False
    return all(b.projection_residual(vec) <= tol for vec in a.vectors) and \
        all(a.projection_residual(vec) <= tol for vec in b.vectors)


def reconstruction_residual(decomposition: DlaDecomposition) -> float:
    """Largest residual of the full basis projected onto center + ideals"""
    combined = DlaBasis(
        n=decomposition.full.n,
        vectors=[vec for comp in [decomposition.center] + decomposition.ideals for vec in comp.vectors],
    )
    return max((combined.projection_residual(vec) for vec in decomposition.full.vectors), default=0.0)

