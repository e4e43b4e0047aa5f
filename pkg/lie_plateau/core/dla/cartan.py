"""
Cartan subalgebra (maximal abelian subalgebra of commuting elements) of a DLA component.
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.linalg import null_space

from lie_plateau.core.constants import LINALG_TOL, NULL_SPACE_RCOND, ERROR_TRUNCATED
from lie_plateau.core.exceptions import DecompositionError, TruncatedDlaError
from lie_plateau.core.dla.basis import DlaBasis, bracket, mgs_columns, norm
from lie_plateau.core.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class CartanBasis:
    """Orthonormal commuting elements h_j spanning a Cartan subalgebra of `parent`"""

    elements: DlaBasis
    parent: str

    @property
    def rank(self) -> int:
        return self.elements.dim


def _is_diagonal(vec) -> bool:
    return all(x == 0 for x, _ in vec)


def _commutes(a, b, n: int) -> bool:
    return norm(bracket(a, b, n)) <= LINALG_TOL


def _centralizer(basis: DlaBasis, chosen: List) -> np.ndarray:
    """Coordinates of every element of `basis` commuting with all chosen elements"""
    if not chosen:
        return np.eye(basis.dim)
    stacked = np.vstack([basis.adjoint_matrix(h) for h in chosen])
    return null_space(stacked, rcond=NULL_SPACE_RCOND)


def cartan_subalgebra(component: DlaBasis, seed: Optional[int] = None, max_rounds: int = 64) -> CartanBasis:
    """
    Maximal abelian subalgebra of a reductive component.

    Greedy pass over basis elements (diagonal ones first), then grown until the
    centralizer of the chosen set equals its span.
    """
    if component.truncated:
        raise TruncatedDlaError(ERROR_TRUNCATED.format(cap=component.dim_cap))
    n = component.n
    if component.dim == 0:
        return CartanBasis(DlaBasis(n=n, vectors=[], label=f"cartan_{component.label}"), component.label)

    order = sorted(range(component.dim), key=lambda i: (not _is_diagonal(component.vectors[i]), i))
    chosen = []
    for i in order:
        vec = component.vectors[i]
        if all(_commutes(vec, h, n) for h in chosen):
            chosen.append(vec)

    rng = np.random.default_rng(seed)
    for _ in range(max_rounds):
        centralizer = _centralizer(component, chosen)
        if centralizer.shape[1] <= len(chosen):
            break
        span = np.column_stack([component.coordinates(h) for h in chosen])
        # part of the centralizer orthogonal to the chosen span
        outside = centralizer - span @ (span.T @ centralizer)
        outside = mgs_columns(outside, 1e-8)
        if outside.shape[1] == 0:
            break
        coeffs = outside @ rng.standard_normal(outside.shape[1])
        # unit norm keeps the chosen span orthonormal for the next projection
        chosen.append(component.combine(coeffs / np.linalg.norm(coeffs)))
    else:
        raise DecompositionError(f"Cartan search did not stabilize in {max_rounds} rounds")

    coords = mgs_columns(np.column_stack([component.coordinates(h) for h in chosen]), LINALG_TOL)
    elements = component.sub_basis(coords, f"cartan_{component.label}")
    logger.debug(f"Cartan subalgebra of {component.label}: rank {elements.dim}")
    return CartanBasis(elements=elements, parent=component.label)
