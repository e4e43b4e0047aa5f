"""
Orthonormal bases of i*g in normalized Pauli coordinates.

An element is a sparse map {(x_bits, z_bits): c} standing for sum_k c_k P_k / sqrt(2^n).
With that normalization the Hilbert-Schmidt inner product is the plain dot product of
coefficient maps, and the bracket of two Hermitian elements A, B is taken as i[A, B]
(again Hermitian).
"""
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from lie_plateau.core.constants import PRUNE_TOL
from lie_plateau.core.exceptions import DimensionMismatchError
from lie_plateau.core.pauli import (
    HermitianOp,
    PauliString,
    product_phase,
    symplectic_form,
)
from lie_plateau.core.pauli.pauli_string import PauliKey

SparseVec = Dict[PauliKey, float]


def hs_scale(n: int) -> float:
    """sqrt(2^n)"""
    return math.sqrt(math.ldexp(1.0, n))


def prune(vec: SparseVec, tol: float = PRUNE_TOL) -> SparseVec:
    return {key: value for key, value in vec.items() if abs(value) > tol}


def dot(a: SparseVec, b: SparseVec) -> float:
    if len(a) > len(b):
        a, b = b, a
    return float(sum(value * b.get(key, 0.0) for key, value in a.items()))


def norm(a: SparseVec) -> float:
    return math.sqrt(sum(value * value for value in a.values()))


def axpy(alpha: float, x: SparseVec, y: SparseVec) -> SparseVec:
    """y + alpha * x, as a new map"""
    out = dict(y)
    for key, value in x.items():
        out[key] = out.get(key, 0.0) + alpha * value
    return out


def scale(alpha: float, x: SparseVec) -> SparseVec:
    return {key: alpha * value for key, value in x.items()}


def bracket(a: SparseVec, b: SparseVec, n: int) -> SparseVec:
    """
    i[A, B] for normalized elements.

    For anticommuting Hermitian strings PQ = i^e R with e odd, so
    i[P^, Q^] = (2 s / sqrt(2^n)) R^ with s = -1 when e = 1 and +1 when e = 3.
    """
    factor = 2.0 / hs_scale(n)
    out: SparseVec = {}
    for (xa, za), ca in a.items():
        for (xb, zb), cb in b.items():
            if symplectic_form(xa, za, xb, zb) == 0:
                continue
            sign = -1.0 if product_phase(xa, za, xb, zb) == 1 else 1.0
            key = (xa ^ xb, za ^ zb)
            out[key] = out.get(key, 0.0) + sign * factor * ca * cb
    return prune(out)


def vector_from_operator(op: HermitianOp) -> SparseVec:
    """Normalized-coordinate map of a term-form operator"""
    if op.is_dense:
        raise DimensionMismatchError("Dense operators have no sparse Pauli coordinates")
    s = hs_scale(op.n)
    return {key: coeff * s for key, coeff in op.coefficients().items()}


def operator_from_vector(vec: SparseVec, n: int) -> HermitianOp:
    s = hs_scale(n)
    return HermitianOp._from_key_map(n, {key: value / s for key, value in vec.items()})


def vector_from_pauli(pauli: PauliString) -> SparseVec:
    return {pauli.key: float(pauli.sign)}


def mgs_columns(matrix: np.ndarray, tol: float) -> np.ndarray:
    """Modified Gram-Schmidt on the columns, run twice; drops dependent columns"""
    columns: List[np.ndarray] = []
    for j in range(matrix.shape[1]):
        v = np.array(matrix[:, j], dtype=float)
        original = np.linalg.norm(v)
        if original <= tol:
            continue
        for _ in range(2):
            for q in columns:
                v -= np.dot(q, v) * q
        residual = np.linalg.norm(v)
        if residual > tol * max(1.0, original):
            columns.append(v / residual)
    if not columns:
        return np.zeros((matrix.shape[0], 0))
    return np.column_stack(columns)


@dataclass
class DlaBasis:
    """
    Orthonormal basis of i*g (or of a component of it).

    Sub-bases returned by the decomposition share the parent's generator directions,
    whose adjoint maps act on every ideal.
    """

    n: int
    vectors: List[SparseVec]
    generator_indices: List[int] = field(default_factory=list)
    generators: List[SparseVec] = field(default_factory=list)
    truncated: bool = False
    dim_cap: Optional[int] = None
    label: str = "g"
    base_dim: Optional[int] = None  # closure dim without error generators, when augmented
    _index: Optional[Dict[PauliKey, List[Tuple[int, float]]]] = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def elements(self) -> List[HermitianOp]:
        return [operator_from_vector(vec, self.n) for vec in self.vectors]

    @property
    def generator_operators(self) -> List[HermitianOp]:
        return [operator_from_vector(vec, self.n) for vec in self.generators]

    def _key_index(self) -> Dict[PauliKey, List[Tuple[int, float]]]:
        if self._index is None:
            index = defaultdict(list)
            for i, vec in enumerate(self.vectors):
                for key, value in vec.items():
                    index[key].append((i, value))
            self._index = dict(index)
        return self._index

    def keys(self) -> Iterable[PauliKey]:
        return self._key_index().keys()

    def coordinates(self, vec: SparseVec) -> np.ndarray:
        """<B_i, v> for every basis element"""
        index = self._key_index()
        coords = np.zeros(self.dim)
        for key, value in vec.items():
            for i, c in index.get(key, ()):
                coords[i] += c * value
        return coords

    def combine(self, coords: Sequence[float]) -> SparseVec:
        """sum_i coords_i B_i"""
        out: SparseVec = {}
        for weight, vec in zip(coords, self.vectors):
            if weight == 0.0:
                continue
            for key, value in vec.items():
                out[key] = out.get(key, 0.0) + weight * value
        return prune(out)

    def projection_residual(self, vec: SparseVec) -> float:
        """|| v - P_g v ||"""
        coords = self.coordinates(vec)
        return norm(axpy(-1.0, self.combine(coords), vec))

    def contains(self, vec: SparseVec, tol: float) -> bool:
        return self.projection_residual(vec) <= tol * max(1.0, norm(vec))

    def adjoint_matrix(self, element: SparseVec) -> np.ndarray:
        """Matrix of v -> i[element, v] in this basis (column j is the image of B_j)"""
        matrix = np.zeros((self.dim, self.dim))
        for j, vec in enumerate(self.vectors):
            image = bracket(element, vec, self.n)
            if image:
                matrix[:, j] = self.coordinates(image)
        return matrix

    def generator_adjoints(self) -> List[np.ndarray]:
        return [self.adjoint_matrix(gen) for gen in self.generators]

    def sub_basis(self, coordinate_columns: np.ndarray, label: str) -> "DlaBasis":
        """Sub-basis from orthonormal coordinate columns (shape dim x k)"""
        vectors = [self.combine(coordinate_columns[:, k]) for k in range(coordinate_columns.shape[1])]
        return DlaBasis(
            n=self.n,
            vectors=vectors,
            generators=self.generators,
            label=label,
        )

    def gram_matrix(self) -> np.ndarray:
        gram = np.zeros((self.dim, self.dim))
        for i, vec in enumerate(self.vectors):
            gram[:, i] = self.coordinates(vec)
        return gram
