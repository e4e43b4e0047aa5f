"""
Lie closure of a generator set.

Breadth-first worklist over (new element, every element) pairs. Pure Pauli generator sets
stay inside the Pauli basis, so independence is plain set membership there; general
Hermitian generators go through incremental Gram-Schmidt on sparse coefficient maps.
"""
from collections import deque
from typing import List, Optional, Sequence, Tuple, Union

from lie_plateau.core.constants import LINALG_TOL
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NonHermitianError,
)
from lie_plateau.core.pauli import HermitianOp, PauliString, parse_pauli
from lie_plateau.core.dla.basis import (
    DlaBasis,
    SparseVec,
    axpy,
    bracket,
    dot,
    norm,
    prune,
    scale,
    vector_from_operator,
    vector_from_pauli,
)
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import track_closure, record_closure

logger = get_logger(__name__)

GeneratorLike = Union[PauliString, HermitianOp, str]


def _as_vector(generator: GeneratorLike) -> Tuple[int, SparseVec]:
    if isinstance(generator, str):
        generator = parse_pauli(generator)
    if isinstance(generator, PauliString):
        if not generator.is_hermitian:
            raise NonHermitianError(f"Generator {generator} is not Hermitian")
        return generator.n, vector_from_pauli(generator)
    if isinstance(generator, HermitianOp):
        if generator.is_dense:
            raise InvalidParameterError("Lie closure needs generators in Pauli-term form")
        return generator.n, vector_from_operator(generator)
    raise InvalidParameterError(f"Unsupported generator type {type(generator).__name__}")


def _canonical(vec: SparseVec) -> tuple:
    """Phaseless, scale-free identity of a generator direction"""
    length = norm(vec)
    items = sorted(vec.items())
    sign = 1.0 if items[0][1] > 0 else -1.0
    return tuple((key, round(sign * value / length, 12)) for key, value in items)


def normalize_generators(generators: Sequence[GeneratorLike]) -> Tuple[int, List[SparseVec]]:
    """Unit-norm generator directions with duplicates removed, in input order"""
    if not generators:
        raise InvalidParameterError("Lie closure needs at least one generator")

    n = None
    seen = set()
    vectors: List[SparseVec] = []
    for generator in generators:
        gen_n, vec = _as_vector(generator)
        if n is None:
            n = gen_n
        elif gen_n != n:
            raise DimensionMismatchError(f"Generators mix n={n} and n={gen_n}")
        vec = prune(vec)
        length = norm(vec)
        if length <= LINALG_TOL:
            logger.warning(f"Skipping zero generator {generator}")
            continue
        vec = scale(1.0 / length, vec)
        canonical = _canonical(vec)
        if canonical in seen:
            logger.debug(f"Dropping duplicate generator {generator}")
            continue
        seen.add(canonical)
        vectors.append(vec)

    if not vectors:
        raise InvalidParameterError("All generators are zero")
    return n, vectors


class _GramSchmidtBasis:
    """Incrementally grown orthonormal set with an inverted key index"""

    def __init__(self):
        self.vectors: List[SparseVec] = []
        self.index = {}

    def _candidates(self, vec: SparseVec):
        found = set()
        for key in vec:
            found.update(self.index.get(key, ()))
        return sorted(found)

    def residual(self, vec: SparseVec) -> SparseVec:
        # classical Gram-Schmidt pass against overlapping elements, repeated once
        for _ in range(2):
            coefficients = [(j, dot(vec, self.vectors[j])) for j in self._candidates(vec)]
            for j, c in coefficients:
                if c != 0.0:
                    vec = axpy(-c, self.vectors[j], vec)
            vec = prune(vec)
        return vec

    def try_add(self, vec: SparseVec) -> Optional[int]:
        length = norm(vec)
        if length <= LINALG_TOL:
            return None
        residual = self.residual(scale(1.0 / length, vec))
        residual_norm = norm(residual)
        if residual_norm <= LINALG_TOL:
            return None
        new = scale(1.0 / residual_norm, residual)
        position = len(self.vectors)
        self.vectors.append(new)
        for key in new:
            self.index.setdefault(key, []).append(position)
        return position


def _pauli_closure(n: int, generators: List[SparseVec], dim_cap: int) -> Tuple[List[SparseVec], List[int], bool]:
    keys = []
    seen = set()
    for gen in generators:
        (key,) = gen.keys()
        if key not in seen:
            seen.add(key)
            keys.append(key)
    generator_indices = list(range(len(keys)))

    queue = deque(generator_indices)
    truncated = False
    generation = 0
    while queue and not truncated:
        i = queue.popleft()
        xi, zi = keys[i]
        for j in range(len(keys)):
            xj, zj = keys[j]
            if ((xi & zj).bit_count() + (zi & xj).bit_count()) & 1 == 0:
                continue
            new_key = (xi ^ xj, zi ^ zj)
            if new_key in seen:
                continue
            if len(keys) >= dim_cap:
                truncated = True
                break
            seen.add(new_key)
            keys.append(new_key)
            queue.append(len(keys) - 1)
        generation += 1
        if generation % 1000 == 0:
            logger.debug(f"Pauli closure: {len(keys)} elements, {len(queue)} queued")

    return [{key: 1.0} for key in keys], generator_indices, truncated


def _general_closure(n: int, generators: List[SparseVec], dim_cap: int) -> Tuple[List[SparseVec], List[int], bool]:
    basis = _GramSchmidtBasis()
    generator_indices = []
    for gen in generators:
        position = basis.try_add(gen)
        if position is not None:
            generator_indices.append(position)

    queue = deque(range(len(basis.vectors)))
    truncated = False
    while queue and not truncated:
        i = queue.popleft()
        for j in range(len(basis.vectors)):
            if i == j:
                continue
            image = bracket(basis.vectors[i], basis.vectors[j], n)
            if not image:
                continue
            if len(basis.vectors) >= dim_cap:
                # only report truncation when the image is actually new
                if norm(basis.residual(scale(1.0 / norm(image), image))) > LINALG_TOL:
                    truncated = True
                    break
                continue
            position = basis.try_add(image)
            if position is not None:
                queue.append(position)
        logger.debug(f"General closure: {len(basis.vectors)} elements, {len(queue)} queued")

    return basis.vectors, generator_indices, truncated


def lie_closure(generators: Sequence[GeneratorLike], dim_cap: Optional[int] = None) -> DlaBasis:
    """
    Orthonormal basis of the dynamical Lie algebra generated by i*generators.

    Args:
        generators: Hermitian Pauli strings, Pauli-term operators or Pauli text
        dim_cap: stop once this many elements exist (default 4^n)

    Returns:
        DlaBasis; basis.truncated is True when the cap cut the closure short
    """
    n, vectors = normalize_generators(generators)
    if dim_cap is None:
        dim_cap = 4 ** n
    if dim_cap < len(vectors):
        raise InvalidParameterError(f"dim_cap={dim_cap} is smaller than the {len(vectors)} generators")

    pauli_only = all(len(vec) == 1 for vec in vectors)
    with track_closure():
        if pauli_only:
            basis_vectors, generator_indices, truncated = _pauli_closure(n, vectors, dim_cap)
        else:
            basis_vectors, generator_indices, truncated = _general_closure(n, vectors, dim_cap)

    record_closure(len(basis_vectors), truncated)
    if truncated:
        logger.warning(f"Lie closure truncated at dim_cap={dim_cap} (n={n})")
    else:
        logger.info(f"Lie closure complete: n={n}, {len(vectors)} generators, dim={len(basis_vectors)}")

    return DlaBasis(
        n=n,
        vectors=basis_vectors,
        generator_indices=generator_indices,
        generators=vectors,
        truncated=truncated,
        dim_cap=dim_cap,
    )


def augment_with_coherent_errors(generators: Sequence[GeneratorLike],
                                 error_generators: Sequence[GeneratorLike],
                                 dim_cap: Optional[int] = None) -> DlaBasis:
    """
    DLA of the generator set enlarged by coherent-error generators K_l.

    The returned basis records base_dim, the dimension without the errors.
    """
    base = lie_closure(generators, dim_cap)
    if not error_generators:
        return base
    augmented = lie_closure(list(generators) + list(error_generators), dim_cap)
    augmented.base_dim = base.dim
    logger.info(f"Coherent errors grow the DLA from dim {base.dim} to {augmented.dim}")
    return augmented
