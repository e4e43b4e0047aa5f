"""
Haar-random unitaries from QR of complex Ginibre matrices.
"""
from typing import Optional

import numpy as np

from lie_plateau.core.exceptions import InvalidParameterError


def sample_haar_unitary(dim: int, rng: np.random.Generator, size: Optional[int] = None,
                        special: bool = False) -> np.ndarray:
    """
    Haar-distributed U(dim) (or SU(dim)) matrices.

    Args:
        dim: matrix size
        rng: numpy Generator
        size: batch size; None returns a single (dim, dim) matrix
        special: rescale by det^(-1/dim) so every sample has unit determinant

    Returns:
        Array of shape (dim, dim) or (size, dim, dim)
    """
    if dim < 1:
        raise InvalidParameterError(f"Unitary dimension must be positive, got {dim}")
    batch = 1 if size is None else int(size)
    shape = (batch, dim, dim)
    ginibre = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    q, r = np.linalg.qr(ginibre)

    # fix the phase of R's diagonal so Q is Haar and not QR-convention biased
    diagonal = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (diagonal / np.abs(diagonal))[:, None, :]

    if special:
        det = np.linalg.det(q)
        q = q * np.exp(-1j * np.angle(det) / dim)[:, None, None]

    return q[0] if size is None else q


def sample_haar_su4(rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Haar SU(4) two-qubit gates"""
    return sample_haar_unitary(4, rng, size=size, special=True)
