"""
Spin-S representations of SU(2): closed-form weight-state variance and a quadrature check.
"""
from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from lie_plateau.core.constants import (
    MEMBERSHIP_REL_TOL,
    SPIN_ORACLE_AZIMUTH_POINTS,
    SPIN_ORACLE_POLAR_POINTS,
)
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    OutsideTheoryError,
)
from lie_plateau.core.pauli import HermitianOp


def _half_integer(value: float, name: str) -> Fraction:
    doubled = 2 * value
    if abs(doubled - round(doubled)) > 1e-12:
        raise InvalidParameterError(f"{name}={value} is not a multiple of 1/2")
    return Fraction(int(round(doubled)), 2)


def spin_matrices(S: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S_x, S_y, S_z) with basis ordered m = S, S-1, ..., -S"""
    spin = _half_integer(S, "S")
    if spin <= 0:
        raise InvalidParameterError(f"Spin must be positive, got {S}")
    s = float(spin)
    dim = int(2 * spin) + 1
    m = s - np.arange(dim)
    raising = np.zeros((dim, dim))
    for i in range(1, dim):
        # S_+ |m_i> = sqrt(S(S+1) - m_i(m_i+1)) |m_i + 1>
        raising[i - 1, i] = np.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    lowering = raising.T
    sx = (raising + lowering) / 2
    sy = (raising - lowering) / 2j
    sz = np.diag(m).astype(complex)
    return sx.astype(complex), sy, sz


def _dense(O: Union[HermitianOp, np.ndarray]) -> np.ndarray:
    return O.to_dense() if isinstance(O, HermitianOp) else np.asarray(O, dtype=complex)


def spin_variance(S: float, m: float, O: Union[HermitianOp, np.ndarray]) -> float:
    """
    m^2 Tr[O^2] / (S(S+1)(2S+1)) for the weight state |S, m> and O in span{S_x, S_y, S_z}.
    """
    spin = _half_integer(S, "S")
    weight = _half_integer(m, "m")
    if abs(weight) > spin or (spin - weight).denominator != 1:
        raise InvalidParameterError(f"m={m} is not a weight of the spin-{S} representation")
    matrix = _dense(O)
    dim = int(2 * spin) + 1
    if matrix.shape != (dim, dim):
        raise DimensionMismatchError(f"Spin-{S} observables are {dim}x{dim}, got {matrix.shape}")

    generators = spin_matrices(S)
    coefficients = [np.real(np.trace(g @ matrix)) / np.real(np.trace(g @ g)) for g in generators]
    residual = matrix - sum(c * g for c, g in zip(coefficients, generators))
    if np.linalg.norm(residual) > MEMBERSHIP_REL_TOL * max(np.linalg.norm(matrix), 1e-300):
        raise OutsideTheoryError(f"Observable is outside span{{S_x, S_y, S_z}} for S={S}")

    s = float(spin)
    hs_norm_sq = float(np.real(np.vdot(matrix, matrix)))
    return float(weight) ** 2 * hs_norm_sq / (s * (s + 1) * (2 * s + 1))


def numerical_spin_variance(S: float, psi, O: Union[HermitianOp, np.ndarray],
                            azimuth_points: int = SPIN_ORACLE_AZIMUTH_POINTS,
                            polar_points: int = SPIN_ORACLE_POLAR_POINTS) -> float:
    """
    Var over Haar SU(2) of <psi| U^dagger O U |psi> in the spin-S irrep.

    U = exp(-i a S_z) exp(-i b S_y) exp(-i c S_z); uniform grids in a and c, Gauss-Legendre
    in cos(b). Exact for S small against the grid sizes.
    """
    sx, sy, sz = spin_matrices(S)
    dim = sz.shape[0]
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != dim:
        raise DimensionMismatchError(f"Spin-{S} states have {dim} amplitudes, got {psi.shape[0]}")
    psi = psi / np.linalg.norm(psi)
    matrix = _dense(O)

    m = np.real(np.diag(sz))
    angles = 2 * np.pi * np.arange(azimuth_points) / azimuth_points
    nodes, weights = np.polynomial.legendre.leggauss(polar_points)
    weights = weights / 2.0
    sy_values, sy_vectors = np.linalg.eigh(sy)

    # exp(-i c S_z) psi for every c
    rotated = np.exp(-1j * np.outer(angles, m)) * psi[None, :]
    # D_a^dagger O D_a for every a
    shifts = np.exp(1j * angles[:, None, None] * (m[None, :, None] - m[None, None, :]))
    conjugated = shifts * matrix[None, :, :]

    first = second = 0.0
    for cos_b, weight in zip(nodes, weights):
        b = np.arccos(cos_b)
        small_d = sy_vectors @ np.diag(np.exp(-1j * b * sy_values)) @ sy_vectors.conj().T
        amplitudes = rotated @ small_d.T
        losses = np.real(np.einsum("ci,aij,cj->ac", amplitudes.conj(), conjugated, amplitudes))
        first += weight * np.mean(losses)
        second += weight * np.mean(losses ** 2)
    return float(second - first ** 2)
