"""
Quantum states for projections and simulations.

A state is a pure statevector or a density matrix, plus a white-noise fraction q:
    rho = (1 - q) * rho_0 + q * I / 2^n
Global depolarizing only moves q, so pure inputs stay statevectors.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from lie_plateau.core.constants import (
    LINALG_TOL,
    REPRESENTATION_TOL,
    MAX_DENSE_PAULI_QUBITS,
    LOCAL_ROTATION_SCALE,
    ERROR_STATEVECTOR_TOO_LARGE,
)
from lie_plateau.config.settings import get_settings
from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    InvalidParameterError,
    NonHermitianError,
    NonUnitaryGateError,
)
from lie_plateau.core.pauli import HermitianOp, PauliString, parse_pauli, pauli_action


def check_statevector_size(n: int):
    """Refuse dense statevectors above settings.max_statevector_qubits"""
    limit = get_settings().max_statevector_qubits
    if n > limit:
        raise InvalidParameterError(ERROR_STATEVECTOR_TOO_LARGE.format(limit=limit, n=n))


@dataclass(frozen=True)
class PauliRotation:
    """exp(-i * angle * P) for a Hermitian Pauli string P"""

    pauli: PauliString
    angle: float

    def __post_init__(self):
        if isinstance(self.pauli, str):
            object.__setattr__(self, "pauli", parse_pauli(self.pauli))
        if not self.pauli.is_hermitian:
            raise NonHermitianError(f"Rotation generator {self.pauli} is not Hermitian")


@dataclass(frozen=True)
class DenseGate:
    """Dense unitary on a few qubits; qubits[0] is the most significant index bit"""

    matrix: np.ndarray
    qubits: Tuple[int, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        qubits = tuple(int(q) for q in self.qubits)
        size = 1 << len(qubits)
        if matrix.shape != (size, size):
            raise DimensionMismatchError(f"Gate on {len(qubits)} qubits needs shape {(size, size)}, got {matrix.shape}")
        if len(set(qubits)) != len(qubits):
            raise InvalidParameterError(f"Repeated qubit in {qubits}")
        if np.max(np.abs(matrix.conj().T @ matrix - np.eye(size))) > 1e-10:
            raise NonUnitaryGateError(f"Gate on qubits {qubits} is not unitary")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "qubits", qubits)


Gate = Union[PauliRotation, DenseGate]


def _apply_matrix_on_axes(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    gate = matrix.reshape([2] * (2 * k))
    moved = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


class QuantumState:
    """
    Pure statevector or density matrix on n qubits, with a white-noise fraction.

    Build through from_bits / from_statevector / from_density / maximally_mixed.
    """

    def __init__(self, n: int, statevector: Optional[np.ndarray] = None,
                 density: Optional[np.ndarray] = None, white_noise: float = 0.0):
        self.n = n
        self.dim = 1 << n
        self.statevector = statevector
        self.density = density
        self.white_noise = float(white_noise)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_bits(cls, bits: str) -> "QuantumState":
        """Computational basis state, bits[0] is qubit 0"""
        if not bits or any(b not in "01" for b in bits):
            raise InvalidParameterError(f"Basis state must be a 0/1 string, got {bits!r}")
        n = len(bits)
        check_statevector_size(n)
        psi = np.zeros(1 << n, dtype=complex)
        psi[int(bits, 2)] = 1.0
        return cls(n, statevector=psi)

    @classmethod
    def zeros(cls, n: int) -> "QuantumState":
        return cls.from_bits("0" * n)

    @classmethod
    def from_statevector(cls, amplitudes) -> "QuantumState":
        psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
        dim = psi.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DimensionMismatchError(f"Statevector length {dim} is not a power of two")
        n = dim.bit_length() - 1
        check_statevector_size(n)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > LINALG_TOL:
            raise InvalidParameterError(f"Statevector norm is {norm:.12f}, expected 1")
        return cls(n, statevector=psi / norm)

    @classmethod
    def from_density(cls, matrix: Union[np.ndarray, HermitianOp]) -> "QuantumState":
        if isinstance(matrix, HermitianOp):
            matrix = matrix.to_dense()
        rho = np.asarray(matrix, dtype=complex)
        dim = rho.shape[0]
        if rho.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
            raise DimensionMismatchError(f"Density matrix shape {rho.shape} is not 2^n x 2^n")
        if np.max(np.abs(rho - rho.conj().T)) > REPRESENTATION_TOL * max(1.0, float(np.max(np.abs(rho)))):
            raise NonHermitianError("Density matrix is not Hermitian")
        rho = (rho + rho.conj().T) / 2
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > LINALG_TOL:
            raise InvalidParameterError(f"Density matrix trace is {trace:.12f}, expected 1")
        if np.min(np.linalg.eigvalsh(rho)) < -1e-9:
            raise InvalidParameterError("Density matrix is not positive semidefinite")
        return cls(dim.bit_length() - 1, density=rho)

    @classmethod
    def maximally_mixed(cls, n: int) -> "QuantumState":
        return cls(n, statevector=QuantumState.zeros(n).statevector, white_noise=1.0)

    # ------------------------------------------------------------------
    # views

    @property
    def is_pure_vector(self) -> bool:
        return self.statevector is not None

    def copy(self) -> "QuantumState":
        return QuantumState(
            self.n,
            statevector=None if self.statevector is None else self.statevector.copy(),
            density=None if self.density is None else self.density.copy(),
            white_noise=self.white_noise,
        )

    def _noiseless_pauli_trace(self, x_bits: int, z_bits: int) -> float:
        perm, phase = pauli_action(self.n, x_bits, z_bits)
        if self.statevector is not None:
            psi = self.statevector
            return float(np.real(np.vdot(psi, phase * psi[perm])))
        # Tr[P rho] = sum_i phase[i] rho[perm[i], i]
        return float(np.real(np.sum(phase * self.density[perm, np.arange(self.dim)])))

    def pauli_trace(self, x_bits: int, z_bits: int) -> float:
        """Tr[P rho] for the phaseless string (x_bits, z_bits)"""
        if x_bits == 0 and z_bits == 0:
            return 1.0
        if self.white_noise >= 1.0:
            return 0.0
        return (1.0 - self.white_noise) * self._noiseless_pauli_trace(x_bits, z_bits)

    def expectation(self, operator: Union[PauliString, HermitianOp, str]) -> float:
        """Tr[rho H]"""
        if isinstance(operator, str):
            operator = parse_pauli(operator, n=self.n)
        if isinstance(operator, PauliString):
            if not operator.is_hermitian:
                raise NonHermitianError(f"{operator} is not Hermitian")
            return operator.sign * self.pauli_trace(operator.x_bits, operator.z_bits)
        if operator.dim != self.dim:
            raise DimensionMismatchError(f"Operator dim {operator.dim} vs state dim {self.dim}")
        if operator.is_dense:
            rho = self.to_density()
            return float(np.real(np.sum(rho.T * operator.to_dense())))
        return float(sum(coeff * self.pauli_trace(x, z) for (x, z), coeff in operator.coefficients().items()))

    def standard_purity(self) -> float:
        """Tr[rho^2]"""
        q, d = self.white_noise, self.dim
        if self.statevector is not None:
            base = 1.0
        else:
            base = float(np.real(np.vdot(self.density, self.density)))
        return (1 - q) ** 2 * base + 2 * (1 - q) * q / d + q * q / d

    def to_density(self) -> np.ndarray:
        if self.n > MAX_DENSE_PAULI_QUBITS:
            raise InvalidParameterError(f"Refusing to build a density matrix on n={self.n} qubits")
        if self.statevector is not None:
            rho = np.outer(self.statevector, self.statevector.conj())
        else:
            rho = self.density.copy()
        return (1 - self.white_noise) * rho + self.white_noise * np.eye(self.dim) / self.dim

    # ------------------------------------------------------------------
    # unitary evolution

    def _apply_rotation(self, gate: PauliRotation) -> None:
        if gate.pauli.n != self.n:
            raise DimensionMismatchError(f"Rotation on {gate.pauli.n} qubits applied to {self.n}-qubit state")
        angle = gate.angle * gate.pauli.sign
        c, s = np.cos(angle), np.sin(angle)
        perm, phase = pauli_action(self.n, gate.pauli.x_bits, gate.pauli.z_bits)
        if self.statevector is not None:
            psi = self.statevector
            self.statevector = c * psi - 1j * s * phase * psi[perm]
            return
        rho = self.density
        p_rho = phase[:, None] * rho[perm, :]
        rho_p = p_rho.conj().T
        p_rho_p = phase[:, None] * rho_p[perm, :]
        self.density = c * c * rho + s * s * p_rho_p + 1j * c * s * (rho_p - p_rho)

    def _apply_dense(self, gate: DenseGate) -> None:
        if max(gate.qubits) >= self.n or min(gate.qubits) < 0:
            raise InvalidParameterError(f"Gate qubits {gate.qubits} out of range for n={self.n}")
        if self.statevector is not None:
            tensor = self.statevector.reshape([2] * self.n)
            self.statevector = _apply_matrix_on_axes(tensor, gate.matrix, gate.qubits).reshape(-1)
            return
        tensor = self.density.reshape([2] * (2 * self.n))
        tensor = _apply_matrix_on_axes(tensor, gate.matrix, gate.qubits)
        tensor = _apply_matrix_on_axes(tensor, gate.matrix.conj(), [self.n + q for q in gate.qubits])
        self.density = tensor.reshape(self.dim, self.dim)

    def evolve(self, gates: Sequence[Gate]) -> "QuantumState":
        """V rho V^dagger for V = g_last ... g_first, as a new state"""
        out = self.copy()
        for gate in gates:
            if isinstance(gate, PauliRotation):
                out._apply_rotation(gate)
            elif isinstance(gate, DenseGate):
                out._apply_dense(gate)
            else:
                raise NonUnitaryGateError(f"Unsupported gate payload {type(gate).__name__}")
        return out

    def __repr__(self) -> str:
        kind = "statevector" if self.statevector is not None else "density"
        return f"QuantumState(n={self.n}, {kind}, white_noise={self.white_noise:.4g})"


def local_rotation_matrix(a: float, b: float, c: float) -> np.ndarray:
    """exp(-i(aX + bY + cZ)) in closed form"""
    theta = float(np.sqrt(a * a + b * b + c * c))
    if theta < REPRESENTATION_TOL:
        return np.eye(2, dtype=complex)
    generator = np.array([[c, a - 1j * b], [a + 1j * b, -c]], dtype=complex) / theta
    return np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * generator


def random_local_rotations(n: int, rng: np.random.Generator, scale: float = LOCAL_ROTATION_SCALE) -> list:
    """One exp(-i(aX + bY + cZ)) per qubit with a, b, c ~ N(0, scale^2)"""
    angles = rng.normal(0.0, scale, size=(n, 3))
    return [DenseGate(local_rotation_matrix(*angles[q]), (q,)) for q in range(n)]
