"""
Reduced second-moment operators on span{I, S}^(x)n.

Coefficient vectors have 2^n entries; bit (n - 1 - k) of an index is 1 when qubit k carries
the swap S. The basis is not orthogonal, which is fine for eigenvalues (similarity invariant).

Per-gate Haar SU(4) block in the pair order (II, IS, SI, SS):
    II <- [1, 2/5, 2/5, 0]
    SS <- [0, 2/5, 2/5, 1]
The global Haar projector is M_G = e_I a^T + e_S c^T with, for k swaps in the index,
    a_k = (4^n 2^-k - 2^k) / (4^n - 1),  c_k = 2^n (2^k - 2^-k) / (4^n - 1)
"""
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from lie_plateau.config.settings import get_settings
from lie_plateau.core.exceptions import InvalidParameterError
from lie_plateau.core.utils.logger import get_logger
from lie_plateau.core.utils.metrics import record_operator_application

logger = get_logger(__name__)

MODES = ("single_layer", "group_haar")

SU4_BLOCK = np.array([
    [1.0, 0.4, 0.4, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.4, 0.4, 1.0],
])


def swap_counts(n: int) -> np.ndarray:
    """Number of S factors in every basis index"""
    indices = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        counts += (indices >> bit) & 1
    return counts


def group_weights(n: int):
    """(a, c) rows of the Haar projector"""
    k = swap_counts(n).astype(float)
    d_sq = 4.0 ** n
    a = (d_sq * 2.0 ** (-k) - 2.0 ** k) / (d_sq - 1.0)
    c = 2.0 ** n * (2.0 ** k - 2.0 ** (-k)) / (d_sq - 1.0)
    return a, c


def _gate_positions(n: int):
    even = list(range(0, n - 1, 2))
    odd = list(range(1, n - 1, 2))
    return even, odd


def _apply_block(v: np.ndarray, first_qubit: int, n: int) -> np.ndarray:
    columns = v.shape[1]
    tensor = v.reshape(1 << first_qubit, 4, 1 << (n - first_qubit - 2), columns)
    return np.einsum("ij,qjrc->qirc", SU4_BLOCK, tensor).reshape(-1, columns)


def _sublayer_sparse(positions, n: int) -> sp.csr_matrix:
    operator = sp.identity(1 << n, format="csr")
    for q in positions:
        gate = sp.kron(sp.kron(sp.identity(1 << q), sp.csr_matrix(SU4_BLOCK)), sp.identity(1 << (n - q - 2)))
        operator = sp.csr_matrix(gate @ operator)
    return operator


class ReducedMomentOperator:
    """
    Second-moment operator of one brickwork layer or of the full Haar group.

    apply() is matrix-free; matrix() / to_dense() build the explicit representation.
    """

    def __init__(self, n: int, mode: str):
        if n < 2:
            raise InvalidParameterError(f"Moment operators need n >= 2, got {n}")
        if mode not in MODES:
            raise InvalidParameterError(f"Unknown moment mode {mode!r}")
        settings = get_settings()
        if n > settings.matrix_free_max_qubits:
            raise InvalidParameterError(
                f"n={n} exceeds the matrix-free limit of {settings.matrix_free_max_qubits} qubits"
            )
        self.n = n
        self.mode = mode
        self.size = 1 << n
        self._sparse: Optional[sp.csr_matrix] = None
        if mode == "group_haar":
            self._a, self._c = group_weights(n)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """M v for a vector or a (2^n, k) block"""
        v = np.asarray(v, dtype=float)
        single = v.ndim == 1
        block = v.reshape(self.size, -1)
        if self.mode == "group_haar":
            out = np.zeros_like(block)
            out[0] = self._a @ block
            out[-1] += self._c @ block
        else:
            even, odd = _gate_positions(self.n)
            out = block
            for q in even + odd:
                out = _apply_block(out, q, self.n)
        record_operator_application(block.shape[1])
        return out.reshape(-1) if single else out

    def matrix(self) -> sp.csr_matrix:
        """Explicit sparse representation (dense-mode sizes only)"""
        limit = get_settings().dense_moment_max_qubits
        if self.n > limit:
            raise InvalidParameterError(f"Explicit moment operators are limited to n <= {limit}")
        if self._sparse is None:
            if self.mode == "group_haar":
                e_i = np.zeros(self.size)
                e_i[0] = 1.0
                e_s = np.zeros(self.size)
                e_s[-1] = 1.0
                self._sparse = sp.csr_matrix(np.outer(e_i, self._a) + np.outer(e_s, self._c))
            else:
                even, odd = _gate_positions(self.n)
                self._sparse = sp.csr_matrix(_sublayer_sparse(odd, self.n) @ _sublayer_sparse(even, self.n))
        return self._sparse

    def to_dense(self) -> np.ndarray:
        return self.matrix().toarray()

    def power(self, layers: int) -> np.ndarray:
        """Dense matrix of `layers` consecutive applications"""
        if layers < 0:
            raise InvalidParameterError(f"layers must be >= 0, got {layers}")
        return np.linalg.matrix_power(self.to_dense(), layers)

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.size, self.size), matvec=self.apply, matmat=self.apply, dtype=float)

    def __repr__(self) -> str:
        return f"ReducedMomentOperator(n={self.n}, mode={self.mode})"


def build_layer_moment(n: int) -> ReducedMomentOperator:
    """One brickwork layer: even sublayer then odd sublayer"""
    return ReducedMomentOperator(n, "single_layer")


def build_group_moment(n: int) -> ReducedMomentOperator:
    """Haar average over SU(2^n), a rank-2 projector"""
    return ReducedMomentOperator(n, "group_haar")


class DeviationOperator:
    """A = M_layer - M_G, matrix-free"""

    def __init__(self, n: int):
        self.n = n
        self.size = 1 << n
        self.layer = build_layer_moment(n)
        self.group = build_group_moment(n)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.layer.apply(v) - self.group.apply(v)

    def project_out_fixed(self, v: np.ndarray) -> np.ndarray:
        """(1 - M_G) v removes the all-I / all-S invariant directions"""
        return v - self.group.apply(v)

    def to_dense(self) -> np.ndarray:
        return self.layer.to_dense() - self.group.to_dense()

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.size, self.size), matvec=self.apply, matmat=self.apply, dtype=float)
