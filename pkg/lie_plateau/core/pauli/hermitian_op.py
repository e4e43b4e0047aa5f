"""
Hermitian operators as real Pauli expansions or dense matrices.
"""
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from lie_plateau.core.constants import (
    REPRESENTATION_TOL,
    MAX_DENSE_PAULI_QUBITS,
    ERROR_NOT_HERMITIAN,
    ERROR_MISMATCHED_N,
)
from lie_plateau.core.exceptions import (
    NonHermitianError,
    DimensionMismatchError,
    InvalidParameterError,
)
from lie_plateau.core.pauli.pauli_string import (
    PauliKey,
    PauliString,
    parse_pauli,
    pauli_action,
)

TermLike = Tuple[float, Union[PauliString, str]]


class HermitianOp:
    """
    Real combination of Hermitian Pauli strings, or a dense Hermitian matrix.

    Build through from_terms / from_pauli / from_dense. Term form keeps one coefficient
    per phaseless string, sorted by (x_bits, z_bits).
    """

    def __init__(self, n: Optional[int], dim: int,
                 terms: Optional[Dict[PauliKey, float]] = None,
                 dense: Optional[np.ndarray] = None):
        self.n = n
        self.dim = dim
        self._terms = terms
        self._dense = dense

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_terms(cls, terms: Iterable[TermLike], n: Optional[int] = None) -> "HermitianOp":
        accumulated: Dict[PauliKey, float] = {}
        for coeff, pauli in terms:
            if isinstance(pauli, str):
                pauli = parse_pauli(pauli)
            if n is None:
                n = pauli.n
            elif pauli.n != n:
                raise DimensionMismatchError(ERROR_MISMATCHED_N.format(a=n, b=pauli.n))
            value = complex(coeff) * pauli.phase_factor
            if abs(value.imag) > REPRESENTATION_TOL * max(1.0, abs(value)):
                raise NonHermitianError(f"{ERROR_NOT_HERMITIAN}: term {coeff} * {pauli}")
            accumulated[pauli.key] = accumulated.get(pauli.key, 0.0) + value.real
        if n is None:
            raise InvalidParameterError("from_terms needs at least one term or an explicit n")
        return cls._from_key_map(n, accumulated)

    @classmethod
    def _from_key_map(cls, n: int, coefficients: Dict[PauliKey, float]) -> "HermitianOp":
        cleaned = {
            key: float(value)
            for key, value in sorted(coefficients.items())
            if abs(value) > REPRESENTATION_TOL
        }
        return cls(n, 1 << n, terms=cleaned)

    @classmethod
    def from_pauli(cls, pauli: Union[PauliString, str], coeff: float = 1.0) -> "HermitianOp":
        return cls.from_terms([(coeff, pauli)])

    @classmethod
    def from_dense(cls, matrix) -> "HermitianOp":
        array = np.asarray(matrix, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise DimensionMismatchError(f"Dense operator must be square, got shape {array.shape}")
        scale = max(1.0, float(np.max(np.abs(array))) if array.size else 1.0)
        if np.max(np.abs(array - array.conj().T)) > REPRESENTATION_TOL * scale:
            raise NonHermitianError(ERROR_NOT_HERMITIAN)
        dim = array.shape[0]
        n = dim.bit_length() - 1 if dim & (dim - 1) == 0 else None
        return cls(n, dim, dense=(array + array.conj().T) / 2)

    @classmethod
    def zero(cls, n: int) -> "HermitianOp":
        return cls(n, 1 << n, terms={})

    # ------------------------------------------------------------------
    # views

    @property
    def is_dense(self) -> bool:
        return self._dense is not None

    @property
    def terms(self) -> List[Tuple[float, PauliString]]:
        if self.is_dense:
            raise ValueError("Dense operator has no Pauli term list")
        return [(coeff, PauliString(self.n, x, z)) for (x, z), coeff in self._terms.items()]

    def coefficients(self) -> Dict[PauliKey, float]:
        """Coefficients on the (unnormalized) Pauli strings"""
        if self.is_dense:
            raise ValueError("Dense operator has no Pauli coefficients")
        return dict(self._terms)

    def to_dense(self) -> np.ndarray:
        if self.is_dense:
            return self._dense.copy()
        if self.n > MAX_DENSE_PAULI_QUBITS:
            raise InvalidParameterError(f"Refusing to densify an operator on n={self.n} qubits")
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        for coeff, pauli in self.terms:
            matrix += coeff * pauli.to_matrix()
        return matrix

    def pauli_trace(self, x_bits: int, z_bits: int) -> float:
        """Tr[P H] for the phaseless string P = (x_bits, z_bits)"""
        if not self.is_dense:
            return self.dim * self._terms.get((x_bits, z_bits), 0.0)
        if self.n is None:
            raise DimensionMismatchError("Pauli traces need a qubit system")
        perm, phase = pauli_action(self.n, x_bits, z_bits)
        # (P H)[i, i] = phase[i] * H[perm[i], i]
        return float(np.real(np.sum(phase * self._dense[perm, np.arange(self.dim)])))

    # ------------------------------------------------------------------
    # scalars

    def trace(self) -> float:
        if self.is_dense:
            return float(np.real(np.trace(self._dense)))
        return self.dim * self._terms.get((0, 0), 0.0)

    def hs_norm_sq(self) -> float:
        """Tr[H^2]"""
        if self.is_dense:
            return float(np.real(np.vdot(self._dense, self._dense)))
        return self.dim * float(sum(c * c for c in self._terms.values()))

    def trace_norm(self) -> float:
        """Schatten-1 norm; closed form for a single Pauli term"""
        if not self.is_dense and len(self._terms) <= 1:
            return self.dim * sum(abs(c) for c in self._terms.values())
        return float(np.sum(np.abs(np.linalg.eigvalsh(self.to_dense()))))

    # ------------------------------------------------------------------
    # arithmetic

    def _check_compatible(self, other: "HermitianOp"):
        if self.dim != other.dim:
            raise DimensionMismatchError(ERROR_MISMATCHED_N.format(a=self.dim, b=other.dim))

    def __add__(self, other: "HermitianOp") -> "HermitianOp":
        self._check_compatible(other)
        if self.is_dense or other.is_dense:
            return HermitianOp.from_dense(self.to_dense() + other.to_dense())
        merged = dict(self._terms)
        for key, value in other._terms.items():
            merged[key] = merged.get(key, 0.0) + value
        return HermitianOp._from_key_map(self.n, merged)

    def __mul__(self, scalar: float) -> "HermitianOp":
        scalar = float(scalar)
        if self.is_dense:
            return HermitianOp(self.n, self.dim, dense=self._dense * scalar)
        return HermitianOp._from_key_map(self.n, {k: v * scalar for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianOp":
        return self * -1.0

    def __sub__(self, other: "HermitianOp") -> "HermitianOp":
        return self + (-other)

    def allclose(self, other: "HermitianOp", atol: float = 1e-9) -> bool:
        self._check_compatible(other)
        return np.sqrt(max(hs_inner(self - other, self - other), 0.0)) <= atol

    # ------------------------------------------------------------------
    # serialization

    def to_dict(self) -> dict:
        if self.is_dense:
            return {"dense": [[[z.real, z.imag] for z in row] for row in self._dense]}
        return {"terms": [{"coeff": coeff, "pauli": str(pauli)} for coeff, pauli in self.terms]}

    @classmethod
    def from_dict(cls, payload: dict, n: Optional[int] = None) -> "HermitianOp":
        if "dense" in payload:
            rows = payload["dense"]
            return cls.from_dense([[complex(re, im) for re, im in row] for row in rows])
        terms = [(term["coeff"], term["pauli"]) for term in payload.get("terms", [])]
        if not terms:
            if n is None:
                raise InvalidParameterError("Empty term list needs an explicit n")
            return cls.zero(n)
        return cls.from_terms(terms, n=n)

    def __repr__(self) -> str:
        if self.is_dense:
            return f"HermitianOp(dense, dim={self.dim})"
        body = " + ".join(f"{coeff:.6g}*{pauli}" for coeff, pauli in self.terms[:6])
        more = " + ..." if len(self._terms) > 6 else ""
        return f"HermitianOp({body or '0'}{more})"


def hs_inner(a: HermitianOp, b: HermitianOp) -> float:
    """
    Hilbert-Schmidt inner product Tr[A^dagger B].

    Term form uses Tr[PQ] = 2^n delta(P, Q) on phaseless strings.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(ERROR_MISMATCHED_N.format(a=a.dim, b=b.dim))
    if not a.is_dense and not b.is_dense:
        small, large = (a._terms, b._terms) if len(a._terms) <= len(b._terms) else (b._terms, a._terms)
        return a.dim * float(sum(value * large.get(key, 0.0) for key, value in small.items()))
    if not a.is_dense:
        return float(sum(coeff * b.pauli_trace(x, z) for (x, z), coeff in a._terms.items()))
    if not b.is_dense:
        return float(sum(coeff * a.pauli_trace(x, z) for (x, z), coeff in b._terms.items()))
    return float(np.real(np.vdot(a._dense, b._dense)))
