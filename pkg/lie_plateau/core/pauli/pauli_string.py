"""
Pauli strings in symplectic bit form.

A PauliString is i^phase * L_0 (x) L_1 (x) ... (x) L_{n-1} where every letter L_k is one
of the Hermitian matrices I, X, Y, Z. Qubit k is stored at bit (n - 1 - k) of both masks,
which is also the bit of qubit k in a big-endian statevector index. Letters encode as
I=(0,0), X=(1,0), Z=(0,1), Y=(1,1) with Y = iXZ.
"""
import re
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from lie_plateau.core.constants import (
    MAX_PAULI_QUBITS,
    MAX_DENSE_PAULI_QUBITS,
    PAULI_LETTERS,
    ERROR_EMPTY_PAULI,
    ERROR_INVALID_PAULI_CHAR,
    ERROR_PAULI_LENGTH,
    ERROR_TOO_MANY_QUBITS,
    ERROR_MISMATCHED_N,
)
from lie_plateau.core.exceptions import (
    PauliParseError,
    InvalidParameterError,
    DimensionMismatchError,
)

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}
_PHASE_TOKENS = {0: "", 1: "i", 2: "-", 3: "-i"}
_PHASE_VALUES = (1, 1j, -1, -1j)

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PAULI_PATTERN = re.compile(r"^([+-]?)(.*)$", re.DOTALL)

PauliKey = Tuple[int, int]


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent e with L1 * L2 = i^e * L3 for phaseless Hermitian letter strings."""
    y1 = (x1 & z1).bit_count()
    y2 = (x2 & z2).bit_count()
    y3 = ((x1 ^ x2) & (z1 ^ z2)).bit_count()
    return (y1 + y2 - y3 + 2 * (z1 & x2).bit_count()) % 4


def symplectic_form(x1: int, z1: int, x2: int, z2: int) -> int:
    """Parity of <x1, z2> + <x2, z1>; zero means the strings commute."""
    return ((x1 & z2).bit_count() + (z1 & x2).bit_count()) & 1


def parity_signs(indices: np.ndarray, mask: int) -> np.ndarray:
    """(-1)^popcount(index & mask) for every index, as float64."""
    parity = np.zeros(indices.shape, dtype=np.int64)
    shift = 0
    bits = mask
    while bits:
        if bits & 1:
            parity ^= (indices >> shift) & 1
        bits >>= 1
        shift += 1
    return 1.0 - 2.0 * parity


def pauli_action(n: int, x_bits: int, z_bits: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gather form of a phaseless Pauli string acting on a statevector.

    Returns (perm, phase) such that (P psi)[i] = phase[i] * psi[perm[i]].
    """
    indices = np.arange(1 << n, dtype=np.int64)
    perm = indices ^ x_bits
    phase = parity_signs(perm, z_bits).astype(complex)
    phase *= _PHASE_VALUES[(x_bits & z_bits).bit_count() % 4]
    return perm, phase


@dataclass(frozen=True, slots=True)
class PauliString:
    """Signed n-qubit Pauli word; immutable and hashable"""

    n: int
    x_bits: int
    z_bits: int
    phase: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PAULI_QUBITS:
            raise InvalidParameterError(f"{ERROR_TOO_MANY_QUBITS}, got n={self.n}")
        mask = (1 << self.n) - 1
        if self.x_bits < 0 or self.z_bits < 0 or self.x_bits & ~mask or self.z_bits & ~mask:
            raise InvalidParameterError(f"Bit masks do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_sparse(cls, n: int, letters: Dict[int, str], phase: int = 0) -> "PauliString":
        """Build from {qubit: letter}, e.g. from_sparse(4, {0: 'X', 3: 'Y'})"""
        x_bits = z_bits = 0
        for qubit, letter in letters.items():
            if not 0 <= qubit < n:
                raise InvalidParameterError(f"Qubit {qubit} out of range for n={n}")
            key = letter.upper()
            if key not in _LETTER_BITS:
                raise PauliParseError(ERROR_INVALID_PAULI_CHAR.format(char=letter, text=str(letters)))
            bx, bz = _LETTER_BITS[key]
            bit = 1 << (n - 1 - qubit)
            x_bits |= bit * bx
            z_bits |= bit * bz
        return cls(n, x_bits, z_bits, phase)

    # ------------------------------------------------------------------
    # properties

    @property
    def key(self) -> PauliKey:
        """Phaseless identity of the string, used for sets and dict lookups"""
        return (self.x_bits, self.z_bits)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1/-1 for Hermitian strings"""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian and has no real sign")
        return 1 if self.phase == 0 else -1

    @property
    def phase_factor(self) -> complex:
        return _PHASE_VALUES[self.phase]

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def is_diagonal(self) -> bool:
        return self.x_bits == 0

    @property
    def letters(self) -> str:
        chars = []
        for k in range(self.n):
            bit = self.n - 1 - k
            chars.append(_BITS_LETTER[((self.x_bits >> bit) & 1, (self.z_bits >> bit) & 1)])
        return "".join(chars)

    def phaseless(self) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, 0)

    def letter(self, qubit: int) -> str:
        bit = self.n - 1 - qubit
        return _BITS_LETTER[((self.x_bits >> bit) & 1, (self.z_bits >> bit) & 1)]

    # ------------------------------------------------------------------
    # algebra

    def _check_n(self, other: "PauliString"):
        if self.n != other.n:
            raise DimensionMismatchError(ERROR_MISMATCHED_N.format(a=self.n, b=other.n))

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, self.phase + 2)

    def commutes_with(self, other: "PauliString") -> bool:
        self._check_n(other)
        return symplectic_form(self.x_bits, self.z_bits, other.x_bits, other.z_bits) == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix, for oracles and small systems"""
        if self.n > MAX_DENSE_PAULI_QUBITS:
            raise InvalidParameterError(f"Refusing to build a dense matrix for n={self.n}")
        matrix = np.array([[1.0 + 0j]])
        for letter in self.letters:
            matrix = np.kron(matrix, _SINGLE_QUBIT[letter])
        return self.phase_factor * matrix

    def __str__(self) -> str:
        return _PHASE_TOKENS[self.phase] + self.letters

    def __repr__(self) -> str:
        return f"PauliString('{self}')"


def parse_pauli(text: str, n: Optional[int] = None) -> PauliString:
    """
    Parse the grammar [+-]?[i]?[IXYZ]{n}.

    Letters are case-insensitive. A lowercase 'i' directly after the optional sign and
    followed by more letters is the phase token, so 'iXZ' is i*XZ while 'IXZ' is I(x)X(x)Z.
    """
    if text is None or not str(text).strip():
        raise PauliParseError(ERROR_EMPTY_PAULI)
    raw = str(text).strip()

    match = _PAULI_PATTERN.match(raw)
    sign_token, body = match.group(1), match.group(2)
    phase = 2 if sign_token == "-" else 0
    if len(body) > 1 and body[0] == "i":
        phase += 1
        body = body[1:]

    if not body:
        raise PauliParseError(ERROR_EMPTY_PAULI)

    x_bits = z_bits = 0
    for char in body:
        letter = char.upper()
        if letter not in PAULI_LETTERS:
            raise PauliParseError(ERROR_INVALID_PAULI_CHAR.format(char=char, text=raw))
        bx, bz = _LETTER_BITS[letter]
        x_bits = (x_bits << 1) | bx
        z_bits = (z_bits << 1) | bz

    if n is not None and len(body) != n:
        raise PauliParseError(ERROR_PAULI_LENGTH.format(text=raw, got=len(body), expected=n))
    if len(body) > MAX_PAULI_QUBITS:
        raise PauliParseError(ERROR_TOO_MANY_QUBITS)

    return PauliString(len(body), x_bits, z_bits, phase)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """PQ with exact phase"""
    p._check_n(q)
    phase = p.phase + q.phase + product_phase(p.x_bits, p.z_bits, q.x_bits, q.z_bits)
    return PauliString(p.n, p.x_bits ^ q.x_bits, p.z_bits ^ q.z_bits, phase)


def commutator(p: PauliString, q: PauliString) -> Optional[Tuple[complex, PauliString]]:
    """
    [P, Q] as (coefficient, phaseless string), or None when P and Q commute.

    Anticommuting strings give [P, Q] = 2PQ, so the coefficient is 2 * phase(PQ).
    """
    p._check_n(q)
    if symplectic_form(p.x_bits, p.z_bits, q.x_bits, q.z_bits) == 0:
        return None
    product = multiply(p, q)
    return 2 * product.phase_factor, product.phaseless()
